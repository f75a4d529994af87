//! The diced lattice: triangular `V₀`, hexagonal `V₁`.

use std::collections::HashMap;

use super::{Geometry, Quadrangulation};

/// Axial coordinates `(q, r)` of a triangular-lattice vertex; the plane
/// position is `(q + r/2, r·√3/2)`.
pub type Axial = (i32, i32);

/// The six unit steps of the triangular lattice, counter-clockwise from `+q`.
pub const AXIAL_DIRECTIONS: [Axial; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

pub fn axial_distance(a: Axial, b: Axial) -> u32 {
    let dq = a.0 - b.0;
    let dr = a.1 - b.1;
    ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as u32
}

fn position(a: Axial) -> [f64; 2] {
    [
        a.0 as f64 + a.1 as f64 / 2.0,
        a.1 as f64 * 3f64.sqrt() / 2.0,
    ]
}

/// Triangles of the triangular lattice: `up` is `{(q,r),(q+1,r),(q,r+1)}`,
/// down is `{(q+1,r),(q,r+1),(q+1,r+1)}`.
pub(crate) fn triangle_corners(q: i32, r: i32, up: bool) -> [Axial; 3] {
    if up {
        [(q, r), (q + 1, r), (q, r + 1)]
    } else {
        [(q + 1, r), (q, r + 1), (q + 1, r + 1)]
    }
}

/// Diced patch around the origin: all triangular vertices within `G₀`
/// distance `radius`, every triangle touching them, and induced edges.
///
/// `V₀` ids are ordered by distance from the origin (origin is id 0), then
/// by `(r, q)`; `V₁` ids by `(r, q, down/up)`.
pub fn build_diced_patch(radius: u32) -> Quadrangulation {
    let r = radius as i32;
    let mut pts: Vec<Axial> = Vec::new();
    for rr in -(r + 1)..=(r + 1) {
        for qq in -(r + 1)..=(r + 1) {
            if axial_distance((qq, rr), (0, 0)) <= radius + 1 {
                pts.push((qq, rr));
            }
        }
    }
    pts.sort_by_key(|&a| (axial_distance(a, (0, 0)), a.1, a.0));
    let index: HashMap<Axial, usize> = pts.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let in_patch: Vec<bool> = pts
        .iter()
        .map(|&a| axial_distance(a, (0, 0)) <= radius)
        .collect();

    let mut tris = Vec::new();
    for rr in -(r + 2)..=(r + 1) {
        for qq in -(r + 2)..=(r + 1) {
            for up in [false, true] {
                let c = triangle_corners(qq, rr, up);
                if c.iter().any(|&a| axial_distance(a, (0, 0)) <= radius) {
                    tris.push([index[&c[0]], index[&c[1]], index[&c[2]]]);
                }
            }
        }
    }

    let points: Vec<[f64; 2]> = pts.iter().map(|&a| position(a)).collect();
    let mut quad = Quadrangulation::from_triangulation(
        &points,
        &in_patch,
        &tris,
        index[&(0, 0)],
        Geometry::Euclidean,
    );
    quad.axial = Some(
        pts.iter()
            .zip(&in_patch)
            .filter(|(_, &k)| k)
            .map(|(&a, _)| a)
            .collect(),
    );
    quad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_zero_is_a_star() {
        let q = build_diced_patch(0);
        assert_eq!(q.n0(), 1);
        assert_eq!(q.n1(), 6);
        assert_eq!(q.g_edges().len(), 6);
        assert!(q.g0_edges().is_empty());
        assert!(q.g1_edges().is_empty());
    }

    #[test]
    fn patch_counts() {
        // V0: centred hexagonal numbers, V1: 6 (R+1)^2 triangles touching the ball
        for r in 0..6u32 {
            let q = build_diced_patch(r);
            assert_eq!(q.n0() as u32, 3 * r * (r + 1) + 1);
            assert_eq!(q.n1() as u32, 6 * (r + 1) * (r + 1));
        }
    }

    #[test]
    fn interior_degrees() {
        let q = build_diced_patch(5);
        q.check_invariants().unwrap();
        for v in q.v0_ids().filter(|&v| q.is_interior(v)) {
            assert_eq!(q.neighbors(v).len(), 6);
            assert_eq!(q.neighbors0(v).len(), 6);
        }
        for v in q.v1_ids().filter(|&v| q.is_interior(v)) {
            assert_eq!(q.neighbors(v).len(), 3);
            assert_eq!(q.neighbors1(v).len(), 3);
        }
        assert_eq!(q.v0_ids().filter(|&v| q.is_interior(v)).count(), 61);
    }

    #[test]
    fn straight_rays_are_geodesics() {
        let q = build_diced_patch(7);
        for v in q
            .v0_ids()
            .filter(|&v| q.axial(v).is_some_and(|a| axial_distance(a, (0, 0)) <= 3))
        {
            let a = q.axial(v).unwrap();
            let dist = q.distances0(v);
            for (dq, dr) in AXIAL_DIRECTIONS {
                let mut n = 0;
                while let Some(w) = q.v0_at((a.0 + n * dq, a.1 + n * dr)) {
                    assert_eq!(dist[w as usize], n as u32);
                    n += 1;
                }
            }
        }
    }
}
