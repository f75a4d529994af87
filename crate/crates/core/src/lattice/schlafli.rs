//! `{3,p}` triangulations generated from one equilateral triangle.
//!
//! The triangle `ABC` with angle `2π/p` at `A` is reflected in its edges;
//! pairs of such reflections are rotations about vertices and half-turns
//! about edge midpoints, so every vertex is reached as `T(A)` for a
//! composition `T` of these isometries, and its fan of `p` triangles is the
//! image of the fan at `A`. Composing isometries rather than chaining point
//! reflections keeps rounding error from growing with depth in the
//! hyperbolic case. `p = 6` lives in the Euclidean plane; `p > 6` in the
//! Poincaré disk.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::{Geometry, Quadrangulation};
use crate::{Error, Result};

/// Largest accepted `generations` for hyperbolic `p`; growth is exponential.
pub const MAX_HYPERBOLIC_GENERATIONS: u32 = 6;
const MAX_EUCLIDEAN_GENERATIONS: u32 = 200;

type C = [f64; 2];

fn add(a: C, b: C) -> C {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: C, b: C) -> C {
    [a[0] - b[0], a[1] - b[1]]
}

fn mul(a: C, b: C) -> C {
    [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]]
}

fn div(a: C, b: C) -> C {
    let d = b[0] * b[0] + b[1] * b[1];
    [
        (a[0] * b[0] + a[1] * b[1]) / d,
        (a[1] * b[0] - a[0] * b[1]) / d,
    ]
}

fn conj(a: C) -> C {
    [a[0], -a[1]]
}

fn cis(t: f64) -> C {
    [t.cos(), t.sin()]
}

/// Orientation-preserving isometry: `z ↦ (az + b)/(b̄z + ā)` on the disk, or
/// `z ↦ az + b` with `|a| = 1` in the plane.
#[derive(Clone, Copy, Debug)]
struct Iso {
    a: C,
    b: C,
}

impl Iso {
    const ID: Iso = Iso {
        a: [1.0, 0.0],
        b: [0.0, 0.0],
    };

    fn apply(&self, g: Geometry, z: C) -> C {
        match g {
            Geometry::Euclidean => add(mul(self.a, z), self.b),
            Geometry::PoincareDisk => div(
                add(mul(self.a, z), self.b),
                add(mul(conj(self.b), z), conj(self.a)),
            ),
        }
    }

    fn then(&self, g: Geometry, inner: &Iso) -> Iso {
        match g {
            Geometry::Euclidean => Iso {
                a: mul(self.a, inner.a),
                b: add(mul(self.a, inner.b), self.b),
            },
            Geometry::PoincareDisk => Iso {
                a: add(mul(self.a, inner.a), mul(self.b, conj(inner.b))),
                b: add(mul(self.a, inner.b), mul(self.b, conj(inner.a))),
            },
        }
    }

    /// Rotation by `t` about the base vertex.
    fn rotation(g: Geometry, t: f64) -> Iso {
        match g {
            Geometry::Euclidean => Iso {
                a: cis(t),
                b: [0.0, 0.0],
            },
            Geometry::PoincareDisk => Iso {
                a: cis(t / 2.0),
                b: [0.0, 0.0],
            },
        }
    }

    /// Half-turn swapping the base vertex `0` and the real point `side`.
    fn half_turn(g: Geometry, side: f64) -> Iso {
        match g {
            Geometry::Euclidean => Iso {
                a: [-1.0, 0.0],
                b: [side, 0.0],
            },
            Geometry::PoincareDisk => {
                let n = (1.0 - side * side).sqrt();
                Iso {
                    a: [0.0, -1.0 / n],
                    b: [0.0, side / n],
                }
            }
        }
    }
}

struct Points {
    pts: Vec<C>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

const GRID: f64 = 1e6;
const SAME: f64 = 1e-8;

impl Points {
    fn cell(p: C) -> (i64, i64) {
        ((p[0] * GRID).round() as i64, (p[1] * GRID).round() as i64)
    }

    /// Id of `p`, and whether it is new.
    fn id(&mut self, p: C) -> (usize, bool) {
        let (cx, cy) = Self::cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(cx + dx, cy + dy)) {
                    for &i in ids {
                        let d = sub(self.pts[i], p);
                        if (d[0] * d[0] + d[1] * d[1]).sqrt() < SAME {
                            return (i, false);
                        }
                    }
                }
            }
        }
        let i = self.pts.len();
        self.pts.push(p);
        self.grid.entry((cx, cy)).or_default().push(i);
        (i, true)
    }
}

/// Patch of the `{3,p}` quadrangulation: all triangles touching the `G₀` ball
/// of radius `generations` around the base vertex.
///
/// For `p = 6` this is isomorphic to the diced patch of the same radius.
pub fn build_schlafli_patch(p: u32, generations: u32) -> Result<Quadrangulation> {
    if p < 6 {
        return Err(Error::InvalidInput(format!(
            "{{3,{p}}} is spherical; need p >= 6"
        )));
    }
    let cap = if p == 6 {
        MAX_EUCLIDEAN_GENERATIONS
    } else {
        MAX_HYPERBOLIC_GENERATIONS
    };
    if generations > cap {
        return Err(Error::CapExceeded {
            what: format!("{{3,{p}}} patch"),
            needed: format!("{generations} generations"),
            cap: cap.to_string(),
        });
    }
    let theta = 2.0 * PI / p as f64;
    let (g, side) = if p == 6 {
        (Geometry::Euclidean, 1.0)
    } else {
        // equilateral triangle with angles θ: cosh s = cos θ / (1 − cos θ)
        let cosh_s = theta.cos() / (1.0 - theta.cos());
        (Geometry::PoincareDisk, (cosh_s.acosh() / 2.0).tanh())
    };
    // T ∘ R^k ∘ S maps the base vertex to the k-th neighbour of T(base)
    let steps: Vec<Iso> = (0..p)
        .map(|k| Iso::rotation(g, k as f64 * theta).then(g, &Iso::half_turn(g, side)))
        .collect();

    let mut pts = Points {
        pts: Vec::new(),
        grid: HashMap::new(),
    };
    let (base, _) = pts.id([0.0, 0.0]);
    let mut iso: HashMap<usize, Iso> = HashMap::from([(base, Iso::ID)]);
    let mut dist: HashMap<usize, u32> = HashMap::from([(base, 0)]);
    let mut tris: Vec<[usize; 3]> = Vec::new();
    let mut layer = vec![base];
    for level in 0..=generations {
        let mut next = Vec::new();
        for &v in &layer {
            let t = iso[&v];
            let mut fan = Vec::with_capacity(p as usize);
            for step in &steps {
                let m = t.then(g, step);
                let (w, _) = pts.id(m.apply(g, [0.0, 0.0]));
                iso.entry(w).or_insert(m);
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(level + 1);
                    next.push(w);
                }
                fan.push(w);
            }
            for k in 0..fan.len() {
                tris.push([v, fan[k], fan[(k + 1) % fan.len()]]);
            }
        }
        next.sort_unstable();
        layer = next;
    }
    let mut seen = std::collections::HashSet::new();
    tris.retain(|t| {
        let mut k = *t;
        k.sort_unstable();
        seen.insert(k)
    });

    // every kept triangle touches the ball; candidates are all their corners
    let in_ball = |v: usize| dist.get(&v).is_some_and(|&d| d <= generations);
    let mut order: Vec<usize> = tris.iter().flatten().copied().collect();
    order.sort_unstable_by_key(|&v| (dist[&v], v));
    order.dedup();
    let remap: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut kept: Vec<[usize; 3]> = tris.iter().map(|t| t.map(|v| remap[&v])).collect();
    kept.sort_unstable_by_key(|t| {
        let mut s = *t;
        s.sort_unstable();
        s
    });
    let points: Vec<C> = order.iter().map(|&v| pts.pts[v]).collect();
    let in_patch: Vec<bool> = order.iter().map(|&v| in_ball(v)).collect();
    Ok(Quadrangulation::from_triangulation(
        &points, &in_patch, &kept, 0, g,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_spherical() {
        assert!(build_schlafli_patch(5, 2).is_err());
        assert!(build_schlafli_patch(7, MAX_HYPERBOLIC_GENERATIONS + 1).is_err());
    }

    #[test]
    fn heptagonal_degrees() {
        let q = build_schlafli_patch(7, 3).unwrap();
        q.check_invariants().unwrap();
        let mut interior0 = 0;
        for v in q.v0_ids().filter(|&v| q.is_interior(v)) {
            assert_eq!(q.neighbors0(v).len(), 7);
            assert_eq!(q.neighbors(v).len(), 7);
            interior0 += 1;
        }
        for v in q.v1_ids().filter(|&v| q.is_interior(v)) {
            assert_eq!(q.neighbors1(v).len(), 3);
        }
        // ball of radius 2 in {3,7}: 1 + 7 + 21
        assert_eq!(interior0, 29);
    }

    #[test]
    fn hyperbolic_points_stay_in_disk() {
        let q = build_schlafli_patch(8, 3).unwrap();
        for v in 0..q.len() as u32 {
            let [x, y] = q.coords(v);
            assert!(x * x + y * y < 1.0);
        }
    }
}
