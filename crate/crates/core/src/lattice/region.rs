//! Simply connected regions `Λ` with external boundary `∂Λ ⊂ V₀`.

use std::sync::Arc;

use serde::Serialize;

use super::{bfs, Quadrangulation, UNREACHABLE};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Outside,
    Inside,
    Boundary,
}

#[derive(Clone, Debug)]
pub struct Region {
    quad: Arc<Quadrangulation>,
    lambda: Vec<u32>,
    boundary: Vec<u32>,
    role: Vec<Role>,
    edges: Vec<(u32, u32)>,
}

/// Connectivity of `set` inside the graph given by `adj`.
fn connected_within(adj: &[Vec<u32>], set: &[u32], member: &dyn Fn(u32) -> bool) -> bool {
    let Some(&start) = set.first() else {
        return true;
    };
    let restricted: Vec<Vec<u32>> = adj
        .iter()
        .enumerate()
        .map(|(v, ns)| {
            if member(v as u32) {
                ns.iter().copied().filter(|&w| member(w)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let d = bfs(&restricted, &[start]);
    set.iter().all(|&v| d[v as usize] != UNREACHABLE)
}

fn adjacency(quad: &Quadrangulation, f: impl Fn(u32) -> Vec<u32>) -> Vec<Vec<u32>> {
    (0..quad.len() as u32).map(f).collect()
}

impl Region {
    /// `Λ = Δ₁ ∪ {v₀ ∈ V₀ : N_G(v₀) ⊆ Δ₁}` for a `G₁`-connected seed `Δ₁`.
    ///
    /// Rejects seeds that are empty, not in `V₁`, disconnected, touch the
    /// patch rim, or give a region that is not simply connected.
    pub fn from_seed(quad: Arc<Quadrangulation>, delta1: &[u32]) -> Result<Region> {
        let n = quad.len();
        let mut seed = delta1.to_vec();
        seed.sort_unstable();
        seed.dedup();
        if seed.is_empty() {
            return Err(Error::Region("empty seed".into()));
        }
        if let Some(&v) = seed.iter().find(|&&v| v as usize >= n || quad.is_v0(v)) {
            return Err(Error::Region(format!(
                "seed vertex {v} is not a V1 vertex of the patch"
            )));
        }
        let mut in_seed = vec![false; n];
        for &v in &seed {
            in_seed[v as usize] = true;
        }
        let adj1 = adjacency(&quad, |v| quad.neighbors1(v).to_vec());
        if !connected_within(&adj1, &seed, &|v| in_seed[v as usize]) {
            return Err(Error::Region("seed is not connected in G1".into()));
        }

        let mut role = vec![Role::Outside; n];
        for &v in &seed {
            role[v as usize] = Role::Inside;
        }
        for v in quad.v0_ids() {
            let ns = quad.neighbors(v);
            if quad.is_interior(v) && ns.iter().all(|&w| in_seed[w as usize]) {
                role[v as usize] = Role::Inside;
            }
        }
        let lambda: Vec<u32> = (0..n as u32)
            .filter(|&v| role[v as usize] == Role::Inside)
            .collect();
        for &v in &lambda {
            for &w in quad.neighbors(v) {
                if role[w as usize] == Role::Outside {
                    role[w as usize] = Role::Boundary;
                }
            }
        }
        let boundary: Vec<u32> = (0..n as u32)
            .filter(|&v| role[v as usize] == Role::Boundary)
            .collect();
        if let Some(&v) = boundary.iter().find(|&&v| !quad.is_v0(v)) {
            return Err(Error::Region(format!("boundary vertex {v} is not in V0")));
        }
        if let Some(&v) = lambda
            .iter()
            .chain(&boundary)
            .find(|&&v| !quad.is_interior(v))
        {
            return Err(Error::Region(format!(
                "vertex {v} of the closure touches the patch rim"
            )));
        }
        let adj = adjacency(&quad, |v| quad.neighbors(v).to_vec());
        if !connected_within(&adj, &lambda, &|v| role[v as usize] == Role::Inside) {
            return Err(Error::Region("region is not connected".into()));
        }
        let outside: Vec<u32> = (0..n as u32)
            .filter(|&v| role[v as usize] != Role::Inside)
            .collect();
        if !connected_within(&adj, &outside, &|v| role[v as usize] != Role::Inside) {
            return Err(Error::Region(
                "complement is not connected (region has a hole)".into(),
            ));
        }
        let edges: Vec<(u32, u32)> = quad
            .g_edges()
            .iter()
            .copied()
            .filter(|&(a, b)| role[a as usize] == Role::Inside || role[b as usize] == Role::Inside)
            .collect();
        Ok(Region {
            quad,
            lambda,
            boundary,
            role,
            edges,
        })
    }

    /// `V₀` ball of `G₀`-radius `radius` around `center` together with every
    /// triangle touching it; `∂Λ` is the `V₀` sphere of radius `radius + 1`.
    pub fn ball(quad: Arc<Quadrangulation>, center: u32, radius: u32) -> Result<Region> {
        if !quad.is_v0(center) {
            return Err(Error::Region(format!("centre {center} is not a V0 vertex")));
        }
        let d = quad.distances0(center);
        let mut seed: Vec<u32> = quad
            .v0_ids()
            .filter(|&v| d[v as usize] <= radius)
            .flat_map(|v| quad.neighbors(v).to_vec())
            .collect();
        seed.sort_unstable();
        seed.dedup();
        Region::from_seed(quad, &seed)
    }

    /// A `V₀` vertex with its surrounding hexagon.
    pub fn star(quad: Arc<Quadrangulation>, v: u32) -> Result<Region> {
        Region::ball(quad, v, 0)
    }

    pub fn quad(&self) -> &Quadrangulation {
        &self.quad
    }

    pub fn quad_arc(&self) -> &Arc<Quadrangulation> {
        &self.quad
    }

    /// Sorted vertex ids of `Λ`.
    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    /// Sorted vertex ids of `∂Λ`.
    pub fn boundary(&self) -> &[u32] {
        &self.boundary
    }

    /// `E_Λ`: edges of `G` with at least one endpoint in `Λ`.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn contains(&self, v: u32) -> bool {
        self.role[v as usize] == Role::Inside
    }

    pub fn is_boundary(&self, v: u32) -> bool {
        self.role[v as usize] == Role::Boundary
    }

    /// In `Λ ∪ ∂Λ`.
    pub fn in_closure(&self, v: u32) -> bool {
        self.role[v as usize] != Role::Outside
    }

    pub fn lambda_v0(&self) -> Vec<u32> {
        self.lambda
            .iter()
            .copied()
            .filter(|&v| self.quad.is_v0(v))
            .collect()
    }

    pub fn lambda_v1(&self) -> Vec<u32> {
        self.lambda
            .iter()
            .copied()
            .filter(|&v| !self.quad.is_v0(v))
            .collect()
    }

    /// Indices of `G₀` edges with both endpoints in `Λ ∪ ∂Λ`.
    pub fn closure_g0_edges(&self) -> Vec<u32> {
        (0..self.quad.g0_edges().len() as u32)
            .filter(|&i| {
                let (a, b) = self.quad.g0_edges()[i as usize];
                self.in_closure(a) && self.in_closure(b)
            })
            .collect()
    }

    /// Indices of `G₁` edges with both endpoints in `Λ`.
    pub fn inner_g1_edges(&self) -> Vec<u32> {
        (0..self.quad.g1_edges().len() as u32)
            .filter(|&i| {
                let (a, b) = self.quad.g1_edges()[i as usize];
                self.contains(a) && self.contains(b)
            })
            .collect()
    }

    pub fn summary(&self) -> RegionSummary {
        RegionSummary {
            lambda_v0: self.lambda_v0().len(),
            lambda_v1: self.lambda_v1().len(),
            boundary: self.boundary.len(),
            edges: self.edges.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RegionSummary {
    pub lambda_v0: usize,
    pub lambda_v1: usize,
    pub boundary: usize,
    pub edges: usize,
}

/// `Δ = {v : d_G(v, Δ₁) ≤ 1}` split by sublattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickSet {
    pub delta: Vec<u32>,
    pub delta0: Vec<u32>,
    pub delta1: Vec<u32>,
}

impl ThickSet {
    /// Edges of `G` with both endpoints in `Δ`.
    pub fn edges(&self, quad: &Quadrangulation) -> Vec<(u32, u32)> {
        quad.g_edges()
            .iter()
            .copied()
            .filter(|&(a, b)| {
                self.delta.binary_search(&a).is_ok() && self.delta.binary_search(&b).is_ok()
            })
            .collect()
    }
}

pub fn thick_set(quad: &Quadrangulation, delta1: &[u32]) -> Result<ThickSet> {
    let mut d1 = delta1.to_vec();
    d1.sort_unstable();
    d1.dedup();
    if d1.is_empty() {
        return Err(Error::InvalidInput("empty Δ1".into()));
    }
    if d1
        .iter()
        .any(|&v| v as usize >= quad.len() || quad.is_v0(v))
    {
        return Err(Error::InvalidInput("Δ1 must consist of V1 vertices".into()));
    }
    let adj1 = adjacency(quad, |v| quad.neighbors1(v).to_vec());
    if !connected_within(&adj1, &d1, &|v| d1.binary_search(&v).is_ok()) {
        return Err(Error::InvalidInput("Δ1 is not connected in G1".into()));
    }
    let mut delta0: Vec<u32> = d1
        .iter()
        .flat_map(|&v| quad.neighbors(v).to_vec())
        .collect();
    delta0.sort_unstable();
    delta0.dedup();
    let mut delta: Vec<u32> = delta0.iter().chain(&d1).copied().collect();
    delta.sort_unstable();
    Ok(ThickSet {
        delta,
        delta0,
        delta1: d1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_diced_patch;

    #[test]
    fn single_hexagonal_vertex() {
        let q = Arc::new(build_diced_patch(4));
        let w = q.neighbors(q.origin())[0];
        let r = Region::from_seed(q.clone(), &[w]).unwrap();
        assert_eq!(r.lambda(), &[w]);
        assert_eq!(r.boundary().len(), 3);
        assert!(r.boundary().iter().all(|&b| q.is_v0(b)));
        assert_eq!(r.edges().len(), 3);
    }

    #[test]
    fn star_region() {
        let q = Arc::new(build_diced_patch(4));
        let v = q.origin();
        let r = Region::star(q.clone(), v).unwrap();
        assert_eq!(r.lambda().len(), 7);
        assert_eq!(r.boundary().len(), 6);
        assert_eq!(r.edges().len(), 18);
        assert_eq!(
            r.summary(),
            RegionSummary {
                lambda_v0: 1,
                lambda_v1: 6,
                boundary: 6,
                edges: 18
            }
        );
    }

    #[test]
    fn disconnected_seed_rejected() {
        let q = Arc::new(build_diced_patch(4));
        let o = q.origin();
        let ns = q.neighbors(o);
        // opposite triangles around the origin are not G1-adjacent
        let a = ns[0];
        let b = *ns
            .iter()
            .find(|&&t| t != a && !q.neighbors1(a).contains(&t))
            .unwrap();
        assert!(Region::from_seed(q.clone(), &[a, b]).is_err());
    }

    #[test]
    fn lone_triangles_are_not_connected() {
        // triangles are only joined through V0 vertices, none of which is enclosed here
        let q = Arc::new(build_diced_patch(5));
        let o = q.origin();
        let inner: Vec<u32> = q.neighbors(o).to_vec();
        let r1 = Region::ball(q.clone(), o, 1).unwrap();
        let ring: Vec<u32> = r1
            .lambda_v1()
            .into_iter()
            .filter(|t| !inner.contains(t))
            .collect();
        assert!(matches!(
            Region::from_seed(q.clone(), &ring),
            Err(Error::Region(_))
        ));
    }

    #[test]
    fn annulus_with_hole_rejected() {
        let q = Arc::new(build_diced_patch(6));
        let o = q.origin();
        let inner: Vec<u32> = q.neighbors(o).to_vec();
        let r3 = Region::ball(q.clone(), o, 3).unwrap();
        let seed: Vec<u32> = r3
            .lambda_v1()
            .into_iter()
            .filter(|t| !inner.contains(t))
            .collect();
        let err = Region::from_seed(q.clone(), &seed).unwrap_err();
        assert!(err.to_string().contains("hole"), "{err}");
    }

    #[test]
    fn rim_contact_rejected() {
        let q = Arc::new(build_diced_patch(2));
        assert!(Region::ball(q.clone(), q.origin(), 2).is_err());
        assert!(Region::ball(q.clone(), q.origin(), 0).is_ok());
    }

    #[test]
    fn thick_set_of_single_vertex() {
        let q = build_diced_patch(3);
        let w = q.neighbors(q.origin())[0];
        let t = thick_set(&q, &[w]).unwrap();
        assert_eq!(t.delta0.len(), 3);
        assert_eq!(t.delta1, vec![w]);
        assert_eq!(t.delta.len(), 4);
        assert_eq!(t.edges(&q).len(), 3);
    }
}
