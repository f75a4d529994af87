//! Contours: connected components of the dual edge set `E₁(σ)` of the
//! improperly coloured `G₀` edges, with their triple points, interior faces
//! and colouring counts `χ(γ)`, and the contour measure on small regions.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::exact::{format_fraction, Poly, PolyRatio, DEFAULT_PREC};
use crate::gibbs::{Color, ExactMeasure};
use crate::lattice::{Quadrangulation, Region};
use crate::par::{self, Execution};
use crate::peierls::interval_json;
use crate::{Beta, Error, Result};

/// Default cap on `|V₁ ∩ Λ|` for enumerating contour configurations.
pub const DEFAULT_V1_CAP: usize = 14;

/// `(E₀(σ), E₁(σ))` as sorted `G₀` and `G₁` edge indices. `color` must be
/// defined on `Λ ∪ ∂Λ` and equal 1 on `∂Λ`.
pub fn unsatisfied_edges(
    region: &Region,
    color: impl Fn(u32) -> Color,
) -> Result<(Vec<u32>, Vec<u32>)> {
    if let Some(&b) = region.boundary().iter().find(|&&b| color(b) != 1) {
        return Err(Error::InvalidInput(format!(
            "boundary vertex {b} is not coloured 1"
        )));
    }
    let quad = region.quad();
    let e0: Vec<u32> = region
        .closure_g0_edges()
        .into_iter()
        .filter(|&e| {
            let (a, b) = quad.g0_edges()[e as usize];
            color(a) != color(b)
        })
        .collect();
    let mut e1: Vec<u32> = e0.iter().map(|&e| quad.dual_of_g0(e)).collect();
    e1.sort_unstable();
    for &e in &e1 {
        let (a, b) = quad.g1_edges()[e as usize];
        if !region.contains(a) || !region.contains(b) {
            return Err(Error::Invariant(format!("dual edge {e} leaves the region")));
        }
    }
    Ok((e0, e1))
}

/// [`unsatisfied_edges`] for colours listed in `region.lambda()` order, boundary 1.
pub fn unsatisfied_edges_of(region: &Region, colors: &[Color]) -> Result<(Vec<u32>, Vec<u32>)> {
    let lambda = region.lambda();
    if colors.len() != lambda.len() {
        return Err(Error::InvalidInput(format!(
            "{} colours for {} sites",
            colors.len(),
            lambda.len()
        )));
    }
    unsatisfied_edges(region, |v| match lambda.binary_search(&v) {
        Ok(i) => colors[i],
        Err(_) => 1,
    })
}

/// A connected, bridgeless set of `G₁` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contour {
    /// Sorted `G₁` edge indices.
    pub edges: Vec<u32>,
    /// Vertices of degree 3.
    pub triple_vertices: Vec<u32>,
    /// `t(γ)`; there are `2t` vertices of degree 3 and `|γ| − 3t` of degree 2.
    pub t: usize,
    /// Finite faces, as sorted `V₀` sets.
    pub interiors: Vec<Vec<u32>>,
    /// Pairs of faces across an edge of the contour; face 0 is the exterior,
    /// face `i ≥ 1` is `interiors[i − 1]`.
    pub face_adjacency: Vec<(usize, usize)>,
    /// Proper colourings of the faces with the exterior fixed.
    pub chi: u64,
}

fn find(uf: &mut [u32], mut i: u32) -> u32 {
    while uf[i as usize] != i {
        uf[i as usize] = uf[uf[i as usize] as usize];
        i = uf[i as usize];
    }
    i
}

fn components(quad: &Quadrangulation, edges: &[u32]) -> Vec<Vec<u32>> {
    let mut uf: Vec<u32> = (0..quad.len() as u32).collect();
    for &e in edges {
        let (a, b) = quad.g1_edges()[e as usize];
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        uf[ra as usize] = rb;
    }
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &e in edges {
        let a = quad.g1_edges()[e as usize].0;
        groups.entry(find(&mut uf, a)).or_default().push(e);
    }
    let mut out: Vec<Vec<u32>> = groups.into_values().collect();
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn is_bridge(quad: &Quadrangulation, edges: &[u32], skip: u32) -> bool {
    let (a, b) = quad.g1_edges()[skip as usize];
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for &e in edges.iter().filter(|&&e| e != skip) {
        let (u, v) = quad.g1_edges()[e as usize];
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut seen = HashSet::from([a]);
    let mut stack = vec![a];
    while let Some(u) = stack.pop() {
        if u == b {
            return false;
        }
        for &w in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    true
}

/// Proper colourings of `faces` faces with 3 colours, face 0 fixed.
fn count_colorings(faces: usize, adjacency: &[(usize, usize)]) -> u64 {
    let mut colors = vec![0u8; faces];
    let mut count = 0;
    for c in 0..3u64.pow(faces as u32 - 1) {
        let mut k = c;
        for f in colors[1..].iter_mut() {
            *f = (k % 3) as u8;
            k /= 3;
        }
        if adjacency.iter().all(|&(a, b)| colors[a] != colors[b]) {
            count += 1;
        }
    }
    count
}

impl Contour {
    /// Validates that `edges` is connected and bridgeless and computes its faces.
    pub fn new(quad: &Quadrangulation, edges: &[u32]) -> Result<Contour> {
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        if edges.is_empty() {
            return Err(Error::InvalidInput("empty contour".into()));
        }
        if let Some(&e) = edges.iter().find(|&&e| e as usize >= quad.g1_edges().len()) {
            return Err(Error::InvalidInput(format!("no G1 edge {e}")));
        }
        if components(quad, &edges).len() != 1 {
            return Err(Error::InvalidInput("contour is not connected".into()));
        }
        let mut degree: BTreeMap<u32, usize> = BTreeMap::new();
        for &e in &edges {
            let (a, b) = quad.g1_edges()[e as usize];
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        if let Some(&e) = edges.iter().find(|&&e| is_bridge(quad, &edges, e)) {
            return Err(Error::Invariant(format!("edge {e} is a bridge")));
        }
        let triple_vertices: Vec<u32> = degree
            .iter()
            .filter(|(_, &d)| d == 3)
            .map(|(&v, _)| v)
            .collect();
        if triple_vertices.len() % 2 == 1 {
            return Err(Error::Invariant("odd number of degree-3 vertices".into()));
        }
        let t = triple_vertices.len() / 2;

        // faces: components of V0 once the dual edges of the contour are cut
        let cut: HashSet<u32> = edges.iter().map(|&e| quad.dual_of_g1(e)).collect();
        let n0 = quad.n0() as u32;
        let mut label = vec![usize::MAX; n0 as usize];
        let mut faces: Vec<Vec<u32>> = Vec::new();
        // start from the farthest vertex so that face 0 is the exterior
        for s in (0..n0).rev() {
            if label[s as usize] != usize::MAX {
                continue;
            }
            let f = faces.len();
            label[s as usize] = f;
            let mut members = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in quad.neighbors0(u) {
                    let e = quad
                        .g0_edge_index(u, w)
                        .expect("G0 neighbours share an edge");
                    if label[w as usize] == usize::MAX && !cut.contains(&e) {
                        label[w as usize] = f;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            faces.push(members);
        }
        if faces.len() != 2 + t {
            return Err(Error::Invariant(format!(
                "{} faces for t = {t}",
                faces.len()
            )));
        }
        let mut adjacency: Vec<(usize, usize)> = cut
            .iter()
            .map(|&e| {
                let (a, b) = quad.g0_edges()[e as usize];
                let (fa, fb) = (label[a as usize], label[b as usize]);
                (fa.min(fb), fa.max(fb))
            })
            .collect();
        if adjacency.iter().any(|&(a, b)| a == b) {
            return Err(Error::Invariant(
                "contour edge with the same face on both sides".into(),
            ));
        }
        adjacency.sort_unstable();
        adjacency.dedup();
        // relabel interiors in order of their smallest vertex
        let mut order: Vec<usize> = (1..faces.len()).collect();
        order.sort_by_key(|&f| faces[f][0]);
        let mut rank = vec![0usize; faces.len()];
        for (i, &f) in order.iter().enumerate() {
            rank[f] = i + 1;
        }
        let face_adjacency: Vec<(usize, usize)> = {
            let mut a: Vec<(usize, usize)> = adjacency
                .iter()
                .map(|&(x, y)| (rank[x].min(rank[y]), rank[x].max(rank[y])))
                .collect();
            a.sort_unstable();
            a
        };
        let chi = count_colorings(faces.len(), &face_adjacency);
        let interiors = order
            .into_iter()
            .map(|f| std::mem::take(&mut faces[f]))
            .collect();
        Ok(Contour {
            edges,
            triple_vertices,
            t,
            interiors,
            face_adjacency,
            chi,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.t == 0
    }

    /// `Δ₀` lies in a single finite face.
    pub fn surrounds(&self, delta0: &[u32]) -> bool {
        !delta0.is_empty()
            && self
                .interiors
                .iter()
                .any(|face| delta0.iter().all(|v| face.binary_search(v).is_ok()))
    }

    /// Weight `χ (2+x³)^{−d₂−d₃} (1+x+x²)^{d₂} (3x)^{d₃}` up to `(2+x³)^{n₁}`,
    /// returned as the numerator together with `d₂ + d₃`.
    fn weight(&self) -> (Poly, u32) {
        let d3 = 2 * self.t as u32;
        let d2 = self.len() as u32 - 3 * self.t as u32;
        let w = Poly::from_coeffs(vec![1, 1, 1]).pow(d2) * Poly::monomial(3, 1).pow(d3);
        (w.scale(self.chi as i128), d2 + d3)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "edges": self.edges,
            "length": self.len(),
            "t": self.t,
            "chi": self.chi,
            "triple_vertices": self.triple_vertices,
            "interior_sizes": self.interiors.iter().map(Vec::len).collect::<Vec<_>>(),
        })
    }
}

/// Contours of an edge set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContourSet {
    pub contours: Vec<Contour>,
}

impl ContourSet {
    pub fn len(&self) -> usize {
        self.contours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.contours.iter().map(Contour::len).sum()
    }

    /// Union of the contour edge sets, sorted.
    pub fn edges(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self
            .contours
            .iter()
            .flat_map(|c| c.edges.iter().copied())
            .collect();
        e.sort_unstable();
        e
    }

    pub fn surrounding(&self, v: u32) -> usize {
        self.contours.iter().filter(|c| c.surrounds(&[v])).count()
    }

    pub fn nonsimple_surrounding(&self, v: u32) -> usize {
        self.contours
            .iter()
            .filter(|c| !c.is_simple() && c.surrounds(&[v]))
            .count()
    }

    pub fn to_json(&self) -> Value {
        json!({ "contours": self.contours.iter().map(Contour::to_json).collect::<Vec<_>>() })
    }
}

/// Splits `E₁ ⊆ E₁(Λ)` into contours.
pub fn decompose(region: &Region, e1: &[u32]) -> Result<ContourSet> {
    let quad = region.quad();
    for &e in e1 {
        let ok = (e as usize) < quad.g1_edges().len() && {
            let (a, b) = quad.g1_edges()[e as usize];
            region.contains(a) && region.contains(b)
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "edge {e} is not a G1 edge inside the region"
            )));
        }
    }
    let contours = components(quad, e1)
        .iter()
        .map(|c| Contour::new(quad, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(ContourSet { contours })
}

/// `χ(γ)`.
pub fn chi(quad: &Quadrangulation, edges: &[u32]) -> Result<u64> {
    Ok(Contour::new(quad, edges)?.chi)
}

/// One contour configuration `Γ` with its unnormalized weight.
#[derive(Clone, Debug)]
pub struct ContourConfig {
    pub set: ContourSet,
    /// `Π χ(γ) p^{|γ|} q^{t(γ)}` times `(2+x³)^{|V₁∩Λ|}`, a polynomial in `x`.
    pub weight: Poly,
}

/// The contour measure `ν_{Λ,β}` for all `β` at once.
pub struct ContourMeasure {
    region: Region,
    configs: Vec<ContourConfig>,
    z: Poly,
}

/// Every collection of disjoint contours inside `Λ`, found by listing edge
/// subsets of `E₁(Λ)` whose components are bridgeless.
pub fn contour_measure(region: &Region, v1_cap: usize, exec: Execution) -> Result<ContourMeasure> {
    let quad = region.quad();
    let n1 = region.lambda_v1().len();
    if n1 > v1_cap {
        return Err(Error::CapExceeded {
            what: "contour enumeration".into(),
            needed: format!("{n1} V1 sites"),
            cap: v1_cap.to_string(),
        });
    }
    let edges = region.inner_g1_edges();
    if edges.len() > 40 {
        return Err(Error::CapExceeded {
            what: "contour enumeration".into(),
            needed: format!("2^{} edge subsets", edges.len()),
            cap: "2^40".into(),
        });
    }
    let m = edges.len();
    let high = m.min(6);
    let blocks: Vec<u64> = (0..1u64 << high).collect();
    let base = Poly::from_coeffs(vec![2, 0, 0, 1]);
    let parts = par::map(exec, blocks, |hi| {
        let mut out = Vec::new();
        let mut cache: HashMap<Vec<u32>, Option<Contour>> = HashMap::new();
        for lo in 0..1u64 << (m - high) {
            let mask = hi << (m - high) | lo;
            let chosen: Vec<u32> = (0..m)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| edges[i])
                .collect();
            let mut degree: HashMap<u32, u8> = HashMap::new();
            for &e in &chosen {
                let (a, b) = quad.g1_edges()[e as usize];
                *degree.entry(a).or_default() += 1;
                *degree.entry(b).or_default() += 1;
            }
            if degree.values().any(|&d| d == 1) {
                continue;
            }
            let mut contours = Vec::new();
            let mut valid = true;
            for comp in components(quad, &chosen) {
                let c = cache
                    .entry(comp.clone())
                    .or_insert_with(|| Contour::new(quad, &comp).ok());
                match c {
                    Some(c) => contours.push(c.clone()),
                    None => {
                        valid = false;
                        break;
                    }
                }
            }
            if !valid {
                continue;
            }
            let mut weight = Poly::one();
            let mut used = 0;
            for c in &contours {
                let (w, d) = c.weight();
                weight = weight * w;
                used += d;
            }
            weight = weight * base.pow(n1 as u32 - used);
            out.push(ContourConfig {
                set: ContourSet { contours },
                weight,
            });
        }
        out
    });
    let mut configs: Vec<ContourConfig> = parts.into_iter().flatten().collect();
    configs.sort_by_key(|c| c.set.edges());
    let z = configs.iter().map(|c| c.weight.clone()).sum();
    Ok(ContourMeasure {
        region: region.clone(),
        configs,
        z,
    })
}

impl ContourMeasure {
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn configs(&self) -> &[ContourConfig] {
        &self.configs
    }

    pub fn partition_function(&self) -> &Poly {
        &self.z
    }

    pub fn probability(&self, i: usize) -> PolyRatio {
        PolyRatio::new(self.configs[i].weight.clone(), self.z.clone())
    }

    /// The `β = ∞` law `2^{#Γ} 2^{−|Γ|}`, normalized, over collections of
    /// disjoint simple circuits.
    pub fn zero_temperature(&self) -> Vec<(Vec<u32>, num_rational::BigRational)> {
        use num_rational::BigRational;
        let simple: Vec<&ContourConfig> = self
            .configs
            .iter()
            .filter(|c| c.set.contours.iter().all(Contour::is_simple))
            .collect();
        let w = |c: &ContourConfig| {
            BigRational::new(
                num_bigint::BigInt::from(2).pow(c.set.len() as u32),
                num_bigint::BigInt::from(2).pow(c.set.total_length() as u32),
            )
        };
        let z: BigRational = simple.iter().map(|c| w(c)).sum();
        simple.iter().map(|c| (c.set.edges(), w(c) / &z)).collect()
    }

    /// `E[Σ_{γ∈Γ} f(γ)]`.
    pub fn expectation(&self, f: impl Fn(&ContourSet) -> i128) -> PolyRatio {
        let num = self.configs.iter().map(|c| c.weight.scale(f(&c.set))).sum();
        PolyRatio::new(num, self.z.clone())
    }

    /// `ν(γ ∈ Γ)` for every contour that occurs.
    pub fn contour_probabilities(&self) -> Vec<(Contour, PolyRatio)> {
        let mut acc: BTreeMap<Vec<u32>, (Contour, Poly)> = BTreeMap::new();
        for c in &self.configs {
            for g in &c.set.contours {
                let slot = acc
                    .entry(g.edges.clone())
                    .or_insert_with(|| (g.clone(), Poly::zero()));
                slot.1 = &slot.1 + &c.weight;
            }
        }
        acc.into_values()
            .map(|(g, w)| (g, PolyRatio::new(w, self.z.clone())))
            .collect()
    }
}

/// `Γ(σ)` pushed forward from the exact spin measure: weight per edge set.
pub fn pushforward(measure: &ExactMeasure) -> Result<BTreeMap<Vec<u32>, Poly>> {
    let region = measure.region();
    let quad = region.quad();
    let pairs: Vec<(u32, u32, u32)> = region
        .closure_g0_edges()
        .into_iter()
        .map(|e| {
            let (a, b) = quad.g0_edges()[e as usize];
            (a, b, quad.dual_of_g0(e))
        })
        .collect();
    let mut hist: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
    let n_energy = region.edges().len() + 1;
    let mut flush = |key: &[u32], h: &mut Vec<u64>| {
        let slot = hist
            .entry(key.to_vec())
            .or_insert_with(|| vec![0; n_energy]);
        for (a, b) in slot.iter_mut().zip(h.iter_mut()) {
            *a += std::mem::take(b);
        }
    };
    // E1(σ) only sees the V0 colouring, which is constant on each block
    let block = measure.v0_block();
    let mut key: Vec<u32> = Vec::new();
    let mut local = vec![0u64; n_energy];
    measure.for_each(|i, cfg, e| {
        if i % block == 0 {
            if i > 0 {
                flush(&key, &mut local);
            }
            key = pairs
                .iter()
                .filter(|&&(a, b, _)| cfg.color(a) != cfg.color(b))
                .map(|p| p.2)
                .collect();
            key.sort_unstable();
        }
        local[e as usize] += 1;
    });
    flush(&key, &mut local);
    Ok(hist
        .into_iter()
        .map(|(k, h)| (k, Poly::from_histogram(&h)))
        .collect())
}

/// Comparison of the pushforward with the contour measure.
#[derive(Clone, Debug, Serialize)]
pub struct PushforwardReport {
    pub configurations: usize,
    /// Edge sets where the two laws differ (or one is missing).
    pub mismatches: Vec<Vec<u32>>,
    pub exact: bool,
    /// Largest absolute difference over the evaluation grid.
    pub max_deviation: f64,
}

pub fn compare_pushforward(
    cm: &ContourMeasure,
    measure: &ExactMeasure,
    betas: &[Beta],
) -> Result<PushforwardReport> {
    let push = pushforward(measure)?;
    let z_mu = measure.partition_function();
    let mut mismatches = Vec::new();
    let mut max_deviation = 0.0f64;
    let mut seen = HashSet::new();
    for (i, c) in cm.configs.iter().enumerate() {
        let key = c.set.edges();
        let nu = cm.probability(i);
        let mu = match push.get(&key) {
            Some(w) => PolyRatio::new(w.clone(), z_mu.clone()),
            None => PolyRatio::new(Poly::zero(), z_mu.clone()),
        };
        if !nu.same_value(&mu) {
            mismatches.push(key.clone());
        }
        for b in betas {
            let d = nu.eval(b, DEFAULT_PREC) - mu.eval(b, DEFAULT_PREC);
            max_deviation = max_deviation.max(d.lo_f64().abs()).max(d.hi_f64().abs());
        }
        seen.insert(key);
    }
    for k in push.keys().filter(|k| !seen.contains(*k)) {
        mismatches.push(k.clone());
    }
    Ok(PushforwardReport {
        configurations: cm.configs.len(),
        exact: mismatches.is_empty(),
        mismatches,
        max_deviation,
    })
}

/// `2^{t+1} p^{|γ|} q^t / (1 + 2^{t+1} p^{|γ|} q^t)` as a ratio of polynomials.
pub fn peierls_bound(length: usize, t: usize) -> PolyRatio {
    let num = Poly::from_coeffs(vec![1, 1, 1]).pow((length - 3 * t) as u32)
        * Poly::monomial(2i128.pow(t as u32 + 1) * 9i128.pow(t as u32), 2 * t);
    let den = Poly::from_coeffs(vec![2, 0, 0, 1]).pow((length - t) as u32);
    PolyRatio::new(num.clone(), &den + &num)
}

/// Contours whose probability exceeds [`peierls_bound`] at `beta`; equality
/// as rational functions counts as satisfied.
pub fn peierls_violations(cm: &ContourMeasure, beta: &Beta) -> Vec<Contour> {
    cm.contour_probabilities()
        .into_iter()
        .filter(|(g, p)| {
            let bound = peierls_bound(g.len(), g.t);
            if p.same_value(&bound) {
                return false;
            }
            let (pv, bv) = (p.eval(beta, DEFAULT_PREC), bound.eval(beta, DEFAULT_PREC));
            pv.lo() > bv.hi() || (pv.hi() > bv.lo() && !beta.is_infinite())
        })
        .map(|(g, _)| g)
        .collect()
}

/// Expected contour counts around `v` under `ν`.
#[derive(Clone, Debug)]
pub struct ContourStatistics {
    pub vertex: u32,
    /// `E[#{γ ∈ Γ surrounding v}]`
    pub surrounding: PolyRatio,
    /// `E[S^t_v]`: non-simple contours surrounding `v`.
    pub nonsimple_surrounding: PolyRatio,
    pub per_contour: Vec<(Contour, PolyRatio)>,
}

impl ContourStatistics {
    pub fn to_json(&self, betas: &[Beta]) -> Value {
        let at = |p: &PolyRatio| -> Value {
            json!({
                "at_infinity": format_fraction(&p.at_infinity()),
                "values": betas.iter().map(|b| json!({"beta": b.to_string(), "value": interval_json(&p.eval(b, DEFAULT_PREC))})).collect::<Vec<_>>(),
            })
        };
        json!({
            "vertex": self.vertex,
            "surrounding": at(&self.surrounding),
            "nonsimple_surrounding": at(&self.nonsimple_surrounding),
            "contours": self.per_contour.iter().map(|(g, p)| json!({"contour": g.to_json(), "probability": at(p)})).collect::<Vec<_>>(),
        })
    }
}

pub fn contour_statistics(cm: &ContourMeasure, v: u32) -> Result<ContourStatistics> {
    if !cm.region.contains(v) || !cm.region.quad().is_v0(v) {
        return Err(Error::InvalidInput(format!(
            "{v} is not a V0 site of the region"
        )));
    }
    Ok(ContourStatistics {
        vertex: v,
        surrounding: cm.expectation(|s| s.surrounding(v) as i128),
        nonsimple_surrounding: cm.expectation(|s| s.nonsimple_surrounding(v) as i128),
        per_contour: cm.contour_probabilities(),
    })
}

/// Frequencies of `#{γ surrounding v}` and `S^t_v` over sampled configurations.
pub fn sample_statistics<'a>(
    region: &Region,
    v: u32,
    samples: impl IntoIterator<Item = &'a [Color]>,
) -> Result<(f64, f64, usize)> {
    let (mut s, mut st, mut n) = (0usize, 0usize, 0usize);
    for colors in samples {
        let (_, e1) = unsatisfied_edges_of(region, colors)?;
        let set = decompose(region, &e1)?;
        s += set.surrounding(v);
        st += set.nonsimple_surrounding(v);
        n += 1;
    }
    if n == 0 {
        return Err(Error::InvalidInput("no samples".into()));
    }
    Ok((s as f64 / n as f64, st as f64 / n as f64, n))
}

/// Contours bounding a partition of the hexagonal faces around `center` and
/// its six neighbours into labelled parts (the rest of the plane forming one
/// more part), keeping those with `t(γ) = t`.
pub fn flower_contours(quad: &Quadrangulation, center: u32, t: usize) -> Result<Vec<Contour>> {
    let mut cells = vec![center];
    cells.extend(quad.neighbors0(center).iter().copied());
    if cells.len() != 7 {
        return Err(Error::InvalidInput(format!(
            "{center} does not have six G0 neighbours"
        )));
    }
    let k = cells.len();
    let mut found: BTreeMap<Vec<u32>, Contour> = BTreeMap::new();
    // restricted growth strings over k cells plus the exterior, exterior first
    let mut labels = vec![0u8; k + 1];
    loop {
        let label_of = |v: u32| {
            cells
                .iter()
                .position(|&c| c == v)
                .map(|i| labels[i + 1])
                .unwrap_or(0)
        };
        let mut edges: Vec<u32> = Vec::new();
        for &c in &cells {
            for &w in quad.neighbors0(c) {
                if label_of(c) != label_of(w) {
                    let e0 = quad.g0_edge_index(c, w).expect("G0 edge");
                    edges.push(quad.dual_of_g0(e0));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        if !edges.is_empty() && components(quad, &edges).len() == 1 && !found.contains_key(&edges) {
            if let Ok(c) = Contour::new(quad, &edges) {
                if c.t == t {
                    found.insert(edges, c);
                }
            }
        }
        // next restricted growth string
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(found.into_values().collect());
            }
            let max = *labels[..i].iter().max().unwrap();
            if labels[i] <= max {
                labels[i] += 1;
                for l in labels[i + 1..].iter_mut() {
                    *l = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::gibbs::{enumerate_measure, DEFAULT_CAP};
    use crate::lattice::build_diced_patch;
    use std::sync::Arc;

    fn quad() -> Arc<Quadrangulation> {
        Arc::new(build_diced_patch(4))
    }

    fn hexagon_edges(q: &Quadrangulation, v: u32) -> Vec<u32> {
        let mut e: Vec<u32> = q
            .neighbors0(v)
            .iter()
            .map(|&w| q.dual_of_g0(q.g0_edge_index(v, w).unwrap()))
            .collect();
        e.sort_unstable();
        e
    }

    #[test]
    fn star_with_flipped_centre() {
        let q = quad();
        let r = Region::star(q.clone(), q.origin()).unwrap();
        let o = q.origin();
        let (e0, e1) = unsatisfied_edges(&r, |v| {
            if v == o {
                2
            } else if q.is_v0(v) {
                1
            } else {
                3
            }
        })
        .unwrap();
        assert_eq!(e0.len(), 6);
        assert_eq!(e1, hexagon_edges(&q, o));
        let set = decompose(&r, &e1).unwrap();
        assert_eq!(set.len(), 1);
        let h = &set.contours[0];
        assert_eq!((h.len(), h.t, h.chi), (6, 0, 2));
        assert!(h.surrounds(&[o]));
        assert!(!h.surrounds(&[o, q.neighbors0(o)[0]]));
        assert!(unsatisfied_edges(&r, |_| 2).is_err());
        let (a, b) = unsatisfied_edges(&r, |v| if q.is_v0(v) { 1 } else { 2 }).unwrap();
        assert!(a.is_empty() && b.is_empty());
    }

    #[test]
    fn theta_contour() {
        let q = quad();
        let o = q.origin();
        let w = q.neighbors0(o)[0];
        // the union of two adjacent hexagons with their shared edge
        let mut e = hexagon_edges(&q, o);
        e.extend(hexagon_edges(&q, w));
        e.sort_unstable();
        e.dedup();
        let c = Contour::new(&q, &e).unwrap();
        assert_eq!((c.len(), c.t, c.interiors.len(), c.chi), (11, 1, 2, 2));
        assert!(c.chi <= 1 << (c.t + 1));
        assert!(c.surrounds(&[o]) && !c.surrounds(&[o, w]));
        // the outer boundary alone is a simple circuit around both
        let shared = q.dual_of_g0(q.g0_edge_index(o, w).unwrap());
        let outer: Vec<u32> = e.iter().copied().filter(|&x| x != shared).collect();
        let c = Contour::new(&q, &outer).unwrap();
        assert!(c.is_simple() && c.surrounds(&[o, w]));
        // two disjoint hexagons
        let f = q.v0_at((2, 0)).unwrap();
        let r =
            crate::gibbs::region_from_axial_seed(&q, &[(-1, 0), (0, 0), (1, 0), (2, 0)]).unwrap();
        let mut two = hexagon_edges(&q, o);
        two.extend(hexagon_edges(&q, f));
        let set = decompose(&r, &two).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.edges(), {
            two.sort_unstable();
            two
        });
    }

    #[test]
    fn path_is_rejected() {
        let q = quad();
        let e = hexagon_edges(&q, q.origin());
        assert!(matches!(
            Contour::new(&q, &e[..3]),
            Err(Error::Invariant(_)) | Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn star_contour_measure() {
        let q = quad();
        let r = Region::star(q.clone(), q.origin()).unwrap();
        let cm = contour_measure(&r, DEFAULT_V1_CAP, Execution::Sequential).unwrap();
        assert_eq!(cm.configs().len(), 2);
        assert_eq!(cm.probability(0).at_infinity(), rat(32, 33));
        assert_eq!(cm.probability(1).at_infinity(), rat(1, 33));
        let zt = cm.zero_temperature();
        assert_eq!(zt[1].1, rat(1, 33));
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Sequential).unwrap();
        let betas = [
            Beta::Infinite,
            Beta::Finite(rat(2, 1)),
            Beta::Finite(rat(1, 1)),
            Beta::Finite(rat(1, 2)),
        ];
        let rep = compare_pushforward(&cm, &m, &betas).unwrap();
        assert!(rep.exact && rep.max_deviation < 1e-12, "{rep:?}");
        let stats = contour_statistics(&cm, q.origin()).unwrap();
        assert_eq!(stats.surrounding.at_infinity(), rat(1, 33));
        assert_eq!(stats.nonsimple_surrounding.at_infinity(), rat(0, 1));
        assert!(peierls_violations(&cm, &Beta::Infinite).is_empty());
        assert!(peierls_violations(&cm, &Beta::Finite(rat(2, 1))).is_empty());
    }

    #[test]
    fn flower_has_uncolourable_contour() {
        let q = Arc::new(build_diced_patch(6));
        let found = flower_contours(&q, q.origin(), 4).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(|c| c.t == 4 && c.chi <= 1 << 5));
        assert!(found.iter().any(|c| c.chi == 0));
    }
}
