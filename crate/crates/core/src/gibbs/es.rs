//! The Edwards–Sokal joint law `ρ¹_{Λ,β}` of spins and bonds.
//!
//! A bond `η_e` lives on each edge of `E_Λ`; it may be open only when the
//! endpoints carry distinct colours from `{1, 2}`, and then is open with
//! probability `p = 1 − x`. Since `G` is bipartite, every path between
//! `V₀` sites passes through `V₁` sites, so summing out `V₁` spins and their
//! three bonds one site at a time, while tracking which `V₀` sites (and `∂Λ`)
//! have been joined, gives the law of the connectivity exactly.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::{check_cap, Color, ExactMeasure, Layout, BOUNDARY, OUTSIDE};
use crate::exact::{format_fraction, Poly, PolyRatio, RatInterval, DEFAULT_PREC};
use crate::lattice::{thick_set, Region};
use crate::par::{self, Execution};
use crate::peierls::interval_json;
use crate::{Beta, Error, Result};

/// Spin colours of `V₀ ∩ Λ` and of the tracked `V₁` sites, together with
/// the partition of tracked nodes into open clusters. Node 0 is `∂Λ`, nodes
/// `1..=n0` the `V₀` sites of `Λ`, then the markers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    v0: Vec<u8>,
    marks: Vec<u8>,
    part: Vec<u8>,
}

/// The law of `(σ|_{V₀}, σ|_markers, clusters)` under `ρ¹_{Λ,β}`.
pub struct EsLaw {
    layout: Layout,
    markers: Vec<u32>,
    entries: Vec<(Key, Poly)>,
    z: Poly,
}

/// One atom of an [`EsLaw`].
pub struct EsState<'a> {
    law: &'a EsLaw,
    key: &'a Key,
}

impl EsState<'_> {
    fn node(&self, v: u32) -> usize {
        let n0 = self.law.layout.n0;
        match self.law.layout.pos[v as usize] {
            BOUNDARY => 0,
            OUTSIDE => panic!("vertex {v} is outside the region closure"),
            i if (i as usize) < n0 => 1 + i as usize,
            _ => match self.law.markers.binary_search(&v) {
                Ok(m) => 1 + n0 + m,
                Err(_) => panic!("V1 site {v} is not tracked"),
            },
        }
    }

    /// Colour of a `V₀` site of `Λ ∪ ∂Λ` or of a tracked `V₁` site.
    pub fn color(&self, v: u32) -> Color {
        let n0 = self.law.layout.n0;
        match self.node(v) {
            0 => 1,
            k if k <= n0 => self.key.v0[k - 1] + 1,
            k => self.key.marks[k - 1 - n0] + 1,
        }
    }

    /// `v ↔_η ∂Λ`
    pub fn linked(&self, v: u32) -> bool {
        self.key.part[self.node(v)] == self.key.part[0]
    }

    pub fn connected(&self, u: u32, v: u32) -> bool {
        self.key.part[self.node(u)] == self.key.part[self.node(v)]
    }
}

impl EsLaw {
    pub fn markers(&self) -> &[u32] {
        &self.markers
    }

    /// Total weight; equals the partition function of the spin measure.
    pub fn partition_function(&self) -> &Poly {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight_of(&self, pred: impl Fn(&EsState) -> bool) -> Poly {
        self.entries
            .iter()
            .filter(|(k, _)| pred(&EsState { law: self, key: k }))
            .map(|(_, w)| w.clone())
            .sum()
    }

    pub fn probability_of(&self, pred: impl Fn(&EsState) -> bool) -> PolyRatio {
        PolyRatio::new(self.weight_of(pred), self.z.clone())
    }

    /// Same atoms with the same weights.
    pub fn same_law(&self, other: &EsLaw) -> bool {
        self.markers == other.markers && self.entries == other.entries
    }
}

fn canonical(part: &mut [u8]) {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    for p in part.iter_mut() {
        if map[*p as usize] == u8::MAX {
            map[*p as usize] = next;
            next += 1;
        }
        *p = map[*p as usize];
    }
}

fn join(part: &[u8], nodes: &[usize]) -> Vec<u8> {
    let mut out = part.to_vec();
    if let Some(&first) = nodes.first() {
        let target = part[first];
        let labels: Vec<u8> = nodes.iter().map(|&n| part[n]).collect();
        for p in out.iter_mut() {
            if labels.contains(p) {
                *p = target;
            }
        }
        canonical(&mut out);
    }
    out
}

fn finish(layout: Layout, markers: Vec<u32>, map: HashMap<Key, Poly>) -> EsLaw {
    let mut entries: Vec<(Key, Poly)> = map.into_iter().filter(|(_, w)| !w.is_zero()).collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let z = entries.iter().map(|(_, w)| w.clone()).sum();
    EsLaw {
        layout,
        markers,
        entries,
        z,
    }
}

fn check_markers(layout: &Layout, markers: &[u32]) -> Result<Vec<u32>> {
    let mut m = markers.to_vec();
    m.sort_unstable();
    m.dedup();
    for &v in &m {
        let i = layout.pos.get(v as usize).copied().unwrap_or(OUTSIDE);
        if i == OUTSIDE || i == BOUNDARY || (i as usize) < layout.n0 {
            return Err(Error::InvalidInput(format!(
                "marker {v} is not a V1 site of the region"
            )));
        }
    }
    if 1 + layout.n0 + m.len() > 255 {
        return Err(Error::InvalidInput("too many tracked nodes".into()));
    }
    Ok(m)
}

/// `ρ¹_{Λ,β}` by summing out `V₁` sites one at a time; `markers` are the
/// `V₁` sites whose colour and connectivity are kept.
pub fn es_joint(region: &Region, markers: &[u32], cap: u64, exec: Execution) -> Result<EsLaw> {
    let layout = Layout::new(region)?;
    check_cap(layout.n(), cap)?;
    let markers = check_markers(&layout, markers)?;
    let n0 = layout.n0;
    let nodes = 1 + n0 + markers.len();
    let x = Poly::x();
    let p = Poly::one() - Poly::x();
    // bond factor for k open among a admissible: (1−x)^k x^{a−k}
    let bond = |k: u32, a: u32| p.pow(k) * x.pow(a - k);
    let site_marker: Vec<Option<usize>> = layout.sites[n0..]
        .iter()
        .map(|v| markers.binary_search(v).ok())
        .collect();

    let colorings: Vec<usize> = (0..3usize.pow(n0 as u32)).collect();
    let parts = par::map(exec, colorings, |c0| {
        let mut v0 = vec![0u8; n0];
        let mut k = c0;
        for d in v0.iter_mut().rev() {
            *d = (k % 3) as u8;
            k /= 3;
        }
        let start = Key {
            v0: v0.clone(),
            marks: vec![0; markers.len()],
            part: (0..nodes as u8).collect(),
        };
        let mut states: HashMap<Key, Poly> = HashMap::from([(start, Poly::one())]);
        for (j, ns) in layout.nbrs1.iter().enumerate() {
            let nb: Vec<(usize, u8)> = ns
                .iter()
                .map(|&w| {
                    if w == BOUNDARY {
                        (0, 0)
                    } else {
                        (1 + w as usize, v0[w as usize])
                    }
                })
                .collect();
            // per colour of the V1 site: energy and the admissible bond endpoints
            let moves: Vec<(u8, u32, Vec<usize>)> = (0..3u8)
                .map(|s| {
                    let e = nb.iter().filter(|&&(_, c)| c == s).count() as u32;
                    let a = if s < 2 {
                        nb.iter()
                            .filter(|&&(_, c)| c == 1 - s)
                            .map(|&(n, _)| n)
                            .collect()
                    } else {
                        vec![]
                    };
                    (s, e, a)
                })
                .collect();
            let mut next: HashMap<Key, Poly> = HashMap::new();
            for (key, w) in &states {
                for (s, e, a) in &moves {
                    let base = w * &x.pow(*e);
                    for mask in 0u32..(1 << a.len()) {
                        let mut open: Vec<usize> = a
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, &n)| n)
                            .collect();
                        let mut nk = key.clone();
                        if let Some(m) = site_marker[j] {
                            nk.marks[m] = *s;
                            open.push(1 + n0 + m);
                        }
                        if open.len() >= 2 {
                            nk.part = join(&key.part, &open);
                        }
                        let term = &base * &bond(mask.count_ones(), a.len() as u32);
                        let slot = next.entry(nk).or_insert_with(Poly::zero);
                        *slot = &*slot + &term;
                    }
                }
            }
            states = next;
        }
        states.into_iter().collect::<Vec<_>>()
    });
    let mut map: HashMap<Key, Poly> = HashMap::new();
    for (k, w) in parts.into_iter().flatten() {
        let slot = map.entry(k).or_insert_with(Poly::zero);
        *slot = &*slot + &w;
    }
    Ok(finish(layout, markers, map))
}

/// `ρ¹_{Λ,β}` by listing every `(σ, η)`; rejects configurations with more
/// than `max_bonds` admissible bonds.
pub fn es_brute_force(measure: &ExactMeasure, markers: &[u32], max_bonds: u32) -> Result<EsLaw> {
    let layout = measure.layout().clone();
    let markers = check_markers(&layout, markers)?;
    let n0 = layout.n0;
    let n = layout.n();
    let node = |w: u32| if w == BOUNDARY { 0 } else { 1 + w as usize };
    let edges: Vec<(usize, usize)> = measure
        .region()
        .edges()
        .iter()
        .map(|&(a, b)| (node(layout.pos[a as usize]), node(layout.pos[b as usize])))
        .collect();
    let color_of = |digits: &[u8], k: usize| if k == 0 { 0 } else { digits[k - 1] };
    let x = Poly::x();
    let p = Poly::one() - Poly::x();
    let mark_sites: Vec<usize> = markers
        .iter()
        .map(|&v| layout.pos[v as usize] as usize)
        .collect();
    let mut map: HashMap<Key, Poly> = HashMap::new();
    let mut err = None;
    let mut digits = vec![0u8; n];
    measure.for_each(|_, cfg, h| {
        if err.is_some() {
            return;
        }
        for (d, c) in digits.iter_mut().zip(cfg.colors()) {
            *d = c - 1;
        }
        let a: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(u, v)| {
                let (cu, cv) = (color_of(&digits, u), color_of(&digits, v));
                cu < 2 && cv < 2 && cu != cv
            })
            .collect();
        if a.len() as u32 > max_bonds {
            err = Some(Error::CapExceeded {
                what: "bond enumeration".into(),
                needed: format!("2^{} bond states", a.len()),
                cap: format!("2^{max_bonds}"),
            });
            return;
        }
        let base = x.pow(h);
        for mask in 0u64..(1 << a.len()) {
            let mut uf: Vec<usize> = (0..=n).collect();
            fn find(uf: &mut [usize], mut i: usize) -> usize {
                while uf[i] != i {
                    uf[i] = uf[uf[i]];
                    i = uf[i];
                }
                i
            }
            for (i, &(u, v)) in a.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
                    uf[ru] = rv;
                }
            }
            let tracked: Vec<usize> = std::iter::once(0)
                .chain(1..=n0)
                .chain(mark_sites.iter().map(|&s| 1 + s))
                .collect();
            let mut part: Vec<u8> = tracked.iter().map(|&t| find(&mut uf, t) as u8).collect();
            canonical(&mut part);
            let key = Key {
                v0: digits[..n0].to_vec(),
                marks: mark_sites.iter().map(|&s| digits[s]).collect(),
                part,
            };
            let k = mask.count_ones();
            let w = &base * &(p.pow(k) * x.pow(a.len() as u32 - k));
            let slot = map.entry(key).or_insert_with(Poly::zero);
            *slot = &*slot + &w;
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(finish(layout, markers, map))
}

fn difference(a: &PolyRatio, b: &PolyRatio) -> PolyRatio {
    PolyRatio::new(&a.num * &b.den - &b.num * &a.den, &a.den * &b.den)
}

/// One identity `lhs = rhs` between probabilities.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: PolyRatio,
    pub rhs: PolyRatio,
    /// Equal as rational functions of `x`.
    pub exact: bool,
    /// Largest `|lhs − rhs|` over the evaluation grid.
    pub max_deviation: f64,
}

impl IdentityCheck {
    fn new(name: String, lhs: PolyRatio, rhs: PolyRatio, betas: &[Beta]) -> IdentityCheck {
        let exact = lhs.same_value(&rhs);
        let max_deviation = betas
            .iter()
            .map(|b| {
                let d = lhs.eval(b, DEFAULT_PREC) - rhs.eval(b, DEFAULT_PREC);
                d.lo_f64().abs().max(d.hi_f64().abs())
            })
            .fold(0.0, f64::max);
        IdentityCheck {
            name,
            lhs,
            rhs,
            exact,
            max_deviation,
        }
    }

    pub fn to_json(&self, betas: &[Beta]) -> Value {
        json!({
            "identity": self.name,
            "exact": self.exact,
            "max_deviation": self.max_deviation,
            "lhs_at_infinity": format_fraction(&self.lhs.at_infinity()),
            "rhs_at_infinity": format_fraction(&self.rhs.at_infinity()),
            "values": betas.iter().map(|b| json!({
                "beta": b.to_string(),
                "lhs": interval_json(&self.lhs.eval(b, DEFAULT_PREC)),
                "rhs": interval_json(&self.rhs.eval(b, DEFAULT_PREC)),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks, against the spin measure, the marginal and cluster identities of
/// the joint law: for every `V₀` site `μ(σ=1) − μ(σ=2) = ρ(v ↔ ∂Λ)`, for
/// every `V₁` site `μ(σ=2) − μ(σ=1) = ρ(v ↔ ∂Λ)`, and for each listed set
/// `μ(J₁) − μ(J₂) = ρ(J ∩ {Δ₀ ↔ ∂Λ})` and `μ(J₁) − μ(J₂) = ½[3μ(J₁|J) − 1]μ(J)`.
pub fn es_identities(
    measure: &ExactMeasure,
    delta0s: &[Vec<u32>],
    betas: &[Beta],
    exec: Execution,
) -> Result<Vec<IdentityCheck>> {
    use super::Event;
    let region = measure.region();
    let cap = u64::MAX;
    let mut out = Vec::new();
    let law = es_joint(region, &[], cap, exec)?;
    if &law.z != measure.partition_function() {
        return Err(Error::Invariant(
            "joint law does not marginalize to the spin measure".into(),
        ));
    }
    let marginals = measure.marginals();
    let n0 = measure.layout().n0;
    for (&v, [m1, m2, _]) in measure.layout().sites[..n0].iter().zip(&marginals) {
        let r1 = law.probability_of(|s| s.color(v) == 1);
        out.push(IdentityCheck::new(
            format!("marginal σ_{v}=1"),
            m1.clone(),
            r1,
            betas,
        ));
        out.push(IdentityCheck::new(
            format!("μ(σ_{v}=1) − μ(σ_{v}=2) = ρ({v} ↔ ∂)"),
            difference(m1, m2),
            law.probability_of(|s| s.linked(v)),
            betas,
        ));
    }
    for (&v, [m1, m2, _]) in measure.layout().sites[n0..].iter().zip(&marginals[n0..]) {
        let law = es_joint(region, &[v], cap, exec)?;
        out.push(IdentityCheck::new(
            format!("μ(σ_{v}=2) − μ(σ_{v}=1) = ρ({v} ↔ ∂)"),
            difference(m2, m1),
            law.probability_of(|s| s.linked(v)),
            betas,
        ));
    }
    for d0 in delta0s {
        if d0.is_empty()
            || d0
                .iter()
                .any(|&v| !region.contains(v) || !region.quad().is_v0(v))
        {
            return Err(Error::InvalidInput(
                "Δ0 must be a nonempty set of V0 sites of the region".into(),
            ));
        }
        let j1 = measure.probability(&Event::UniformIn(d0.clone(), 1));
        let j2 = measure.probability(&Event::UniformIn(d0.clone(), 2));
        let j = measure.probability(&Event::Uniform(d0.clone()));
        let lhs = difference(&j1, &j2);
        let rhs = law.probability_of(|s| {
            d0.iter().all(|&v| s.color(v) == s.color(d0[0])) && d0.iter().any(|&v| s.linked(v))
        });
        out.push(IdentityCheck::new(
            format!("μ(J₁) − μ(J₂) = ρ(J ∩ Δ₀ ↔ ∂), Δ₀ = {d0:?}"),
            lhs.clone(),
            rhs,
            betas,
        ));
        // ½[3 μ(J₁|J) − 1] μ(J) = (3 μ(J₁) − μ(J)) / 2
        let three_j1 = PolyRatio::new(j1.num.scale(3), j1.den.scale(2));
        let half_j = PolyRatio::new(j.num.clone(), j.den.scale(2));
        out.push(IdentityCheck::new(
            format!("μ(J₁) − μ(J₂) = ½[3μ(J₁|J) − 1]μ(J), Δ₀ = {d0:?}"),
            lhs,
            difference(&three_j1, &half_j),
            betas,
        ));
    }
    Ok(out)
}

/// Both sides of `ρ(all of Δ ↔ ∂Λ) ≥ ε ρ(J_{Δ₀} ∩ {Δ₀ ↔ ∂Λ})`.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub delta1: Vec<u32>,
    pub delta0: Vec<u32>,
    pub edges_in_delta: usize,
    pub beta0: Beta,
    pub beta: Beta,
    #[serde(skip)]
    pub lhs: RatInterval,
    #[serde(skip)]
    pub rhs: RatInterval,
    #[serde(skip)]
    pub epsilon: RatInterval,
    pub holds: bool,
    /// The right side vanishes.
    pub trivial: bool,
}

impl ComparisonReport {
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable report");
        v["lhs"] = interval_json(&self.lhs);
        v["rhs"] = interval_json(&self.rhs);
        v["epsilon"] = interval_json(&self.epsilon);
        v
    }
}

/// `β ≥ β₀`, decided exactly when both are rational.
fn at_least(beta: &Beta, beta0: &Beta) -> bool {
    match (beta, beta0) {
        (Beta::Infinite, _) => true,
        (_, Beta::Infinite) => false,
        (Beta::Finite(a), Beta::Finite(b)) => a >= b,
        (Beta::Weight(a), Beta::Weight(b)) => a <= b,
        _ => beta.weight(DEFAULT_PREC).hi() <= beta0.weight(DEFAULT_PREC).lo(),
    }
}

/// `ε = 3^{−|Δ₁|} (1 − e^{−β₀})^{|E_Δ|}`, enclosed.
pub fn comparison_epsilon(delta1: usize, edges: usize, beta0: &Beta) -> RatInterval {
    let p = RatInterval::from_integer(1) - beta0.weight(DEFAULT_PREC);
    let third = RatInterval::point(crate::exact::rat(1, 3));
    (third.powu(delta1 as u32) * p.powu(edges as u32)).round_out(DEFAULT_PREC)
}

/// Evaluates both sides of the comparison inequality for the thick set
/// built on `delta1`, and checks it with the stated `ε` rigorously.
pub fn comparison_check(
    region: &Region,
    delta1: &[u32],
    beta0: &Beta,
    beta: &Beta,
    exec: Execution,
) -> Result<ComparisonReport> {
    let quad = region.quad();
    let thick = thick_set(quad, delta1)?;
    if let Some(v) = thick.delta.iter().find(|&&v| !region.contains(v)) {
        return Err(Error::Region(format!(
            "thick set vertex {v} is not in the region"
        )));
    }
    if beta0
        .weight_exact()
        .is_some_and(|x| x == crate::exact::int(1))
        || beta0.is_infinite()
    {
        return Err(Error::InvalidInput("β₀ must be positive and finite".into()));
    }
    if !at_least(beta, beta0) {
        return Err(Error::InvalidInput(format!(
            "β = {beta} is below β₀ = {beta0}"
        )));
    }
    let law = es_joint(region, &thick.delta1, u64::MAX, exec)?;
    let lhs = law.probability_of(|s| thick.delta.iter().all(|&v| s.linked(v)));
    let d0 = &thick.delta0;
    let rhs = law.probability_of(|s| {
        d0.iter().all(|&v| s.color(v) == s.color(d0[0])) && d0.iter().any(|&v| s.linked(v))
    });
    let edges = thick.edges(quad).len();
    let epsilon = comparison_epsilon(thick.delta1.len(), edges, beta0);
    let (l, r) = (lhs.eval(beta, DEFAULT_PREC), rhs.eval(beta, DEFAULT_PREC));
    let trivial = rhs.num.is_zero();
    let holds = trivial || l.lo() >= (epsilon.clone() * r.clone()).hi();
    Ok(ComparisonReport {
        delta1: thick.delta1.clone(),
        delta0: thick.delta0.clone(),
        edges_in_delta: edges,
        beta0: beta0.clone(),
        beta: beta.clone(),
        lhs: l,
        rhs: r,
        epsilon,
        holds,
        trivial,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_measure, region_from_axial_seed, DEFAULT_CAP};
    use super::*;
    use crate::exact::rat;
    use crate::lattice::build_diced_patch;
    use std::sync::Arc;

    fn quad() -> Arc<crate::lattice::Quadrangulation> {
        Arc::new(build_diced_patch(4))
    }

    #[test]
    fn partition_dp_matches_brute_force() {
        let q = quad();
        let star = Region::star(q.clone(), q.origin()).unwrap();
        let m = enumerate_measure(&star, DEFAULT_CAP, Execution::Sequential).unwrap();
        let v1 = star.lambda_v1();
        for markers in [vec![], vec![v1[0]], vec![v1[1], v1[4]]] {
            let dp = es_joint(&star, &markers, DEFAULT_CAP, Execution::Parallel).unwrap();
            let bf = es_brute_force(&m, &markers, 20).unwrap();
            assert!(dp.same_law(&bf), "markers {markers:?}");
            assert_eq!(dp.partition_function(), m.partition_function());
        }
    }

    #[test]
    fn single_site_joint_law() {
        let q = quad();
        let w = q.neighbors(q.origin())[0];
        let r = Region::from_seed(q.clone(), &[w]).unwrap();
        let law = es_joint(&r, &[w], DEFAULT_CAP, Execution::Sequential).unwrap();
        // σ_w = 2 links to ∂ unless all three bonds close: 1 − x³
        let linked = law.probability_of(|s| s.linked(w));
        let want = PolyRatio::new(
            Poly::from_coeffs(vec![1, 0, 0, -1]),
            Poly::from_coeffs(vec![2, 0, 0, 1]),
        );
        assert!(linked.same_value(&want));
    }

    #[test]
    fn identities_hold_exactly_on_star() {
        let q = quad();
        let star = Region::star(q.clone(), q.origin()).unwrap();
        let m = enumerate_measure(&star, DEFAULT_CAP, Execution::Parallel).unwrap();
        let betas = [
            Beta::Finite(rat(1, 2)),
            Beta::Finite(rat(2, 1)),
            Beta::Infinite,
        ];
        let checks = es_identities(&m, &[vec![q.origin()]], &betas, Execution::Parallel).unwrap();
        assert_eq!(checks.len(), 2 + 6 + 2);
        for c in &checks {
            assert!(c.exact, "{}", c.name);
            assert!(c.max_deviation < 1e-12, "{}", c.name);
        }
    }

    #[test]
    fn comparison_on_star_extension() {
        let q = quad();
        let w = q.neighbors(q.origin())[0];
        let corners: Vec<_> = q
            .neighbors(w)
            .iter()
            .map(|&v| q.axial(v).unwrap())
            .collect();
        let r = region_from_axial_seed(&q, &corners).unwrap();
        let one = Beta::Finite(rat(1, 1));
        let rep = comparison_check(&r, &[w], &one, &one, Execution::Parallel).unwrap();
        assert_eq!((rep.delta1.len(), rep.edges_in_delta), (1, 3));
        assert!(rep.holds && !rep.trivial);
        let e = comparison_epsilon(1, 3, &one);
        let want = (1.0 - (-1.0f64).exp()).powi(3) / 3.0;
        assert!((e.mid_f64() - want).abs() < 1e-15);
        assert!(comparison_check(
            &r,
            &[w],
            &Beta::Finite(rat(2, 1)),
            &one,
            Execution::Sequential
        )
        .is_err());
    }
}
