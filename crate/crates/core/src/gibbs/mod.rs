//! Exact finite-volume Gibbs measures `μ¹_{Λ,β}` by enumeration.
//!
//! A configuration has weight `x^{H(σ)}` with `x = e^{−β}`, so every event
//! probability is a ratio of integer polynomials in `x`; `β = ∞` is the
//! `x → 0` limit, i.e. the uniform law on minimizers. Sites of `Λ` are
//! ordered `V₀` first, then `V₁`, each by id, and configuration `i` reads
//! its colours as base-3 digits of `i`, most significant first. The
//! boundary `∂Λ` is coloured 1.

mod es;

use std::sync::Arc;

use serde_json::{json, Value};

pub use es::{
    comparison_check, es_brute_force, es_identities, es_joint, ComparisonReport, EsLaw, EsState,
    IdentityCheck,
};

use crate::exact::{format_fraction, Poly, PolyRatio};
use crate::lattice::Region;
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Default cap on the number of configurations, `3^16`.
pub const DEFAULT_CAP: u64 = 43_046_721;

/// Colours are 1, 2, 3.
pub type Color = u8;

/// Spin values of `Λ` in site order, plus lookup of any vertex in `Λ ∪ ∂Λ`.
pub struct Config<'a> {
    layout: &'a Layout,
    digits: &'a [u8],
}

impl Config<'_> {
    /// Colour of `v`; `∂Λ` reads as 1. Panics outside `Λ ∪ ∂Λ`.
    pub fn color(&self, v: u32) -> Color {
        match self.layout.pos[v as usize] {
            BOUNDARY => 1,
            OUTSIDE => panic!("vertex {v} is outside the region closure"),
            i => self.digits[i as usize] + 1,
        }
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.digits.iter().map(|d| d + 1)
    }
}

const BOUNDARY: u32 = u32::MAX - 1;
const OUTSIDE: u32 = u32::MAX;

/// Site order and neighbourhoods used by the enumerations.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    /// `Λ` sites, `V₀` first.
    pub sites: Vec<u32>,
    pub n0: usize,
    /// Position of each quadrangulation vertex in `sites`, or a marker.
    pub pos: Vec<u32>,
    /// For each `V₁` site (index `n0 + j`), its neighbours as site indices or `BOUNDARY`.
    pub nbrs1: Vec<[u32; 3]>,
}

impl Layout {
    fn new(region: &Region) -> Result<Layout> {
        let quad = region.quad();
        let mut sites = region.lambda_v0();
        sites.sort_unstable();
        let n0 = sites.len();
        let mut v1 = region.lambda_v1();
        v1.sort_unstable();
        sites.extend(v1);
        let mut pos = vec![OUTSIDE; quad.len()];
        for &b in region.boundary() {
            pos[b as usize] = BOUNDARY;
        }
        for (i, &v) in sites.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut nbrs1 = Vec::new();
        for &v in &sites[n0..] {
            let ns = quad.neighbors(v);
            if ns.len() != 3 {
                return Err(Error::Region(format!(
                    "V1 site {v} has {} neighbours",
                    ns.len()
                )));
            }
            let mut a = [0u32; 3];
            for (k, &w) in ns.iter().enumerate() {
                if pos[w as usize] == OUTSIDE {
                    return Err(Error::Region(format!(
                        "neighbour {w} of {v} is outside the closure"
                    )));
                }
                a[k] = pos[w as usize];
            }
            nbrs1.push(a);
        }
        Ok(Layout {
            sites,
            n0,
            pos,
            nbrs1,
        })
    }

    fn n(&self) -> usize {
        self.sites.len()
    }
}

fn check_cap(n: usize, cap: u64) -> Result<u64> {
    let total = 3u64.checked_pow(n as u32).filter(|&t| t <= cap);
    total.ok_or_else(|| Error::CapExceeded {
        what: "exact enumeration".into(),
        needed: format!("3^{n} configurations"),
        cap: cap.to_string(),
    })
}

/// `H(σ|1)`: monochromatic edges of `E_Λ`. `colors` follows `region.lambda()`.
pub fn hamiltonian(region: &Region, colors: &[Color]) -> Result<u32> {
    let lambda = region.lambda();
    if colors.len() != lambda.len() {
        return Err(Error::InvalidInput(format!(
            "{} colours for {} sites",
            colors.len(),
            lambda.len()
        )));
    }
    if let Some(c) = colors.iter().find(|c| !(1..=3).contains(*c)) {
        return Err(Error::InvalidInput(format!("colour {c} not in 1..3")));
    }
    let color = |v: u32| -> Color {
        match lambda.binary_search(&v) {
            Ok(i) => colors[i],
            Err(_) => 1,
        }
    };
    Ok(region
        .edges()
        .iter()
        .filter(|&&(a, b)| color(a) == color(b))
        .count() as u32)
}

/// Predefined events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// `σ_v = k`
    Color(u32, Color),
    /// `J_{k,Δ₀}`: every site of the set has colour `k`.
    UniformIn(Vec<u32>, Color),
    /// `J_{Δ₀}`: the set is uniformly coloured.
    Uniform(Vec<u32>),
    /// `σ_u = σ_v`
    Improper(u32, u32),
}

impl Event {
    pub fn holds(&self, c: &Config) -> bool {
        match self {
            Event::Color(v, k) => c.color(*v) == *k,
            Event::UniformIn(set, k) => set.iter().all(|&v| c.color(v) == *k),
            Event::Uniform(set) => set.iter().all(|&v| c.color(v) == c.color(set[0])),
            Event::Improper(u, v) => c.color(*u) == c.color(*v),
        }
    }
}

/// The measure, stored as one energy per configuration.
pub struct ExactMeasure {
    region: Region,
    layout: Layout,
    energies: Vec<u8>,
    z: Poly,
    exec: Execution,
}

/// Enumerates every configuration of `Λ` (at most `cap` of them).
pub fn enumerate_measure(region: &Region, cap: u64, exec: Execution) -> Result<ExactMeasure> {
    let layout = Layout::new(region)?;
    check_cap(layout.n(), cap)?;
    let n0 = layout.n0;
    let n1 = layout.n() - n0;
    let inner = 3usize.pow(n1 as u32);
    let blocks: Vec<usize> = (0..3usize.pow(n0 as u32)).collect();
    let parts = par::map(exec, blocks, |c0| {
        let mut v0 = vec![0u8; n0];
        let mut k = c0;
        for d in v0.iter_mut().rev() {
            *d = (k % 3) as u8;
            k /= 3;
        }
        // cost[j][s]: neighbours of V1 site j coloured s
        let cost: Vec<[u8; 3]> = layout
            .nbrs1
            .iter()
            .map(|ns| {
                let mut c = [0u8; 3];
                for &w in ns {
                    c[if w == BOUNDARY {
                        0
                    } else {
                        v0[w as usize] as usize
                    }] += 1;
                }
                c
            })
            .collect();
        let mut out = Vec::with_capacity(inner);
        let mut digits = vec![0u8; n1];
        let mut e: u32 = cost.iter().map(|c| c[0] as u32).sum();
        let mut hist = vec![0u64; 3 * n1 + 1];
        for _ in 0..inner {
            out.push(e as u8);
            hist[e as usize] += 1;
            // odometer on the least significant digit first
            for j in (0..n1).rev() {
                let d = digits[j] as usize;
                let nd = (d + 1) % 3;
                e = e + cost[j][nd] as u32 - cost[j][d] as u32;
                digits[j] = nd as u8;
                if nd != 0 {
                    break;
                }
            }
        }
        (out, hist)
    });
    let mut energies = Vec::with_capacity(inner * parts.len());
    let mut hist = vec![0u64; 3 * n1 + 1];
    for (e, h) in parts {
        energies.extend(e);
        for (a, b) in hist.iter_mut().zip(h) {
            *a += b;
        }
    }
    Ok(ExactMeasure {
        region: region.clone(),
        layout,
        energies,
        z: Poly::from_histogram(&hist),
        exec,
    })
}

impl ExactMeasure {
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn sites(&self) -> &[u32] {
        &self.layout.sites
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `Z` as a polynomial in `x`.
    pub fn partition_function(&self) -> &Poly {
        &self.z
    }

    /// Configurations sharing one `V₀` colouring are consecutive blocks of this size.
    pub fn v0_block(&self) -> usize {
        3usize.pow((self.layout.n() - self.layout.n0) as u32)
    }

    pub fn energy(&self, index: usize) -> u32 {
        self.energies[index] as u32
    }

    pub fn ground_energy(&self) -> u32 {
        self.z.valuation().unwrap() as u32
    }

    pub fn ground_count(&self) -> u128 {
        self.z.coeff(self.z.valuation().unwrap()) as u128
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Calls `f(index, config, energy)` on every configuration in `block`
    /// of the `V₀` colourings.
    fn scan_block(&self, c0: usize, f: &mut impl FnMut(usize, &Config, u32)) {
        let n = self.layout.n();
        let n1 = n - self.layout.n0;
        let inner = 3usize.pow(n1 as u32);
        let mut digits = vec![0u8; n];
        let mut k = c0;
        for d in digits[..self.layout.n0].iter_mut().rev() {
            *d = (k % 3) as u8;
            k /= 3;
        }
        let base = c0 * inner;
        for i in 0..inner {
            let cfg = Config {
                layout: &self.layout,
                digits: &digits,
            };
            f(base + i, &cfg, self.energies[base + i] as u32);
            for j in (self.layout.n0..n).rev() {
                digits[j] = (digits[j] + 1) % 3;
                if digits[j] != 0 {
                    break;
                }
            }
        }
    }

    /// Calls `f` on every configuration, in index order.
    pub fn for_each(&self, mut f: impl FnMut(usize, &Config, u32)) {
        for c0 in 0..3usize.pow(self.layout.n0 as u32) {
            self.scan_block(c0, &mut f);
        }
    }

    /// `Σ_{σ ∈ A} x^{H(σ)}`.
    pub fn weight_of(&self, pred: impl Fn(&Config) -> bool + Sync) -> Poly {
        let n_energy = 3 * (self.layout.n() - self.layout.n0) + 1;
        let blocks: Vec<usize> = (0..3usize.pow(self.layout.n0 as u32)).collect();
        let hists = par::map(self.exec, blocks, |c0| {
            let mut h = vec![0u64; n_energy];
            self.scan_block(c0, &mut |_, c, e| {
                if pred(c) {
                    h[e as usize] += 1;
                }
            });
            h
        });
        let mut h = vec![0u64; n_energy];
        for part in hists {
            for (a, b) in h.iter_mut().zip(part) {
                *a += b;
            }
        }
        Poly::from_histogram(&h)
    }

    /// `μ(σ_v = k)` for every site (in [`ExactMeasure::sites`] order) and
    /// colour, from a single pass.
    pub fn marginals(&self) -> Vec<[PolyRatio; 3]> {
        let n = self.layout.n();
        let n_energy = 3 * (n - self.layout.n0) + 1;
        let blocks: Vec<usize> = (0..3usize.pow(self.layout.n0 as u32)).collect();
        let parts = par::map(self.exec, blocks, |c0| {
            let mut h = vec![0u64; n * 3 * n_energy];
            self.scan_block(c0, &mut |_, c, e| {
                for (i, d) in c.digits.iter().enumerate() {
                    h[(i * 3 + *d as usize) * n_energy + e as usize] += 1;
                }
            });
            h
        });
        let mut h = vec![0u64; n * 3 * n_energy];
        for part in parts {
            for (a, b) in h.iter_mut().zip(part) {
                *a += b;
            }
        }
        (0..n)
            .map(|i| {
                std::array::from_fn(|k| {
                    let at = (i * 3 + k) * n_energy;
                    PolyRatio::new(Poly::from_histogram(&h[at..at + n_energy]), self.z.clone())
                })
            })
            .collect()
    }

    pub fn probability_of(&self, pred: impl Fn(&Config) -> bool + Sync) -> PolyRatio {
        PolyRatio::new(self.weight_of(pred), self.z.clone())
    }

    pub fn probability(&self, event: &Event) -> PolyRatio {
        self.probability_of(|c| event.holds(c))
    }

    /// `μ(A | B)`; errors when `B` has no configurations.
    pub fn conditional(&self, a: &Event, b: &Event) -> Result<PolyRatio> {
        let den = self.weight_of(|c| b.holds(c));
        if den.is_zero() {
            return Err(Error::ZeroConditioning);
        }
        Ok(PolyRatio::new(
            self.weight_of(|c| a.holds(c) && b.holds(c)),
            den,
        ))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "region": self.region.summary(),
            "sites": self.layout.sites,
            "configurations": self.energies.len().to_string(),
            "partition_function": self.z.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "ground_energy": self.ground_energy(),
            "ground_count": self.ground_count().to_string(),
        })
    }
}

/// One neighbour pattern of a `V₁` site in the single-site conditional check.
#[derive(Clone, Debug)]
pub struct DlrCase {
    /// Neighbour colours, sorted.
    pub neighbors: [Color; 3],
    /// `μ(σ_v matches a neighbour | neighbours)`, computed from the measure.
    pub computed: PolyRatio,
    /// The closed form for this pattern.
    pub expected: PolyRatio,
}

impl DlrCase {
    pub fn agrees(&self) -> bool {
        self.computed.same_value(&self.expected)
    }
}

/// Closed form of `μ(∃i: σ_v = σ_{w_i} | σ_{w_1}, σ_{w_2}, σ_{w_3})` given
/// the number of distinct neighbour colours.
pub fn dlr_expected(distinct: usize) -> PolyRatio {
    match distinct {
        // e^{-3β}/(2+e^{-3β})
        1 => PolyRatio::new(Poly::monomial(1, 3), Poly::from_coeffs(vec![2, 0, 0, 1])),
        // (e^{-β}+e^{-2β})/(1+e^{-β}+e^{-2β})
        2 => PolyRatio::new(
            Poly::from_coeffs(vec![0, 1, 1]),
            Poly::from_coeffs(vec![1, 1, 1]),
        ),
        _ => PolyRatio::new(Poly::one(), Poly::one()),
    }
}

/// Conditional law of a `V₁` site of `Λ` given each neighbour pattern that
/// has positive probability.
pub fn dlr_check(measure: &ExactMeasure, v: u32) -> Result<Vec<DlrCase>> {
    let quad = measure.region().quad();
    if quad.is_v0(v) || !measure.region().contains(v) {
        return Err(Error::InvalidInput(format!(
            "{v} is not a V1 site of the region"
        )));
    }
    let ns: Vec<u32> = quad.neighbors(v).to_vec();
    let mut cases = Vec::new();
    for c in 0..27u32 {
        let pattern = [
            (c / 9) as Color + 1,
            (c / 3 % 3) as Color + 1,
            (c % 3) as Color + 1,
        ];
        let given = |cfg: &Config| ns.iter().zip(&pattern).all(|(&w, &k)| cfg.color(w) == k);
        let den = measure.weight_of(given);
        if den.is_zero() {
            continue;
        }
        let num = measure.weight_of(|cfg| given(cfg) && pattern.contains(&cfg.color(v)));
        let mut sorted = pattern;
        sorted.sort_unstable();
        let mut distinct = sorted.to_vec();
        distinct.dedup();
        cases.push(DlrCase {
            neighbors: sorted,
            computed: PolyRatio::new(num, den),
            expected: dlr_expected(distinct.len()),
        });
    }
    Ok(cases)
}

/// JSON for a probability: the polynomial ratio, its `β = ∞` value, and
/// enclosures at the listed `β`.
pub fn probability_json(p: &PolyRatio, betas: &[crate::Beta]) -> Value {
    json!({
        "numerator": p.num.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "denominator": p.den.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "at_infinity": format_fraction(&p.at_infinity()),
        "values": betas.iter().map(|b| {
            let v = p.eval(b, crate::exact::DEFAULT_PREC);
            json!({"beta": b.to_string(), "interval": crate::peierls::interval_json(&v)})
        }).collect::<Vec<_>>(),
    })
}

/// Region builders used by the checks: `Λ` from a `V₁` seed on a diced patch.
pub fn region_from_axial_seed(
    quad: &Arc<crate::lattice::Quadrangulation>,
    v0s: &[crate::lattice::Axial],
) -> Result<Region> {
    // seed: every triangle touching one of the listed V0 vertices
    let mut seed = Vec::new();
    for &a in v0s {
        let v = quad
            .v0_at(a)
            .ok_or_else(|| Error::Region(format!("{a:?} outside the patch")))?;
        seed.extend(quad.neighbors(v).iter().copied());
    }
    seed.sort_unstable();
    seed.dedup();
    Region::from_seed(quad.clone(), &seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::lattice::build_diced_patch;
    use crate::Beta;

    fn quad() -> Arc<crate::lattice::Quadrangulation> {
        Arc::new(build_diced_patch(4))
    }

    #[test]
    fn single_site_measure() {
        let q = quad();
        let w = q.neighbors(q.origin())[0];
        let r = Region::from_seed(q.clone(), &[w]).unwrap();
        assert_eq!(r.lambda(), &[w]);
        assert_eq!(hamiltonian(&r, &[1]).unwrap(), 3);
        assert_eq!(hamiltonian(&r, &[2]).unwrap(), 0);
        assert!(hamiltonian(&r, &[4]).is_err());
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Sequential).unwrap();
        let p1 = m.probability(&Event::Color(w, 1));
        // e^{-3β}/(2+e^{-3β})
        let want = PolyRatio::new(Poly::monomial(1, 3), Poly::from_coeffs(vec![2, 0, 0, 1]));
        assert!(p1.same_value(&want));
        assert_eq!(m.probability(&Event::Color(w, 2)).at_infinity(), rat(1, 2));
    }

    #[test]
    fn star_region_ground_states() {
        let q = quad();
        let r = Region::star(q.clone(), q.origin()).unwrap();
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Parallel).unwrap();
        assert_eq!(m.len(), 3usize.pow(7));
        assert_eq!((m.ground_energy(), m.ground_count()), (0, 66));
        let p = m.probability(&Event::Color(q.origin(), 1));
        assert_eq!(p.at_infinity(), rat(32, 33));
        // all of Λ ∪ ∂Λ coloured 1 has energy |E_Λ|
        assert_eq!(m.energy(0) as usize, r.edges().len());
        let c = m
            .conditional(
                &Event::UniformIn(vec![q.origin()], 1),
                &Event::Uniform(vec![q.origin()]),
            )
            .unwrap();
        assert_eq!(c.at_infinity(), rat(32, 33));
    }

    #[test]
    fn colours_two_and_three_are_symmetric() {
        let q = quad();
        let r = region_from_axial_seed(&q, &[(0, 0), (1, 0)]).unwrap();
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Parallel).unwrap();
        for &v in r.lambda() {
            let a = m.probability(&Event::Color(v, 2));
            let b = m.probability(&Event::Color(v, 3));
            assert!(a.same_value(&b), "site {v}");
        }
        let h = hamiltonian(&r, &vec![1; r.lambda().len()]).unwrap();
        assert_eq!(h as usize, r.edges().len());
    }

    #[test]
    fn cap_is_enforced() {
        let q = quad();
        let r = Region::ball(q.clone(), q.origin(), 1).unwrap();
        assert!(matches!(
            enumerate_measure(&r, 1000, Execution::Sequential),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn conditioning_on_impossible_event() {
        let q = quad();
        let r = Region::star(q.clone(), q.origin()).unwrap();
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Sequential).unwrap();
        let b = r.boundary()[0];
        assert!(matches!(
            m.conditional(&Event::Color(q.origin(), 1), &Event::Color(b, 2)),
            Err(Error::ZeroConditioning)
        ));
    }

    #[test]
    fn single_site_conditionals_match_closed_forms() {
        let q = quad();
        let r = region_from_axial_seed(&q, &[(0, 0), (1, 0)]).unwrap();
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Parallel).unwrap();
        let v0 = q.v0_at((0, 0)).unwrap();
        let v1 = *q
            .neighbors(v0)
            .iter()
            .find(|&&w| q.neighbors(w).iter().filter(|&&u| r.contains(u)).count() == 2)
            .unwrap();
        let cases = dlr_check(&m, v1).unwrap();
        assert!(cases.iter().any(|c| c.neighbors == [1, 1, 1]));
        assert!(cases.iter().any(|c| c.neighbors == [1, 2, 3]));
        for c in &cases {
            assert!(c.agrees(), "{:?}", c.neighbors);
        }
        assert!(dlr_check(&m, v0).is_err());
    }

    #[test]
    fn improper_edges_are_rare() {
        let q = quad();
        let r = Region::star(q.clone(), q.origin()).unwrap();
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Sequential).unwrap();
        let (u, v) = r.edges()[0];
        let p = m.probability(&Event::Improper(u, v));
        let scaled: Vec<f64> = [2, 4, 6, 8]
            .iter()
            .map(|&b| p.eval_f64(&Beta::Finite(int(b))) * (b as f64).exp())
            .collect();
        assert!(scaled.iter().all(|&s| s < 10.0), "{scaled:?}");
        assert!(
            m.probability(&Event::Uniform(vec![q.origin()]))
                .at_infinity()
                > int(0)
        );
    }
}
