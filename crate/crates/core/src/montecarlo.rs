//! Markov chain Monte Carlo for `μ¹_{Λ,β}`: single-site Metropolis (heat
//! bath over minimal-energy colours at `β = ∞`) and Wang–Swendsen–Kotecký
//! cluster sweeps, with observables estimated by logarithmic binning.
//!
//! Each chain owns a ChaCha8 generator on its own stream of the run seed, so
//! a run is reproducible and chains are independent of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gibbs::Color;
use crate::lattice::Region;
use crate::par::{self, Execution};
use crate::{Beta, Error, Result};

/// A sampled quantity, evaluated on the current spins (and a fresh `η` for
/// the percolation events).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Observable {
    /// `1[σ_v = k]`
    Marginal { vertex: u32, color: Color },
    /// `1[σ = k on the set]`
    UniformIn { set: Vec<u32>, color: Color },
    /// `1[the set is uniformly coloured]`
    Uniform { set: Vec<u32> },
    /// `1[σ_u = σ_v]`
    ImproperEdge { u: u32, v: u32 },
    /// Fraction of monochromatic edges of `E_Λ`.
    ImproperDensity,
    /// `1[v ↔_η ∂Λ]`
    Percolation { vertex: u32 },
    /// `1[J_{Δ₀} and some site of Δ₀ ↔_η ∂Λ]`
    PercolationUniform { set: Vec<u32> },
    /// `1[σ_v = 1] − ½·1[σ_v ≠ 1]`
    Staggered { vertex: u32 },
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::Marginal { vertex, color } => format!("P(sigma_{vertex}={color})"),
            Observable::UniformIn { set, color } => format!("P(J_{color},{set:?})"),
            Observable::Uniform { set } => format!("P(J_{set:?})"),
            Observable::ImproperEdge { u, v } => format!("P(sigma_{u}=sigma_{v})"),
            Observable::ImproperDensity => "improper_density".into(),
            Observable::Percolation { vertex } => format!("P({vertex}<->boundary)"),
            Observable::PercolationUniform { set } => format!("P(J_{set:?} & {set:?}<->boundary)"),
            Observable::Staggered { vertex } => format!("M_{vertex}"),
        }
    }

    fn needs_eta(&self) -> bool {
        matches!(
            self,
            Observable::Percolation { .. } | Observable::PercolationUniform { .. }
        )
    }

    fn vertices(&self) -> Vec<u32> {
        match self {
            Observable::Marginal { vertex, .. }
            | Observable::Percolation { vertex }
            | Observable::Staggered { vertex } => {
                vec![*vertex]
            }
            Observable::UniformIn { set, .. }
            | Observable::Uniform { set }
            | Observable::PercolationUniform { set } => set.clone(),
            Observable::ImproperEdge { u, v } => vec![*u, *v],
            Observable::ImproperDensity => vec![],
        }
    }
}

/// Sweep schedule of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    /// Total sweeps per chain, thermalization included.
    pub sweeps: u64,
    pub thermalization: u64,
    /// Local sweeps per cluster sweep; 0 means cluster sweeps only.
    #[serde(default = "one")]
    pub metropolis_per_wsk: u32,
    /// Disable cluster sweeps altogether.
    #[serde(default)]
    pub local_only: bool,
    #[serde(default = "one_u64")]
    pub chains: u64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> u32 {
    1
}

fn one_u64() -> u64 {
    1
}

/// Spins of `Λ ∪ ∂Λ` plus the dynamics.
pub struct Chain<'a> {
    region: &'a Region,
    /// Colour minus one for every quadrangulation vertex; `∂Λ` stays 0.
    spins: Vec<u8>,
    sites: Vec<u32>,
    /// `x^k` for `k` up to the largest degree.
    accept: Vec<f64>,
    p: f64,
    infinite: bool,
    rng: ChaCha8Rng,
    uf: Vec<u32>,
    /// Per cluster root: 0 undecided, 1 flip, 2 keep.
    decision: Vec<u8>,
    sweeps: u64,
}

fn find(uf: &mut [u32], mut i: u32) -> u32 {
    while uf[i as usize] != i {
        uf[i as usize] = uf[uf[i as usize] as usize];
        i = uf[i as usize];
    }
    i
}

fn union(uf: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        uf[ra as usize] = rb;
    }
}

impl<'a> Chain<'a> {
    /// Starts from the ground state with `V₀` coloured 1 and `V₁` coloured 2.
    pub fn new(region: &'a Region, beta: &Beta, seed: u64, stream: u64) -> Chain<'a> {
        let quad = region.quad();
        let mut spins = vec![0u8; quad.len()];
        for &v in region.lambda() {
            if !quad.is_v0(v) {
                spins[v as usize] = 1;
            }
        }
        let x = beta.weight_f64();
        let max_degree = region
            .lambda()
            .iter()
            .map(|&v| quad.neighbors(v).len())
            .max()
            .unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Chain {
            region,
            spins,
            sites: region.lambda().to_vec(),
            accept: (0..=max_degree as i32).map(|k| x.powi(k)).collect(),
            p: 1.0 - x,
            infinite: beta.is_infinite(),
            rng,
            uf: (0..quad.len() as u32).collect(),
            decision: vec![0; quad.len()],
            sweeps: 0,
        }
    }

    pub fn color(&self, v: u32) -> Color {
        self.spins[v as usize] + 1
    }

    /// Colours of `Λ` in `region.lambda()` order.
    pub fn lambda_colors(&self) -> Vec<Color> {
        self.sites.iter().map(|&v| self.color(v)).collect()
    }

    /// Sets the colours of `Λ`, listed in `region.lambda()` order.
    pub fn set_lambda_colors(&mut self, colors: &[Color]) -> Result<()> {
        if colors.len() != self.sites.len() || colors.iter().any(|c| !(1..=3).contains(c)) {
            return Err(Error::InvalidInput(
                "need one colour in 1..3 per site".into(),
            ));
        }
        for (&v, &c) in self.sites.iter().zip(colors) {
            self.spins[v as usize] = c - 1;
        }
        Ok(())
    }

    pub fn sweeps(&self) -> u64 {
        self.sweeps
    }

    fn same(&self, v: u32, c: u8) -> i32 {
        self.region
            .quad()
            .neighbors(v)
            .iter()
            .filter(|&&w| self.spins[w as usize] == c)
            .count() as i32
    }

    /// `H(σ') − H(σ)` for recolouring `v` to `color`.
    pub fn delta_h(&self, v: u32, color: Color) -> i32 {
        self.same(v, color - 1) - self.same(v, self.spins[v as usize])
    }

    pub fn energy(&self) -> u32 {
        self.region
            .edges()
            .iter()
            .filter(|&&(a, b)| self.spins[a as usize] == self.spins[b as usize])
            .count() as u32
    }

    /// One proposal per site in order: Metropolis for finite `β`, heat bath
    /// over the colours of fewest equal neighbours at `β = ∞`.
    pub fn local_sweep(&mut self) {
        for i in 0..self.sites.len() {
            let v = self.sites[i];
            let cur = self.spins[v as usize];
            if self.infinite {
                let n: [i32; 3] = std::array::from_fn(|c| self.same(v, c as u8));
                let best = *n.iter().min().unwrap();
                let choices: Vec<u8> = (0..3u8).filter(|&c| n[c as usize] == best).collect();
                self.spins[v as usize] = choices[self.rng.random_range(0..choices.len())];
            } else {
                let new = (cur + 1 + self.rng.random_range(0..2u8)) % 3;
                let dh = self.same(v, new) - self.same(v, cur);
                if dh <= 0 || self.rng.random::<f64>() < self.accept[dh as usize] {
                    self.spins[v as usize] = new;
                }
            }
        }
    }

    /// One cluster sweep on a uniformly chosen colour pair.
    pub fn wsk_sweep(&mut self) {
        let (a, b) = [(0u8, 1u8), (0, 2), (1, 2)][self.rng.random_range(0..3)];
        let in_pair = |c: u8| c == a || c == b;
        for &v in self.region.lambda().iter().chain(self.region.boundary()) {
            self.uf[v as usize] = v;
            self.decision[v as usize] = 0;
        }
        for &(u, v) in self.region.edges() {
            let (cu, cv) = (self.spins[u as usize], self.spins[v as usize]);
            if cu != cv && in_pair(cu) && in_pair(cv) && self.rng.random::<f64>() < self.p {
                union(&mut self.uf, u, v);
            }
        }
        for &w in self.region.boundary() {
            if in_pair(self.spins[w as usize]) {
                let r = find(&mut self.uf, w);
                self.decision[r as usize] = 2;
            }
        }
        for i in 0..self.sites.len() {
            let v = self.sites[i];
            let c = self.spins[v as usize];
            if !in_pair(c) {
                continue;
            }
            let r = find(&mut self.uf, v) as usize;
            if self.decision[r] == 0 {
                self.decision[r] = if self.rng.random_bool(0.5) { 1 } else { 2 };
            }
            if self.decision[r] == 1 {
                self.spins[v as usize] = if c == a { b } else { a };
            }
        }
    }

    /// `η` on `E_Λ` (in `region.edges()` order): open with probability `p`
    /// exactly on edges whose endpoints are coloured 1 and 2.
    pub fn sample_eta(&mut self) -> Vec<bool> {
        let edges = self.region.edges();
        let mut eta = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            let (cu, cv) = (self.spins[u as usize], self.spins[v as usize]);
            eta.push(cu < 2 && cv < 2 && cu != cv && self.rng.random::<f64>() < self.p);
        }
        eta
    }

    /// Union-find labels of the `η`-clusters with `∂Λ` merged into one.
    fn clusters(&mut self, eta: &[bool]) -> (Vec<u32>, u32) {
        let n = self.region.quad().len() as u32;
        let mut uf: Vec<u32> = (0..n).collect();
        let b0 = self.region.boundary()[0];
        for &w in self.region.boundary() {
            union(&mut uf, w, b0);
        }
        for (&(u, v), &open) in self.region.edges().iter().zip(eta) {
            if open {
                union(&mut uf, u, v);
            }
        }
        let root = find(&mut uf, b0);
        (uf, root)
    }

    pub fn step(&mut self, schedule: &Schedule) {
        if schedule.local_only {
            self.local_sweep();
        } else {
            for _ in 0..schedule.metropolis_per_wsk {
                self.local_sweep();
            }
            self.wsk_sweep();
        }
        self.sweeps += 1;
    }

    /// Values of `observables` on the current state.
    pub fn measure(&mut self, observables: &[Observable]) -> Vec<f64> {
        let perc = if observables.iter().any(Observable::needs_eta) {
            let eta = self.sample_eta();
            Some(self.clusters(&eta))
        } else {
            None
        };
        let mut perc = perc;
        let ind = |b: bool| if b { 1.0 } else { 0.0 };
        observables
            .iter()
            .map(|o| match o {
                Observable::Marginal { vertex, color } => ind(self.color(*vertex) == *color),
                Observable::UniformIn { set, color } => {
                    ind(set.iter().all(|&v| self.color(v) == *color))
                }
                Observable::Uniform { set } => ind(set
                    .iter()
                    .all(|&v| self.spins[v as usize] == self.spins[set[0] as usize])),
                Observable::ImproperEdge { u, v } => {
                    ind(self.spins[*u as usize] == self.spins[*v as usize])
                }
                Observable::ImproperDensity => {
                    self.energy() as f64 / self.region.edges().len() as f64
                }
                Observable::Percolation { vertex } => {
                    let (uf, root) = perc.as_mut().unwrap();
                    ind(find(uf, *vertex) == *root)
                }
                Observable::PercolationUniform { set } => {
                    let uniform = set
                        .iter()
                        .all(|&v| self.spins[v as usize] == self.spins[set[0] as usize]);
                    let (uf, root) = perc.as_mut().unwrap();
                    ind(uniform && set.iter().any(|&v| find(uf, v) == *root))
                }
                Observable::Staggered { vertex } => {
                    if self.color(*vertex) == 1 {
                        1.0
                    } else {
                        -0.5
                    }
                }
            })
            .collect()
    }
}

/// Pairwise blocking of a time series with `O(log n)` memory.
#[derive(Clone, Debug, Default)]
pub struct Binning {
    levels: Vec<(u64, f64, f64, Option<f64>)>,
}

/// Levels with fewer bins than this are not used for the error.
pub const MIN_BINS: u64 = 32;

impl Binning {
    pub fn push(&mut self, mut x: f64) {
        let mut k = 0;
        loop {
            if self.levels.len() == k {
                self.levels.push((0, 0.0, 0.0, None));
            }
            let level = &mut self.levels[k];
            level.0 += 1;
            level.1 += x;
            level.2 += x * x;
            match level.3.take() {
                None => {
                    level.3 = Some(x);
                    return;
                }
                Some(prev) => {
                    x = 0.5 * (prev + x);
                    k += 1;
                }
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.levels.first().map_or(0, |l| l.0)
    }

    pub fn mean(&self) -> f64 {
        self.levels.first().map_or(f64::NAN, |l| l.1 / l.0 as f64)
    }

    /// Standard error of the mean estimated at each level with enough bins.
    pub fn level_errors(&self) -> Vec<f64> {
        self.levels
            .iter()
            .filter(|l| l.0 >= MIN_BINS)
            .map(|&(n, s, s2, _)| {
                let n = n as f64;
                let m = s / n;
                ((s2 / n - m * m).max(0.0) / (n - 1.0)).sqrt()
            })
            .collect()
    }

    /// Largest error over the usable levels, and whether the last two agree
    /// within 20%.
    pub fn error(&self) -> (f64, bool) {
        let e = self.level_errors();
        let err = e.iter().copied().fold(0.0, f64::max);
        let plateau = match e.len() {
            0 | 1 => false,
            k => {
                let (a, b) = (e[k - 2], e[k - 1]);
                a.max(b) == 0.0 || (a - b).abs() <= 0.2 * a.max(b)
            }
        };
        (err, plateau)
    }
}

/// Mean and binned standard error of one observable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub name: String,
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    /// The binned error settled at the coarsest levels.
    pub plateau: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub beta: Beta,
    pub schedule: Schedule,
    pub estimates: Vec<Estimate>,
    /// `β = ∞` dynamics are assumed, not proven, ergodic on ground states.
    pub ergodicity_assumed: bool,
}

impl EstimateReport {
    pub fn get(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }
}

fn validate(region: &Region, schedule: &Schedule, observables: &[Observable]) -> Result<()> {
    if schedule.sweeps == 0 || schedule.thermalization >= schedule.sweeps {
        return Err(Error::InvalidInput(format!(
            "thermalization {} must be below sweeps {}",
            schedule.thermalization, schedule.sweeps
        )));
    }
    if schedule.chains == 0 {
        return Err(Error::InvalidInput("need at least one chain".into()));
    }
    for o in observables {
        for v in o.vertices() {
            if !region.in_closure(v) {
                return Err(Error::InvalidInput(format!(
                    "{} refers to {v} outside the region",
                    o.name()
                )));
            }
        }
        if let Observable::Marginal { color, .. } | Observable::UniformIn { color, .. } = o {
            if !(1..=3).contains(color) {
                return Err(Error::InvalidInput(format!("colour {color} not in 1..3")));
            }
        }
    }
    Ok(())
}

/// Runs `schedule.chains` independent chains and merges their estimates.
pub fn run_experiment(
    region: &Region,
    beta: &Beta,
    schedule: &Schedule,
    observables: &[Observable],
    exec: Execution,
) -> Result<EstimateReport> {
    validate(region, schedule, observables)?;
    let chains: Vec<u64> = (0..schedule.chains).collect();
    let per_chain = par::map(exec, chains, |stream| {
        let mut chain = Chain::new(region, beta, schedule.seed, stream);
        let mut bins = vec![Binning::default(); observables.len()];
        while chain.sweeps() < schedule.sweeps {
            chain.step(schedule);
            if chain.sweeps() > schedule.thermalization {
                for (b, x) in bins.iter_mut().zip(chain.measure(observables)) {
                    b.push(x);
                }
            }
        }
        bins
    });
    let k = per_chain.len() as f64;
    let estimates = observables
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mean = per_chain.iter().map(|b| b[i].mean()).sum::<f64>() / k;
            let errs: Vec<(f64, bool)> = per_chain.iter().map(|b| b[i].error()).collect();
            let stderr = errs.iter().map(|(e, _)| e * e).sum::<f64>().sqrt() / k;
            Estimate {
                name: o.name(),
                mean,
                stderr,
                samples: per_chain.iter().map(|b| b[i].count()).sum(),
                plateau: errs.iter().all(|&(_, p)| p),
            }
        })
        .collect();
    Ok(EstimateReport {
        beta: beta.clone(),
        schedule: schedule.clone(),
        estimates,
        ergodicity_assumed: beta.is_infinite(),
    })
}
