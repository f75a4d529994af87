mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afpotts::contour::{
    compare_pushforward, contour_measure, contour_statistics, decompose, peierls_violations,
    unsatisfied_edges_of, DEFAULT_V1_CAP,
};
use afpotts::exact::{format_fraction, parse_fraction, ExactQuad};
use afpotts::gibbs::{
    comparison_check, dlr_check, enumerate_measure, es_identities, probability_json, Event,
    DEFAULT_CAP,
};
use afpotts::lattice::{to_text, Region};
use afpotts::montecarlo::{run_experiment, Schedule};
use afpotts::par::Execution;
use afpotts::peierls::{
    positive_temp_bound, published_weak_prefix_140, strong_prefix_upper, tail_bound,
    v1_upper_bound, zero_temp_bound, zero_temp_bound_from_prefix, Constants, Form,
};
use afpotts::sap::{
    enumerate_polygons, q_bound_violations, supermultiplicativity_violations, DEFAULT_GUARD,
};
use afpotts::series_io::{
    parse_polygon_table, read_series, write_polygon_table, Format, PolygonTable,
};
use afpotts::verify::{run_criterion, VerifyOptions};
use afpotts::Beta;
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{LatticeSpec, RegionSpec, RunConfig};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "afpotts",
    version,
    about = "Three-state Potts antiferromagnet: bounds, exact measures, contours and Monte Carlo"
)]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores, or AFPOTTS_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quadrangulation patches.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Honeycomb polygon tables.
    #[command(subcommand)]
    Polygons(PolygonsCmd),
    /// Rigorous magnetization bounds.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Exact finite-volume measures.
    #[command(subcommand)]
    Exact(ExactCmd),
    /// Contours of spin configurations.
    #[command(subcommand)]
    Contour(ContourCmd),
    /// Monte Carlo.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Acceptance suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    #[arg(long, value_enum, default_value = "diced")]
    kind: LatticeKind,
    /// Patch radius (diced) in G0 steps.
    #[arg(long)]
    radius: Option<u32>,
    /// Triangles per V0 vertex ({3,p}).
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    generations: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LatticeKind {
    Diced,
    Schlafli,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Build a patch and report its counts and invariants.
    Build(LatticeArgs),
    /// Write the patch as a text edge list.
    Export(LatticeArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableFormat {
    /// `L,q_L` lines.
    Canonical,
    /// Whitespace moment series: `L q_L …`.
    Moment,
}

#[derive(Subcommand, Debug)]
enum PolygonsCmd {
    /// Enumerate q_L and p_L up to an even length; prints canonical CSV.
    Enumerate {
        #[arg(long)]
        lmax: u32,
    },
    /// Read a series file and print it as canonical CSV.
    Import {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
    },
    /// Check a table against growth bounds and against enumeration.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
        /// Compare with self-enumerated counts up to this length.
        #[arg(long, default_value_t = 18)]
        lmax: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormArg {
    Weak,
    Strong,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Form {
        match f {
            FormArg::Weak => Form::Weak,
            FormArg::Strong => Form::Strong,
        }
    }
}

#[derive(Args, Debug)]
struct TableArgs {
    /// q_L table; `.csv` is canonical, anything else a moment series.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Use the published exact weak prefix to L=140 instead of a table.
    #[arg(long)]
    published_prefix: bool,
}

#[derive(Subcommand, Debug)]
enum BoundCmd {
    /// Lower bound on μ(σ_v = 1) at β = ∞.
    ZeroTemp {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value = "weak")]
        form: FormArg,
        #[arg(long, default_value_t = 142)]
        tail_from: u32,
    },
    /// Lower bound at finite β.
    PositiveTemp {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 142)]
        tail_from: u32,
        /// Constant C of the many-contour estimate.
        #[arg(long)]
        c: Option<String>,
        /// Growth constant α ≥ √(2+√2), as a fraction.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Closed-form tail Σ_{L ≥ from} in Q(√2).
    Tail {
        #[arg(long)]
        from: u32,
    },
    /// Upper bound on μ(σ_{v1} = 1) from a V0 lower bound.
    V1 {
        #[arg(long)]
        m0: String,
        #[arg(long)]
        beta: Option<String>,
    },
}

#[derive(Args, Debug)]
struct RegionArgs {
    /// star, ball:R[@q,r], hexagons:q,r;q,r…, triangles:id,id…
    #[arg(long)]
    region: Option<String>,
    /// Largest number of configurations to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Args, Debug)]
struct BetaList {
    /// Temperatures to evaluate at (decimal, fraction, `ln2`-style or `inf`).
    #[arg(long, value_delimiter = ',')]
    betas: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum ExactCmd {
    /// Partition function and single-site marginals.
    Measure {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        betas: BetaList,
    },
    /// Probabilities of events, optionally conditioned.
    Events {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        betas: BetaList,
        /// color:V:K, uniform-in:V,V…:K, uniform:V,V…, improper:U:V
        #[arg(long, required = true)]
        event: Vec<String>,
        #[arg(long)]
        given: Option<String>,
        /// Also check the single-site conditional law at this V1 site.
        #[arg(long)]
        dlr: Option<u32>,
    },
    /// Spin / random-cluster identities.
    EsIdentity {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        betas: BetaList,
        /// V0 sets to test as comma-separated ids; repeatable.
        #[arg(long)]
        delta0: Vec<String>,
    },
    /// Comparison inequality on a triangle set Δ₁.
    Comparison {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        delta1: Vec<u32>,
        #[arg(long)]
        beta0: String,
        #[arg(long)]
        beta: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ContourCmd {
    /// Contours of one configuration, given as colours in Λ order.
    Check {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        colors: Vec<u8>,
    },
    /// Contour measure, its agreement with the spin measure, and Peierls checks.
    Measure {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        betas: BetaList,
        /// Most inner V1 sites to enumerate over.
        #[arg(long, default_value_t = DEFAULT_V1_CAP)]
        v1_cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SimulateCmd {
    /// Run chains per the config's schedule and observables.
    Run {
        #[arg(long)]
        region: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        sweeps: Option<u64>,
        #[arg(long)]
        chains: Option<u64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Level {
    /// Every criterion at its stated size.
    Desk,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Run the acceptance criteria and print a pass/fail table.
    All {
        #[arg(long, value_enum, default_value = "desk")]
        level: Level,
        /// q_L series file for the criteria that need one.
        #[arg(long)]
        series: Option<PathBuf>,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

/// An acceptance or assertion failure, reported with exit code 2.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

struct Ctx {
    cfg: RunConfig,
    seed: u64,
    out: Option<PathBuf>,
    exec: Execution,
}

impl Ctx {
    fn emit(&self, command: &str, result: Value) -> Result<()> {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "seed": self.seed,
            "result": result,
        });
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        self.write(&text)
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => Ok(std::io::stdout().write_all(text.as_bytes())?),
        }
    }

    fn region(&self, flag: Option<&str>) -> Result<Region> {
        let spec = match flag {
            Some(s) => RegionSpec::parse(s)?,
            None => self
                .cfg
                .region
                .clone()
                .ok_or_else(|| anyhow!("no region given (--region or config)"))?,
        };
        spec.build(self.cfg.lattice.as_ref())
    }

    fn beta(&self, flag: Option<&str>) -> Result<Beta> {
        let s = flag
            .map(str::to_string)
            .or_else(|| self.cfg.beta.clone())
            .unwrap_or_else(|| "inf".into());
        parse_beta(&s)
    }

    fn betas(&self, flags: &[String]) -> Result<Vec<Beta>> {
        let list = if !flags.is_empty() {
            flags.to_vec()
        } else if let Some(b) = &self.cfg.betas {
            b.clone()
        } else {
            vec!["0.5".into(), "1".into(), "2".into(), "inf".into()]
        };
        list.iter().map(|s| parse_beta(s)).collect()
    }

    fn table(&self, args: &TableArgs, format: Option<TableFormat>) -> Result<Option<PolygonTable>> {
        match args.table.as_ref().or(self.cfg.table.as_ref()) {
            Some(p) => Ok(Some(load_table(p, format)?)),
            None if args.published_prefix => Ok(None),
            None => bail!("no table given (--table, --published-prefix, or config)"),
        }
    }
}

fn parse_beta(s: &str) -> Result<Beta> {
    s.parse::<Beta>()
        .map_err(|e| anyhow!("invalid beta '{s}': {e}"))
}

fn fraction(s: &str) -> Result<num_rational::BigRational> {
    parse_fraction(s).map_err(|e| anyhow!("invalid number '{s}': {e}"))
}

fn load_table(path: &Path, format: Option<TableFormat>) -> Result<PolygonTable> {
    Ok(match format {
        None => read_series(path)?,
        Some(f) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let f = match f {
                TableFormat::Canonical => Format::Canonical,
                TableFormat::Moment => Format::MomentSeries,
            };
            parse_polygon_table(&text, f)?
        }
    })
}

fn ids(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .with_context(|| format!("bad vertex id '{t}'"))
        })
        .collect()
}

fn parse_event(s: &str) -> Result<Event> {
    let parts: Vec<&str> = s.split(':').collect();
    let one =
        |t: &str| -> Result<u32> { t.parse().with_context(|| format!("bad vertex id '{t}'")) };
    let color = |t: &str| -> Result<u8> {
        match t.parse() {
            Ok(k @ 1..=3) => Ok(k),
            _ => bail!("colour must be 1, 2 or 3, got '{t}'"),
        }
    };
    Ok(match parts.as_slice() {
        ["color", v, k] => Event::Color(one(v)?, color(k)?),
        ["uniform-in", vs, k] => Event::UniformIn(ids(vs)?, color(k)?),
        ["uniform", vs] => Event::Uniform(ids(vs)?),
        ["improper", u, v] => Event::Improper(one(u)?, one(v)?),
        _ => bail!("unknown event '{s}' (color:V:K, uniform-in:V,…:K, uniform:V,…, improper:U:V)"),
    })
}

fn check_event(region: &Region, e: &Event) -> Result<()> {
    let vs: Vec<u32> = match e {
        Event::Color(v, _) => vec![*v],
        Event::UniformIn(vs, _) | Event::Uniform(vs) => vs.clone(),
        Event::Improper(u, v) => vec![*u, *v],
    };
    if let Some(v) = vs.iter().find(|&&v| !region.in_closure(v)) {
        bail!("vertex {v} is not in the region or its boundary");
    }
    Ok(())
}

fn lattice_spec(args: &LatticeArgs, cfg: &RunConfig) -> Result<LatticeSpec> {
    Ok(match args.kind {
        LatticeKind::Diced if args.radius.is_none() && cfg.lattice.is_some() => {
            cfg.lattice.clone().unwrap()
        }
        LatticeKind::Diced => LatticeSpec::Diced {
            radius: args.radius.unwrap_or(6),
        },
        LatticeKind::Schlafli => LatticeSpec::Schlafli {
            p: args.p.context("--p is required for a {3,p} patch")?,
            generations: args
                .generations
                .context("--generations is required for a {3,p} patch")?,
        },
    })
}

fn lattice(cmd: LatticeCmd, ctx: &Ctx) -> Result<()> {
    match cmd {
        LatticeCmd::Build(args) => {
            let q = lattice_spec(&args, &ctx.cfg)?.build()?;
            q.check_invariants()?;
            eprintln!(
                "patch with {} + {} vertices, invariants hold",
                q.n0(),
                q.n1()
            );
            ctx.emit(
                "lattice build",
                json!({
                    "v0": q.n0(),
                    "v1": q.n1(),
                    "g_edges": q.g_edges().len(),
                    "g0_edges": q.g0_edges().len(),
                    "g1_edges": q.g1_edges().len(),
                    "geometry": q.geometry(),
                    "origin": q.origin(),
                    "invariants": "ok",
                }),
            )
        }
        LatticeCmd::Export(args) => {
            let q = lattice_spec(&args, &ctx.cfg)?.build()?;
            ctx.write(&to_text(&q))
        }
    }
}

fn polygons(cmd: PolygonsCmd, ctx: &Ctx) -> Result<()> {
    match cmd {
        PolygonsCmd::Enumerate { lmax } => {
            let census = enumerate_polygons(lmax, DEFAULT_GUARD, ctx.exec)?;
            eprintln!(
                "{} circuits around the origin up to L = {lmax}",
                census.q.values().sum::<u64>()
            );
            ctx.write(&write_polygon_table(&census.table()))
        }
        PolygonsCmd::Import { file, format } => {
            let t = load_table(&file, format)?;
            eprintln!(
                "{} entries, contiguous to L = {:?}",
                t.len(),
                t.contiguous_max()
            );
            ctx.write(&write_polygon_table(&t))
        }
        PolygonsCmd::Validate { file, format, lmax } => {
            let t = load_table(&file, format)?;
            let growth = q_bound_violations(t.q());
            let supermult = supermultiplicativity_violations(t.p());
            let top = lmax.min(t.contiguous_max().unwrap_or(0));
            let own = enumerate_polygons(top, DEFAULT_GUARD, ctx.exec)?.table();
            let mismatches: Vec<u32> = own
                .q()
                .iter()
                .filter(|(l, q)| t.q_at(**l) != Some(q))
                .map(|(l, _)| *l)
                .collect();
            let ok = growth.is_empty() && supermult.is_empty() && mismatches.is_empty();
            ctx.emit(
                "polygons validate",
                json!({
                    "entries": t.len(),
                    "contiguous_max": t.contiguous_max(),
                    "growth_bound_violations": growth,
                    "supermultiplicativity_violations": supermult,
                    "compared_to": top,
                    "enumeration_mismatches": mismatches,
                    "valid": ok,
                }),
            )?;
            if !ok {
                return Err(CheckFailed("table failed validation".into()).into());
            }
            Ok(())
        }
    }
}

fn constants(c: Option<&str>, alpha: Option<&str>, cfg: &RunConfig) -> Result<Constants> {
    let mut k = Constants::default();
    let from_cfg = cfg.constants.as_ref();
    if let Some(c) = c
        .map(str::to_string)
        .or_else(|| from_cfg.and_then(|s| s.c.clone()))
    {
        k.c = fraction(&c)?;
    }
    if let Some(a) = alpha
        .map(str::to_string)
        .or_else(|| from_cfg.and_then(|s| s.alpha.clone()))
    {
        k.alpha = ExactQuad::from_rational(fraction(&a)?);
    }
    Ok(k)
}

fn bound(cmd: BoundCmd, ctx: &Ctx) -> Result<()> {
    match cmd {
        BoundCmd::ZeroTemp {
            table,
            form,
            tail_from,
        } => {
            let report = match ctx.table(&table, None)? {
                Some(t) => zero_temp_bound(&t, form.into(), tail_from)?,
                None => {
                    if tail_from != 142 {
                        bail!("the published prefix ends at L = 140, so --tail-from must be 142");
                    }
                    let weak = published_weak_prefix_140();
                    let prefix = match form {
                        FormArg::Weak => weak,
                        FormArg::Strong => strong_prefix_upper(
                            &weak,
                            &afpotts::sap::enumerate_q(22, ctx.exec)?,
                            140,
                        ),
                    };
                    zero_temp_bound_from_prefix(
                        prefix,
                        form.into(),
                        tail_from,
                        "published weak prefix",
                    )?
                }
            };
            eprintln!(
                "magnetization >= {}",
                format_fraction(&report.magnetization_lower)
            );
            ctx.emit("bound zero-temp", report.to_json())
        }
        BoundCmd::PositiveTemp {
            table,
            beta,
            tail_from,
            c,
            alpha,
        } => {
            let t = ctx
                .table(&table, None)?
                .ok_or_else(|| anyhow!("positive-temp needs a --table"))?;
            let beta = ctx.beta(beta.as_deref())?;
            let k = constants(c.as_deref(), alpha.as_deref(), &ctx.cfg)?;
            let report = positive_temp_bound(&t, &beta, tail_from, &k)?;
            ctx.emit("bound positive-temp", report.to_json())
        }
        BoundCmd::Tail { from } => {
            let t = tail_bound(from)?;
            ctx.emit(
                "bound tail",
                json!({"from": from, "tail": t, "approx": t.to_f64()}),
            )
        }
        BoundCmd::V1 { m0, beta } => {
            let beta = ctx.beta(beta.as_deref())?;
            let v = v1_upper_bound(&fraction(&m0)?, &beta)?;
            ctx.emit(
                "bound v1",
                json!({"beta": beta.to_string(), "m0_lower": m0, "v1_upper": format_fraction(&v)}),
            )
        }
    }
}

fn exact(cmd: ExactCmd, ctx: &Ctx) -> Result<()> {
    match cmd {
        ExactCmd::Measure { region, betas } => {
            let r = ctx.region(region.region.as_deref())?;
            let betas = ctx.betas(&betas.betas)?;
            let m = enumerate_measure(&r, region.cap, ctx.exec)?;
            let marginals: Vec<Value> = m
                .sites()
                .iter()
                .zip(m.marginals())
                .map(|(v, ps)| {
                    json!({
                        "vertex": v,
                        "v0": r.quad().is_v0(*v),
                        "axial": r.quad().axial(*v),
                        "colors": ps.iter().map(|p| probability_json(p, &betas)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut out = m.to_json();
            out["boundary"] = json!(r.boundary());
            out["marginals"] = json!(marginals);
            ctx.emit("exact measure", out)
        }
        ExactCmd::Events {
            region,
            betas,
            event,
            given,
            dlr,
        } => {
            let r = ctx.region(region.region.as_deref())?;
            let betas = ctx.betas(&betas.betas)?;
            let given = given.as_deref().map(parse_event).transpose()?;
            let events: Vec<(String, Event)> = event
                .iter()
                .map(|s| Ok((s.clone(), parse_event(s)?)))
                .collect::<Result<_>>()?;
            for (_, e) in &events {
                check_event(&r, e)?;
            }
            if let Some(g) = &given {
                check_event(&r, g)?;
            }
            let m = enumerate_measure(&r, region.cap, ctx.exec)?;
            let mut out = Vec::new();
            for (name, e) in &events {
                let p = match &given {
                    Some(g) => m.conditional(e, g)?,
                    None => m.probability(e),
                };
                out.push(json!({"event": name, "probability": probability_json(&p, &betas)}));
            }
            let mut result = json!({"given": given.map(|_| json!(true)), "events": out});
            if let Some(v) = dlr {
                let cases = dlr_check(&m, v)?;
                let all = cases.iter().all(|c| c.agrees());
                result["dlr"] = json!({"site": v, "cases": cases.len(), "agrees": all});
                if !all {
                    ctx.emit("exact events", result)?;
                    return Err(CheckFailed("single-site conditional law disagrees".into()).into());
                }
            }
            ctx.emit("exact events", result)
        }
        ExactCmd::EsIdentity {
            region,
            betas,
            delta0,
        } => {
            let r = ctx.region(region.region.as_deref())?;
            let betas = ctx.betas(&betas.betas)?;
            let sets: Vec<Vec<u32>> = delta0.iter().map(|s| ids(s)).collect::<Result<_>>()?;
            let m = enumerate_measure(&r, region.cap, ctx.exec)?;
            let checks = es_identities(&m, &sets, &betas, ctx.exec)?;
            let ok = checks.iter().all(|c| c.exact);
            eprintln!("{} identities, all exact: {ok}", checks.len());
            ctx.emit(
                "exact es-identity",
                json!(checks.iter().map(|c| c.to_json(&betas)).collect::<Vec<_>>()),
            )?;
            if !ok {
                return Err(CheckFailed("an identity failed".into()).into());
            }
            Ok(())
        }
        ExactCmd::Comparison {
            region,
            delta1,
            beta0,
            beta,
        } => {
            let r = ctx.region(region.region.as_deref())?;
            let rep = comparison_check(
                &r,
                &delta1,
                &parse_beta(&beta0)?,
                &ctx.beta(beta.as_deref())?,
                ctx.exec,
            )?;
            ctx.emit("exact comparison", rep.to_json())?;
            if !rep.holds {
                return Err(CheckFailed("comparison inequality fails".into()).into());
            }
            Ok(())
        }
    }
}

fn contour(cmd: ContourCmd, ctx: &Ctx) -> Result<()> {
    match cmd {
        ContourCmd::Check { region, colors } => {
            let r = ctx.region(region.region.as_deref())?;
            let (unsatisfied_g0, e1) = unsatisfied_edges_of(&r, &colors)?;
            let set = decompose(&r, &e1)?;
            eprintln!(
                "{} contours, total length {}",
                set.len(),
                set.total_length()
            );
            ctx.emit(
                "contour check",
                json!({"unsatisfied_g1": e1, "unsatisfied_g0": unsatisfied_g0, "contours": set.to_json()}),
            )
        }
        ContourCmd::Measure {
            region,
            betas,
            v1_cap,
        } => {
            let r = ctx.region(region.region.as_deref())?;
            let betas = ctx.betas(&betas.betas)?;
            let cm = contour_measure(&r, v1_cap, ctx.exec)?;
            let m = enumerate_measure(&r, region.cap, ctx.exec)?;
            let rep = compare_pushforward(&cm, &m, &betas)?;
            let violations: Vec<Value> = betas
                .iter()
                .map(|b| json!({"beta": b.to_string(), "count": peierls_violations(&cm, b).len()}))
                .collect();
            let centre = r.lambda_v0().first().copied();
            let stats = centre.map(|v| contour_statistics(&cm, v)).transpose()?;
            ctx.emit(
                "contour measure",
                json!({
                    "configurations": cm.configs().len(),
                    "pushforward": rep,
                    "peierls_violations": violations,
                    "statistics": stats.map(|s| s.to_json(&betas)),
                }),
            )?;
            if !rep.exact {
                return Err(
                    CheckFailed("contour measure differs from the pushforward".into()).into(),
                );
            }
            Ok(())
        }
    }
}

fn simulate(cmd: SimulateCmd, ctx: &Ctx) -> Result<()> {
    let SimulateCmd::Run {
        region,
        beta,
        sweeps,
        chains,
    } = cmd;
    let r = ctx.region(region.as_deref())?;
    let beta = ctx.beta(beta.as_deref())?;
    let mut schedule = ctx.cfg.schedule.clone().unwrap_or(Schedule {
        sweeps: 10_000,
        thermalization: 1_000,
        metropolis_per_wsk: 1,
        local_only: false,
        chains: 4,
        seed: 0,
    });
    if let Some(s) = sweeps {
        schedule.sweeps = s;
        schedule.thermalization = schedule.thermalization.min(s / 10);
    }
    if let Some(c) = chains {
        schedule.chains = c;
    }
    schedule.seed = ctx.seed;
    let observables = match &ctx.cfg.observables {
        Some(o) => o.clone(),
        None => {
            let o = r
                .lambda_v0()
                .first()
                .copied()
                .context("region has no V0 site")?;
            vec![
                afpotts::montecarlo::Observable::Marginal {
                    vertex: o,
                    color: 1,
                },
                afpotts::montecarlo::Observable::Staggered { vertex: o },
                afpotts::montecarlo::Observable::ImproperDensity,
            ]
        }
    };
    let rep = run_experiment(&r, &beta, &schedule, &observables, ctx.exec)?;
    for e in &rep.estimates {
        eprintln!(
            "{:<40} {:.6} ± {:.6}{}",
            e.name,
            e.mean,
            e.stderr,
            if e.plateau { "" } else { "  (no plateau)" }
        );
    }
    ctx.emit("simulate run", serde_json::to_value(&rep)?)
}

fn verify(cmd: VerifyCmd, ctx: &Ctx) -> Result<()> {
    let VerifyCmd::All {
        level: Level::Desk,
        series,
        only,
    } = cmd;
    let mut opts = VerifyOptions::new(std::env::current_dir()?);
    opts.series = series.or_else(|| ctx.cfg.table.clone());
    opts.exec = ctx.exec;
    opts.seed = ctx.seed;
    let mut results = Vec::new();
    for id in 1..=10 {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let r = run_criterion(id, &opts);
        eprintln!("{}", r.line());
        results.push(r);
    }
    let failed = results.iter().filter(|r| !r.passed && !r.blocked).count();
    let blocked = results.iter().filter(|r| r.blocked).count();
    eprintln!(
        "{} passed, {failed} failed, {blocked} blocked on missing input",
        results.iter().filter(|r| r.passed).count()
    );
    ctx.emit("verify all", serde_json::to_value(&results)?)?;
    if failed > 0 {
        return Err(CheckFailed(format!("{failed} criteria failed")).into());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let threads = cli.threads.or(cfg.threads).or_else(|| {
        std::env::var("AFPOTTS_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring threads")?;
    }
    let exec = if threads == Some(1) {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let out = cli.out.clone().or_else(|| cfg.output.clone());
    let ctx = Ctx {
        cfg,
        seed,
        out,
        exec,
    };
    match cli.command {
        Command::Lattice(c) => lattice(c, &ctx),
        Command::Polygons(c) => polygons(c, &ctx),
        Command::Bound(c) => bound(c, &ctx),
        Command::Exact(c) => exact(c, &ctx),
        Command::Contour(c) => contour(c, &ctx),
        Command::Simulate(c) => simulate(c, &ctx),
        Command::Verify(c) => verify(c, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<CheckFailed>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
