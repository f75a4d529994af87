//! JSON run configuration shared by every subcommand. Flags given on the
//! command line take precedence over the file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use afpotts::lattice::{build_diced_patch, build_schlafli_patch, Axial, Quadrangulation, Region};
use afpotts::montecarlo::{Observable, Schedule};
use anyhow::{bail, Context, Result};
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: Option<LatticeSpec>,
    pub region: Option<RegionSpec>,
    /// A single temperature, as accepted by `--beta`.
    pub beta: Option<String>,
    pub betas: Option<Vec<String>>,
    pub table: Option<PathBuf>,
    pub constants: Option<ConstantsSpec>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub schedule: Option<Schedule>,
    pub observables: Option<Vec<Observable>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSpec {
    pub c: Option<String>,
    pub alpha: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeSpec {
    Diced { radius: u32 },
    Schlafli { p: u32, generations: u32 },
}

impl LatticeSpec {
    pub fn build(&self) -> Result<Quadrangulation> {
        Ok(match *self {
            LatticeSpec::Diced { radius } => build_diced_patch(radius),
            LatticeSpec::Schlafli { p, generations } => build_schlafli_patch(p, generations)?,
        })
    }
}

/// A region `Λ`. Axial coordinates refer to the diced lattice; on other
/// lattices only balls around the base vertex and explicit triangle seeds
/// are available.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    /// `V₀` ball with all touching triangles.
    Ball {
        radius: u32,
        #[serde(default)]
        center: Option<Axial>,
    },
    /// Union of the hexagons around the listed `V₀` sites.
    Hexagons { v0: Vec<Axial> },
    /// `Λ` generated by an explicit `V₁` seed (vertex ids).
    Triangles { v1: Vec<u32> },
}

impl RegionSpec {
    /// Parses the `--region` shorthand: `star`, `ball:R`, `ball:R@q,r`,
    /// `hexagons:q,r;q,r;…` or `triangles:id,id,…`.
    pub fn parse(s: &str) -> Result<RegionSpec> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let axial = |t: &str| -> Result<Axial> {
            let (q, r) = t.split_once(',').context("axial coordinate must be q,r")?;
            Ok((q.trim().parse()?, r.trim().parse()?))
        };
        Ok(match kind {
            "star" => RegionSpec::Ball {
                radius: 0,
                center: None,
            },
            "ball" => {
                let (r, c) = rest
                    .split_once('@')
                    .map_or((rest, None), |(r, c)| (r, Some(c)));
                RegionSpec::Ball {
                    radius: r.parse().context("ball radius")?,
                    center: c.map(axial).transpose()?,
                }
            }
            "hexagons" => RegionSpec::Hexagons {
                v0: rest.split(';').map(axial).collect::<Result<_>>()?,
            },
            "triangles" => RegionSpec::Triangles {
                v1: rest
                    .split(',')
                    .map(|t| t.trim().parse().context("triangle id"))
                    .collect::<Result<_>>()?,
            },
            _ => bail!("unknown region '{s}' (star, ball:R[@q,r], hexagons:q,r;…, triangles:id,…)"),
        })
    }

    /// Smallest diced patch radius that leaves a margin around the region.
    fn diced_radius(&self) -> u32 {
        let norm = |&(q, r): &Axial| ((q.abs() + r.abs() + (q + r).abs()) / 2) as u32;
        match self {
            RegionSpec::Ball { radius, center } => radius + center.as_ref().map_or(0, norm) + 3,
            RegionSpec::Hexagons { v0 } => v0.iter().map(norm).max().unwrap_or(0) + 3,
            RegionSpec::Triangles { .. } => 8,
        }
    }

    pub fn build(&self, lattice: Option<&LatticeSpec>) -> Result<Region> {
        let spec = lattice.cloned().unwrap_or(LatticeSpec::Diced {
            radius: self.diced_radius(),
        });
        let quad = Arc::new(spec.build()?);
        let diced = matches!(spec, LatticeSpec::Diced { .. });
        let at = |a: Axial| -> Result<u32> {
            if !diced {
                bail!("axial coordinates need a diced lattice");
            }
            quad.v0_at(a)
                .with_context(|| format!("{a:?} is outside the patch"))
        };
        Ok(match self {
            RegionSpec::Ball { radius, center } => {
                let c = center.map(at).transpose()?.unwrap_or(quad.origin());
                Region::ball(quad.clone(), c, *radius)?
            }
            RegionSpec::Hexagons { v0 } => {
                let mut seed = Vec::new();
                for &a in v0 {
                    seed.extend(quad.neighbors(at(a)?).iter().copied());
                }
                Region::from_seed(quad.clone(), &seed)?
            }
            RegionSpec::Triangles { v1 } => Region::from_seed(quad.clone(), v1)?,
        })
    }
}
