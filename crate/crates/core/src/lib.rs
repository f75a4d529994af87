//! Three-state Potts antiferromagnet on plane quadrangulations: lattice
//! patches, exact finite-volume measures, Peierls contour bounds, honeycomb
//! polygon enumeration and cluster Monte Carlo.

pub mod beta;
pub mod contour;
pub mod exact;
pub mod gibbs;
pub mod lattice;
pub mod montecarlo;
pub mod par;
pub mod peierls;
pub mod sap;
pub mod series_io;
pub mod verify;

pub use beta::Beta;

/// Errors shared by every module.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{what} needs {needed}, above the cap {cap}")]
    CapExceeded {
        what: String,
        needed: String,
        cap: String,
    },
    #[error("region rejected: {0}")]
    Region(String),
    #[error("series does not converge: ratio {0} is not below 1")]
    NonConvergent(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("conditioning event has probability zero")]
    ZeroConditioning,
    #[error("tables disagree at L = {0:?}")]
    MergeConflict(Vec<u32>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
