//! Avoiding-coloring search: backtracking enumeration with constraint
//! propagation, monochromatic thresholds, CNF export, and presets.

mod avoid;
mod cnf;
mod experiment;
mod instances;
mod presets;
mod threshold;

pub use avoid::{check_coloring, enumerate_avoiding, AvoidOutcome};
pub use cnf::{export_cnf, CnfDocument, CnfEncoding};
pub use experiment::{random_coloring_experiment, ExperimentStats};
pub use instances::{enumerate_instances, InstanceSet};
pub use presets::{conjecture_poly_preset, Preset};
pub use threshold::{compute_threshold, ThresholdResult, ThresholdStatus};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::patterns::PatternError;

/// Domains are color bitmasks, so the solver handles at most this many colors.
pub const MAX_COLORS: u32 = 32;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{0} colors exceed the supported maximum of {MAX_COLORS}")]
    TooManyColors(u32),
    #[error("colors must be at least 1")]
    NoColors,
    #[error("instance enumeration exceeded the budget after {scanned} assignments")]
    EnumerationBudget { scanned: u64 },
    #[error("bad CNF model: {0}")]
    BadModel(String),
    #[error("{0}")]
    BadParams(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Knobs for the avoiding-coloring search.
///
/// `node_budget` is applied per top-level branch (the color choices of the
/// first two elements), which keeps verdicts independent of
/// `parallel_width`.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub colors: u32,
    pub symmetry_breaking: bool,
    pub node_budget: u64,
    pub parallel_width: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            colors: 2,
            symmetry_breaking: true,
            node_budget: 10_000_000,
            parallel_width: 1,
            seed: 0,
        }
    }
}
