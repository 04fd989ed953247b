//! Least window size at which no avoiding coloring exists.

use crate::algebra::GroundStructure;
use crate::patterns::{Coloring, ExpandedPattern};

use super::avoid::{check_coloring, enumerate_avoiding};
use super::{AvoidOutcome, SearchConfig, SearchError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdStatus {
    /// No avoiding coloring exists for the window ending at `threshold`,
    /// proved by exhausting the search tree.
    Exact { threshold: u64 },
    /// Avoiding colorings exist all the way up to `n_max`.
    NotReached { n_max: u64 },
    /// The search at window `at` ran out of node budget.
    BudgetExhausted { at: u64 },
}

#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub pattern: String,
    pub colors: u32,
    pub status: ThresholdStatus,
    /// The largest window seen with an avoiding coloring, and one witness.
    pub avoiding_witness: Option<(u64, Coloring)>,
}

/// Sweeps the nested windows `[lo..n]` for `n = lo..=n_max` and reports the
/// least `n` whose avoidance search returns exact none. An avoiding witness
/// at `n` is first tried as a seed at `n+1` (each extension by one element
/// is checked outright) before the full search runs.
pub fn compute_threshold(
    lo: u64,
    pat: &ExpandedPattern,
    cfg: &SearchConfig,
    n_max: u64,
) -> Result<ThresholdResult, SearchError> {
    if lo < 1 || n_max < lo {
        return Err(SearchError::BadParams(format!(
            "window family {lo}..{n_max} is empty"
        )));
    }
    let mut witness: Option<(u64, Coloring)> = None;
    for n in lo..=n_max {
        let g = GroundStructure::nat_range(lo, n)?;
        // monotone shortcut: extend the previous witness by one element
        let mut extended: Option<Coloring> = None;
        if let Some((m, prev)) = &witness {
            if *m + 1 == n {
                for c in 0..cfg.colors {
                    let mut colors = prev.colors().to_vec();
                    colors.push(c);
                    let candidate = Coloring::new(colors, cfg.colors).expect("valid colors");
                    if check_coloring(&g, &candidate, pat)?.is_none() {
                        extended = Some(candidate);
                        break;
                    }
                }
            }
        }
        let outcome = match extended {
            Some(coloring) => AvoidOutcome::Found(coloring),
            None => enumerate_avoiding(&g, pat, cfg)?,
        };
        match outcome {
            AvoidOutcome::Found(coloring) => witness = Some((n, coloring)),
            AvoidOutcome::NoneExact => {
                return Ok(ThresholdResult {
                    pattern: String::new(),
                    colors: cfg.colors,
                    status: ThresholdStatus::Exact { threshold: n },
                    avoiding_witness: witness,
                })
            }
            AvoidOutcome::NoneBudget => {
                return Ok(ThresholdResult {
                    pattern: String::new(),
                    colors: cfg.colors,
                    status: ThresholdStatus::BudgetExhausted { at: n },
                    avoiding_witness: witness,
                })
            }
        }
    }
    Ok(ThresholdResult {
        pattern: String::new(),
        colors: cfg.colors,
        status: ThresholdStatus::NotReached { n_max },
        avoiding_witness: witness,
    })
}
