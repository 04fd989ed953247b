//! Executable forms of the constructive proofs, driven by thickness
//! oracles, with replayable traces.
//!
//! Every executor re-verifies what it returns: oracle answers are checked
//! against their query, and a success is accepted only after the full
//! pattern re-evaluates inside the claimed set or color class. A buggy
//! oracle can therefore cause exhaustion but never a false witness.

mod bowen;
mod dset_probe;
mod oracle;
mod szemeredi;
mod thick_syndetic;
mod trace;

pub use bowen::{bowen_thick_tree, BowenRun, BowenSuccess};
pub use dset_probe::{find_t_witness, ipr_star_probe, ProbeOutcome, TWitness};
pub use oracle::{BruteForceOracle, ScriptedOracle, ThickOracle};
pub use szemeredi::{finite_szemeredi_check, SzemerediOutcome};
pub use thick_syndetic::{thick_syndetic_constructor, ThickSyndeticRun, ThickSyndeticSuccess};
pub use trace::{replay, ConstructionTrace, NodeStatus, ReplayInputs, TraceStep};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::largeness::LargenessError;
use crate::patterns::PatternError;

#[derive(Debug, Error)]
pub enum ConstructiveError {
    #[error("this executor needs a semiring (both operations)")]
    NotSemiring,
    #[error("this executor needs exactly 2 colors, the coloring has {0}")]
    NotTwoColors(u32),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    TooLarge(String),
    #[error("bad trace: {0}")]
    BadTrace(String),
    #[error("replay diverged at step {at}: recorded {expected:?}, got {got:?}")]
    ReplayDiverged {
        at: usize,
        expected: String,
        got: String,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Largeness(#[from] LargenessError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// Why a construction stopped short of a witness. Carried inside the run
/// next to its trace, so failures replay the same way successes do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructFailure {
    pub kind: FailKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailKind {
    /// No multiplicative syndetic cover within the witness cap.
    CoverNotFound,
    /// The thickness oracle had no answer for some query.
    OracleExhausted,
    /// The oracle's answer failed re-verification.
    OracleAnswerInvalid,
    /// A required element fell outside the window.
    WindowUndefined,
    /// The fallback scan exhausted the window (or its budget).
    ScanExhausted,
    /// The assembled pattern failed re-verification (broken axioms or a
    /// misdeclared structure).
    VerificationFailed,
}

impl FailKind {
    pub fn name(self) -> &'static str {
        match self {
            FailKind::CoverNotFound => "cover-not-found",
            FailKind::OracleExhausted => "oracle-exhausted",
            FailKind::OracleAnswerInvalid => "oracle-answer-invalid",
            FailKind::WindowUndefined => "window-undefined",
            FailKind::ScanExhausted => "scan-exhausted",
            FailKind::VerificationFailed => "verification-failed",
        }
    }

    pub fn from_name(s: &str) -> Option<FailKind> {
        Some(match s {
            "cover-not-found" => FailKind::CoverNotFound,
            "oracle-exhausted" => FailKind::OracleExhausted,
            "oracle-answer-invalid" => FailKind::OracleAnswerInvalid,
            "window-undefined" => FailKind::WindowUndefined,
            "scan-exhausted" => FailKind::ScanExhausted,
            "verification-failed" => FailKind::VerificationFailed,
            _ => return None,
        })
    }
}

/// `c·e` by binary doubling; sound on windows whose addition is monotone
/// (every intermediate value is bounded by the final one).
pub(crate) fn scalar_multiple(
    g: &crate::algebra::GroundStructure,
    e: crate::Elem,
    c: u64,
) -> Option<crate::Elem> {
    use crate::algebra::OpKind;
    assert!(c >= 1);
    let mut remaining = c;
    let mut base = e;
    let mut acc: Option<crate::Elem> = None;
    loop {
        if remaining & 1 == 1 {
            acc = Some(match acc {
                None => base,
                Some(a) => g.apply(OpKind::Add, a, base)?,
            });
        }
        remaining >>= 1;
        if remaining == 0 {
            return acc;
        }
        base = g.apply(OpKind::Add, base, base)?;
    }
}
