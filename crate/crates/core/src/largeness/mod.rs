//! Exact decision procedures for largeness notions on finite structures and
//! budgeted semi-decision on windowed ones.
//!
//! On a finite structure whose operation is total, every verdict is exact.
//! On windowed (partial) structures verdicts are three-valued and labeled
//! `window_relative`: a `Yes` means within-window witnesses only, a `No`
//! means within-window refutation, and `Inconclusive` means the budget ran
//! out or the window hid the answer.
//!
//! Centrality is deliberately absent: it is defined through minimal
//! idempotent ultrafilters and has no finite decision procedure, so no
//! checker here claims it.

mod checks;
mod dset;
mod ipr;

pub use checks::{is_piecewise_syndetic, is_syndetic, is_thick};
pub use dset::{compute_d_set, DSetQuery};
pub use ipr::{
    finite_products, finite_sums, is_combinatorially_rich, is_ipr, is_ipr_star, OrderedMultiset,
};

use thiserror::Error;

use crate::algebra::{AlgebraError, OpKind};
use crate::Elem;

#[derive(Debug, Error)]
pub enum LargenessError {
    #[error("ordered multiset may not be empty")]
    EmptyMultiset,
    #[error("multiset of {0} elements exceeds the finite-product limit of {MAX_MULTISET}")]
    MultisetTooLarge(usize),
    #[error("operation {op} is not commutative (witness {a}, {b})")]
    NotCommutative { op: OpKind, a: Elem, b: Elem },
    #[error("{0}")]
    BadParams(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Finite products/sums enumerate all nonempty index subsets; cap the
/// multiset size so the 2^n scan stays finite in practice.
pub const MAX_MULTISET: usize = 24;

/// Search budget for the semi-decision procedures.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Cap on elementary candidate evaluations (translate tests, tuples,
    /// matrices, cover combinations).
    pub max_candidates: u64,
    /// Cap on the size of test families enumerated by windowed thickness.
    pub max_family_size: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_candidates: 1_000_000,
            max_family_size: 3,
        }
    }
}

impl Budget {
    pub fn exhaustive() -> Self {
        Budget {
            max_candidates: u64::MAX,
            max_family_size: usize::MAX,
        }
    }

    pub fn with_candidates(max_candidates: u64) -> Self {
        Budget {
            max_candidates,
            ..Budget::default()
        }
    }
}

/// Running counters against a [`Budget`].
#[derive(Debug, Clone, Copy, Default)]
pub struct BudgetUse {
    pub candidates: u64,
    pub skipped_undefined: u64,
    pub families_tested: u64,
}

pub(crate) struct Meter {
    limit: u64,
    pub use_: BudgetUse,
}

impl Meter {
    pub fn new(budget: &Budget) -> Self {
        Meter {
            limit: budget.max_candidates,
            use_: BudgetUse::default(),
        }
    }

    /// Counts one candidate; false once the budget is exhausted.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.use_.candidates >= self.limit {
            return false;
        }
        self.use_.candidates += 1;
        true
    }

    #[inline]
    pub fn skip(&mut self) {
        self.use_.skipped_undefined += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Thick,
    Syndetic,
    PiecewiseSyndetic,
    IpR { r: u32 },
    IpRStar { r: u32 },
    CombinatoriallyRich { n: u32, r: u32 },
}

impl Property {
    pub fn name(&self) -> String {
        match self {
            Property::Thick => "thick".into(),
            Property::Syndetic => "syndetic".into(),
            Property::PiecewiseSyndetic => "piecewise-syndetic".into(),
            Property::IpR { r } => format!("ip_{r}"),
            Property::IpRStar { r } => format!("ip_{r}_star"),
            Property::CombinatoriallyRich { n, r } => format!("combinatorially-rich(n={n},r={r})"),
        }
    }
}

/// What backs a verdict. Every `Yes` witness re-verifies by direct
/// evaluation of the defining condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    None,
    /// `x` such that `S∘x ⊆ A` (thickness on a total structure).
    Translate(Elem),
    /// A tested family together with the translate that put it inside `A`.
    FamilyTranslate { family: Vec<Elem>, translate: Elem },
    /// Cover `F` with `⋃_{s∈F} s⁻¹A = S`, or the `F` whose preimage union
    /// is thick for piecewise syndeticity.
    Cover(Vec<Elem>),
    /// A family every translate of which leaves `A` (thickness refuted).
    CounterexampleFamily(Vec<Elem>),
    /// Element not covered by any preimage (syndeticity refuted).
    Uncovered(Elem),
    /// Index-ordered multiset witnessing IP_r, or refuting IP_r*.
    Multiset(Vec<Elem>),
    /// Row-major r x n matrix with no translated row-subset sum inside `A`.
    Matrix {
        rows: usize,
        cols: usize,
        entries: Vec<Elem>,
    },
}

impl Witness {
    fn render(&self) -> String {
        let list = |v: &[Elem]| {
            v.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Witness::None => "none".into(),
            Witness::Translate(x) => format!("translate {x}"),
            Witness::FamilyTranslate { family, translate } => {
                format!("family [{}] translate {translate}", list(family))
            }
            Witness::Cover(f) => format!("cover [{}]", list(f)),
            Witness::CounterexampleFamily(f) => format!("counterexample-family [{}]", list(f)),
            Witness::Uncovered(e) => format!("uncovered {e}"),
            Witness::Multiset(m) => format!("multiset ({})", list(m)),
            Witness::Matrix { rows, cols, entries } => {
                format!("matrix {rows}x{cols} [{}]", list(entries))
            }
        }
    }
}

/// Result of a largeness check.
#[derive(Debug, Clone)]
pub struct LargenessReport {
    pub property: Property,
    pub operation: OpKind,
    pub verdict: Verdict,
    pub witness: Witness,
    pub budget_used: BudgetUse,
    /// Set when the underlying operation is partial, so the verdict speaks
    /// about the window only.
    pub window_relative: bool,
}

impl LargenessReport {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    /// The structured text form consumed by the CLI.
    pub fn to_text(&self) -> String {
        format!(
            "property: {}\noperation: {}\nverdict: {}\nwindow-relative: {}\nwitness: {}\nbudget: candidates={} skipped={} families={}\n",
            self.property.name(),
            self.operation,
            self.verdict.name(),
            self.window_relative,
            self.witness.render(),
            self.budget_used.candidates,
            self.budget_used.skipped_undefined,
            self.budget_used.families_tested,
        )
    }
}
