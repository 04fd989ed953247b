//! Pattern families over a ground structure: parsing, instantiation,
//! evaluation, and monochromatic witness search.

mod ast;
mod eval;
mod parse;
mod search;

pub use ast::{BinderDef, ExpandedPattern, IntRef, PatternFamily, PatternTerm, TermExpr};
pub use eval::eval_term;
pub use parse::parse_pattern;
pub use search::{
    find_monochromatic, find_monochromatic_par, key_lemma_witness_search, product_of_fs_blocks,
    verify_instance, KeyLemmaOutcome, KeyLemmaStats, TermDetail, VerifyReport,
};

use thiserror::Error;

use crate::Elem;

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unbound index {name:?} at byte {pos} (not declared by any binder)")]
    UnboundIndex { pos: usize, name: String },
    #[error("exponents and coefficients must be positive (byte {pos})")]
    NonPositive { pos: usize },
    #[error("term at byte {pos} has no element part, only scalars")]
    NoElementPart { pos: usize },
    #[error("binder {name} has empty range {lo}..{hi}")]
    EmptyBinderRange { name: String, lo: u32, hi: u32 },
    #[error("parameter {name:?} was not supplied")]
    MissingParam { name: String },
    #[error("coloring covers {got} elements but the carrier has {expected}")]
    ColoringMismatch { expected: usize, got: usize },
    #[error("this operation needs exactly 2 colors, the coloring has {0}")]
    NotTwoColors(u32),
    #[error("color index {value} out of range for {k} colors")]
    ColorOutOfRange { value: u32, k: u32 },
    #[error("assignment covers {got} variables, pattern has {expected}")]
    AssignmentMismatch { expected: usize, got: usize },
}

/// A k-coloring of the carrier, one color index per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    k: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, k: u32) -> Result<Self, PatternError> {
        if let Some(&bad) = colors.iter().find(|&&c| c >= k) {
            return Err(PatternError::ColorOutOfRange { value: bad, k });
        }
        Ok(Coloring { colors, k })
    }

    pub fn monochrome(len: usize) -> Self {
        Coloring {
            colors: vec![0; len],
            k: 1,
        }
    }

    #[inline]
    pub fn color(&self, e: Elem) -> u32 {
        self.colors[e]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color_count(&self) -> u32 {
        self.k
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Mask of the elements carrying `color`.
    pub fn class(&self, color: u32) -> crate::mask::SubsetMask {
        crate::mask::SubsetMask::from_fn(self.colors.len(), |e| self.colors[e] == color)
    }

    /// Parses the coloring file format: one color index per carrier element,
    /// in canonical order.
    pub fn parse(text: &str, carrier_size: usize, k: u32) -> Result<Self, PatternError> {
        let mut colors = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            for tok in line.split_whitespace() {
                let c: u32 = tok.parse().map_err(|_| PatternError::Syntax {
                    pos: 0,
                    message: format!("bad color index {tok:?}"),
                })?;
                colors.push(c);
            }
        }
        if colors.len() != carrier_size {
            return Err(PatternError::ColoringMismatch {
                expected: carrier_size,
                got: colors.len(),
            });
        }
        Coloring::new(colors, k)
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        for c in &self.colors {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }
}

/// A verified monochromatic occurrence of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternInstance {
    /// One element per pattern variable, in variable order.
    pub assignment: Vec<Elem>,
    /// One element per pattern term, in term order.
    pub values: Vec<Elem>,
    pub color: u32,
}
