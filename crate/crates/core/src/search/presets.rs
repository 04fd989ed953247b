//! Experiment presets wired to the CLI.

use std::collections::BTreeMap;

use crate::algebra::{Builder, GroundStructure, StructureKind};
use crate::patterns::{parse_pattern, ExpandedPattern};

use super::avoid::enumerate_avoiding;
use super::{AvoidOutcome, SearchConfig, SearchError};

/// Named experiment setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// The finite claim over `{2..990}`: monochromatic `{x,y,x+y,x*y}` in
    /// any 2-coloring. Exposed as a CNF target for external solvers.
    Hindman990,
    /// `{f,g,f+g,f*g}` over a truncated polynomial semiring.
    PolyConjecture,
    /// `{x,y,x+y}` over initial integer windows.
    Schur,
}

impl Preset {
    pub fn from_name(name: &str) -> Option<Preset> {
        match name {
            "hindman990" => Some(Preset::Hindman990),
            "poly-conjecture" => Some(Preset::PolyConjecture),
            "schur" => Some(Preset::Schur),
            _ => None,
        }
    }

    pub fn pattern_source(&self) -> &'static str {
        match self {
            Preset::Hindman990 => "{x, y, x+y, x*y}",
            Preset::PolyConjecture => "{f, g, f+g, f*g}",
            Preset::Schur => "{x, y, x+y}",
        }
    }

    pub fn distinct(&self) -> bool {
        // Schur triples conventionally allow x = y
        !matches!(self, Preset::Schur)
    }

    pub fn colors(&self) -> u32 {
        2
    }

    pub fn pattern(&self) -> ExpandedPattern {
        let mut fam = parse_pattern(self.pattern_source()).expect("preset pattern parses");
        fam.distinct = self.distinct();
        fam.expand(&BTreeMap::new()).expect("preset pattern is ground")
    }

    /// The default carrier; `window` overrides the integer ranges.
    pub fn structure(&self, window: Option<(u64, u64)>) -> Result<GroundStructure, SearchError> {
        match self {
            Preset::Hindman990 => {
                let (lo, hi) = window.unwrap_or((2, 990));
                Ok(GroundStructure::nat_range(lo, hi)?)
            }
            Preset::Schur => {
                let (lo, hi) = window.unwrap_or((1, 44));
                Ok(GroundStructure::nat_range(lo, hi)?)
            }
            Preset::PolyConjecture => Ok(GroundStructure::from_builder(
                StructureKind::Semiring,
                Builder::PolyNat {
                    max_deg: 1,
                    max_coeff: 2,
                },
            )?),
        }
    }
}

/// Runs the avoidance search for `{f,g,f+g,f*g}` with two colors over the
/// truncated polynomial semiring.
pub fn conjecture_poly_preset(
    max_deg: usize,
    max_coeff: u64,
    cfg: &SearchConfig,
) -> Result<AvoidOutcome, SearchError> {
    let g = GroundStructure::from_builder(
        StructureKind::Semiring,
        Builder::PolyNat { max_deg, max_coeff },
    )?;
    let pat = Preset::PolyConjecture.pattern();
    let mut cfg = cfg.clone();
    cfg.colors = 2;
    enumerate_avoiding(&g, &pat, &cfg)
}
