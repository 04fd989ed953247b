//! Homomorphisms between ground structures, checked rather than assumed.

use super::{AlgebraError, GroundStructure, OpKind};
use crate::Elem;

/// Which operation(s) the map is claimed to respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomOps {
    Add,
    Mul,
    Both,
}

impl HomOps {
    pub fn ops(self) -> &'static [OpKind] {
        match self {
            HomOps::Add => &[OpKind::Add],
            HomOps::Mul => &[OpKind::Mul],
            HomOps::Both => &[OpKind::Add, OpKind::Mul],
        }
    }
}

/// An element-to-element map between two carriers.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    pub map: Vec<Elem>,
    pub ops: HomOps,
}

impl Homomorphism {
    pub fn new(map: Vec<Elem>, ops: HomOps) -> Self {
        Homomorphism { map, ops }
    }

    pub fn identity(n: usize, ops: HomOps) -> Self {
        Homomorphism {
            map: (0..n).collect(),
            ops,
        }
    }

    #[inline]
    pub fn apply(&self, e: Elem) -> Elem {
        self.map[e]
    }

    /// Parses the homomorphism file format: one target index per source
    /// element, in canonical order.
    pub fn parse(text: &str, source_size: usize, target_size: usize, ops: HomOps) -> Result<Self, String> {
        let mut map = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let idx: usize = line
                .parse()
                .map_err(|_| format!("line {}: expected a target index", lineno + 1))?;
            if idx >= target_size {
                return Err(format!(
                    "line {}: target index {idx} out of range for carrier of {target_size}",
                    lineno + 1
                ));
            }
            map.push(idx);
        }
        if map.len() != source_size {
            return Err(format!(
                "map has {} entries but the source carrier has {source_size}",
                map.len()
            ));
        }
        Ok(Homomorphism { map, ops })
    }
}

/// Outcome of an exhaustive pair scan.
#[derive(Debug, Clone)]
pub struct HomCheck {
    pub ok: bool,
    /// First pair (with its operation) where the map fails to commute.
    pub counterexample: Option<(OpKind, Elem, Elem)>,
    pub checked: u64,
    pub skipped: u64,
}

/// Verifies `map(a∘b) = map(a)∘map(b)` on every pair where `a∘b` is defined.
/// A defined source product whose image product is undefined counts as a
/// violation.
pub fn check_homomorphism(
    h: &Homomorphism,
    source: &GroundStructure,
    target: &GroundStructure,
) -> Result<HomCheck, AlgebraError> {
    if h.map.len() != source.carrier_size() {
        return Err(AlgebraError::MapLength {
            got: h.map.len(),
            expected: source.carrier_size(),
        });
    }
    if let Some(&bad) = h.map.iter().find(|&&e| e >= target.carrier_size()) {
        return Err(AlgebraError::ElementOutOfRange(bad));
    }
    let mut out = HomCheck {
        ok: true,
        counterexample: None,
        checked: 0,
        skipped: 0,
    };
    for &op in h.ops.ops() {
        source.require_op(op)?;
        target.require_op(op)?;
        let n = source.carrier_size();
        for a in 0..n {
            for b in 0..n {
                match source.apply(op, a, b) {
                    None => out.skipped += 1,
                    Some(ab) => {
                        out.checked += 1;
                        let image = target.apply(op, h.apply(a), h.apply(b));
                        if image != Some(h.apply(ab)) {
                            out.ok = false;
                            out.counterexample = Some((op, a, b));
                            return Ok(out);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
