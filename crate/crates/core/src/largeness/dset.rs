//! The D-set: elements whose homomorphism-shifted preimage intersection
//! stays piecewise syndetic.

use super::checks::is_piecewise_syndetic;
use super::{Budget, LargenessError, Verdict};
use crate::algebra::{check_homomorphism, GroundStructure, Homomorphism, OpKind};
use crate::mask::SubsetMask;

/// Inputs for a D-set computation: `D(A; φ_1, …, φ_n) ⊆ S` for
/// `A ⊆ R` and homomorphisms `φ_i : S → R`.
pub struct DSetQuery<'a> {
    pub source: &'a GroundStructure,
    pub target: &'a GroundStructure,
    pub subset: &'a SubsetMask,
    pub homs: &'a [Homomorphism],
    /// Intersect with `A` itself as well (the `A ∩ ⋂ φ_i(d)⁻¹A` form, which
    /// is what adjoining an identity element and a constant homomorphism
    /// amounts to).
    pub adjoin_identity: bool,
    pub operation: OpKind,
}

impl<'a> DSetQuery<'a> {
    /// Checks the shared-source/shared-target invariant and that every map
    /// really is a homomorphism for the chosen operation.
    pub fn validate(&self) -> Result<(), LargenessError> {
        self.source.require_op(self.operation)?;
        self.target.require_op(self.operation)?;
        if self.subset.len() != self.target.carrier_size() {
            return Err(LargenessError::BadParams(
                "subset length does not match the target carrier".into(),
            ));
        }
        for h in self.homs {
            let check = check_homomorphism(h, self.source, self.target)?;
            if !check.ok {
                return Err(LargenessError::BadParams(format!(
                    "map is not a homomorphism: counterexample {:?}",
                    check.counterexample
                )));
            }
        }
        Ok(())
    }

    /// The intersection `⋂_i φ_i(d)⁻¹A` (optionally further intersected
    /// with `A`), as a mask over the target carrier.
    pub fn intersection_at(&self, d: usize) -> SubsetMask {
        let mut mask = SubsetMask::full(self.target.carrier_size());
        for h in self.homs {
            let pre = self
                .target
                .preimage(self.operation, h.apply(d), self.subset);
            mask.intersect_with(&pre);
        }
        if self.adjoin_identity {
            mask.intersect_with(self.subset);
        }
        mask
    }
}

/// `{d ∈ S : ⋂_i φ_i(d)⁻¹A is piecewise syndetic in R}`.
///
/// Each per-`d` piecewise-syndeticity check gets a fresh budget; on a
/// windowed target only definite `Yes` verdicts admit `d`, so the result is
/// a lower approximation there.
pub fn compute_d_set(
    q: &DSetQuery<'_>,
    max_witness: usize,
    budget: &Budget,
) -> Result<SubsetMask, LargenessError> {
    q.validate()?;
    let mut out = SubsetMask::empty(q.source.carrier_size());
    for d in 0..q.source.carrier_size() {
        let mask = q.intersection_at(d);
        let report = is_piecewise_syndetic(q.target, &mask, q.operation, max_witness, budget);
        if report.verdict == Verdict::Yes {
            out.insert(d);
        }
    }
    Ok(out)
}
