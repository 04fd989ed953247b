//! D-set probes: the shifted-witness search and the IP_r* observation.


use crate::largeness::{
    compute_d_set, is_ipr_star, is_piecewise_syndetic, Budget, DSetQuery, LargenessError,
    LargenessReport, Verdict,
};
use crate::mask::SubsetMask;
use crate::Elem;

use super::ConstructiveError;

#[derive(Debug, Clone)]
pub struct TWitness {
    /// Canonically least `(t, d)` with `⋂_i φ_i(d)⁻¹ t⁻¹A` piecewise
    /// syndetic, if any.
    pub pair: Option<(Elem, Elem)>,
    /// Hypotheses the finite check cannot certify (commuting homomorphisms,
    /// existence of an invariant mean) are logged, not assumed.
    pub note: String,
}

/// Exhaustive scan for `t ∈ R`, `d ∈ S` making the shifted intersection
/// piecewise syndetic. Precondition: `A` itself is piecewise syndetic.
pub fn find_t_witness(
    q: &DSetQuery<'_>,
    budget: &Budget,
) -> Result<TWitness, ConstructiveError> {
    q.validate()?;
    let op = q.operation;
    let max_witness = q.target.carrier_size();
    let pre = is_piecewise_syndetic(q.target, q.subset, op, max_witness, budget);
    if pre.verdict != Verdict::Yes {
        return Err(ConstructiveError::Precondition(format!(
            "A is not piecewise syndetic (verdict {})",
            pre.verdict.name()
        )));
    }
    for t in 0..q.target.carrier_size() {
        let shifted = q.target.preimage(op, t, q.subset);
        for d in 0..q.source.carrier_size() {
            let mut inter = SubsetMask::full(q.target.carrier_size());
            for h in q.homs {
                inter.intersect_with(&q.target.preimage(op, h.apply(d), &shifted));
            }
            if q.adjoin_identity {
                inter.intersect_with(&shifted);
            }
            let report = is_piecewise_syndetic(q.target, &inter, op, max_witness, budget);
            if report.verdict == Verdict::Yes {
                return Ok(TWitness {
                    pair: Some((t, d)),
                    note: "commuting-homomorphisms and invariant-mean hypotheses unchecked".into(),
                });
            }
        }
    }
    Ok(TWitness {
        pair: None,
        note: "no pair found; the theorem's uncheckable hypotheses may fail here".into(),
    })
}

#[derive(Debug, Clone)]
pub struct ProbeOutcome {
    /// `D(A; φ_1..φ_n)` as a mask over the source carrier.
    pub d_set: SubsetMask,
    /// IP_r* verdict for the D-set inside the source structure.
    pub report: LargenessReport,
    /// A failed probe is an observation about this (structure, subset,
    /// homomorphism) triple, not a refutation: the theorem quantifies `r`
    /// existentially over all homomorphism tuples.
    pub note: String,
}

/// Computes the D-set and tests it for IP_r* in the source. Both carriers
/// must be commutative under the query operation.
pub fn ipr_star_probe(
    q: &DSetQuery<'_>,
    r: u32,
    max_witness: usize,
    budget: &Budget,
) -> Result<ProbeOutcome, ConstructiveError> {
    q.validate()?;
    for g in [q.source, q.target] {
        let n = g.carrier_size();
        for x in 0..n {
            for y in x + 1..n {
                if let (Some(l), Some(rv)) =
                    (g.apply(q.operation, x, y), g.apply(q.operation, y, x))
                {
                    if l != rv {
                        return Err(ConstructiveError::Largeness(
                            LargenessError::NotCommutative {
                                op: q.operation,
                                a: x,
                                b: y,
                            },
                        ));
                    }
                }
            }
        }
    }
    let d_set = compute_d_set(q, max_witness, budget)?;
    let report = is_ipr_star(q.source, &d_set, r, q.operation, budget)?;
    let note = match report.verdict {
        Verdict::Yes => "observation: D-set is IP_r* at this r".into(),
        Verdict::No => {
            "observation only: a single miss does not refute the theorem (r is existential)"
                .into()
        }
        Verdict::Inconclusive => "budget exhausted".into(),
    };
    Ok(ProbeOutcome {
        d_set,
        report,
        note,
    })
}
