//! Constructor for `{x_i, x_1⋯x_n, Σ a_i x_i : 0 ≤ a_i ≤ k}` inside a set
//! that is both multiplicatively thick and syndetic.
//!
//! The construction: obtain a syndetic cover `s_1..s_m`, adjoin the
//! canonically least `s_{m+1}..s_{m+n-1}`, form all sums `Σ c_i s_i` with
//! coefficients up to `k`, ask the thickness oracle for `x` carrying that
//! family into `A`, locate the cover element `s_i` with
//! `s_i·(x s_{m+1} x ⋯ s_{m+n-1} x) ∈ A`, and return `x_1 = s_i x`,
//! `x_j = s_{m+j-1} x`. The full coefficient grid is re-verified before
//! anything is returned.

use crate::algebra::{GroundStructure, OpKind, StructureKind};
use crate::largeness::{is_syndetic, Budget, Verdict, Witness};
use crate::mask::SubsetMask;
use crate::Elem;

use super::oracle::ThickOracle;
use super::trace::{ConstructionTrace, TraceStep};
use super::{scalar_multiple, ConstructFailure, ConstructiveError, FailKind};

/// Cap on the coefficient-grid family `(k+1)^(m+n-1)`.
const MAX_FAMILY: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThickSyndeticSuccess {
    /// `x_1..x_n`.
    pub xs: Vec<Elem>,
    /// The syndetic cover `s_1..s_m`.
    pub cover: Vec<Elem>,
    /// The `x` returned by the thickness oracle.
    pub translate: Elem,
}

#[derive(Debug)]
pub struct ThickSyndeticRun {
    pub trace: ConstructionTrace,
    pub result: Result<ThickSyndeticSuccess, ConstructFailure>,
}

pub fn thick_syndetic_constructor(
    g: &GroundStructure,
    a: &SubsetMask,
    n: usize,
    k: u32,
    oracle: &mut dyn ThickOracle,
    max_witness: usize,
    budget: &Budget,
) -> Result<ThickSyndeticRun, ConstructiveError> {
    if g.kind() != StructureKind::Semiring {
        return Err(ConstructiveError::NotSemiring);
    }
    if n < 1 || k < 1 {
        return Err(ConstructiveError::Precondition("need n >= 1 and k >= 1".into()));
    }
    if g.carrier_size() == 0 {
        return Err(ConstructiveError::Precondition("empty carrier".into()));
    }
    let mut trace = ConstructionTrace::new("thick-syndetic");
    trace.push(TraceStep::Param { key: "n".into(), value: n.to_string() });
    trace.push(TraceStep::Param { key: "k".into(), value: k.to_string() });
    trace.push(TraceStep::Param {
        key: "max-witness".into(),
        value: max_witness.to_string(),
    });
    trace.push(TraceStep::Param {
        key: "budget".into(),
        value: budget.max_candidates.to_string(),
    });

    let fail = |mut trace: ConstructionTrace, kind: FailKind, detail: String| {
        trace.outcome = format!("failure {} {detail}", kind.name());
        Ok(ThickSyndeticRun {
            trace,
            result: Err(ConstructFailure { kind, detail }),
        })
    };

    // multiplicative syndetic cover
    let cover_report = is_syndetic(g, a, OpKind::Mul, max_witness, budget);
    let cover = match (cover_report.verdict, &cover_report.witness) {
        (Verdict::Yes, Witness::Cover(f)) => f.clone(),
        _ => {
            return fail(
                trace,
                FailKind::CoverNotFound,
                format!("syndetic check returned {}", cover_report.verdict.name()),
            )
        }
    };
    trace.push(TraceStep::Choose { label: "cover".into(), values: cover.clone() });

    // canonically least extra picks; arbitrary choices are allowed, so small
    // carriers just cycle
    let extras: Vec<Elem> = (0..n - 1).map(|j| j % g.carrier_size()).collect();
    trace.push(TraceStep::Choose { label: "extras".into(), values: extras.clone() });
    let mut s_list = cover.clone();
    s_list.extend_from_slice(&extras);
    let positions = s_list.len();

    (k as u64 + 1)
        .checked_pow(positions as u32)
        .filter(|&s| s <= MAX_FAMILY)
        .ok_or_else(|| {
            ConstructiveError::TooLarge(format!(
                "coefficient grid ({}+1)^{positions} exceeds {MAX_FAMILY}",
                k
            ))
        })?;

    // F = { Σ c_i s_i : 0 <= c_i <= k, not all zero }
    let mut family: Vec<Elem> = Vec::new();
    {
        let mut seen = SubsetMask::empty(g.carrier_size());
        let mut coeffs = vec![0u32; positions];
        'grid: loop {
            // advance first: start from the first nonzero vector
            let mut pos = positions;
            while pos > 0 {
                pos -= 1;
                if coeffs[pos] < k {
                    coeffs[pos] += 1;
                    for c in coeffs[pos + 1..].iter_mut() {
                        *c = 0;
                    }
                    let mut acc: Option<Elem> = None;
                    for (i, &c) in coeffs.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        let term = match scalar_multiple(g, s_list[i], c as u64) {
                            Some(t) => t,
                            None => {
                                return fail(
                                    trace,
                                    FailKind::WindowUndefined,
                                    format!("{c}*s[{i}] escapes the window"),
                                );
                            }
                        };
                        acc = Some(match acc {
                            None => term,
                            Some(p) => match g.apply(OpKind::Add, p, term) {
                                Some(v) => v,
                                None => {
                                    return fail(
                                        trace,
                                        FailKind::WindowUndefined,
                                        "a grid sum escapes the window".into(),
                                    );
                                }
                            },
                        });
                    }
                    let v = acc.expect("nonzero coefficient vector");
                    if !seen.contains(v) {
                        seen.insert(v);
                        family.push(v);
                    }
                    continue 'grid;
                }
                coeffs[pos] = 0;
            }
            break;
        }
        family.sort_unstable();
    }
    trace.push(TraceStep::Choose { label: "family".into(), values: family.clone() });

    // thickness oracle
    let answer = oracle.find_translate(g, OpKind::Mul, &family, a);
    trace.push(TraceStep::Oracle { family: family.clone(), answer });
    let x = match answer {
        Some(x) => x,
        None => return fail(trace, FailKind::OracleExhausted, "no translate for the family".into()),
    };
    for &f in &family {
        match g.apply(OpKind::Mul, f, x) {
            Some(v) if a.contains(v) => {}
            _ => {
                return fail(
                    trace,
                    FailKind::OracleAnswerInvalid,
                    format!("{f}*{x} is not inside A"),
                )
            }
        }
    }

    // z = x s_{m+1} x ⋯ s_{m+n-1} x
    let mut chain = vec![x];
    for &e in &extras {
        chain.push(e);
        chain.push(x);
    }
    let z = match g.apply_chain(OpKind::Mul, &chain) {
        Some(z) => z,
        None => return fail(trace, FailKind::WindowUndefined, "the product chain escapes the window".into()),
    };
    trace.push(TraceStep::Choose { label: "chain-product".into(), values: vec![z] });

    // the cover element that carries z into A
    let pivot = cover.iter().position(|&s| {
        g.apply(OpKind::Mul, s, z)
            .map(|v| a.contains(v))
            .unwrap_or(false)
    });
    let Some(i) = pivot else {
        return fail(trace, FailKind::WindowUndefined, "no cover element carries the chain product into A".into());
    };
    trace.push(TraceStep::Choose { label: "pivot".into(), values: vec![i] });

    // x_1 = s_i x, x_j = s_{m+j-1} x
    let mut xs = Vec::with_capacity(n);
    for (j, &s) in std::iter::once(&cover[i]).chain(extras.iter()).enumerate() {
        match g.apply(OpKind::Mul, s, x) {
            Some(v) => xs.push(v),
            None => {
                return fail(
                    trace,
                    FailKind::WindowUndefined,
                    format!("x_{} escapes the window", j + 1),
                )
            }
        }
    }
    trace.push(TraceStep::Choose { label: "xs".into(), values: xs.clone() });

    // full verification: elements, the ordered product, and the whole
    // coefficient grid
    if let Some(detail) = verify_grid(g, a, &xs, k) {
        let (kind, detail) = detail;
        return fail(trace, kind, detail);
    }
    trace.push(TraceStep::Note {
        text: format!("verified grid with coefficients 0..={k}"),
    });

    let xs_text = xs
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    trace.outcome = format!("success xs=[{xs_text}] translate={x} pivot={i}");
    Ok(ThickSyndeticRun {
        trace,
        result: Ok(ThickSyndeticSuccess {
            xs,
            cover,
            translate: x,
        }),
    })
}

/// Checks `x_j ∈ A`, `x_1⋯x_n ∈ A`, and every `Σ a_j x_j ∈ A` for
/// coefficient vectors `0 ≤ a_j ≤ k`, not all zero.
fn verify_grid(
    g: &GroundStructure,
    a: &SubsetMask,
    xs: &[Elem],
    k: u32,
) -> Option<(FailKind, String)> {
    for (j, &v) in xs.iter().enumerate() {
        if !a.contains(v) {
            return Some((FailKind::VerificationFailed, format!("x_{} is outside A", j + 1)));
        }
    }
    match g.apply_chain(OpKind::Mul, xs) {
        Some(p) if a.contains(p) => {}
        Some(_) => {
            return Some((FailKind::VerificationFailed, "the ordered product is outside A".into()))
        }
        None => {
            return Some((FailKind::WindowUndefined, "the ordered product escapes the window".into()))
        }
    }
    let n = xs.len();
    let mut coeffs = vec![0u32; n];
    'grid: loop {
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            if coeffs[pos] < k {
                coeffs[pos] += 1;
                for c in coeffs[pos + 1..].iter_mut() {
                    *c = 0;
                }
                let mut acc: Option<Elem> = None;
                for (j, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let term = match scalar_multiple(g, xs[j], c as u64) {
                        Some(t) => t,
                        None => {
                            return Some((
                                FailKind::WindowUndefined,
                                format!("{c}*x_{} escapes the window", j + 1),
                            ))
                        }
                    };
                    acc = Some(match acc {
                        None => term,
                        Some(p) => match g.apply(OpKind::Add, p, term) {
                            Some(v) => v,
                            None => {
                                return Some((
                                    FailKind::WindowUndefined,
                                    "a combination escapes the window".into(),
                                ))
                            }
                        },
                    });
                }
                let v = acc.expect("nonzero vector");
                if !a.contains(v) {
                    return Some((
                        FailKind::VerificationFailed,
                        format!("combination {coeffs:?} lands outside A"),
                    ));
                }
                continue 'grid;
            }
            coeffs[pos] = 0;
        }
        break;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructive::BruteForceOracle;

    #[test]
    fn full_carrier_always_succeeds() {
        let g = GroundStructure::zmod(5);
        let a = SubsetMask::full(5);
        let mut oracle = BruteForceOracle;
        let run =
            thick_syndetic_constructor(&g, &a, 2, 1, &mut oracle, 5, &Budget::exhaustive())
                .unwrap();
        let success = run.result.expect("full carrier");
        assert_eq!(success.xs.len(), 2);
        assert_eq!(success.cover.len(), 1);
        assert!(run.trace.to_text().contains("outcome success"));
    }

    #[test]
    fn zmod6_even_ideal() {
        // A = {0,2,4} is multiplicatively thick (S*2 = A) and syndetic
        // (2^{-1}A = S)
        let g = GroundStructure::zmod(6);
        let a = SubsetMask::from_indices(6, &[0, 2, 4]);
        let mut oracle = BruteForceOracle;
        let run =
            thick_syndetic_constructor(&g, &a, 2, 1, &mut oracle, 6, &Budget::exhaustive())
                .unwrap();
        let success = run.result.expect("precondition holds");
        for &v in &success.xs {
            assert!(a.contains(v));
        }
    }

    #[test]
    fn non_syndetic_target_reports_cover_not_found() {
        // Boolean semiring, A = {1}: 0^{-1}A = ∅, 1^{-1}A = {1}
        let or = vec![0usize, 1, 1, 1];
        let and = vec![0usize, 0, 0, 1];
        let g = GroundStructure::from_tables(
            StructureKind::Semiring,
            2,
            Some(or.into_iter().map(Some).collect()),
            Some(and.into_iter().map(Some).collect()),
        )
        .unwrap();
        let a = SubsetMask::from_indices(2, &[1]);
        let mut oracle = BruteForceOracle;
        let run =
            thick_syndetic_constructor(&g, &a, 2, 1, &mut oracle, 2, &Budget::exhaustive())
                .unwrap();
        let failure = run.result.unwrap_err();
        assert_eq!(failure.kind, FailKind::CoverNotFound);
    }

    #[test]
    fn semigroup_input_is_rejected() {
        let g = GroundStructure::semigroup_from_table(2, OpKind::Mul, vec![0, 1, 1, 0]);
        let a = SubsetMask::full(2);
        let mut oracle = BruteForceOracle;
        assert!(matches!(
            thick_syndetic_constructor(&g, &a, 1, 1, &mut oracle, 2, &Budget::exhaustive()),
            Err(ConstructiveError::NotSemiring)
        ));
    }

    #[test]
    fn grid_verification_runs_exhaustively() {
        let g = GroundStructure::zmod(6);
        let a = SubsetMask::from_indices(6, &[0, 2, 4]);
        let mut oracle = BruteForceOracle;
        let run =
            thick_syndetic_constructor(&g, &a, 3, 2, &mut oracle, 6, &Budget::exhaustive())
                .unwrap();
        if let Ok(success) = run.result {
            // independent re-check of the full grid
            for c0 in 0..=2u32 {
                for c1 in 0..=2u32 {
                    for c2 in 0..=2u32 {
                        if c0 == 0 && c1 == 0 && c2 == 0 {
                            continue;
                        }
                        let mut total = 0usize;
                        for (c, &x) in [c0, c1, c2].iter().zip(&success.xs) {
                            total = (total + *c as usize * x) % 6;
                        }
                        assert!(a.contains(total), "grid ({c0},{c1},{c2})");
                    }
                }
            }
        }
    }
}
