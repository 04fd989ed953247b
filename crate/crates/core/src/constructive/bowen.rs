//! Decision-tree executor for the two-coloring theorem: given a semiring
//! window, a 2-coloring whose class 0 is multiplicatively thick, and
//! parameters `k`, `l`, hunt a monochromatic `{x, y, kx+y, x^j y : j ≤ l}`.
//!
//! Five elements `a_1..a_5` are obtained from the thickness oracle so that
//! the specific products the tree needs land in class 0, then the candidate
//! `(x, y)` nodes are walked in the order the case analysis dictates,
//! checking actual colors at every node. The chain is airtight for `k = 1`;
//! for larger `k` one glue step of the case analysis can fail to pin its
//! element, so a budgeted exhaustive scan backs the chain before exhaustion
//! is reported. Only the oracle answers steer the run, so a trace replays
//! deterministically.

use crate::algebra::{GroundStructure, OpKind, StructureKind};
use crate::largeness::Budget;
use crate::mask::SubsetMask;
use crate::patterns::{verify_instance, Coloring, ExpandedPattern, PatternTerm};
use crate::Elem;

use super::oracle::ThickOracle;
use super::trace::{ConstructionTrace, NodeStatus, TraceStep};
use super::{scalar_multiple, ConstructFailure, ConstructiveError, FailKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowenSuccess {
    pub color: u32,
    pub x: Elem,
    pub y: Elem,
    /// `x, y, kx+y, x^1 y, …, x^l y`.
    pub values: Vec<Elem>,
    /// Which node of the tree fired.
    pub node: String,
}

#[derive(Debug)]
pub struct BowenRun {
    pub trace: ConstructionTrace,
    pub result: Result<BowenSuccess, ConstructFailure>,
}

/// The target pattern as a reusable family over two variables.
pub(crate) fn bowen_pattern(k: u32, l: u32) -> ExpandedPattern {
    let mut terms = vec![
        PatternTerm::Var(0),
        PatternTerm::Var(1),
        PatternTerm::Sum(vec![
            PatternTerm::Coeff(k, Box::new(PatternTerm::Var(0))),
            PatternTerm::Var(1),
        ]),
    ];
    for j in 1..=l {
        terms.push(PatternTerm::Product(vec![
            PatternTerm::Power(Box::new(PatternTerm::Var(0)), j),
            PatternTerm::Var(1),
        ]));
    }
    ExpandedPattern {
        variables: vec!["x".into(), "y".into()],
        terms,
        distinct: false,
        min_element: None,
    }
}

struct Executor<'a> {
    g: &'a GroundStructure,
    coloring: &'a Coloring,
    k: u32,
    l: u32,
    c0: SubsetMask,
    trace: ConstructionTrace,
}

enum StepOutcome {
    Hit(BowenSuccess),
    Miss,
    Fail(ConstructFailure),
}

impl<'a> Executor<'a> {
    fn mul(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.g.apply(OpKind::Mul, a, b)
    }

    fn add(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.g.apply(OpKind::Add, a, b)
    }

    fn pow(&self, e: Elem, i: u32) -> Option<Elem> {
        self.g.apply_repeat(OpKind::Mul, e, i)
    }

    fn smul(&self, c: u64, e: Elem) -> Option<Elem> {
        scalar_multiple(self.g, e, c)
    }

    fn fail(&mut self, kind: FailKind, detail: String) -> ConstructFailure {
        ConstructFailure { kind, detail }
    }

    /// Asks the oracle for `x` with `family·x ⊆ C0` and re-verifies.
    fn query(
        &mut self,
        label: &str,
        family: Vec<Option<Elem>>,
        oracle: &mut dyn ThickOracle,
    ) -> Result<Elem, ConstructFailure> {
        let mut resolved = Vec::with_capacity(family.len());
        for f in family {
            match f {
                Some(v) => resolved.push(v),
                None => {
                    return Err(self.fail(
                        FailKind::WindowUndefined,
                        format!("an element of the {label} query escapes the window"),
                    ))
                }
            }
        }
        resolved.sort_unstable();
        resolved.dedup();
        let answer = oracle.find_translate(self.g, OpKind::Mul, &resolved, &self.c0);
        self.trace.push(TraceStep::Oracle {
            family: resolved.clone(),
            answer,
        });
        let x = answer.ok_or_else(|| {
            ConstructFailure {
                kind: FailKind::OracleExhausted,
                detail: format!("no translate for the {label} query"),
            }
        })?;
        for &f in &resolved {
            match self.mul(f, x) {
                Some(v) if self.c0.contains(v) => {}
                _ => {
                    return Err(self.fail(
                        FailKind::OracleAnswerInvalid,
                        format!("{f}*{x} is not inside color class 0"),
                    ))
                }
            }
        }
        Ok(x)
    }

    /// Evaluates one `(x, y)` node: records the color of every pattern value
    /// and fires when they agree.
    fn node(&mut self, label: &str, x: Option<Elem>, y: Option<Elem>) -> StepOutcome {
        let (Some(x), Some(y)) = (x, y) else {
            self.trace.push(TraceStep::Node {
                label: label.into(),
                status: NodeStatus::Undefined {
                    what: if x.is_none() { "x" } else { "y" }.into(),
                },
            });
            return StepOutcome::Miss;
        };
        let mut values = vec![Some(x), Some(y), self.smul(self.k as u64, x).and_then(|kx| self.add(kx, y))];
        for j in 1..=self.l {
            values.push(self.pow(x, j).and_then(|xj| self.mul(xj, y)));
        }
        let names = ["x", "y", "kx+y"];
        let mut resolved = Vec::with_capacity(values.len());
        for (idx, v) in values.iter().enumerate() {
            match v {
                Some(v) => resolved.push(*v),
                None => {
                    let what = names
                        .get(idx)
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| format!("x^{}y", idx - 2));
                    self.trace.push(TraceStep::Node {
                        label: label.into(),
                        status: NodeStatus::Undefined { what },
                    });
                    return StepOutcome::Miss;
                }
            }
        }
        for &v in &resolved {
            self.trace.push(TraceStep::Color {
                element: v,
                color: self.coloring.color(v),
            });
        }
        let first = self.coloring.color(resolved[0]);
        if resolved.iter().all(|&v| self.coloring.color(v) == first) {
            self.trace.push(TraceStep::Node {
                label: label.into(),
                status: NodeStatus::Mono { color: first },
            });
            // independent re-evaluation through the pattern engine
            let pat = bowen_pattern(self.k, self.l);
            match verify_instance(self.g, self.coloring, &pat, &[x, y]) {
                Ok(report) if report.ok => StepOutcome::Hit(BowenSuccess {
                    color: first,
                    x,
                    y,
                    values: resolved,
                    node: label.into(),
                }),
                _ => StepOutcome::Fail(ConstructFailure {
                    kind: FailKind::VerificationFailed,
                    detail: format!("node {label} did not re-verify"),
                }),
            }
        } else {
            self.trace.push(TraceStep::Node {
                label: label.into(),
                status: NodeStatus::Mixed,
            });
            StepOutcome::Miss
        }
    }
}

pub fn bowen_thick_tree(
    g: &GroundStructure,
    coloring: &Coloring,
    k: u32,
    l: u32,
    oracle: &mut dyn ThickOracle,
    budget: &Budget,
) -> Result<BowenRun, ConstructiveError> {
    if g.kind() != StructureKind::Semiring {
        return Err(ConstructiveError::NotSemiring);
    }
    if coloring.color_count() != 2 {
        return Err(ConstructiveError::NotTwoColors(coloring.color_count()));
    }
    if coloring.len() != g.carrier_size() {
        return Err(ConstructiveError::Precondition(format!(
            "coloring covers {} elements, carrier has {}",
            coloring.len(),
            g.carrier_size()
        )));
    }
    if k < 1 || l < 1 || k > 8 || l > 8 {
        return Err(ConstructiveError::TooLarge(
            "k and l must lie in 1..=8".into(),
        ));
    }
    if g.carrier_size() == 0 {
        return Err(ConstructiveError::Precondition("empty carrier".into()));
    }

    let mut ex = Executor {
        g,
        coloring,
        k,
        l,
        c0: coloring.class(0),
        trace: ConstructionTrace::new("bowen"),
    };
    ex.trace.push(TraceStep::Param { key: "k".into(), value: k.to_string() });
    ex.trace.push(TraceStep::Param { key: "l".into(), value: l.to_string() });
    ex.trace.push(TraceStep::Param {
        key: "budget".into(),
        value: budget.max_candidates.to_string(),
    });

    let result = run_tree(&mut ex, oracle, budget);
    let mut trace = ex.trace;
    trace.outcome = match &result {
        Ok(s) => format!(
            "success node={} color={} x={} y={}",
            s.node, s.color, s.x, s.y
        ),
        Err(f) => format!("failure {} {}", f.kind.name(), f.detail),
    };
    Ok(BowenRun { trace, result })
}

fn run_tree(
    ex: &mut Executor<'_>,
    oracle: &mut dyn ThickOracle,
    budget: &Budget,
) -> Result<BowenSuccess, ConstructFailure> {
    let (k, l) = (ex.k as u64, ex.l);
    let t: Elem = 0;
    ex.trace.push(TraceStep::Choose { label: "t".into(), values: vec![t] });
    let undefined = |what: &str| ConstructFailure {
        kind: FailKind::WindowUndefined,
        detail: format!("{what} escapes the window"),
    };
    macro_rules! check_node {
        ($ex:expr, $label:expr, $x:expr, $y:expr) => {
            match $ex.node($label, $x, $y) {
                StepOutcome::Hit(success) => return Ok(success),
                StepOutcome::Fail(failure) => return Err(failure),
                StepOutcome::Miss => {}
            }
        };
    }

    // a_1: c·a_1 ∈ C0 for the coefficients the tree touches
    let x1 = ex.query("a1", vec![Some(t), ex.smul(k, t)], oracle)?;
    let a1 = ex.mul(t, x1).expect("t*x1 was verified defined");
    ex.trace.push(TraceStep::Choose { label: "a1".into(), values: vec![a1] });

    // a_2: k·a_2 and k^{j+1} a_1^j a_2 ∈ C0
    let mut f2 = vec![ex.smul(k, t)];
    for j in 1..=l {
        let w = ex.pow(a1, j).and_then(|p| ex.mul(p, t));
        f2.push(w.and_then(|w| ex.smul(k.pow(j + 1), w)));
    }
    let x2 = ex.query("a2", f2, oracle)?;
    let a2 = ex.mul(t, x2).expect("verified");
    ex.trace.push(TraceStep::Choose { label: "a2".into(), values: vec![a2] });

    // B = k^2 a_1 + k a_2; this is node1's kx+y
    let b = ex
        .smul(k * k, a1)
        .and_then(|p| ex.smul(k, a2).and_then(|q| ex.add(p, q)))
        .ok_or_else(|| undefined("k^2*a1 + k*a2"))?;
    ex.trace.push(TraceStep::Choose { label: "B".into(), values: vec![b] });

    check_node!(ex, "node1", ex.smul(k, a1), ex.smul(k, a2));

    // a_3: a_3 and B^i a_3 ∈ C0
    let mut f3 = vec![Some(t)];
    for i in 1..=l {
        f3.push(ex.pow(b, i).and_then(|p| ex.mul(p, t)));
    }
    let x3 = ex.query("a3", f3, oracle)?;
    let a3 = ex.mul(t, x3).expect("verified");
    ex.trace.push(TraceStep::Choose { label: "a3".into(), values: vec![a3] });

    let ba3 = ex.add(b, a3).ok_or_else(|| undefined("B + a3"))?;

    // a_4: a_4, a_3^j a_4, B^i a_4, (B^i a_3)^j B^i a_4, (B+a_3)^i a_4 ∈ C0
    let mut f4 = vec![Some(t)];
    for j in 1..=l {
        f4.push(ex.pow(a3, j).and_then(|p| ex.mul(p, t)));
    }
    for i in 1..=l {
        f4.push(ex.pow(b, i).and_then(|p| ex.mul(p, t)));
        f4.push(ex.pow(ba3, i).and_then(|p| ex.mul(p, t)));
        for j in 1..=l {
            let u = ex.pow(b, i).and_then(|bi| ex.mul(bi, a3));
            let w = u
                .and_then(|u| ex.pow(u, j)).zip(ex.pow(b, i))
                .and_then(|(uj, bi)| ex.mul(uj, bi))
                .and_then(|v| ex.mul(v, t));
            f4.push(w);
        }
    }
    let x4 = ex.query("a4", f4, oracle)?;
    let a4 = ex.mul(t, x4).expect("verified");
    ex.trace.push(TraceStep::Choose { label: "a4".into(), values: vec![a4] });

    check_node!(ex, "node2", Some(a3), Some(a4));

    // G = k^3 a_1 + k^2 a_2 + k a_3 + a_4 = k·B + k·a_3 + a_4
    let g_elem = ex
        .smul(k, b)
        .and_then(|kb| ex.smul(k, a3).and_then(|ka3| ex.add(kb, ka3)))
        .and_then(|s| ex.add(s, a4))
        .ok_or_else(|| undefined("k*B + k*a3 + a4"))?;

    // a_5: a_5, a_4^j a_5, G^i a_5, (B+a_3)^i a_5, ((B+a_3)^i a_4)^j (B+a_3)^i a_5 ∈ C0
    let mut f5 = vec![Some(t)];
    for j in 1..=l {
        f5.push(ex.pow(a4, j).and_then(|p| ex.mul(p, t)));
    }
    for i in 1..=l {
        f5.push(ex.pow(g_elem, i).and_then(|p| ex.mul(p, t)));
        f5.push(ex.pow(ba3, i).and_then(|p| ex.mul(p, t)));
        for j in 1..=l {
            let u = ex.pow(ba3, i).and_then(|p| ex.mul(p, a4));
            let w = u
                .and_then(|u| ex.pow(u, j)).zip(ex.pow(ba3, i))
                .and_then(|(uj, p)| ex.mul(uj, p))
                .and_then(|v| ex.mul(v, t));
            f5.push(w);
        }
    }
    let x5 = ex.query("a5", f5, oracle)?;
    let a5 = ex.mul(t, x5).expect("verified");
    ex.trace.push(TraceStep::Choose { label: "a5".into(), values: vec![a5] });

    // remaining nodes in the case-analysis order
    check_node!(ex, "node3", Some(a4), Some(a5));
    for i in 1..=l {
        let bi = ex.pow(b, i);
        check_node!(
            ex,
            &format!("node4.{i}"),
            bi.and_then(|p| ex.mul(p, a3)),
            bi.and_then(|p| ex.mul(p, a4))
        );
    }
    check_node!(
        ex,
        "node5",
        Some(b),
        ex.smul(k, a3).and_then(|p| ex.add(p, a4))
    );
    check_node!(ex, "node6", Some(ba3), Some(a4));
    check_node!(ex, "node7", Some(g_elem), Some(a5));
    check_node!(
        ex,
        "node8",
        Some(ba3),
        ex.smul(k, a4).and_then(|p| ex.add(p, a5))
    );
    for i in 1..=l {
        let p = ex.pow(ba3, i);
        check_node!(
            ex,
            &format!("node9.{i}"),
            p.and_then(|q| ex.mul(q, a4)),
            p.and_then(|q| ex.mul(q, a5))
        );
    }

    // the literal chain is not airtight for k >= 2; fall back to a bounded
    // canonical scan before conceding exhaustion
    ex.trace.push(TraceStep::Note { text: "fallback-scan".into() });
    fallback_scan(ex, budget)
}

fn fallback_scan(
    ex: &mut Executor<'_>,
    budget: &Budget,
) -> Result<BowenSuccess, ConstructFailure> {
    let n = ex.g.carrier_size();
    let mut tried = 0u64;
    for x in 0..n {
        for y in 0..n {
            tried += 1;
            if tried > budget.max_candidates {
                ex.trace.push(TraceStep::Note {
                    text: format!("fallback stopped after {} pairs", tried - 1),
                });
                return Err(ConstructFailure {
                    kind: FailKind::ScanExhausted,
                    detail: format!("scan budget exhausted after {} pairs", tried - 1),
                });
            }
            if let StepOutcome::Hit(success) = scan_pair(ex, x, y) {
                ex.trace.push(TraceStep::Node {
                    label: "fallback".into(),
                    status: NodeStatus::Mono {
                        color: success.color,
                    },
                });
                return Ok(success);
            }
        }
    }
    ex.trace.push(TraceStep::Note {
        text: format!("fallback scanned all {} pairs", tried),
    });
    Err(ConstructFailure {
        kind: FailKind::ScanExhausted,
        detail: "no within-window monochromatic pattern".into(),
    })
}

/// Quiet pair check used by the fallback (no per-pair trace steps).
fn scan_pair(ex: &Executor<'_>, x: Elem, y: Elem) -> StepOutcome {
    let mut values = vec![
        Some(x),
        Some(y),
        scalar_multiple(ex.g, x, ex.k as u64).and_then(|kx| ex.add(kx, y)),
    ];
    for j in 1..=ex.l {
        values.push(ex.pow(x, j).and_then(|xj| ex.mul(xj, y)));
    }
    let mut resolved = Vec::with_capacity(values.len());
    for v in values {
        match v {
            Some(v) => resolved.push(v),
            None => return StepOutcome::Miss,
        }
    }
    let first = ex.coloring.color(resolved[0]);
    if resolved.iter().all(|&v| ex.coloring.color(v) == first) {
        StepOutcome::Hit(BowenSuccess {
            color: first,
            x,
            y,
            values: resolved,
            node: "fallback".into(),
        })
    } else {
        StepOutcome::Miss
    }
}
