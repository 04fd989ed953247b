//! Exhaustive axiom validation: associativity, commutativity of `+`, and
//! both distributive laws. Triples with an undefined subterm are skipped and
//! counted rather than treated as violations.

use super::{GroundStructure, OpKind};
use crate::Elem;

/// Outcome of scanning one axiom.
#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub holds: bool,
    /// First violating tuple in scan order (a triple, or a pair for
    /// commutativity).
    pub witness: Option<Vec<Elem>>,
    /// Tuples where every subterm was defined.
    pub checked: u64,
    /// Tuples skipped because a subterm fell outside the window.
    pub skipped: u64,
    /// True when the scan stopped at the triple cap before covering all tuples.
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub add_associative: Option<AxiomCheck>,
    pub mul_associative: Option<AxiomCheck>,
    pub add_commutative: Option<AxiomCheck>,
    pub left_distributive: Option<AxiomCheck>,
    pub right_distributive: Option<AxiomCheck>,
}

impl AxiomReport {
    /// True when every reported axiom holds on all defined tuples.
    pub fn all_hold(&self) -> bool {
        [
            &self.add_associative,
            &self.mul_associative,
            &self.add_commutative,
            &self.left_distributive,
            &self.right_distributive,
        ]
        .into_iter()
        .flatten()
        .all(|c| c.holds)
    }

    pub fn to_text(&self, g: &GroundStructure) -> String {
        let mut out = String::from("axiom report\n");
        let mut line = |name: &str, check: &Option<AxiomCheck>| {
            let Some(c) = check else { return };
            out.push_str(&format!(
                "{name}: {}{} (checked={} skipped={})\n",
                if c.holds { "pass" } else { "FAIL" },
                match &c.witness {
                    Some(w) => format!(
                        " witness=({})",
                        w.iter()
                            .map(|&e| g.element_name(e))
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                    None => String::new(),
                },
                c.checked,
                c.skipped,
            ));
            if c.truncated {
                out.push_str("  (scan truncated by budget)\n");
            }
        };
        line("add associative", &self.add_associative);
        line("mul associative", &self.mul_associative);
        line("add commutative", &self.add_commutative);
        line("left distributive", &self.left_distributive);
        line("right distributive", &self.right_distributive);
        out
    }
}

pub(super) fn validate(g: &GroundStructure, max_triples: u64) -> AxiomReport {
    let both = g.has_op(OpKind::Add) && g.has_op(OpKind::Mul);
    AxiomReport {
        add_associative: g
            .has_op(OpKind::Add)
            .then(|| associativity(g, OpKind::Add, max_triples)),
        mul_associative: g
            .has_op(OpKind::Mul)
            .then(|| associativity(g, OpKind::Mul, max_triples)),
        add_commutative: g
            .has_op(OpKind::Add)
            .then(|| commutativity(g, max_triples)),
        left_distributive: both.then(|| distributivity(g, true, max_triples)),
        right_distributive: both.then(|| distributivity(g, false, max_triples)),
    }
}

fn associativity(g: &GroundStructure, op: OpKind, max: u64) -> AxiomCheck {
    let n = g.carrier_size();
    let mut c = AxiomCheck {
        holds: true,
        witness: None,
        checked: 0,
        skipped: 0,
        truncated: false,
    };
    let mut seen = 0u64;
    for a in 0..n {
        for b in 0..n {
            let ab = g.apply(op, a, b);
            for x in 0..n {
                seen += 1;
                if seen > max {
                    c.truncated = true;
                    return c;
                }
                let lhs = ab.and_then(|ab| g.apply(op, ab, x));
                let rhs = g.apply(op, b, x).and_then(|bx| g.apply(op, a, bx));
                match (lhs, rhs) {
                    (Some(l), Some(r)) => {
                        c.checked += 1;
                        if l != r {
                            c.holds = false;
                            c.witness = Some(vec![a, b, x]);
                            return c;
                        }
                    }
                    _ => c.skipped += 1,
                }
            }
        }
    }
    c
}

fn commutativity(g: &GroundStructure, max: u64) -> AxiomCheck {
    let n = g.carrier_size();
    let mut c = AxiomCheck {
        holds: true,
        witness: None,
        checked: 0,
        skipped: 0,
        truncated: false,
    };
    let mut seen = 0u64;
    for a in 0..n {
        for b in 0..n {
            seen += 1;
            if seen > max {
                c.truncated = true;
                return c;
            }
            match (g.apply(OpKind::Add, a, b), g.apply(OpKind::Add, b, a)) {
                (Some(l), Some(r)) => {
                    c.checked += 1;
                    if l != r {
                        c.holds = false;
                        c.witness = Some(vec![a, b]);
                        return c;
                    }
                }
                // one side defined without the other is itself a failure of
                // commutativity on a windowed structure only if values differ;
                // treat mixed definedness as skipped
                (None, None) => c.skipped += 1,
                _ => c.skipped += 1,
            }
        }
    }
    c
}

fn distributivity(g: &GroundStructure, left: bool, max: u64) -> AxiomCheck {
    let n = g.carrier_size();
    let mut c = AxiomCheck {
        holds: true,
        witness: None,
        checked: 0,
        skipped: 0,
        truncated: false,
    };
    let mut seen = 0u64;
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                seen += 1;
                if seen > max {
                    c.truncated = true;
                    return c;
                }
                // left:  a*(b+x) = a*b + a*x
                // right: (b+x)*a = b*a + x*a
                let (lhs, rhs) = if left {
                    (
                        g.apply(OpKind::Add, b, x)
                            .and_then(|s| g.apply(OpKind::Mul, a, s)),
                        g.apply(OpKind::Mul, a, b).and_then(|p| {
                            g.apply(OpKind::Mul, a, x)
                                .and_then(|q| g.apply(OpKind::Add, p, q))
                        }),
                    )
                } else {
                    (
                        g.apply(OpKind::Add, b, x)
                            .and_then(|s| g.apply(OpKind::Mul, s, a)),
                        g.apply(OpKind::Mul, b, a).and_then(|p| {
                            g.apply(OpKind::Mul, x, a)
                                .and_then(|q| g.apply(OpKind::Add, p, q))
                        }),
                    )
                };
                match (lhs, rhs) {
                    (Some(l), Some(r)) => {
                        c.checked += 1;
                        if l != r {
                            c.holds = false;
                            c.witness = Some(vec![a, b, x]);
                            return c;
                        }
                    }
                    _ => c.skipped += 1,
                }
            }
        }
    }
    c
}
