//! Ground-term evaluation. Coefficients mean repeated addition and powers
//! repeated multiplication, folded left-to-right; undefined propagates.

use super::ast::PatternTerm;
use crate::algebra::{GroundStructure, OpKind};
use crate::Elem;

pub fn eval_term(g: &GroundStructure, term: &PatternTerm, assignment: &[Elem]) -> Option<Elem> {
    match term {
        PatternTerm::Var(i) => Some(assignment[*i]),
        PatternTerm::Sum(ts) => fold(g, OpKind::Add, ts, assignment),
        PatternTerm::Product(ts) => fold(g, OpKind::Mul, ts, assignment),
        PatternTerm::Power(t, e) => {
            let v = eval_term(g, t, assignment)?;
            g.apply_repeat(OpKind::Mul, v, *e)
        }
        PatternTerm::Coeff(c, t) => {
            let v = eval_term(g, t, assignment)?;
            g.apply_repeat(OpKind::Add, v, *c)
        }
    }
}

fn fold(
    g: &GroundStructure,
    op: OpKind,
    ts: &[PatternTerm],
    assignment: &[Elem],
) -> Option<Elem> {
    let mut it = ts.iter();
    let mut acc = eval_term(g, it.next()?, assignment)?;
    for t in it {
        let v = eval_term(g, t, assignment)?;
        acc = g.apply(op, acc, v)?;
    }
    Some(acc)
}
