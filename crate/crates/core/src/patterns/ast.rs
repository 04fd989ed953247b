//! Pattern ASTs: raw families with binders, and ground terms after
//! instantiation.

use std::collections::BTreeMap;
use std::fmt;

use super::PatternError;

/// An integer position that is either a literal or a reference to a binder
/// index (in terms) or an external parameter (in binder bounds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntRef {
    Lit(u32),
    Name(String),
}

/// A term that may still reference binder indices in its exponents and
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermExpr {
    Var(usize),
    Sum(Vec<TermExpr>),
    Product(Vec<TermExpr>),
    Power(Box<TermExpr>, IntRef),
    Coeff(IntRef, Box<TermExpr>),
}

/// `name in lo..hi`; `hi` may reference an external parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinderDef {
    pub name: String,
    pub lo: u32,
    pub hi: IntRef,
}

/// A parsed pattern family. Variables are implicit, collected in first
/// appearance order; the distinctness constraint defaults to on.
#[derive(Debug, Clone)]
pub struct PatternFamily {
    pub source: String,
    pub variables: Vec<String>,
    pub binders: Vec<BinderDef>,
    pub terms: Vec<TermExpr>,
    pub distinct: bool,
    /// Smallest canonical index a variable value may take; approximates
    /// "arbitrarily large" witnesses inside a window.
    pub min_element: Option<usize>,
}

/// A binder-free term over variable slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(usize),
    Sum(Vec<PatternTerm>),
    Product(Vec<PatternTerm>),
    Power(Box<PatternTerm>, u32),
    Coeff(u32, Box<PatternTerm>),
}

/// A family instantiated at concrete binder values: plain ground terms.
#[derive(Debug, Clone)]
pub struct ExpandedPattern {
    pub variables: Vec<String>,
    pub terms: Vec<PatternTerm>,
    pub distinct: bool,
    pub min_element: Option<usize>,
}

impl PatternFamily {
    /// True when no binder or parameter is referenced anywhere.
    pub fn is_ground(&self) -> bool {
        self.binders.is_empty()
    }

    /// Instantiates every binder over its range, expanding each term that
    /// references binders into one ground term per index combination.
    pub fn expand(&self, params: &BTreeMap<String, u32>) -> Result<ExpandedPattern, PatternError> {
        let mut ranges = Vec::new();
        for b in &self.binders {
            let hi = match &b.hi {
                IntRef::Lit(v) => *v,
                IntRef::Name(p) => *params
                    .get(p)
                    .ok_or_else(|| PatternError::MissingParam { name: p.clone() })?,
            };
            if hi < b.lo {
                return Err(PatternError::EmptyBinderRange {
                    name: b.name.clone(),
                    lo: b.lo,
                    hi,
                });
            }
            ranges.push((b.name.clone(), b.lo, hi));
        }
        let mut terms = Vec::new();
        for term in &self.terms {
            let mut used: Vec<usize> = Vec::new();
            collect_binder_refs(term, &ranges, &mut used);
            if used.is_empty() {
                terms.push(ground(term, &BTreeMap::new()));
                continue;
            }
            // iterate the referenced binders in declaration order, last
            // one fastest
            let mut values: Vec<u32> = used.iter().map(|&i| ranges[i].1).collect();
            'grid: loop {
                let env: BTreeMap<String, u32> = used
                    .iter()
                    .zip(&values)
                    .map(|(&i, &v)| (ranges[i].0.clone(), v))
                    .collect();
                terms.push(ground(term, &env));
                let mut pos = values.len();
                while pos > 0 {
                    pos -= 1;
                    if values[pos] < ranges[used[pos]].2 {
                        values[pos] += 1;
                        continue 'grid;
                    }
                    values[pos] = ranges[used[pos]].1;
                }
                break;
            }
        }
        Ok(ExpandedPattern {
            variables: self.variables.clone(),
            terms,
            distinct: self.distinct,
            min_element: self.min_element,
        })
    }
}

fn collect_binder_refs(
    term: &TermExpr,
    ranges: &[(String, u32, u32)],
    used: &mut Vec<usize>,
) {
    let note = |name: &str, used: &mut Vec<usize>| {
        if let Some(i) = ranges.iter().position(|(n, _, _)| n == name) {
            if !used.contains(&i) {
                used.push(i);
                used.sort_unstable();
            }
        }
    };
    match term {
        TermExpr::Var(_) => {}
        TermExpr::Sum(ts) | TermExpr::Product(ts) => {
            for t in ts {
                collect_binder_refs(t, ranges, used);
            }
        }
        TermExpr::Power(t, e) => {
            if let IntRef::Name(n) = e {
                note(n, used);
            }
            collect_binder_refs(t, ranges, used);
        }
        TermExpr::Coeff(c, t) => {
            if let IntRef::Name(n) = c {
                note(n, used);
            }
            collect_binder_refs(t, ranges, used);
        }
    }
}

fn ground(term: &TermExpr, env: &BTreeMap<String, u32>) -> PatternTerm {
    let resolve = |r: &IntRef| -> u32 {
        match r {
            IntRef::Lit(v) => *v,
            IntRef::Name(n) => *env.get(n).expect("binder refs collected beforehand"),
        }
    };
    match term {
        TermExpr::Var(i) => PatternTerm::Var(*i),
        TermExpr::Sum(ts) => PatternTerm::Sum(ts.iter().map(|t| ground(t, env)).collect()),
        TermExpr::Product(ts) => PatternTerm::Product(ts.iter().map(|t| ground(t, env)).collect()),
        TermExpr::Power(t, e) => PatternTerm::Power(Box::new(ground(t, env)), resolve(e)),
        TermExpr::Coeff(c, t) => PatternTerm::Coeff(resolve(c), Box::new(ground(t, env))),
    }
}

impl PatternTerm {
    /// Renders the term against variable names, e.g. `x+2y` or `x^2*y`.
    pub fn render(&self, variables: &[String]) -> String {
        match self {
            PatternTerm::Var(i) => variables[*i].clone(),
            PatternTerm::Sum(ts) => ts
                .iter()
                .map(|t| t.render(variables))
                .collect::<Vec<_>>()
                .join("+"),
            PatternTerm::Product(ts) => ts
                .iter()
                .map(|t| match t {
                    PatternTerm::Sum(_) => format!("({})", t.render(variables)),
                    _ => t.render(variables),
                })
                .collect::<Vec<_>>()
                .join("*"),
            PatternTerm::Power(t, e) => match **t {
                PatternTerm::Var(_) => format!("{}^{e}", t.render(variables)),
                _ => format!("({})^{e}", t.render(variables)),
            },
            PatternTerm::Coeff(c, t) => match **t {
                PatternTerm::Var(_) => format!("{c}{}", t.render(variables)),
                _ => format!("{c}({})", t.render(variables)),
            },
        }
    }
}

impl fmt::Display for ExpandedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", t.render(&self.variables))?;
        }
        write!(f, "}}")
    }
}
