//! CNF export: avoiding k-colorings as satisfying assignments.
//!
//! For two colors each element gets a single variable (true = color 1) and
//! each instance contributes one all-positive and one all-negative clause.
//! For more colors a one-hot encoding with exactly-one constraints is used.
//! Either way the formula is UNSAT exactly when no avoiding coloring exists.

use crate::algebra::GroundStructure;
use crate::patterns::{Coloring, ExpandedPattern};

use super::instances::enumerate_instances;
use super::{SearchError, MAX_COLORS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnfEncoding {
    /// k = 2: variable `e+1` true means element `e` has color 1.
    Binary,
    /// variable `e*k + c + 1` true means element `e` has color `c`.
    OneHot { k: u32 },
}

#[derive(Debug, Clone)]
pub struct CnfDocument {
    pub variable_count: usize,
    pub clauses: Vec<Vec<i64>>,
    pub encoding: CnfEncoding,
    pub elements: usize,
}

/// Encodes "some instance of `pat` is monochromatic is forbidden" over
/// k-colorings of the carrier.
pub fn export_cnf(
    g: &GroundStructure,
    pat: &ExpandedPattern,
    k: u32,
    enumeration_cap: u64,
) -> Result<CnfDocument, SearchError> {
    if k == 0 {
        return Err(SearchError::NoColors);
    }
    if k > MAX_COLORS {
        return Err(SearchError::TooManyColors(k));
    }
    let n = g.carrier_size();
    let set = enumerate_instances(g, pat, enumeration_cap)?;
    let mut clauses = Vec::new();
    let encoding = if k == 2 {
        for inst in &set.instances {
            clauses.push(inst.iter().map(|&e| e as i64 + 1).collect());
            clauses.push(inst.iter().map(|&e| -(e as i64 + 1)).collect());
        }
        CnfEncoding::Binary
    } else {
        let var = |e: usize, c: u32| (e as i64) * k as i64 + c as i64 + 1;
        for e in 0..n {
            clauses.push((0..k).map(|c| var(e, c)).collect());
            for c in 0..k {
                for c2 in c + 1..k {
                    clauses.push(vec![-var(e, c), -var(e, c2)]);
                }
            }
        }
        for inst in &set.instances {
            for c in 0..k {
                clauses.push(inst.iter().map(|&e| -var(e, c)).collect());
            }
        }
        CnfEncoding::OneHot { k }
    };
    let variable_count = match encoding {
        CnfEncoding::Binary => n,
        CnfEncoding::OneHot { k } => n * k as usize,
    };
    Ok(CnfDocument {
        variable_count,
        clauses,
        encoding,
        elements: n,
    })
}

impl CnfDocument {
    /// Standard DIMACS text: `p cnf V C` then zero-terminated clauses.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// Sidecar mapping: one `element color variable` line per pair. For the
    /// binary encoding only color 1 is listed; a false variable means color 0.
    pub fn mapping_text(&self) -> String {
        let mut out = String::from("cnf-map v1\n");
        match self.encoding {
            CnfEncoding::Binary => {
                out.push_str(&format!("encoding: binary\nelements: {}\ncolors: 2\n", self.elements));
                out.push_str("# variable true => color 1, false => color 0\n");
                for e in 0..self.elements {
                    out.push_str(&format!("{e} 1 {}\n", e + 1));
                }
            }
            CnfEncoding::OneHot { k } => {
                out.push_str(&format!(
                    "encoding: onehot\nelements: {}\ncolors: {k}\n",
                    self.elements
                ));
                for e in 0..self.elements {
                    for c in 0..k {
                        out.push_str(&format!("{e} {c} {}\n", e as u64 * k as u64 + c as u64 + 1));
                    }
                }
            }
        }
        out
    }

    /// True when `assignment` (indexed by variable, 0-based) satisfies every
    /// clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let v = lit.unsigned_abs() as usize - 1;
                if lit > 0 {
                    assignment[v]
                } else {
                    !assignment[v]
                }
            })
        })
    }

    /// Recovers the coloring a satisfying assignment encodes.
    pub fn decode(&self, assignment: &[bool]) -> Result<Coloring, SearchError> {
        if assignment.len() != self.variable_count {
            return Err(SearchError::BadModel(format!(
                "assignment covers {} variables, formula has {}",
                assignment.len(),
                self.variable_count
            )));
        }
        match self.encoding {
            CnfEncoding::Binary => {
                let colors = assignment.iter().map(|&b| b as u32).collect();
                Ok(Coloring::new(colors, 2).expect("binary colors"))
            }
            CnfEncoding::OneHot { k } => {
                let mut colors = Vec::with_capacity(self.elements);
                for e in 0..self.elements {
                    let mut chosen = None;
                    for c in 0..k {
                        if assignment[e * k as usize + c as usize] {
                            if chosen.is_some() {
                                return Err(SearchError::BadModel(format!(
                                    "element {e} has two colors"
                                )));
                            }
                            chosen = Some(c);
                        }
                    }
                    colors.push(chosen.ok_or_else(|| {
                        SearchError::BadModel(format!("element {e} has no color"))
                    })?);
                }
                Ok(Coloring::new(colors, k).expect("onehot colors"))
            }
        }
    }
}
