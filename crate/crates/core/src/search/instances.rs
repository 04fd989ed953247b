//! Pattern instance pre-enumeration.
//!
//! An instance is the set of term values of one admissible assignment; two
//! assignments yielding the same value set constrain colorings identically,
//! so instances are deduplicated.

use std::collections::HashSet;

use crate::algebra::GroundStructure;
use crate::patterns::{eval_term, ExpandedPattern};
use crate::Elem;

use super::SearchError;

#[derive(Debug, Clone)]
pub struct InstanceSet {
    /// Sorted, deduplicated value sets in first-seen (canonical scan) order.
    pub instances: Vec<Vec<Elem>>,
    /// For each carrier element, the indices of the instances containing it.
    pub by_element: Vec<Vec<u32>>,
    /// Assignments scanned during enumeration.
    pub scanned: u64,
}

/// Enumerates every admissible assignment in canonical order, skipping those
/// with undefined terms, and collects the distinct value sets. `cap` bounds
/// the number of assignments scanned.
pub fn enumerate_instances(
    g: &GroundStructure,
    pat: &ExpandedPattern,
    cap: u64,
) -> Result<InstanceSet, SearchError> {
    let n = g.carrier_size();
    let vars = pat.variables.len();
    let mut set = InstanceSet {
        instances: Vec::new(),
        by_element: vec![Vec::new(); n],
        scanned: 0,
    };
    if n == 0 || vars == 0 {
        return Ok(set);
    }
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut assignment = vec![0usize; vars];
    'scan: loop {
        set.scanned += 1;
        if set.scanned > cap {
            return Err(SearchError::EnumerationBudget { scanned: set.scanned });
        }
        if admissible(pat, &assignment) {
            if let Some(values) = value_set(g, pat, &assignment) {
                if seen.insert(values.clone()) {
                    let idx = set.instances.len() as u32;
                    for &v in &values {
                        set.by_element[v].push(idx);
                    }
                    set.instances.push(values);
                }
            }
        }
        let mut pos = vars;
        while pos > 0 {
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < n {
                continue 'scan;
            }
            assignment[pos] = 0;
        }
        break;
    }
    Ok(set)
}

fn admissible(pat: &ExpandedPattern, assignment: &[Elem]) -> bool {
    if let Some(min) = pat.min_element {
        if assignment.iter().any(|&v| v < min) {
            return false;
        }
    }
    if pat.distinct {
        for i in 0..assignment.len() {
            for j in i + 1..assignment.len() {
                if assignment[i] == assignment[j] {
                    return false;
                }
            }
        }
    }
    true
}

fn value_set(
    g: &GroundStructure,
    pat: &ExpandedPattern,
    assignment: &[Elem],
) -> Option<Vec<Elem>> {
    let mut values = Vec::with_capacity(pat.terms.len());
    for term in &pat.terms {
        values.push(eval_term(g, term, assignment)?);
    }
    values.sort_unstable();
    values.dedup();
    Some(values)
}
