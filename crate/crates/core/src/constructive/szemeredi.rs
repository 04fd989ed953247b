//! Finite multidimensional intersection checker: do the finite sets `G`, `H`
//! satisfy the conclusion of the finite intersection lemma for every
//! k-partition of `H`?

use crate::algebra::{check_homomorphism, GroundStructure, Homomorphism, OpKind};
use crate::largeness::{Budget, LargenessError};
use crate::mask::SubsetMask;
use crate::Elem;

use super::ConstructiveError;

#[derive(Debug, Clone)]
pub struct SzemerediOutcome {
    pub holds: bool,
    /// For a failing check, the cell index of each element of `H` (in the
    /// deduplicated, sorted order of `h_elements`).
    pub failing_partition: Option<Vec<u32>>,
    pub h_elements: Vec<Elem>,
    pub partitions_checked: u64,
}

/// True iff for every k-partition `H = C_1 ∪ … ∪ C_k` there are `d ∈ G` and
/// a cell `C_j` with `⋂_i φ_i(d)⁻¹C_j ≠ ∅` (computed inside `R`). Requires
/// `k^|H|` to fit the budget.
#[allow(clippy::too_many_arguments)]
pub fn finite_szemeredi_check(
    g_s: &GroundStructure,
    g_r: &GroundStructure,
    g_set: &[Elem],
    h_set: &[Elem],
    homs: &[Homomorphism],
    k: u32,
    op: OpKind,
    budget: &Budget,
) -> Result<SzemerediOutcome, ConstructiveError> {
    if k < 1 {
        return Err(ConstructiveError::Precondition("k must be >= 1".into()));
    }
    g_r.require_op(op).map_err(LargenessError::from)?;
    for h in homs {
        let check = check_homomorphism(h, g_s, g_r)?;
        if !check.ok {
            return Err(ConstructiveError::Precondition(format!(
                "map is not a homomorphism: counterexample {:?}",
                check.counterexample
            )));
        }
    }
    let mut h_elements: Vec<Elem> = h_set.to_vec();
    h_elements.sort_unstable();
    h_elements.dedup();
    if let Some(&bad) = h_elements.iter().find(|&&e| e >= g_r.carrier_size()) {
        return Err(ConstructiveError::Precondition(format!(
            "H element {bad} outside the target carrier"
        )));
    }
    if let Some(&bad) = g_set.iter().find(|&&e| e >= g_s.carrier_size()) {
        return Err(ConstructiveError::Precondition(format!(
            "G element {bad} outside the source carrier"
        )));
    }

    let partitions = (k as u64)
        .checked_pow(h_elements.len() as u32)
        .filter(|&p| p <= budget.max_candidates)
        .ok_or_else(|| {
            ConstructiveError::TooLarge(format!(
                "{k}^{} partitions exceed the budget",
                h_elements.len()
            ))
        })?;

    let mut outcome = SzemerediOutcome {
        holds: true,
        failing_partition: None,
        h_elements: h_elements.clone(),
        partitions_checked: 0,
    };
    let mut cells = vec![0u32; h_elements.len()];
    let n_r = g_r.carrier_size();
    for _ in 0..partitions {
        outcome.partitions_checked += 1;
        // cell masks over R
        let mut cell_masks = vec![SubsetMask::empty(n_r); k as usize];
        for (pos, &h) in h_elements.iter().enumerate() {
            cell_masks[cells[pos] as usize].insert(h);
        }
        let mut satisfied = false;
        'dj: for &d in g_set {
            for mask in &cell_masks {
                if mask.is_empty() {
                    continue;
                }
                let mut inter = SubsetMask::full(n_r);
                for h in homs {
                    inter.intersect_with(&g_r.preimage(op, h.apply(d), mask));
                }
                if !inter.is_empty() {
                    satisfied = true;
                    break 'dj;
                }
            }
        }
        if !satisfied {
            outcome.holds = false;
            outcome.failing_partition = Some(cells.clone());
            return Ok(outcome);
        }
        // next partition
        let mut pos = cells.len();
        let mut rolled = true;
        while pos > 0 {
            pos -= 1;
            cells[pos] += 1;
            if cells[pos] < k {
                rolled = false;
                break;
            }
            cells[pos] = 0;
        }
        if rolled {
            break;
        }
    }
    Ok(outcome)
}
