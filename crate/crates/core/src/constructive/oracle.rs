//! Thickness oracles: witness sources for "give x with F∘x ⊆ A".

use std::collections::VecDeque;

use crate::algebra::{GroundStructure, OpKind};
use crate::mask::SubsetMask;
use crate::Elem;

/// A query interface for thickness: given a finite family `F`, produce `x`
/// with every `f∘x` defined and inside `target`, or report exhaustion.
/// Executors re-verify every answer, so an oracle cannot smuggle in a false
/// witness.
pub trait ThickOracle {
    fn find_translate(
        &mut self,
        g: &GroundStructure,
        op: OpKind,
        family: &[Elem],
        target: &SubsetMask,
    ) -> Option<Elem>;
}

/// Scans the carrier in canonical order; exact within the window.
#[derive(Debug, Default)]
pub struct BruteForceOracle;

impl ThickOracle for BruteForceOracle {
    fn find_translate(
        &mut self,
        g: &GroundStructure,
        op: OpKind,
        family: &[Elem],
        target: &SubsetMask,
    ) -> Option<Elem> {
        (0..g.carrier_size()).find(|&x| {
            family.iter().all(|&f| {
                g.apply(op, f, x)
                    .map(|r| target.contains(r))
                    .unwrap_or(false)
            })
        })
    }
}

/// Replays recorded oracle exchanges in order. A query that does not match
/// the next recorded family returns exhaustion, which the trace comparison
/// then reports as a divergence.
#[derive(Debug)]
pub struct ScriptedOracle {
    script: VecDeque<(Vec<Elem>, Option<Elem>)>,
}

impl ScriptedOracle {
    pub fn new(steps: Vec<(Vec<Elem>, Option<Elem>)>) -> Self {
        ScriptedOracle {
            script: steps.into(),
        }
    }
}

impl ThickOracle for ScriptedOracle {
    fn find_translate(
        &mut self,
        _g: &GroundStructure,
        _op: OpKind,
        family: &[Elem],
        _target: &SubsetMask,
    ) -> Option<Elem> {
        match self.script.pop_front() {
            Some((recorded, answer)) if recorded == family => answer,
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_finds_least() {
        let g = GroundStructure::zmod(6);
        let evens = SubsetMask::from_indices(6, &[0, 2, 4]);
        let mut oracle = BruteForceOracle;
        // 2x and 4x are even for every x, least translate is 0
        let x = oracle.find_translate(&g, OpKind::Mul, &[2, 4], &evens);
        assert_eq!(x, Some(0));
        // 1x in evens forces x even, least is 0; for target {2} least is 2
        let just_two = SubsetMask::from_indices(6, &[2]);
        assert_eq!(oracle.find_translate(&g, OpKind::Mul, &[1], &just_two), Some(2));
        assert_eq!(
            oracle.find_translate(&g, OpKind::Add, &[0, 1], &just_two),
            None
        );
    }

    #[test]
    fn scripted_replays_in_order() {
        let g = GroundStructure::zmod(4);
        let full = SubsetMask::full(4);
        let mut oracle = ScriptedOracle::new(vec![(vec![1], Some(3)), (vec![2], None)]);
        assert_eq!(oracle.find_translate(&g, OpKind::Mul, &[1], &full), Some(3));
        assert_eq!(oracle.find_translate(&g, OpKind::Mul, &[2], &full), None);
        // script exhausted
        assert_eq!(oracle.find_translate(&g, OpKind::Mul, &[1], &full), None);
    }
}
