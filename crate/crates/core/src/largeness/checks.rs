//! Thick, syndetic, and piecewise syndetic checkers.

use std::collections::HashMap;

use super::{Budget, LargenessReport, Meter, Property, Verdict, Witness};
use crate::algebra::{GroundStructure, OpKind};
use crate::mask::SubsetMask;
use crate::Elem;

/// Advances `combo` to the next k-combination of `0..n` in lexicographic
/// order; false when exhausted.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub(crate) struct PreimageCache<'g> {
    g: &'g GroundStructure,
    op: OpKind,
    a: &'g SubsetMask,
    map: HashMap<Elem, SubsetMask>,
}

impl<'g> PreimageCache<'g> {
    pub fn new(g: &'g GroundStructure, op: OpKind, a: &'g SubsetMask) -> Self {
        PreimageCache {
            g,
            op,
            a,
            map: HashMap::new(),
        }
    }

    pub fn get(&mut self, s: Elem) -> &SubsetMask {
        let (g, op, a) = (self.g, self.op, self.a);
        self.map.entry(s).or_insert_with(|| g.preimage(op, s, a))
    }
}

/// Least `x` with `{s∘x : s ∈ S} ⊆ a`, on a total operation.
fn total_thick_witness(g: &GroundStructure, op: OpKind, a: &SubsetMask) -> Option<Elem> {
    let n = g.carrier_size();
    (0..n).find(|&x| (0..n).all(|s| a.contains(g.apply(op, s, x).expect("total op"))))
}

/// Thickness: `∀F ∈ P_f(S) ∃x: F∘x ⊆ A`.
///
/// With a total operation the family `F = S` dominates every finite family,
/// so the check collapses to one exact scan. On a windowed structure,
/// families are enumerated in (size, lex) order up to
/// `budget.max_family_size`; a family refutes only if every translate of it
/// is fully defined and escapes `A`, so window verdicts can only be a
/// within-window `Yes`, a refuted `No`, or `Inconclusive`.
pub fn is_thick(
    g: &GroundStructure,
    a: &SubsetMask,
    op: OpKind,
    budget: &Budget,
) -> LargenessReport {
    g.require_op(op).expect("operation present");
    assert_eq!(a.len(), g.carrier_size());
    let mut meter = Meter::new(budget);
    let (verdict, witness) = thick_inner(g, a, op, budget, &mut meter);
    LargenessReport {
        property: Property::Thick,
        operation: op,
        verdict,
        witness,
        budget_used: meter.use_,
        window_relative: !g.op_is_total(op),
    }
}

pub(crate) fn thick_inner(
    g: &GroundStructure,
    a: &SubsetMask,
    op: OpKind,
    budget: &Budget,
    meter: &mut Meter,
) -> (Verdict, Witness) {
    let n = g.carrier_size();
    if n == 0 {
        return (Verdict::Yes, Witness::None);
    }
    if g.op_is_total(op) {
        meter.use_.candidates = meter.use_.candidates.saturating_add(n as u64);
        meter.use_.families_tested += 1;
        return match total_thick_witness(g, op, a) {
            Some(x) => (Verdict::Yes, Witness::Translate(x)),
            None => (Verdict::No, Witness::CounterexampleFamily((0..n).collect())),
        };
    }

    // Windowed: enumerate families in (size, lex) order.
    let mut saw_inconclusive_family = false;
    let mut best: Option<(Vec<Elem>, Elem)> = None;
    for size in 1..=budget.max_family_size.min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            meter.use_.families_tested += 1;
            let mut witnessed: Option<Elem> = None;
            let mut all_x_defined_and_failing = true;
            for x in 0..n {
                if !meter.tick() {
                    return (Verdict::Inconclusive, Witness::None);
                }
                let mut defined = true;
                let mut inside = true;
                for &f in combo.iter() {
                    match g.apply(op, f, x) {
                        Some(r) => {
                            if !a.contains(r) {
                                inside = false;
                            }
                        }
                        None => {
                            defined = false;
                            break;
                        }
                    }
                }
                if !defined {
                    meter.skip();
                    all_x_defined_and_failing = false;
                    continue;
                }
                if inside {
                    witnessed = Some(x);
                    break;
                }
            }
            match witnessed {
                Some(x) => {
                    // remember the hardest family we certified
                    best = Some((combo.clone(), x));
                }
                None => {
                    if all_x_defined_and_failing {
                        return (Verdict::No, Witness::CounterexampleFamily(combo.clone()));
                    }
                    saw_inconclusive_family = true;
                }
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    if saw_inconclusive_family {
        return (Verdict::Inconclusive, Witness::None);
    }
    match best {
        Some((family, translate)) => (Verdict::Yes, Witness::FamilyTranslate { family, translate }),
        None => (Verdict::Inconclusive, Witness::None),
    }
}

/// Syndeticity: `∃F ∈ P_f(S): S = ⋃_{s∈F} s⁻¹∘A`.
///
/// Searches covers in (cardinality, lexicographic) order up to
/// `max_witness`, so a `Yes` carries the canonical minimal cover. When the
/// union over every `s ∈ S` already misses some element the verdict is an
/// exact `No`; a cover that exists but exceeds `max_witness` or the budget
/// yields `Inconclusive`.
pub fn is_syndetic(
    g: &GroundStructure,
    a: &SubsetMask,
    op: OpKind,
    max_witness: usize,
    budget: &Budget,
) -> LargenessReport {
    g.require_op(op).expect("operation present");
    assert!(max_witness >= 1);
    assert_eq!(a.len(), g.carrier_size());
    let n = g.carrier_size();
    let mut meter = Meter::new(budget);
    let mut cache = PreimageCache::new(g, op, a);

    // Full-union pretest: if even F = S fails to cover, nothing does.
    let mut uncovered: Option<Elem> = None;
    if (n as u64).saturating_mul(n as u64) <= budget.max_candidates {
        let mut u = SubsetMask::empty(n);
        for s in 0..n {
            meter.use_.candidates = meter.use_.candidates.saturating_add(n as u64);
            u.union_with(cache.get(s));
            if u.is_full() {
                break;
            }
        }
        if !u.is_full() {
            uncovered = u.complement().min();
        }
    }

    let mut verdict = Verdict::Inconclusive;
    let mut witness = Witness::None;
    if let Some(e) = uncovered {
        verdict = Verdict::No;
        witness = Witness::Uncovered(e);
    } else {
        'search: for size in 1..=max_witness.min(n) {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                if !meter.tick() {
                    break 'search;
                }
                let mut u = SubsetMask::empty(n);
                for &s in combo.iter() {
                    u.union_with(cache.get(s));
                }
                if u.is_full() {
                    verdict = Verdict::Yes;
                    witness = Witness::Cover(combo.clone());
                    break 'search;
                }
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        // With max_witness >= n and enough budget, the size-n combination is
        // the full union itself, so an Inconclusive here only remains when
        // the budget cut the search or the cap was below the cover size.
    }
    LargenessReport {
        property: Property::Syndetic,
        operation: op,
        verdict,
        witness,
        budget_used: meter.use_,
        window_relative: !g.op_is_total(op),
    }
}

/// Piecewise syndeticity: `∃F, |F| ≤ max_witness: ⋃_{s∈F} s⁻¹∘A is thick`.
///
/// Thickness of each union is delegated to [`is_thick`]'s engine with the
/// shared budget. Since thickness is monotone, the union over all of `S`
/// is tested first: if even that fails, no `F` can succeed.
pub fn is_piecewise_syndetic(
    g: &GroundStructure,
    a: &SubsetMask,
    op: OpKind,
    max_witness: usize,
    budget: &Budget,
) -> LargenessReport {
    g.require_op(op).expect("operation present");
    assert!(max_witness >= 1);
    assert_eq!(a.len(), g.carrier_size());
    let n = g.carrier_size();
    let mut meter = Meter::new(budget);
    let mut cache = PreimageCache::new(g, op, a);

    let mut verdict = Verdict::Inconclusive;
    let mut witness = Witness::None;
    let mut shortcut_no = false;

    if (n as u64).saturating_mul(n as u64) <= budget.max_candidates {
        let mut u = SubsetMask::empty(n);
        for s in 0..n {
            meter.use_.candidates = meter.use_.candidates.saturating_add(n as u64);
            u.union_with(cache.get(s));
        }
        if let (Verdict::No, _) = thick_inner(g, &u, op, budget, &mut meter) {
            verdict = Verdict::No;
            shortcut_no = true;
        }
    }

    if !shortcut_no {
        let mut saw_inconclusive = false;
        let mut budget_cut = false;
        'search: for size in 1..=max_witness.min(n) {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                if !meter.tick() {
                    budget_cut = true;
                    break 'search;
                }
                let mut u = SubsetMask::empty(n);
                for &s in combo.iter() {
                    u.union_with(cache.get(s));
                }
                match thick_inner(g, &u, op, budget, &mut meter) {
                    (Verdict::Yes, _) => {
                        verdict = Verdict::Yes;
                        witness = Witness::Cover(combo.clone());
                        break 'search;
                    }
                    (Verdict::No, _) => {}
                    (Verdict::Inconclusive, _) => saw_inconclusive = true,
                }
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        if verdict == Verdict::Inconclusive && !saw_inconclusive && !budget_cut {
            // every candidate F was refuted exactly
            verdict = Verdict::No;
        }
    }

    LargenessReport {
        property: Property::PiecewiseSyndetic,
        operation: op,
        verdict,
        witness,
        budget_used: meter.use_,
        window_relative: !g.op_is_total(op),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod6() -> GroundStructure {
        GroundStructure::zmod(6)
    }

    #[test]
    fn full_carrier_is_thick() {
        let g = zmod6();
        let r = is_thick(&g, &SubsetMask::full(6), OpKind::Add, &Budget::exhaustive());
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.witness, Witness::Translate(0));
        assert!(!r.window_relative);
    }

    #[test]
    fn evens_not_thick_in_zmod6_additive() {
        // S+x = S for every x, so no translate of S fits inside {0,2,4}
        let g = zmod6();
        let a = SubsetMask::from_indices(6, &[0, 2, 4]);
        let r = is_thick(&g, &a, OpKind::Add, &Budget::exhaustive());
        assert_eq!(r.verdict, Verdict::No);
    }

    #[test]
    fn windowed_thick_multiples_of_six() {
        // nat-window(30) mul, A = multiples of 6: the family {7} can be
        // neither witnessed (7x is never a multiple of 6 in window) nor
        // refuted (7x escapes the window for x >= 5), so no budget turns
        // this into a definite verdict
        let g = GroundStructure::nat_window(30);
        let a = SubsetMask::from_fn(30, |i| (i as u64 + 1).is_multiple_of(6));
        for budget in [
            Budget { max_candidates: 25, max_family_size: 2 },
            Budget { max_candidates: 1_000_000, max_family_size: 2 },
        ] {
            let r = is_thick(&g, &a, OpKind::Mul, &budget);
            assert!(r.window_relative);
            assert_eq!(r.verdict, Verdict::Inconclusive);
        }
    }

    #[test]
    fn windowed_thick_full_mask_certifies() {
        // multiplying by value 1 keeps every family inside the window, so a
        // completed enumeration reports a within-window yes
        let g = GroundStructure::nat_window(12);
        let full = SubsetMask::full(12);
        let r = is_thick(
            &g,
            &full,
            OpKind::Mul,
            &Budget { max_candidates: 100_000, max_family_size: 2 },
        );
        assert!(r.window_relative);
        assert_eq!(r.verdict, Verdict::Yes);
        match r.witness {
            Witness::FamilyTranslate { family, translate } => {
                for f in family {
                    let p = g.apply(OpKind::Mul, f, translate).unwrap();
                    assert!(full.contains(p));
                }
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn windowed_thick_can_refute_via_unit() {
        // multiplication by value 1 is everywhere defined, so F={1} refutes
        // thickness of the empty set on a window
        let g = GroundStructure::nat_window(10);
        let r = is_thick(&g, &SubsetMask::empty(10), OpKind::Mul, &Budget::default());
        assert_eq!(r.verdict, Verdict::No);
        assert_eq!(r.witness, Witness::CounterexampleFamily(vec![0]));
    }

    #[test]
    fn syndetic_evens_cover() {
        let g = zmod6();
        let a = SubsetMask::from_indices(6, &[0, 2, 4]);
        let r = is_syndetic(&g, &a, OpKind::Add, 6, &Budget::exhaustive());
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.witness, Witness::Cover(vec![0, 1]));
    }

    #[test]
    fn syndetic_trivial_cases() {
        let g = zmod6();
        let r = is_syndetic(&g, &SubsetMask::empty(6), OpKind::Add, 6, &Budget::exhaustive());
        assert_eq!(r.verdict, Verdict::No);
        assert!(matches!(r.witness, Witness::Uncovered(_)));

        let r = is_syndetic(&g, &SubsetMask::full(6), OpKind::Add, 6, &Budget::exhaustive());
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.witness, Witness::Cover(vec![0]));
    }

    #[test]
    fn pws_thick_set_needs_one_translate() {
        let g = zmod6();
        let full = SubsetMask::full(6);
        let r = is_piecewise_syndetic(&g, &full, OpKind::Add, 6, &Budget::exhaustive());
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.witness, Witness::Cover(vec![0]));
    }

    #[test]
    fn pws_singleton_needs_all_translates() {
        let g = zmod6();
        let a = SubsetMask::from_indices(6, &[0]);
        let r = is_piecewise_syndetic(&g, &a, OpKind::Add, 6, &Budget::exhaustive());
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.witness, Witness::Cover(vec![0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn pws_empty_set_is_no() {
        let g = zmod6();
        let r = is_piecewise_syndetic(
            &g,
            &SubsetMask::empty(6),
            OpKind::Add,
            6,
            &Budget::exhaustive(),
        );
        assert_eq!(r.verdict, Verdict::No);
    }

    #[test]
    fn combination_iterator_is_lexicographic() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
