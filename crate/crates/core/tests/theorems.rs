//! Structure-level tests for largeness facts: implications among the
//! notions, partition regularity, behavior under homomorphic images, the
//! additive/multiplicative bridge, and the agreement of the two piecewise
//! syndeticity characterizations on commutative structures.

use partreg::algebra::{check_homomorphism, GroundStructure, HomOps, Homomorphism, OpKind};
use partreg::catalog;
use partreg::largeness::{
    is_ipr, is_piecewise_syndetic, is_syndetic, is_thick, Budget, Verdict,
};
use partreg::SubsetMask;

fn pws(g: &GroundStructure, a: &SubsetMask, op: OpKind) -> bool {
    is_piecewise_syndetic(g, a, op, g.carrier_size(), &Budget::exhaustive()).verdict
        == Verdict::Yes
}

fn all_masks(n: usize) -> impl Iterator<Item = SubsetMask> {
    (0u32..1 << n).map(move |bits| SubsetMask::from_fn(n, move |i| bits >> i & 1 == 1))
}

/// Ordered decompositions A = A1 ∪ A2 (elements may go to either or both).
fn decompositions(a: &SubsetMask) -> Vec<(SubsetMask, SubsetMask)> {
    let members: Vec<usize> = a.iter().collect();
    let mut out = Vec::new();
    let mut sides = vec![0u8; members.len()];
    loop {
        let mut a1 = SubsetMask::empty(a.len());
        let mut a2 = SubsetMask::empty(a.len());
        for (pos, &e) in members.iter().enumerate() {
            match sides[pos] {
                0 => a1.insert(e),
                1 => a2.insert(e),
                _ => {
                    a1.insert(e);
                    a2.insert(e);
                }
            }
        }
        out.push((a1, a2));
        let mut pos = sides.len();
        let mut rolled = true;
        while pos > 0 {
            pos -= 1;
            sides[pos] += 1;
            if sides[pos] < 3 {
                rolled = false;
                break;
            }
            sides[pos] = 0;
        }
        if rolled {
            return out;
        }
    }
}

#[test]
fn implications_on_finite_total_structures() {
    // thick => pws, syndetic => pws, and the full carrier satisfies all
    let budget = Budget::exhaustive();
    let pool = catalog::sample_semigroups(60, 17);
    for table in &pool {
        let g = catalog::semigroup_structure(table, OpKind::Mul);
        let n = g.carrier_size();
        for a in all_masks(n) {
            let thick = is_thick(&g, &a, OpKind::Mul, &budget).verdict == Verdict::Yes;
            let synd = is_syndetic(&g, &a, OpKind::Mul, n, &budget).verdict == Verdict::Yes;
            let piecewise = pws(&g, &a, OpKind::Mul);
            if thick || synd {
                assert!(piecewise, "thick/syndetic must imply pws");
            }
        }
        assert!(is_thick(&g, &SubsetMask::full(n), OpKind::Mul, &budget).is_yes());
        assert!(is_syndetic(&g, &SubsetMask::full(n), OpKind::Mul, n, &budget).is_yes());
    }
}

#[test]
fn partition_regularity_order_three_exhaustive() {
    // over every labeled semigroup of order <= 3 (commutative or not):
    // pws(A) and A = A1 ∪ A2 force pws(A1) or pws(A2)
    for n in 1..=3usize {
        for table in catalog::all_semigroups(n) {
            let g = catalog::semigroup_structure(&table, OpKind::Mul);
            let pws_memo: Vec<bool> = all_masks(n).map(|a| pws(&g, &a, OpKind::Mul)).collect();
            let code = |m: &SubsetMask| {
                m.iter().fold(0usize, |acc, e| acc | 1 << e)
            };
            for a in all_masks(n) {
                if !pws_memo[code(&a)] {
                    continue;
                }
                for (a1, a2) in decompositions(&a) {
                    assert!(
                        pws_memo[code(&a1)] || pws_memo[code(&a2)],
                        "partition regularity failed on order {n}"
                    );
                }
            }
        }
    }
}

#[test]
fn homomorphic_image_preserves_pws() {
    // if A is pws in S and φ(S) is pws in T, then φ(A) is pws in T;
    // endomorphism pairs found by brute force over small structures
    let tables = catalog::all_semigroups(2);
    let mut checked = 0u64;
    for source_t in &tables {
        let s = catalog::semigroup_structure(source_t, OpKind::Mul);
        for target_t in catalog::all_semigroups(3).iter().step_by(7) {
            let t = catalog::semigroup_structure(target_t, OpKind::Mul);
            // enumerate all maps S -> T, keep homomorphisms
            let (ns, nt) = (s.carrier_size(), t.carrier_size());
            for code in 0..nt.pow(ns as u32) {
                let mut c = code;
                let map: Vec<usize> = (0..ns)
                    .map(|_| {
                        let v = c % nt;
                        c /= nt;
                        v
                    })
                    .collect();
                let hom = Homomorphism::new(map, HomOps::Mul);
                if !check_homomorphism(&hom, &s, &t).unwrap().ok {
                    continue;
                }
                let image_of_s = SubsetMask::from_fn(nt, |e| hom.map.contains(&e));
                if !pws(&t, &image_of_s, OpKind::Mul) {
                    continue;
                }
                for a in all_masks(ns) {
                    if !pws(&s, &a, OpKind::Mul) {
                        continue;
                    }
                    let image = SubsetMask::from_fn(nt, |e| {
                        a.iter().any(|x| hom.apply(x) == e)
                    });
                    assert!(
                        pws(&t, &image, OpKind::Mul),
                        "homomorphic image of a pws set must stay pws"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50, "the test family was non-trivial ({checked})");
}

#[test]
fn pws_characterizations_agree_on_commutative_structures() {
    // union-of-preimages-thick (the normative reading) versus
    // intersection-of-a-thick-and-a-syndetic-set, on commutative
    // semigroups of order <= 3 exhaustively
    let budget = Budget::exhaustive();
    for n in 1..=3usize {
        for table in catalog::all_commutative_semigroups(n) {
            let g = catalog::semigroup_structure(&table, OpKind::Mul);
            let thick_memo: Vec<bool> = all_masks(n)
                .map(|m| is_thick(&g, &m, OpKind::Mul, &budget).is_yes())
                .collect();
            let synd_memo: Vec<bool> = all_masks(n)
                .map(|m| is_syndetic(&g, &m, OpKind::Mul, n, &budget).is_yes())
                .collect();
            let masks: Vec<SubsetMask> = all_masks(n).collect();
            for a in &masks {
                let union_form = pws(&g, a, OpKind::Mul);
                let intersection_form = masks.iter().enumerate().any(|(ti, t)| {
                    thick_memo[ti]
                        && masks.iter().enumerate().any(|(mi, m)| {
                            synd_memo[mi] && &t.intersection(m) == a
                        })
                });
                assert_eq!(
                    union_form, intersection_form,
                    "pws characterizations disagree on order {n}"
                );
            }
        }
    }
}

#[test]
fn syndetic_covers_are_canonically_minimal() {
    // brute-force oracle: smallest cardinality, then lexicographic
    let budget = Budget::exhaustive();
    for (i, table) in catalog::sample_semigroups(60, 31).iter().enumerate() {
        let g = catalog::semigroup_structure(table, OpKind::Mul);
        let n = g.carrier_size();
        let a = SubsetMask::from_fn(n, |e| (e * 7 + i) % 5 < 3);
        let report = is_syndetic(&g, &a, OpKind::Mul, n, &budget);
        let mut best: Option<Vec<usize>> = None;
        'families: for f_bits in 1u32..1 << n {
            let family: Vec<usize> = (0..n).filter(|j| f_bits >> j & 1 == 1).collect();
            for x in 0..n {
                if !family
                    .iter()
                    .any(|&s| a.contains(g.apply(OpKind::Mul, s, x).unwrap()))
                {
                    continue 'families;
                }
            }
            let better = match &best {
                None => true,
                Some(b) => family.len() < b.len() || (family.len() == b.len() && family < *b),
            };
            if better {
                best = Some(family);
            }
        }
        match (&report.verdict, best) {
            (Verdict::Yes, Some(minimal)) => {
                assert_eq!(
                    report.witness,
                    partreg::largeness::Witness::Cover(minimal),
                    "cover must be minimal"
                );
            }
            (Verdict::No, None) => {}
            other => panic!("syndetic verdict disagrees with the oracle: {other:?}"),
        }
    }
}

#[test]
fn d_set_matches_definitional_oracle() {
    // the oracle recomputes each intersection and its piecewise
    // syndeticity from the raw definitions
    let budget = Budget::exhaustive();
    for (i, tables) in catalog::sample_semirings(25, 77).iter().enumerate() {
        let g = tables.to_structure();
        let n = g.carrier_size();
        let homs = [Homomorphism::identity(n, partreg::algebra::HomOps::Add)];
        let a = SubsetMask::from_fn(n, |e| (e + i) % 2 == 0 || e == 0);
        for adjoin in [false, true] {
            let q = partreg::largeness::DSetQuery {
                source: &g,
                target: &g,
                subset: &a,
                homs: &homs,
                adjoin_identity: adjoin,
                operation: OpKind::Add,
            };
            let d = partreg::largeness::compute_d_set(&q, n, &budget).unwrap();
            for cand in 0..n {
                let mut inter = SubsetMask::from_fn(n, |x| {
                    a.contains(g.apply(OpKind::Add, cand, x).unwrap())
                });
                if adjoin {
                    inter.intersect_with(&a);
                }
                let oracle = oracle_pws_mask(&g, &inter, OpKind::Add);
                assert_eq!(d.contains(cand), oracle, "d-set mismatch at {cand}");
            }
        }
    }
}

/// Definitional piecewise-syndeticity oracle shared by the tests above.
fn oracle_pws_mask(g: &GroundStructure, a: &SubsetMask, op: OpKind) -> bool {
    let n = g.carrier_size();
    (1u32..1 << n).any(|f_bits| {
        let union = SubsetMask::from_fn(n, |x| {
            (0..n).any(|s| f_bits >> s & 1 == 1 && a.contains(g.apply(op, s, x).unwrap()))
        });
        // thick: every nonempty family has a translate into the union
        (1u32..1 << n).all(|fam| {
            let family: Vec<usize> = (0..n).filter(|j| fam >> j & 1 == 1).collect();
            (0..n).any(|x| {
                family
                    .iter()
                    .all(|&f| union.contains(g.apply(op, f, x).unwrap()))
            })
        })
    })
}

#[test]
fn yes_witnesses_reverify_by_definition() {
    // mechanical re-verification of every kind of yes-witness over a
    // sampled pool: thickness translates, covers, and IP multisets
    let budget = Budget::exhaustive();
    let mut reverified = 0u64;
    for (i, table) in catalog::sample_semigroups(40, 23).iter().enumerate() {
        let g = catalog::semigroup_structure(table, OpKind::Mul);
        let n = g.carrier_size();
        let a = SubsetMask::from_fn(n, |e| (e + i) % 3 != 0);
        let thick = is_thick(&g, &a, OpKind::Mul, &budget);
        if let (Verdict::Yes, partreg::largeness::Witness::Translate(x)) =
            (thick.verdict, &thick.witness)
        {
            for s in 0..n {
                assert!(a.contains(g.apply(OpKind::Mul, s, *x).unwrap()));
            }
            reverified += 1;
        }
        let synd = is_syndetic(&g, &a, OpKind::Mul, n, &budget);
        if let (Verdict::Yes, partreg::largeness::Witness::Cover(f)) =
            (synd.verdict, &synd.witness)
        {
            for x in 0..n {
                assert!(f
                    .iter()
                    .any(|&s| a.contains(g.apply(OpKind::Mul, s, x).unwrap())));
            }
            reverified += 1;
        }
        for r in 1..=3u32 {
            let ipr = is_ipr(&g, &a, r, OpKind::Mul, &budget).unwrap();
            if let (Verdict::Yes, partreg::largeness::Witness::Multiset(items)) =
                (ipr.verdict, &ipr.witness)
            {
                // every increasing-index subset product lies inside A
                for subset in 1u32..1 << items.len() {
                    let chosen: Vec<usize> = (0..items.len())
                        .filter(|j| subset >> j & 1 == 1)
                        .map(|j| items[j])
                        .collect();
                    let mut acc = chosen[0];
                    for &e in &chosen[1..] {
                        acc = g.apply(OpKind::Mul, acc, e).unwrap();
                    }
                    assert!(a.contains(acc));
                }
                reverified += 1;
            }
        }
    }
    assert!(reverified > 30, "witness kinds exercised ({reverified})");
}

#[test]
fn semiring_bridge_order_two_exhaustive() {
    // multiplicatively pws subsets are additively IP_r, exhaustively over
    // every order-2 semiring and r <= 3 (the acceptance suite extends this
    // to orders 3 and 4)
    let budget = Budget::exhaustive();
    for tables in catalog::all_semirings(2) {
        let g = tables.to_structure();
        for a in all_masks(2) {
            if !pws(&g, &a, OpKind::Mul) {
                continue;
            }
            for r in 1..=3 {
                let report = is_ipr(&g, &a, r, OpKind::Add, &budget).unwrap();
                assert_eq!(
                    report.verdict,
                    Verdict::Yes,
                    "mult-pws {:?} must be additively IP_{r}",
                    a
                );
            }
        }
    }
}
