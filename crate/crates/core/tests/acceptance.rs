//! Acceptance suite: one test per criterion, each printing a pass line.
//! Brute-force oracles here are written from the definitions and never call
//! the code paths they are checking.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use partreg::algebra::{GroundStructure, HomOps, Homomorphism, OpKind};
use partreg::catalog;
use partreg::constructive::{
    bowen_thick_tree, find_t_witness, replay, thick_syndetic_constructor, BruteForceOracle,
    ReplayInputs,
};
use partreg::largeness::{
    is_ipr, is_ipr_star, is_piecewise_syndetic, is_syndetic, is_thick, Budget, DSetQuery,
    Verdict,
};
use partreg::patterns::{parse_pattern, Coloring};
use partreg::search::{
    check_coloring, compute_threshold, enumerate_avoiding, export_cnf, AvoidOutcome, Preset,
    SearchConfig, ThresholdStatus,
};
use partreg::SubsetMask;

fn pass(name: &str) {
    println!("[acceptance] {name}: PASS");
}

fn all_masks(n: usize) -> impl Iterator<Item = SubsetMask> {
    (0u32..1 << n).map(move |bits| SubsetMask::from_fn(n, move |i| bits >> i & 1 == 1))
}

// ---- definitional oracles -------------------------------------------------

/// Thick: every nonempty family F ⊆ S has a translate into `a`.
fn oracle_thick(g: &GroundStructure, a: &SubsetMask, op: OpKind) -> bool {
    let n = g.carrier_size();
    for f_bits in 1u32..1 << n {
        let family: Vec<usize> = (0..n).filter(|i| f_bits >> i & 1 == 1).collect();
        let witnessed = (0..n).any(|x| {
            family
                .iter()
                .all(|&f| a.contains(g.apply(op, f, x).expect("total")))
        });
        if !witnessed {
            return false;
        }
    }
    true
}

/// Syndetic: some family's preimage union covers the carrier.
fn oracle_syndetic(g: &GroundStructure, a: &SubsetMask, op: OpKind) -> bool {
    let n = g.carrier_size();
    (1u32..1 << n).any(|f_bits| {
        (0..n).all(|x| {
            (0..n).any(|s| {
                f_bits >> s & 1 == 1 && a.contains(g.apply(op, s, x).expect("total"))
            })
        })
    })
}

/// Piecewise syndetic: some family's preimage union is thick.
fn oracle_pws(g: &GroundStructure, a: &SubsetMask, op: OpKind) -> bool {
    let n = g.carrier_size();
    (1u32..1 << n).any(|f_bits| {
        let union = SubsetMask::from_fn(n, |x| {
            (0..n).any(|s| {
                f_bits >> s & 1 == 1 && a.contains(g.apply(op, s, x).expect("total"))
            })
        });
        oracle_thick(g, &union, op)
    })
}

/// IP_r*: every r-tuple's finite-sum set meets `a`.
fn oracle_ipr_star(g: &GroundStructure, a: &SubsetMask, r: u32, op: OpKind) -> bool {
    let n = g.carrier_size();
    let mut tuple = vec![0usize; r as usize];
    loop {
        let mut met = false;
        for subset in 1u32..1 << r {
            let items: Vec<usize> = (0..r as usize)
                .filter(|i| subset >> i & 1 == 1)
                .map(|i| tuple[i])
                .collect();
            let mut acc = items[0];
            for &it in &items[1..] {
                acc = g.apply(op, acc, it).expect("total");
            }
            if a.contains(acc) {
                met = true;
                break;
            }
        }
        if !met {
            return false;
        }
        let mut pos = r as usize;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

// ---- criteria -------------------------------------------------------------

#[test]
fn schur_threshold() {
    let start = Instant::now();
    let mut fam = parse_pattern("{x, y, x+y}").unwrap();
    fam.distinct = false;
    let pat = fam.expand(&BTreeMap::new()).unwrap();
    let result = compute_threshold(1, &pat, &SearchConfig::default(), 8).unwrap();
    assert_eq!(result.status, ThresholdStatus::Exact { threshold: 5 });

    // independent oracle: exhaustive over all 2^n colorings for n <= 6
    let mut oracle_threshold = None;
    for n in 1u64..=6 {
        let g = GroundStructure::nat_window(n);
        let size = g.carrier_size();
        let any_avoiding = (0u32..1 << size).any(|bits| {
            let colors: Vec<u32> = (0..size).map(|i| bits >> i & 1).collect();
            let coloring = Coloring::new(colors, 2).unwrap();
            check_coloring(&g, &coloring, &pat).unwrap().is_none()
        });
        if !any_avoiding {
            oracle_threshold = Some(n);
            break;
        }
    }
    assert_eq!(oracle_threshold, Some(5), "oracle agrees the threshold is 5");
    assert!(
        start.elapsed().as_secs() < 10,
        "threshold computation must finish within 10 s"
    );
    pass("schur-threshold");
}

#[test]
fn hindman_finite_claim() {
    // (a) the {2..990} preset emits well-formed DIMACS
    let preset = Preset::Hindman990;
    let pat = preset.pattern();
    let g990 = preset.structure(None).unwrap();
    assert_eq!(g990.carrier_size(), 989);
    let doc = export_cnf(&g990, &pat, 2, 1 << 24).unwrap();
    assert_eq!(doc.variable_count, 989);
    assert!(doc.clauses.len() >= 2, "the preset has instances");
    assert_eq!(doc.clauses.len() % 2, 0, "two clauses per instance");
    let dimacs = doc.to_dimacs();
    let mut lines = dimacs.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        format!("p cnf {} {}", doc.variable_count, doc.clauses.len())
    );
    let mut clause_lines = 0usize;
    for line in lines {
        assert!(line.ends_with(" 0"), "clauses are zero-terminated");
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().unwrap();
            assert!(lit.unsigned_abs() as usize <= doc.variable_count);
        }
        clause_lines += 1;
    }
    assert_eq!(clause_lines, doc.clauses.len());

    // decoded satisfying assignments on truncations {2..n}, n <= 12,
    // coincide exactly with exhaustively enumerated avoiding colorings
    for n in 4u64..=12 {
        let g = GroundStructure::nat_range(2, n).unwrap();
        let size = g.carrier_size();
        let doc = export_cnf(&g, &pat, 2, 1 << 24).unwrap();
        assert_eq!(doc.variable_count, size);
        for bits in 0u32..1 << size {
            let assignment: Vec<bool> = (0..size).map(|i| bits >> i & 1 == 1).collect();
            let coloring = doc.decode(&assignment).unwrap();
            let avoiding = check_coloring(&g, &coloring, &pat).unwrap().is_none();
            assert_eq!(
                doc.satisfied_by(&assignment),
                avoiding,
                "truncation {{2..{n}}}, assignment {bits:b}"
            );
        }
    }

    // (b) lower-bound witnesses: avoiding colorings exist on small
    // truncations
    for n in [12u64, 30, 60] {
        let g = GroundStructure::nat_range(2, n).unwrap();
        match enumerate_avoiding(&g, &pat, &SearchConfig::default()).unwrap() {
            AvoidOutcome::Found(coloring) => {
                assert!(check_coloring(&g, &coloring, &pat).unwrap().is_none());
            }
            other => panic!("expected an avoiding coloring on {{2..{n}}}, got {other:?}"),
        }
    }
    pass("hindman-cnf-truncations");
}

#[test]
fn largeness_oracle_equivalence() {
    let budget = Budget::exhaustive();
    let pool = catalog::sample_semigroups(220, 2024);
    assert!(pool.len() >= 200);
    let mut checked = 0u64;
    for table in &pool {
        let g = catalog::semigroup_structure(table, OpKind::Mul);
        let n = g.carrier_size();
        for a in all_masks(n) {
            let thick_impl = is_thick(&g, &a, OpKind::Mul, &budget).is_yes();
            assert_eq!(thick_impl, oracle_thick(&g, &a, OpKind::Mul), "thick mismatch");
            let synd_impl = is_syndetic(&g, &a, OpKind::Mul, n, &budget).is_yes();
            assert_eq!(synd_impl, oracle_syndetic(&g, &a, OpKind::Mul), "syndetic mismatch");
            let pws_impl = is_piecewise_syndetic(&g, &a, OpKind::Mul, n, &budget).is_yes();
            assert_eq!(pws_impl, oracle_pws(&g, &a, OpKind::Mul), "pws mismatch");
            checked += 3;
        }
    }
    assert!(checked >= 200 * 4 * 3);
    pass("largeness-oracle-equivalence");
}

#[test]
fn ipr_duality_suite() {
    let budget = Budget::exhaustive();
    let mut rng = ChaCha8Rng::seed_from_u64(7177);
    let pool = catalog::sample_semigroups(120, 3001);
    for case in 0..500u32 {
        let table = &pool[case as usize % pool.len()];
        let g = catalog::semigroup_structure(table, OpKind::Add);
        let n = g.carrier_size();
        let a = SubsetMask::from_fn(n, |_| rng.gen_bool(0.5));
        let r = rng.gen_range(1..=3u32);
        let star = is_ipr_star(&g, &a, r, OpKind::Add, &budget).unwrap();
        let inner = is_ipr(&g, &a.complement(), r, OpKind::Add, &budget).unwrap();
        assert_eq!(
            star.verdict == Verdict::Yes,
            inner.verdict == Verdict::No,
            "duality violated (case {case})"
        );
        // and both must agree with the definitional oracle
        assert_eq!(
            star.verdict == Verdict::Yes,
            oracle_ipr_star(&g, &a, r, OpKind::Add),
            "star oracle mismatch (case {case})"
        );
    }
    pass("ipr-duality");
}

#[test]
fn partition_regularity_commutative_order_four() {
    let budget = Budget::exhaustive();
    let mut structures = 0u64;
    for n in 1..=4usize {
        for table in catalog::all_commutative_semigroups(n) {
            structures += 1;
            let g = catalog::semigroup_structure(&table, OpKind::Add);
            let pws_memo: Vec<bool> = all_masks(n)
                .map(|a| {
                    is_piecewise_syndetic(&g, &a, OpKind::Add, n, &budget).verdict == Verdict::Yes
                })
                .collect();
            let code = |m: &SubsetMask| m.iter().fold(0usize, |acc, e| acc | 1 << e);
            for a in all_masks(n) {
                if !pws_memo[code(&a)] {
                    continue;
                }
                // ordered decompositions A = A1 ∪ A2
                let members: Vec<usize> = a.iter().collect();
                let mut sides = vec![0u8; members.len()];
                loop {
                    let mut c1 = 0usize;
                    let mut c2 = 0usize;
                    for (pos, &e) in members.iter().enumerate() {
                        match sides[pos] {
                            0 => c1 |= 1 << e,
                            1 => c2 |= 1 << e,
                            _ => {
                                c1 |= 1 << e;
                                c2 |= 1 << e;
                            }
                        }
                    }
                    assert!(
                        pws_memo[c1] || pws_memo[c2],
                        "partition regularity failed (order {n})"
                    );
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
                        break;
                    }
                }
            }
        }
    }
    println!("  (checked {structures} labeled commutative semigroups)");
    pass("partition-regularity");
}

#[test]
fn semiring_bridge() {
    let budget = Budget::exhaustive();
    let mut family = catalog::all_semirings(2);
    family.extend(catalog::all_semirings(3));
    family.extend(catalog::curated_order4_semirings());
    // scrambled copies of the order-4 family
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for base in catalog::curated_order4_semirings() {
        let mut p: Vec<usize> = (0..base.add.n).collect();
        use rand::seq::SliceRandom;
        p.shuffle(&mut rng);
        family.push(base.permuted(&p));
    }
    let mut checked_pws_sets = 0u64;
    for tables in &family {
        let g = tables.to_structure();
        let n = g.carrier_size();
        for a in all_masks(n) {
            let mult_pws =
                is_piecewise_syndetic(&g, &a, OpKind::Mul, n, &budget).verdict == Verdict::Yes;
            if !mult_pws {
                continue;
            }
            checked_pws_sets += 1;
            for r in 1..=3u32 {
                let report = is_ipr(&g, &a, r, OpKind::Add, &budget).unwrap();
                assert_eq!(
                    report.verdict,
                    Verdict::Yes,
                    "multiplicatively pws set must be additively IP_{r}"
                );
            }
        }
    }
    assert!(checked_pws_sets > 100, "the family was non-trivial");
    println!("  (verified {checked_pws_sets} multiplicatively pws subsets over {} semirings)", family.len());
    pass("semiring-bridge");
}

#[test]
fn constructive_soundness() {
    let budget = Budget::exhaustive();
    let mut verified = 0u64;
    let mut total = 0u64;

    // independent grid re-check
    let recheck = |g: &GroundStructure, a: &SubsetMask, xs: &[usize], k: u32| {
        for &x in xs {
            assert!(a.contains(x));
        }
        let mut prod = xs[0];
        for &x in &xs[1..] {
            prod = g.apply(OpKind::Mul, prod, x).expect("product defined");
        }
        assert!(a.contains(prod), "ordered product outside A");
        let n = xs.len();
        let mut coeffs = vec![0u32; n];
        loop {
            let mut pos = n;
            let mut rolled = true;
            while pos > 0 {
                pos -= 1;
                if coeffs[pos] < k {
                    coeffs[pos] += 1;
                    for c in coeffs[pos + 1..].iter_mut() {
                        *c = 0;
                    }
                    rolled = false;
                    break;
                }
                coeffs[pos] = 0;
            }
            if rolled {
                break;
            }
            let mut acc: Option<usize> = None;
            for (j, &c) in coeffs.iter().enumerate() {
                for _ in 0..c {
                    acc = Some(match acc {
                        None => xs[j],
                        Some(p) => g.apply(OpKind::Add, p, xs[j]).expect("sum defined"),
                    });
                }
            }
            assert!(a.contains(acc.unwrap()), "combination {coeffs:?} outside A");
        }
    };

    // 50 randomized finite semirings with A = full
    for (idx, tables) in catalog::sample_semirings(50, 90210).iter().enumerate() {
        let g = tables.to_structure();
        let a = SubsetMask::full(g.carrier_size());
        let n = 2 + (idx % 2);
        let k = 1 + (idx % 2) as u32;
        let mut oracle = BruteForceOracle;
        let run = thick_syndetic_constructor(
            &g,
            &a,
            n.min(g.carrier_size()),
            k,
            &mut oracle,
            g.carrier_size(),
            &budget,
        )
        .unwrap();
        total += 1;
        let success = run.result.expect("A = full always satisfies the preconditions");
        recheck(&g, &a, &success.xs, k);
        replay(&run.trace, ReplayInputs::ThickSyndetic { g: &g, subset: &a })
            .expect("thick-syndetic trace must replay");
        verified += 1;
    }

    // zmod cases with proper subsets
    let zmod_cases: Vec<(u64, Vec<usize>, usize, u32)> = vec![
        (6, vec![0, 2, 4], 2, 1),
        (6, vec![0, 2, 4], 2, 2),
        (6, vec![0, 3], 2, 1),
        (4, vec![0, 2], 2, 2),
        (5, vec![0], 2, 1),
    ];
    for (m, subset, n, k) in zmod_cases {
        let g = GroundStructure::zmod(m);
        let a = SubsetMask::from_indices(m as usize, &subset);
        let mut oracle = BruteForceOracle;
        let run = thick_syndetic_constructor(
            &g,
            &a,
            n,
            k,
            &mut oracle,
            m as usize,
            &budget,
        )
        .unwrap();
        total += 1;
        match run.result {
            Ok(success) => {
                recheck(&g, &a, &success.xs, k);
                verified += 1;
            }
            Err(failure) => panic!("zmod({m}) case failed: {failure:?}"),
        }
    }

    assert_eq!(verified, total, "100% verification rate required");
    println!("  (verified {verified}/{total} constructions)");
    pass("constructive-soundness");
}

#[test]
fn bowen_tree_termination() {
    let budget = Budget::with_candidates(2_000_000);
    let mut successes = 0u64;
    let mut exhaustions = 0u64;
    for seed in 0u64..100 {
        let (hi, bias): (u64, f64) = match seed % 10 {
            0..=3 => (8192, 0.5),
            4..=6 => (65_536, 0.90),
            _ => (131_072, 0.97),
        };
        let g = GroundStructure::nat_window(hi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors: Vec<u32> = (0..hi as usize)
            .map(|_| if rng.gen_bool(bias) { 0 } else { 1 })
            .collect();
        let coloring = Coloring::new(colors, 2).unwrap();
        let mut oracle = BruteForceOracle;
        let run = bowen_thick_tree(&g, &coloring, 2, 2, &mut oracle, &budget).unwrap();
        match &run.result {
            Ok(success) => {
                // zero unverified successes: re-evaluate the pattern from
                // scratch
                let (x, y) = (success.x, success.y);
                let kx_y = {
                    let kx = g.apply(OpKind::Add, x, x).expect("2x defined");
                    g.apply(OpKind::Add, kx, y).expect("2x+y defined")
                };
                let xy = g.apply(OpKind::Mul, x, y).expect("xy defined");
                let x2y = g
                    .apply(OpKind::Mul, g.apply(OpKind::Mul, x, x).unwrap(), y)
                    .expect("x^2 y defined");
                let values = [x, y, kx_y, xy, x2y];
                assert_eq!(success.values.as_slice(), values.as_slice());
                let base = coloring.color(x);
                assert_eq!(base, success.color);
                for v in values {
                    assert_eq!(coloring.color(v), base, "seed {seed}: not monochromatic");
                }
                successes += 1;
            }
            Err(failure) => {
                assert!(!run.trace.steps.is_empty(), "exhaustion must carry a trace");
                assert!(run.trace.outcome.contains(failure.kind.name()));
                exhaustions += 1;
            }
        }
        // every run, success or not, must replay byte for byte
        replay(
            &run.trace,
            ReplayInputs::Bowen {
                g: &g,
                coloring: &coloring,
            },
        )
        .unwrap_or_else(|e| panic!("seed {seed}: replay failed: {e}"));
    }
    assert_eq!(successes + exhaustions, 100);
    println!("  ({successes} verified successes, {exhaustions} honest exhaustions)");
    pass("bowen-termination");
}

#[test]
fn dset_consistency() {
    let budget = Budget::exhaustive();
    // commutative finite semirings of order <= 4: additive semigroups from
    // the exhaustive order-2/3 lists and the curated order-4 family
    let mut family = catalog::all_semirings(2);
    family.extend(catalog::all_semirings(3));
    family.extend(catalog::curated_order4_semirings());
    // deduplicate by additive table (the D-set only sees the addition)
    let mut seen = std::collections::HashSet::new();
    let mut checked_pairs = 0u64;
    for tables in &family {
        if !seen.insert(tables.add.cells.clone()) {
            continue;
        }
        let g = tables.to_structure();
        let n = g.carrier_size();
        let homs = [Homomorphism::identity(n, HomOps::Add)];
        for a in all_masks(n) {
            let a_pws =
                is_piecewise_syndetic(&g, &a, OpKind::Add, n, &budget).verdict == Verdict::Yes;
            if !a_pws {
                continue;
            }
            let q = DSetQuery {
                source: &g,
                target: &g,
                subset: &a,
                homs: &homs,
                adjoin_identity: false,
                operation: OpKind::Add,
            };
            let witness = find_t_witness(&q, &budget).unwrap();
            let (t, d) = witness
                .pair
                .unwrap_or_else(|| panic!("no (t, d) pair for a pws subset {a:?}"));
            // definitional re-verification: the shifted intersection is pws
            // by the brute-force oracle
            let shifted = SubsetMask::from_fn(n, |x| {
                g.apply(OpKind::Add, t, x).map(|v| a.contains(v)).unwrap()
            });
            let inter = SubsetMask::from_fn(n, |x| {
                g.apply(OpKind::Add, d, x)
                    .map(|v| shifted.contains(v))
                    .unwrap()
            });
            assert!(
                oracle_pws(&g, &inter, OpKind::Add),
                "returned pair does not re-verify"
            );
            checked_pairs += 1;
        }
    }
    assert!(checked_pairs > 50);
    println!("  (re-verified {checked_pairs} (t,d) pairs)");
    pass("dset-consistency");
}
