//! Monochromatic instance search and the two-block witness search from the
//! key lemma.

use std::sync::atomic::{AtomicUsize, Ordering};

use super::ast::ExpandedPattern;
use super::eval::eval_term;
use super::{Coloring, PatternError, PatternInstance};
use crate::algebra::{GroundStructure, OpKind};
use crate::largeness::{finite_sums, Budget, LargenessError, OrderedMultiset};
use crate::mask::SubsetMask;
use crate::Elem;

/// Checks one assignment against constraints, definedness, and
/// monochromaticity.
fn instance_at(
    g: &GroundStructure,
    coloring: &Coloring,
    pat: &ExpandedPattern,
    assignment: &[Elem],
) -> Option<PatternInstance> {
    if let Some(min) = pat.min_element {
        if assignment.iter().any(|&v| v < min) {
            return None;
        }
    }
    if pat.distinct {
        for i in 0..assignment.len() {
            for j in i + 1..assignment.len() {
                if assignment[i] == assignment[j] {
                    return None;
                }
            }
        }
    }
    let mut values = Vec::with_capacity(pat.terms.len());
    let mut color: Option<u32> = None;
    for term in &pat.terms {
        let v = eval_term(g, term, assignment)?;
        let c = coloring.color(v);
        match color {
            None => color = Some(c),
            Some(c0) if c0 != c => return None,
            _ => {}
        }
        values.push(v);
    }
    Some(PatternInstance {
        assignment: assignment.to_vec(),
        values,
        color: color?,
    })
}

/// Scans assignments in canonical (lexicographic) order and returns the
/// least monochromatic instance, or `None` when no within-window instance
/// exists.
pub fn find_monochromatic(
    g: &GroundStructure,
    coloring: &Coloring,
    pat: &ExpandedPattern,
) -> Result<Option<PatternInstance>, PatternError> {
    if coloring.len() != g.carrier_size() {
        return Err(PatternError::ColoringMismatch {
            expected: g.carrier_size(),
            got: coloring.len(),
        });
    }
    let n = g.carrier_size();
    Ok(scan_range(g, coloring, pat, 0, n))
}

/// Scans assignments whose first variable lies in `[first_lo, first_hi)`.
fn scan_range(
    g: &GroundStructure,
    coloring: &Coloring,
    pat: &ExpandedPattern,
    first_lo: usize,
    first_hi: usize,
) -> Option<PatternInstance> {
    let n = g.carrier_size();
    let vars = pat.variables.len();
    if n == 0 || vars == 0 || first_lo >= first_hi {
        return None;
    }
    let mut assignment = vec![0usize; vars];
    assignment[0] = first_lo;
    loop {
        if let Some(inst) = instance_at(g, coloring, pat, &assignment) {
            return Some(inst);
        }
        // advance odometer, first variable bounded by the range
        let mut pos = vars;
        let mut done = true;
        while pos > 0 {
            pos -= 1;
            let limit = if pos == 0 { first_hi } else { n };
            assignment[pos] += 1;
            if assignment[pos] < limit {
                done = false;
                break;
            }
            assignment[pos] = if pos == 0 { first_lo } else { 0 };
        }
        if done {
            return None;
        }
    }
}

/// Parallel variant: partitions the outermost variable range across up to
/// `width` workers and reduces to the canonically least witness, so the
/// result is identical to [`find_monochromatic`] at any width.
pub fn find_monochromatic_par(
    g: &GroundStructure,
    coloring: &Coloring,
    pat: &ExpandedPattern,
    width: usize,
) -> Result<Option<PatternInstance>, PatternError> {
    if width <= 1 || g.carrier_size() < 2 || pat.variables.is_empty() {
        return find_monochromatic(g, coloring, pat);
    }
    if coloring.len() != g.carrier_size() {
        return Err(PatternError::ColoringMismatch {
            expected: g.carrier_size(),
            got: coloring.len(),
        });
    }
    let n = g.carrier_size();
    let chunks = width.min(n);
    let chunk_len = n.div_ceil(chunks);
    let best_chunk = AtomicUsize::new(usize::MAX);
    let mut results: Vec<Option<PatternInstance>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..chunks)
            .map(|ci| {
                let best = &best_chunk;
                let lo = ci * chunk_len;
                let hi = ((ci + 1) * chunk_len).min(n);
                scope.spawn(move || {
                    if best.load(Ordering::Relaxed) < ci {
                        return None;
                    }
                    let found = scan_range(g, coloring, pat, lo, hi);
                    if found.is_some() {
                        best.fetch_min(ci, Ordering::Relaxed);
                    }
                    found
                })
            })
            .collect();
        results = handles.into_iter().map(|h| h.join().unwrap()).collect();
    });
    Ok(results.into_iter().flatten().next())
}

#[derive(Debug, Clone)]
pub struct TermDetail {
    pub rendered: String,
    pub value: Option<Elem>,
    pub color: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub ok: bool,
    pub failure: Option<String>,
    pub details: Vec<TermDetail>,
    pub instance: Option<PatternInstance>,
}

/// Recomputes every term of `pat` at `assignment` and reports per-term
/// detail; true iff all terms are defined, monochromatic, and the family
/// constraints hold.
pub fn verify_instance(
    g: &GroundStructure,
    coloring: &Coloring,
    pat: &ExpandedPattern,
    assignment: &[Elem],
) -> Result<VerifyReport, PatternError> {
    if assignment.len() != pat.variables.len() {
        return Err(PatternError::AssignmentMismatch {
            expected: pat.variables.len(),
            got: assignment.len(),
        });
    }
    if coloring.len() != g.carrier_size() {
        return Err(PatternError::ColoringMismatch {
            expected: g.carrier_size(),
            got: coloring.len(),
        });
    }
    let mut details = Vec::with_capacity(pat.terms.len());
    let mut failure: Option<String> = None;
    let mut colors_seen: Vec<u32> = Vec::new();
    for term in &pat.terms {
        let rendered = term.render(&pat.variables);
        let value = eval_term(g, term, assignment);
        let color = value.map(|v| coloring.color(v));
        if value.is_none() && failure.is_none() {
            failure = Some(format!("term {rendered} is undefined"));
        }
        if let Some(c) = color {
            if !colors_seen.contains(&c) {
                colors_seen.push(c);
            }
        }
        details.push(TermDetail {
            rendered,
            value,
            color,
        });
    }
    if failure.is_none() && colors_seen.len() > 1 {
        failure = Some(format!("terms carry {} different colors", colors_seen.len()));
    }
    if failure.is_none() {
        if pat.distinct {
            for i in 0..assignment.len() {
                for j in i + 1..assignment.len() {
                    if assignment[i] == assignment[j] {
                        failure = Some(format!(
                            "variables {} and {} share the value {}",
                            pat.variables[i], pat.variables[j], assignment[i]
                        ));
                    }
                }
            }
        }
        if let Some(min) = pat.min_element {
            if let Some(&v) = assignment.iter().find(|&&v| v < min) {
                failure = Some(format!("variable value {v} is below the threshold {min}"));
            }
        }
    }
    let ok = failure.is_none();
    let instance = ok.then(|| PatternInstance {
        assignment: assignment.to_vec(),
        values: details.iter().map(|d| d.value.unwrap()).collect(),
        color: details[0].color.unwrap(),
    });
    Ok(VerifyReport {
        ok,
        failure,
        details,
        instance,
    })
}

/// The elementwise ordered product `FS(B_0)·FS(B_1)·…·FS(B_m)`; undefined
/// products are skipped and counted.
pub fn product_of_fs_blocks(
    g: &GroundStructure,
    blocks: &[OrderedMultiset],
) -> Result<(SubsetMask, u64), LargenessError> {
    if blocks.is_empty() {
        return Err(LargenessError::BadParams("no blocks given".into()));
    }
    g.require_op(OpKind::Add)?;
    g.require_op(OpKind::Mul)?;
    let mut undefined = 0u64;
    let mut acc: Option<SubsetMask> = None;
    for block in blocks {
        let (fs, undef) = finite_sums(g, block)?;
        undefined += undef;
        acc = Some(match acc {
            None => fs,
            Some(prev) => {
                let mut next = SubsetMask::empty(g.carrier_size());
                for a in prev.iter() {
                    for b in fs.iter() {
                        match g.apply(OpKind::Mul, a, b) {
                            Some(v) => next.insert(v),
                            None => undefined += 1,
                        }
                    }
                }
                next
            }
        });
    }
    Ok((acc.unwrap(), undefined))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyLemmaOutcome {
    Found {
        f0: OrderedMultiset,
        f1: OrderedMultiset,
    },
    Exhausted,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct KeyLemmaStats {
    pub candidates: u64,
    pub budget_exhausted: bool,
}

/// Searches for multisets `F0`, `F1` with `FS(F0) ⊆ C0`, `FS(F1) ⊆ C1`, and
/// `FS(F0)·FS(F1) ⊆ C0`, the two-block shape of the key lemma. Tuples are
/// scanned in canonical order, so the first hit is the least witness.
pub fn key_lemma_witness_search(
    g: &GroundStructure,
    coloring: &Coloring,
    size0: usize,
    size1: usize,
    budget: &Budget,
) -> Result<(KeyLemmaOutcome, KeyLemmaStats), PatternError> {
    if coloring.color_count() != 2 {
        return Err(PatternError::NotTwoColors(coloring.color_count()));
    }
    if coloring.len() != g.carrier_size() {
        return Err(PatternError::ColoringMismatch {
            expected: g.carrier_size(),
            got: coloring.len(),
        });
    }
    assert!(size0 >= 1 && size1 >= 1);
    let c0 = coloring.class(0);
    let c1 = coloring.class(1);
    let n = g.carrier_size();
    let mut stats = KeyLemmaStats::default();

    // pre-filter the F1 side once: FS(F1) must sit fully inside C1
    let mut valid_f1: Vec<(Vec<Elem>, SubsetMask)> = Vec::new();
    let mut tuple = vec![0usize; size1];
    'f1: loop {
        stats.candidates += 1;
        if stats.candidates > budget.max_candidates {
            stats.budget_exhausted = true;
            return Ok((KeyLemmaOutcome::Exhausted, stats));
        }
        if let Ok((mask, undef)) = crate::largeness::finite_products(g, &OrderedMultiset::new(tuple.clone()).unwrap(), OpKind::Add)
        {
            if undef == 0 && mask.is_subset_of(&c1) {
                valid_f1.push((tuple.clone(), mask));
            }
        }
        let mut pos = size1;
        while pos > 0 {
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                continue 'f1;
            }
            tuple[pos] = 0;
        }
        break;
    }

    let mut tuple = vec![0usize; size0];
    'f0: loop {
        stats.candidates += 1;
        if stats.candidates > budget.max_candidates {
            stats.budget_exhausted = true;
            return Ok((KeyLemmaOutcome::Exhausted, stats));
        }
        if let Ok((fs0, undef)) = crate::largeness::finite_products(
            g,
            &OrderedMultiset::new(tuple.clone()).unwrap(),
            OpKind::Add,
        ) {
            if undef == 0 && fs0.is_subset_of(&c0) {
                for (f1, fs1) in &valid_f1 {
                    stats.candidates += 1;
                    if stats.candidates > budget.max_candidates {
                        stats.budget_exhausted = true;
                        return Ok((KeyLemmaOutcome::Exhausted, stats));
                    }
                    let mut all_in = true;
                    'product: for a in fs0.iter() {
                        for b in fs1.iter() {
                            match g.apply(OpKind::Mul, a, b) {
                                Some(v) if c0.contains(v) => {}
                                _ => {
                                    all_in = false;
                                    break 'product;
                                }
                            }
                        }
                    }
                    if all_in {
                        return Ok((
                            KeyLemmaOutcome::Found {
                                f0: OrderedMultiset::new(tuple.clone()).unwrap(),
                                f1: OrderedMultiset::new(f1.clone()).unwrap(),
                            },
                            stats,
                        ));
                    }
                }
            }
        }
        let mut pos = size0;
        while pos > 0 {
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                continue 'f0;
            }
            tuple[pos] = 0;
        }
        break;
    }
    Ok((KeyLemmaOutcome::Exhausted, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::parse_pattern;
    use std::collections::BTreeMap;

    fn expanded(src: &str, distinct: bool) -> ExpandedPattern {
        let mut fam = parse_pattern(src).unwrap();
        fam.distinct = distinct;
        fam.expand(&BTreeMap::new()).unwrap()
    }

    fn parity_coloring(n: usize) -> Coloring {
        // value v gets color v % 2
        Coloring::new((0..n).map(|i| ((i as u32) + 1) % 2).collect(), 2).unwrap()
    }

    #[test]
    fn parity_window_schur_product() {
        // nat-window(8), parity coloring: x=2,y=4 gives {2,4,6,8} all even
        let g = GroundStructure::nat_window(8);
        let pat = expanded("{x, y, x+y, x*y}", true);
        let found = find_monochromatic(&g, &parity_coloring(8), &pat)
            .unwrap()
            .expect("instance exists");
        let at = |v: u64| g.element_of_value(v).unwrap();
        assert_eq!(found.assignment, vec![at(2), at(4)]);
        assert_eq!(found.values, vec![at(2), at(4), at(6), at(8)]);
        assert_eq!(found.color, 0);
    }

    #[test]
    fn single_color_returns_first_assignment() {
        let g = GroundStructure::zmod(5);
        let pat = expanded("{x, y, x+y}", true);
        let found = find_monochromatic(&g, &Coloring::monochrome(5), &pat)
            .unwrap()
            .unwrap();
        assert_eq!(found.assignment, vec![0, 1]);
    }

    #[test]
    fn schur_avoiding_coloring_exhausts() {
        // nat-window(4), {1,4} vs {2,3} avoids monochromatic {x,y,x+y}
        let g = GroundStructure::nat_window(4);
        let coloring = Coloring::new(vec![0, 1, 1, 0], 2).unwrap();
        let pat = expanded("{x, y, x+y}", true);
        assert!(find_monochromatic(&g, &coloring, &pat).unwrap().is_none());
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let g = GroundStructure::nat_window(30);
        let coloring = Coloring::new(
            (0..30).map(|i| if (i * 7 + 3) % 5 < 2 { 0 } else { 1 }).collect(),
            2,
        )
        .unwrap();
        for src in ["{x, y, x+y}", "{x, y, x+y, x*y}", "{x, y, 2x+y}"] {
            let pat = expanded(src, true);
            let seq = find_monochromatic(&g, &coloring, &pat).unwrap();
            for width in [2, 4, 7] {
                let par = find_monochromatic_par(&g, &coloring, &pat, width).unwrap();
                assert_eq!(seq, par, "pattern {src} width {width}");
            }
        }
    }

    #[test]
    fn min_element_threshold_filters_small_witnesses() {
        // the witness {2,4,6,8} exists, but demanding variable values of at
        // least 3 rules every parity-monochromatic assignment out
        let g = GroundStructure::nat_window(8);
        let coloring = parity_coloring(8);
        let mut fam = parse_pattern("{x, y, x+y, x*y}").unwrap();
        fam.min_element = Some(2); // canonical index 2 = value 3
        let pat = fam.expand(&BTreeMap::new()).unwrap();
        assert!(find_monochromatic(&g, &coloring, &pat).unwrap().is_none());
    }

    #[test]
    fn scan_agrees_with_naive_least_instance() {
        // independent oracle: collect every admissible monochromatic
        // assignment and take the lexicographically first
        let g = GroundStructure::nat_window(10);
        let coloring = Coloring::new(
            (0..10).map(|i| [0, 1, 1, 0, 1][i % 5]).collect(),
            2,
        )
        .unwrap();
        for src in ["{x, y, x+y}", "{x, y, 2x+y}", "{x, y, x*y}"] {
            let pat = expanded(src, true);
            let fast = find_monochromatic(&g, &coloring, &pat).unwrap();
            let mut naive = None;
            'outer: for x in 0..10 {
                for y in 0..10 {
                    if x == y {
                        continue;
                    }
                    let vals: Option<Vec<_>> = pat
                        .terms
                        .iter()
                        .map(|t| crate::patterns::eval_term(&g, t, &[x, y]))
                        .collect();
                    if let Some(vals) = vals {
                        let c = coloring.color(vals[0]);
                        if vals.iter().all(|&v| coloring.color(v) == c) {
                            naive = Some((vec![x, y], vals, c));
                            break 'outer;
                        }
                    }
                }
            }
            match (fast, naive) {
                (None, None) => {}
                (Some(inst), Some((asn, vals, c))) => {
                    assert_eq!(inst.assignment, asn, "{src}");
                    assert_eq!(inst.values, vals);
                    assert_eq!(inst.color, c);
                }
                other => panic!("scan and oracle disagree on {src}: {other:?}"),
            }
        }
    }

    #[test]
    fn verify_round_trips_found_instances() {
        let g = GroundStructure::nat_window(8);
        let pat = expanded("{x, y, x+y, x*y}", true);
        let coloring = parity_coloring(8);
        let found = find_monochromatic(&g, &coloring, &pat).unwrap().unwrap();
        let report = verify_instance(&g, &coloring, &pat, &found.assignment).unwrap();
        assert!(report.ok);
        assert_eq!(report.instance.unwrap(), found);
    }

    #[test]
    fn verify_rejects_mixed_colors_and_undefined() {
        let g = GroundStructure::nat_window(8);
        let pat = expanded("{x, y, x+y}", true);
        let coloring = parity_coloring(8);
        let at = |v: u64| g.element_of_value(v).unwrap();
        // 2 and 3 differ in parity
        let r = verify_instance(&g, &coloring, &pat, &[at(2), at(3)]).unwrap();
        assert!(!r.ok);
        // 7+5 escapes the window
        let r = verify_instance(&g, &coloring, &pat, &[at(7), at(5)]).unwrap();
        assert!(!r.ok);
        assert!(r.failure.unwrap().contains("undefined"));
    }

    #[test]
    fn fs_block_products() {
        let g = GroundStructure::nat_window(20);
        let at = |v: u64| g.element_of_value(v).unwrap();
        let blocks = [OrderedMultiset::new(vec![at(1), at(2)]).unwrap()];
        let (mask, _) = product_of_fs_blocks(&g, &blocks).unwrap();
        let values: Vec<u64> = mask.iter().map(|i| i as u64 + 1).collect();
        assert_eq!(values, vec![1, 2, 3]);

        let blocks = [
            OrderedMultiset::new(vec![at(1), at(2)]).unwrap(),
            OrderedMultiset::new(vec![at(3)]).unwrap(),
        ];
        let (mask, undef) = product_of_fs_blocks(&g, &blocks).unwrap();
        let values: Vec<u64> = mask.iter().map(|i| i as u64 + 1).collect();
        assert_eq!(values, vec![3, 6, 9]);
        assert_eq!(undef, 0);
    }

    #[test]
    fn fs_block_product_consistency_with_finite_sums() {
        let g = GroundStructure::nat_window(25);
        let at = |v: u64| g.element_of_value(v).unwrap();
        let f = OrderedMultiset::new(vec![at(2), at(5), at(7)]).unwrap();
        let (direct, u1) = finite_sums(&g, &f).unwrap();
        let (via_blocks, u2) = product_of_fs_blocks(&g, std::slice::from_ref(&f)).unwrap();
        assert_eq!(direct, via_blocks);
        assert_eq!(u1, u2);
    }

    #[test]
    fn key_lemma_on_even_c0() {
        // C0 = evens in nat-window(40): canonical witness a=2, b=1
        let g = GroundStructure::nat_window(40);
        let coloring = parity_coloring(40);
        let (outcome, _) =
            key_lemma_witness_search(&g, &coloring, 1, 1, &Budget::exhaustive()).unwrap();
        let at = |v: u64| g.element_of_value(v).unwrap();
        match outcome {
            KeyLemmaOutcome::Found { f0, f1 } => {
                assert_eq!(f0.items(), &[at(2)]);
                assert_eq!(f1.items(), &[at(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn key_lemma_exhausts_when_c1_empty() {
        let g = GroundStructure::nat_window(10);
        let coloring = Coloring::new(vec![0; 10], 2).unwrap();
        let (outcome, _) =
            key_lemma_witness_search(&g, &coloring, 1, 1, &Budget::exhaustive()).unwrap();
        assert_eq!(outcome, KeyLemmaOutcome::Exhausted);
    }
}
