//! Finite sums/products, IP_r and IP_r* checks, and combinatorial richness.

use super::{
    Budget, LargenessError, LargenessReport, Meter, Property, Verdict, Witness, MAX_MULTISET,
};
use crate::algebra::{GroundStructure, OpKind};
use crate::mask::SubsetMask;
use crate::Elem;

/// An index-ordered sequence of carrier elements, repeats allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedMultiset {
    items: Vec<Elem>,
}

impl OrderedMultiset {
    pub fn new(items: Vec<Elem>) -> Result<Self, LargenessError> {
        if items.is_empty() {
            return Err(LargenessError::EmptyMultiset);
        }
        Ok(OrderedMultiset { items })
    }

    pub fn items(&self) -> &[Elem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// All products over nonempty index subsets taken in increasing index
/// order. Returns the value mask plus the count of subsets whose product
/// fell outside the window.
pub fn finite_products(
    g: &GroundStructure,
    ms: &OrderedMultiset,
    op: OpKind,
) -> Result<(SubsetMask, u64), LargenessError> {
    g.require_op(op)?;
    fs_over_items(g, ms.items(), op).ok_or(LargenessError::MultisetTooLarge(ms.len()))
}

/// Alias used when the operation is written additively.
pub fn finite_sums(
    g: &GroundStructure,
    ms: &OrderedMultiset,
) -> Result<(SubsetMask, u64), LargenessError> {
    finite_products(g, ms, OpKind::Add)
}

/// Subset-DP evaluation of FP; `None` when the multiset is too large to
/// enumerate.
pub(crate) fn fs_over_items(
    g: &GroundStructure,
    items: &[Elem],
    op: OpKind,
) -> Option<(SubsetMask, u64)> {
    let m = items.len();
    if m == 0 || m > MAX_MULTISET {
        return None;
    }
    let mut mask = SubsetMask::empty(g.carrier_size());
    let mut undefined = 0u64;
    // products[s] = value of the subset with bit pattern s, composed
    // left-to-right in index order
    let mut products: Vec<Option<Elem>> = vec![None; 1 << m];
    for s in 1usize..1 << m {
        let hi = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << hi);
        let value = if rest == 0 {
            Some(items[hi])
        } else {
            products[rest].and_then(|p| g.apply(op, p, items[hi]))
        };
        match value {
            Some(v) => {
                mask.insert(v);
                products[s] = Some(v);
            }
            None => undefined += 1,
        }
    }
    Some((mask, undefined))
}

/// Advances a length-`r` odometer over `0..n`; false when exhausted.
pub(crate) fn next_tuple(tuple: &mut [Elem], n: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

/// IP_r: some index-ordered multiset of size exactly `r` has its whole FP
/// set inside `A`. Tuples are scanned in lexicographic order, so a `Yes`
/// carries the canonical least witness. Tuples with an undefined subset
/// product are skipped (they witness nothing within the window).
pub fn is_ipr(
    g: &GroundStructure,
    a: &SubsetMask,
    r: u32,
    op: OpKind,
    budget: &Budget,
) -> Result<LargenessReport, LargenessError> {
    g.require_op(op)?;
    if r < 1 {
        return Err(LargenessError::BadParams("ip_r needs r >= 1".into()));
    }
    if r as usize > MAX_MULTISET {
        return Err(LargenessError::MultisetTooLarge(r as usize));
    }
    assert_eq!(a.len(), g.carrier_size());
    let n = g.carrier_size();
    let mut meter = Meter::new(budget);
    let mut verdict = Verdict::No;
    let mut witness = Witness::None;
    if n > 0 {
        let mut tuple = vec![0usize; r as usize];
        loop {
            if !meter.tick() {
                verdict = Verdict::Inconclusive;
                break;
            }
            let (mask, undef) = fs_over_items(g, &tuple, op).expect("r is capped");
            if undef == 0 && mask.is_subset_of(a) {
                verdict = Verdict::Yes;
                witness = Witness::Multiset(tuple.clone());
                break;
            }
            if undef > 0 {
                // FP escaped the window; the tuple witnesses nothing
                meter.skip();
            }
            if !next_tuple(&mut tuple, n) {
                break;
            }
        }
    }
    Ok(LargenessReport {
        property: Property::IpR { r },
        operation: op,
        verdict,
        witness,
        budget_used: meter.use_,
        window_relative: !g.op_is_total(op),
    })
}

/// IP_r*: every size-`r` multiset's FP set meets `A`. Implemented as the
/// negation of [`is_ipr`] on the complement, which is exactly the duality
/// the definitions give.
pub fn is_ipr_star(
    g: &GroundStructure,
    a: &SubsetMask,
    r: u32,
    op: OpKind,
    budget: &Budget,
) -> Result<LargenessReport, LargenessError> {
    let inner = is_ipr(g, &a.complement(), r, op, budget)?;
    let (verdict, witness) = match inner.verdict {
        Verdict::Yes => {
            let w = inner.witness;
            (Verdict::No, w)
        }
        Verdict::No => (Verdict::Yes, Witness::None),
        Verdict::Inconclusive => (Verdict::Inconclusive, Witness::None),
    };
    Ok(LargenessReport {
        property: Property::IpRStar { r },
        verdict,
        witness,
        ..inner
    })
}

/// Combinatorial richness at one fixed `(n, r)` pair: for every matrix
/// `M ∈ S^{r×n}` some nonempty row set `α` and translate `s` put every
/// translated column sum `s + Σ_{i∈α} M_{i,j}` inside `A`. The ambient
/// operation is `add` when present (the notion lives in commutative
/// additive semigroups), otherwise the structure's single operation;
/// commutativity is checked, not assumed.
pub fn is_combinatorially_rich(
    g: &GroundStructure,
    a: &SubsetMask,
    n_cols: u32,
    r: u32,
    budget: &Budget,
) -> Result<LargenessReport, LargenessError> {
    if n_cols < 1 || r < 1 {
        return Err(LargenessError::BadParams(
            "combinatorially-rich needs n, r >= 1".into(),
        ));
    }
    if r > 20 {
        return Err(LargenessError::BadParams("r too large".into()));
    }
    let op = if g.has_op(OpKind::Add) {
        OpKind::Add
    } else {
        OpKind::Mul
    };
    let n = g.carrier_size();
    // commutativity precondition
    for x in 0..n {
        for y in x + 1..n {
            let (l, r_) = (g.apply(op, x, y), g.apply(op, y, x));
            if let (Some(l), Some(r_)) = (l, r_) {
                if l != r_ {
                    return Err(LargenessError::NotCommutative { op, a: x, b: y });
                }
            }
        }
    }
    assert_eq!(a.len(), n);
    let mut meter = Meter::new(budget);
    let cells = (r * n_cols) as usize;
    let mut verdict = Verdict::Yes;
    let mut witness = Witness::None;
    if n == 0 {
        return Err(LargenessError::BadParams("empty carrier".into()));
    }
    let mut matrix = vec![0usize; cells];
    loop {
        if !meter.tick() {
            verdict = Verdict::Inconclusive;
            break;
        }
        if !matrix_admits_translate(g, a, &matrix, r as usize, n_cols as usize, op, &mut meter) {
            verdict = Verdict::No;
            witness = Witness::Matrix {
                rows: r as usize,
                cols: n_cols as usize,
                entries: matrix.clone(),
            };
            break;
        }
        if !next_tuple(&mut matrix, n) {
            break;
        }
    }
    Ok(LargenessReport {
        property: Property::CombinatoriallyRich { n: n_cols, r },
        operation: op,
        verdict,
        witness,
        budget_used: meter.use_,
        window_relative: !g.op_is_total(op),
    })
}

fn matrix_admits_translate(
    g: &GroundStructure,
    a: &SubsetMask,
    matrix: &[Elem],
    rows: usize,
    cols: usize,
    op: OpKind,
    meter: &mut Meter,
) -> bool {
    let n = g.carrier_size();
    for alpha in 1usize..1 << rows {
        // column sums over the selected rows, in row order
        let mut sums = Vec::with_capacity(cols);
        let mut defined = true;
        for j in 0..cols {
            let mut acc: Option<Elem> = None;
            for i in 0..rows {
                if alpha >> i & 1 == 1 {
                    let cell = matrix[i * cols + j];
                    acc = match acc {
                        None => Some(cell),
                        Some(p) => g.apply(op, p, cell),
                    };
                    if acc.is_none() {
                        break;
                    }
                }
            }
            match acc {
                Some(v) => sums.push(v),
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if !defined {
            meter.skip();
            continue;
        }
        for s in 0..n {
            if sums
                .iter()
                .all(|&c| g.apply(op, s, c).map(|v| a.contains(v)).unwrap_or(false))
            {
                return true;
            }
        }
    }
    false
}
