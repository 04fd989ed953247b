//! Bit-packed subsets of a carrier, the universal currency of largeness
//! checks and color classes.

use std::fmt;

use crate::Elem;

/// A subset of the carrier, one membership bit per element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    len: usize,
    bits: Vec<u64>,
}

impl SubsetMask {
    pub fn empty(len: usize) -> Self {
        SubsetMask {
            len,
            bits: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut m = Self::empty(len);
        for w in m.bits.iter_mut() {
            *w = !0;
        }
        m.clear_tail();
        m
    }

    pub fn from_indices(len: usize, indices: &[Elem]) -> Self {
        let mut m = Self::empty(len);
        for &i in indices {
            m.insert(i);
        }
        m
    }

    /// Builds a mask from a membership predicate.
    pub fn from_fn(len: usize, mut pred: impl FnMut(Elem) -> bool) -> Self {
        let mut m = Self::empty(len);
        for i in 0..len {
            if pred(i) {
                m.insert(i);
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn contains(&self, i: Elem) -> bool {
        debug_assert!(i < self.len);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: Elem) {
        assert!(i < self.len, "index {i} out of range for mask of {}", self.len);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: Elem) {
        assert!(i < self.len);
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn union_with(&mut self, other: &SubsetMask) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &SubsetMask) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        let mut m = self.clone();
        m.union_with(other);
        m
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        let mut m = self.clone();
        m.intersect_with(other);
        m
    }

    pub fn complement(&self) -> SubsetMask {
        let mut m = self.clone();
        for w in m.bits.iter_mut() {
            *w = !*w;
        }
        m.clear_tail();
        m
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        assert_eq!(self.len, other.len);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<Elem> {
        self.iter().next()
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.bits.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    fn clear_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        if self.len == 0 {
            self.bits.clear();
        }
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}/{}", self.len)
    }
}

/// Parses the subset file format: element indices in strictly increasing
/// order, one per line. Blank lines and `#` comments are ignored.
pub fn parse_subset(text: &str, carrier_size: usize) -> Result<SubsetMask, String> {
    let mut mask = SubsetMask::empty(carrier_size);
    let mut last: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let idx: usize = line
            .parse()
            .map_err(|_| format!("line {}: expected an element index, got {line:?}", lineno + 1))?;
        if idx >= carrier_size {
            return Err(format!(
                "line {}: index {idx} out of range for carrier of {carrier_size}",
                lineno + 1
            ));
        }
        if let Some(prev) = last {
            if idx <= prev {
                return Err(format!(
                    "line {}: indices must be strictly increasing ({prev} then {idx})",
                    lineno + 1
                ));
            }
        }
        last = Some(idx);
        mask.insert(idx);
    }
    Ok(mask)
}

/// Renders a mask in the subset file format.
pub fn format_subset(mask: &SubsetMask) -> String {
    let mut out = String::new();
    for i in mask.iter() {
        out.push_str(&i.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_ops() {
        let a = SubsetMask::from_indices(70, &[0, 3, 64, 69]);
        let b = SubsetMask::from_indices(70, &[3, 5, 64]);
        assert_eq!(a.union(&b).to_indices(), vec![0, 3, 5, 64, 69]);
        assert_eq!(a.intersection(&b).to_indices(), vec![3, 64]);
        assert!(b.intersection(&a).is_subset_of(&a));
        assert_eq!(a.complement().count(), 66);
        assert!(SubsetMask::full(70).is_full());
        assert!(SubsetMask::empty(70).is_empty());
        assert_eq!(a.min(), Some(0));
        assert_eq!(SubsetMask::empty(3).min(), None);
    }

    #[test]
    fn subset_file_round_trip() {
        let m = SubsetMask::from_indices(10, &[1, 4, 9]);
        let text = format_subset(&m);
        assert_eq!(parse_subset(&text, 10).unwrap(), m);
        assert!(parse_subset("3\n1\n", 10).is_err());
        assert!(parse_subset("12\n", 10).is_err());
        assert!(parse_subset("# comment\n\n2\n", 10).unwrap().contains(2));
    }
}
