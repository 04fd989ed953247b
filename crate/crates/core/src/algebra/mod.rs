//! Finite and windowed semigroups/semirings over an indexed carrier.
//!
//! A [`GroundStructure`] owns up to two partial binary operations. Windowed
//! builders (`nat-window`, `poly-nat`, ...) mark any result that escapes the
//! window as undefined; nothing wraps or saturates, so every witness reported
//! downstream denotes a genuine element of the intended structure.

mod axioms;
mod hom;
mod parse;

pub use axioms::{AxiomCheck, AxiomReport};
pub use hom::{check_homomorphism, HomCheck, HomOps, Homomorphism};
pub use parse::parse_structure;

use thiserror::Error;

use crate::mask::SubsetMask;
use crate::Elem;

/// Largest carrier a structure may have; keeps masks and scans desk-scale.
pub const MAX_CARRIER: usize = 1 << 22;

/// Sentinel for an undefined cell in an explicit operation table.
const UNDEF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Add,
    Mul,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::Add => "add",
            OpKind::Mul => "mul",
        }
    }
}

impl std::fmt::Display for OpKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Semigroup,
    Semiring,
}

impl StructureKind {
    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Semigroup => "semigroup",
            StructureKind::Semiring => "semiring",
        }
    }
}

/// How the carrier and its operations were produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builder {
    /// Operations given as explicit tables.
    Explicit,
    /// Naturals `lo..=hi` under ordinary `+` and `*`; results above `hi`
    /// are undefined.
    NatWindow { lo: u64, hi: u64 },
    /// Integers mod `m`; both operations total.
    ZMod { modulus: u64 },
    /// Polynomials with coefficients in `0..=max_coeff` and degree at most
    /// `max_deg`, zero polynomial excluded; sums or products escaping either
    /// bound are undefined.
    PolyNat { max_deg: usize, max_coeff: u64 },
    /// `{0..=max}` with `add = min` (total) and `mul = +` capped at `max`.
    TropicalWindow { max: u64 },
    /// Nonempty words of length at most `max_len` over an `alphabet`-letter
    /// alphabet under concatenation. Multiplicative semigroup only.
    FreeWords { alphabet: usize, max_len: usize },
}

impl Builder {
    pub fn describe(&self) -> String {
        match self {
            Builder::Explicit => "explicit".into(),
            Builder::NatWindow { lo: 1, hi } => format!("nat-window({hi})"),
            Builder::NatWindow { lo, hi } => format!("nat-window({lo}..{hi})"),
            Builder::ZMod { modulus } => format!("zmod({modulus})"),
            Builder::PolyNat { max_deg, max_coeff } => format!("poly-nat({max_deg},{max_coeff})"),
            Builder::TropicalWindow { max } => format!("tropical-window({max})"),
            Builder::FreeWords { alphabet, max_len } => format!("free-words({alphabet},{max_len})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("structure file, line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("table for {op} has wrong shape: expected {expected} rows of {expected} entries")]
    TableShape { op: OpKind, expected: usize },
    #[error("table entry {value} out of range for carrier of {carrier}")]
    EntryOutOfRange { value: u64, carrier: usize },
    #[error("operation {0} is not present on this structure")]
    OpNotPresent(OpKind),
    #[error("a semiring needs both operations, a semigroup exactly one")]
    KindMismatch,
    #[error("carrier of {0} elements exceeds the supported maximum {MAX_CARRIER}")]
    CarrierTooLarge(u128),
    #[error("homomorphism map has {got} entries but the source carrier has {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("element {0} out of range")]
    ElementOutOfRange(Elem),
}

/// A finite or windowed carrier with one or two partial binary operations.
#[derive(Debug, Clone)]
pub struct GroundStructure {
    kind: StructureKind,
    builder: Builder,
    n: usize,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    has_add: bool,
    has_mul: bool,
    add_total: bool,
    mul_total: bool,
}

impl GroundStructure {
    /// Materializes a builder description into a queryable structure.
    pub fn from_builder(kind: StructureKind, builder: Builder) -> Result<Self, AlgebraError> {
        let (n, has_add, has_mul) = match &builder {
            Builder::Explicit => {
                return Err(AlgebraError::Parse {
                    line: 0,
                    message: "explicit structures need tables; use from_tables".into(),
                })
            }
            Builder::NatWindow { lo, hi } => {
                if *lo < 1 || hi < lo {
                    return Err(AlgebraError::Parse {
                        line: 0,
                        message: format!("nat-window needs 1 <= lo <= hi, got {lo}..{hi}"),
                    });
                }
                ((hi - lo + 1) as u128, true, true)
            }
            Builder::ZMod { modulus } => {
                if *modulus == 0 {
                    return Err(AlgebraError::Parse {
                        line: 0,
                        message: "zmod modulus must be positive".into(),
                    });
                }
                (*modulus as u128, true, true)
            }
            Builder::PolyNat { max_deg, max_coeff } => {
                if *max_coeff == 0 {
                    return Err(AlgebraError::Parse {
                        line: 0,
                        message: "poly-nat max_coeff must be positive".into(),
                    });
                }
                let base = *max_coeff as u128 + 1;
                let mut count: u128 = 1;
                for _ in 0..=*max_deg {
                    count = count.saturating_mul(base);
                    if count > MAX_CARRIER as u128 + 1 {
                        return Err(AlgebraError::CarrierTooLarge(count));
                    }
                }
                (count - 1, true, true)
            }
            Builder::TropicalWindow { max } => (*max as u128 + 1, true, true),
            Builder::FreeWords { alphabet, max_len } => {
                if *alphabet == 0 || *alphabet > 26 || *max_len == 0 {
                    return Err(AlgebraError::Parse {
                        line: 0,
                        message: "free-words needs 1..=26 letters and max_len >= 1".into(),
                    });
                }
                let a = *alphabet as u128;
                let mut count: u128 = 0;
                let mut pow: u128 = 1;
                for _ in 1..=*max_len {
                    pow = pow.saturating_mul(a);
                    count = count.saturating_add(pow);
                    if count > MAX_CARRIER as u128 {
                        return Err(AlgebraError::CarrierTooLarge(count));
                    }
                }
                (count, false, true)
            }
        };
        if n > MAX_CARRIER as u128 {
            return Err(AlgebraError::CarrierTooLarge(n));
        }
        let n = n as usize;
        let expect_kind = if has_add && has_mul {
            StructureKind::Semiring
        } else {
            StructureKind::Semigroup
        };
        if kind != expect_kind {
            return Err(AlgebraError::KindMismatch);
        }
        let mut g = GroundStructure {
            kind,
            builder,
            n,
            add_table: None,
            mul_table: None,
            has_add,
            has_mul,
            add_total: false,
            mul_total: false,
        };
        g.add_total = has_add && g.builder_op_total(OpKind::Add);
        g.mul_total = has_mul && g.builder_op_total(OpKind::Mul);
        Ok(g)
    }

    /// Builds an explicit-table structure. `None` entries are undefined.
    pub fn from_tables(
        kind: StructureKind,
        n: usize,
        add: Option<Vec<Option<Elem>>>,
        mul: Option<Vec<Option<Elem>>>,
    ) -> Result<Self, AlgebraError> {
        if n > MAX_CARRIER {
            return Err(AlgebraError::CarrierTooLarge(n as u128));
        }
        match (kind, add.is_some(), mul.is_some()) {
            (StructureKind::Semiring, true, true) => {}
            (StructureKind::Semigroup, true, false) | (StructureKind::Semigroup, false, true) => {}
            _ => return Err(AlgebraError::KindMismatch),
        }
        let pack = |op: OpKind, t: Vec<Option<Elem>>| -> Result<Vec<u32>, AlgebraError> {
            if t.len() != n * n {
                return Err(AlgebraError::TableShape { op, expected: n });
            }
            t.into_iter()
                .map(|cell| match cell {
                    None => Ok(UNDEF),
                    Some(e) if e < n => Ok(e as u32),
                    Some(e) => Err(AlgebraError::EntryOutOfRange {
                        value: e as u64,
                        carrier: n,
                    }),
                })
                .collect()
        };
        let add_table = add.map(|t| pack(OpKind::Add, t)).transpose()?;
        let mul_table = mul.map(|t| pack(OpKind::Mul, t)).transpose()?;
        let has_add = add_table.is_some();
        let has_mul = mul_table.is_some();
        let total = |t: &Option<Vec<u32>>| {
            t.as_ref()
                .map(|t| t.iter().all(|&c| c != UNDEF))
                .unwrap_or(false)
        };
        Ok(GroundStructure {
            kind,
            builder: Builder::Explicit,
            n,
            add_total: total(&add_table),
            mul_total: total(&mul_table),
            add_table,
            mul_table,
            has_add,
            has_mul,
        })
    }

    /// Shorthand for a total single-operation semigroup table.
    pub fn semigroup_from_table(n: usize, op: OpKind, table: Vec<Elem>) -> Self {
        let t = Some(table.into_iter().map(Some).collect());
        match op {
            OpKind::Add => Self::from_tables(StructureKind::Semigroup, n, t, None),
            OpKind::Mul => Self::from_tables(StructureKind::Semigroup, n, None, t),
        }
        .expect("valid table")
    }

    pub fn zmod(m: u64) -> Self {
        Self::from_builder(StructureKind::Semiring, Builder::ZMod { modulus: m }).expect("valid")
    }

    pub fn nat_window(hi: u64) -> Self {
        Self::from_builder(StructureKind::Semiring, Builder::NatWindow { lo: 1, hi })
            .expect("valid")
    }

    pub fn nat_range(lo: u64, hi: u64) -> Result<Self, AlgebraError> {
        Self::from_builder(StructureKind::Semiring, Builder::NatWindow { lo, hi })
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn builder(&self) -> &Builder {
        &self.builder
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn has_op(&self, op: OpKind) -> bool {
        match op {
            OpKind::Add => self.has_add,
            OpKind::Mul => self.has_mul,
        }
    }

    pub fn require_op(&self, op: OpKind) -> Result<(), AlgebraError> {
        if self.has_op(op) {
            Ok(())
        } else {
            Err(AlgebraError::OpNotPresent(op))
        }
    }

    /// True when every pair has a defined result under `op`.
    pub fn op_is_total(&self, op: OpKind) -> bool {
        match op {
            OpKind::Add => self.add_total,
            OpKind::Mul => self.mul_total,
        }
    }

    fn builder_op_total(&self, op: OpKind) -> bool {
        match (&self.builder, op) {
            (Builder::ZMod { .. }, _) => true,
            (Builder::TropicalWindow { .. }, OpKind::Add) => true,
            (Builder::TropicalWindow { max }, OpKind::Mul) => *max == 0,
            // hi + hi > hi for hi >= 1, so window addition always has holes
            (Builder::NatWindow { .. }, OpKind::Add) => false,
            (Builder::NatWindow { lo, hi }, OpKind::Mul) => *lo == 1 && *hi == 1,
            (Builder::PolyNat { max_deg, max_coeff }, OpKind::Mul) => {
                *max_deg == 0 && *max_coeff == 1
            }
            (Builder::PolyNat { .. }, OpKind::Add) => false,
            (Builder::FreeWords { .. }, OpKind::Mul) => false,
            _ => false,
        }
    }

    /// Applies `op`; `None` means the result falls outside the window or the
    /// table cell is undefined.
    #[inline]
    pub fn apply(&self, op: OpKind, a: Elem, b: Elem) -> Option<Elem> {
        debug_assert!(a < self.n && b < self.n);
        match &self.builder {
            Builder::Explicit => {
                let t = match op {
                    OpKind::Add => self.add_table.as_ref()?,
                    OpKind::Mul => self.mul_table.as_ref()?,
                };
                match t[a * self.n + b] {
                    UNDEF => None,
                    c => Some(c as usize),
                }
            }
            Builder::NatWindow { lo, hi } => {
                let (va, vb) = (*lo + a as u64, *lo + b as u64);
                let v = match op {
                    OpKind::Add => va.checked_add(vb)?,
                    OpKind::Mul => va.checked_mul(vb)?,
                };
                if v <= *hi {
                    Some((v - *lo) as usize)
                } else {
                    None
                }
            }
            Builder::ZMod { modulus } => {
                let (va, vb) = (a as u64, b as u64);
                let v = match op {
                    OpKind::Add => (va + vb) % modulus,
                    OpKind::Mul => (va * vb) % modulus,
                };
                Some(v as usize)
            }
            Builder::PolyNat { max_deg, max_coeff } => {
                poly_apply(op, a, b, *max_deg, *max_coeff)
            }
            Builder::TropicalWindow { max } => {
                let (va, vb) = (a as u64, b as u64);
                match op {
                    OpKind::Add => Some(va.min(vb) as usize),
                    OpKind::Mul => {
                        let v = va + vb;
                        if v <= *max {
                            Some(v as usize)
                        } else {
                            None
                        }
                    }
                }
            }
            Builder::FreeWords { alphabet, max_len } => {
                if op == OpKind::Add {
                    return None;
                }
                words_concat(a, b, *alphabet, *max_len)
            }
        }
    }

    /// Left-to-right fold of `op` over `items`; undefined propagates.
    pub fn apply_chain(&self, op: OpKind, items: &[Elem]) -> Option<Elem> {
        let mut it = items.iter();
        let mut acc = *it.next()?;
        for &x in it {
            acc = self.apply(op, acc, x)?;
        }
        Some(acc)
    }

    /// `x` combined with itself `times` times (`times >= 1`).
    pub fn apply_repeat(&self, op: OpKind, x: Elem, times: u32) -> Option<Elem> {
        assert!(times >= 1);
        let mut acc = x;
        for _ in 1..times {
            acc = self.apply(op, acc, x)?;
        }
        Some(acc)
    }

    /// The set `{x : s∘x defined and s∘x ∈ A}`.
    pub fn preimage(&self, op: OpKind, s: Elem, a: &SubsetMask) -> SubsetMask {
        assert!(s < self.n);
        assert_eq!(a.len(), self.n);
        SubsetMask::from_fn(self.n, |x| {
            self.apply(op, s, x).map(|r| a.contains(r)).unwrap_or(false)
        })
    }

    /// The set `{a∘s : a ∈ A, a∘s defined}`.
    pub fn right_translate(&self, op: OpKind, a: &SubsetMask, s: Elem) -> SubsetMask {
        assert!(s < self.n);
        assert_eq!(a.len(), self.n);
        let mut out = SubsetMask::empty(self.n);
        for x in a.iter() {
            if let Some(r) = self.apply(op, x, s) {
                out.insert(r);
            }
        }
        out
    }

    /// Human-readable name of an element (its value, polynomial, or word).
    pub fn element_name(&self, e: Elem) -> String {
        assert!(e < self.n);
        match &self.builder {
            Builder::Explicit => e.to_string(),
            Builder::NatWindow { lo, .. } => (lo + e as u64).to_string(),
            Builder::ZMod { .. } | Builder::TropicalWindow { .. } => e.to_string(),
            Builder::PolyNat { max_deg, max_coeff } => {
                let coeffs = poly_decode(e, *max_deg, *max_coeff);
                poly_name(&coeffs)
            }
            Builder::FreeWords { alphabet, max_len } => {
                let (len, digits) = word_decode(e, *alphabet, *max_len);
                digits[..len]
                    .iter()
                    .map(|&d| (b'a' + d as u8) as char)
                    .collect()
            }
        }
    }

    /// For value-based builders, the element with the given numeric value.
    pub fn element_of_value(&self, v: u64) -> Option<Elem> {
        match &self.builder {
            Builder::NatWindow { lo, hi } => {
                if v >= *lo && v <= *hi {
                    Some((v - lo) as usize)
                } else {
                    None
                }
            }
            Builder::ZMod { modulus } => Some((v % modulus) as usize),
            Builder::TropicalWindow { max } => (v <= *max).then_some(v as usize),
            _ => None,
        }
    }

    /// Renders the structure in the explicit-table file format.
    pub fn to_explicit_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("kind: {}\n", self.kind.name()));
        out.push_str(&format!("elements: {}\n", self.n));
        for op in [OpKind::Add, OpKind::Mul] {
            if !self.has_op(op) {
                continue;
            }
            out.push_str(&format!("table {}:\n", op.name()));
            for a in 0..self.n {
                let row: Vec<String> = (0..self.n)
                    .map(|b| match self.apply(op, a, b) {
                        Some(c) => c.to_string(),
                        None => "-".into(),
                    })
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }

    /// Validates semigroup/semiring axioms by exhaustive (capped) triple scan.
    pub fn validate_axioms(&self) -> AxiomReport {
        axioms::validate(self, u64::MAX)
    }

    /// Axiom validation with a cap on scanned triples per axiom.
    pub fn validate_axioms_capped(&self, max_triples: u64) -> AxiomReport {
        axioms::validate(self, max_triples)
    }
}

// Polynomial carrier: elements ordered by (degree, coefficient vector lex,
// constant term first), zero polynomial excluded.

fn poly_block_offset(deg: usize, base: u64) -> usize {
    // number of polynomials of degree < deg = base^deg - 1
    (base.pow(deg as u32) - 1) as usize
}

pub(crate) fn poly_decode(idx: Elem, max_deg: usize, max_coeff: u64) -> Vec<u64> {
    let base = max_coeff + 1;
    let mut deg = 0;
    while deg < max_deg && poly_block_offset(deg + 1, base) <= idx {
        deg += 1;
    }
    let r = (idx - poly_block_offset(deg, base)) as u64;
    let lead = r % max_coeff + 1;
    let mut q = r / max_coeff;
    let mut coeffs = vec![0u64; deg + 1];
    coeffs[deg] = lead;
    for i in (0..deg).rev() {
        // c_0 is the most significant digit of q
        let p = base.pow((deg - 1 - i) as u32);
        coeffs[i] = q / p;
        q %= p;
    }
    coeffs
}

pub(crate) fn poly_encode(coeffs: &[u64], max_deg: usize, max_coeff: u64) -> Option<Elem> {
    let deg = coeffs.iter().rposition(|&c| c != 0)?;
    if deg > max_deg || coeffs.iter().any(|&c| c > max_coeff) {
        return None;
    }
    let base = max_coeff + 1;
    let mut q: u64 = 0;
    for &c in &coeffs[..deg] {
        q = q * base + c;
    }
    let rank = q * max_coeff + (coeffs[deg] - 1);
    Some(poly_block_offset(deg, base) + rank as usize)
}

fn poly_apply(op: OpKind, a: Elem, b: Elem, max_deg: usize, max_coeff: u64) -> Option<Elem> {
    let ca = poly_decode(a, max_deg, max_coeff);
    let cb = poly_decode(b, max_deg, max_coeff);
    let out = match op {
        OpKind::Add => {
            let mut out = vec![0u64; ca.len().max(cb.len())];
            for (i, &c) in ca.iter().enumerate() {
                out[i] += c;
            }
            for (i, &c) in cb.iter().enumerate() {
                out[i] += c;
            }
            out
        }
        OpKind::Mul => {
            let mut out = vec![0u64; ca.len() + cb.len() - 1];
            for (i, &x) in ca.iter().enumerate() {
                for (j, &y) in cb.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
    };
    poly_encode(&out, max_deg, max_coeff)
}

fn poly_name(coeffs: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        };
        parts.push(part);
    }
    parts.join("+")
}

// Free-word carrier: words ordered by (length, lexicographic).

fn word_block_offset(len: usize, a: usize) -> usize {
    // number of words of length < len
    let mut total = 0usize;
    let mut pow = 1usize;
    for _ in 1..len {
        pow *= a;
        total += pow;
    }
    total
}

pub(crate) fn word_decode(idx: Elem, alphabet: usize, max_len: usize) -> (usize, Vec<usize>) {
    let mut len = 1;
    while len < max_len && word_block_offset(len + 1, alphabet) <= idx {
        len += 1;
    }
    let mut r = idx - word_block_offset(len, alphabet);
    let mut digits = vec![0usize; len];
    for i in (0..len).rev() {
        digits[i] = r % alphabet;
        r /= alphabet;
    }
    (len, digits)
}

fn word_encode(digits: &[usize], alphabet: usize, max_len: usize) -> Option<Elem> {
    if digits.is_empty() || digits.len() > max_len {
        return None;
    }
    let mut r = 0usize;
    for &d in digits {
        r = r * alphabet + d;
    }
    Some(word_block_offset(digits.len(), alphabet) + r)
}

fn words_concat(a: Elem, b: Elem, alphabet: usize, max_len: usize) -> Option<Elem> {
    let (la, da) = word_decode(a, alphabet, max_len);
    let (lb, db) = word_decode(b, alphabet, max_len);
    if la + lb > max_len {
        return None;
    }
    let mut d = da;
    d.truncate(la);
    d.extend_from_slice(&db[..lb]);
    word_encode(&d, alphabet, max_len)
}
