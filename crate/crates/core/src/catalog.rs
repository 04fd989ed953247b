//! Generation of small semigroups and semirings: exhaustive enumeration at
//! tiny orders, curated families and products at order 4, and seeded
//! sampling with permutation scrambling. Test suites draw their structure
//! pools from here.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Builder, GroundStructure, OpKind, StructureKind};
use crate::Elem;

/// A total binary operation on `0..n` as a row-major table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    pub n: usize,
    pub cells: Vec<Elem>,
}

impl OpTable {
    #[inline]
    pub fn at(&self, a: Elem, b: Elem) -> Elem {
        self.cells[a * self.n + b]
    }

    pub fn is_associative(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let ab = self.at(a, b);
                for c in 0..n {
                    if self.at(ab, c) != self.at(a, self.at(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                if self.at(a, b) != self.at(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Relabels elements by the permutation `p` (conjugation), preserving
    /// associativity, commutativity, and distributivity with a partner
    /// table permuted the same way.
    pub fn permuted(&self, p: &[Elem]) -> OpTable {
        let n = self.n;
        let mut inv = vec![0; n];
        for (i, &pi) in p.iter().enumerate() {
            inv[pi] = i;
        }
        let mut cells = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                cells[a * n + b] = p[self.at(inv[a], inv[b])];
            }
        }
        OpTable { n, cells }
    }
}

fn distributes(add: &OpTable, mul: &OpTable) -> bool {
    let n = add.n;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // a*(b+c) = a*b + a*c and (b+c)*a = b*a + c*a
                if mul.at(a, add.at(b, c)) != add.at(mul.at(a, b), mul.at(a, c)) {
                    return false;
                }
                if mul.at(add.at(b, c), a) != add.at(mul.at(b, a), mul.at(c, a)) {
                    return false;
                }
            }
        }
    }
    true
}

/// All total binary operations on `0..n` satisfying `filter`, by brute
/// force over all n^(n*n) tables. Feasible for n <= 3.
fn enumerate_tables(n: usize, filter: impl Fn(&OpTable) -> bool) -> Vec<OpTable> {
    let cells = n * n;
    let total = (n as u64).pow(cells as u32);
    let mut out = Vec::new();
    let mut table = OpTable {
        n,
        cells: vec![0; cells],
    };
    for code in 0..total {
        let mut c = code;
        for slot in table.cells.iter_mut() {
            *slot = (c % n as u64) as usize;
            c /= n as u64;
        }
        if filter(&table) {
            out.push(table.clone());
        }
    }
    out
}

/// Every labeled semigroup of order `n <= 3`.
pub fn all_semigroups(n: usize) -> Vec<OpTable> {
    assert!(n <= 3, "brute-force table enumeration is capped at order 3");
    enumerate_tables(n, OpTable::is_associative)
}

/// Every labeled commutative semigroup of order `n <= 4`. Commutativity
/// cuts the table space to n^(n(n+1)/2), which keeps order 4 feasible.
pub fn all_commutative_semigroups(n: usize) -> Vec<OpTable> {
    assert!(n <= 4, "commutative enumeration is capped at order 4");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .collect();
    let total = (n as u64).pow(pairs.len() as u32);
    let mut out = Vec::new();
    let mut table = OpTable {
        n,
        cells: vec![0; n * n],
    };
    for code in 0..total {
        let mut c = code;
        for &(a, b) in &pairs {
            let v = (c % n as u64) as usize;
            c /= n as u64;
            table.cells[a * n + b] = v;
            table.cells[b * n + a] = v;
        }
        if table.is_associative() {
            out.push(table.clone());
        }
    }
    out
}

/// A table pair forming a semiring: commutative associative `add`,
/// associative `mul`, both distributive laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiringTables {
    pub add: OpTable,
    pub mul: OpTable,
}

impl SemiringTables {
    pub fn to_structure(&self) -> GroundStructure {
        GroundStructure::from_tables(
            StructureKind::Semiring,
            self.add.n,
            Some(self.add.cells.iter().map(|&c| Some(c)).collect()),
            Some(self.mul.cells.iter().map(|&c| Some(c)).collect()),
        )
        .expect("catalog tables are valid")
    }

    pub fn permuted(&self, p: &[Elem]) -> SemiringTables {
        SemiringTables {
            add: self.add.permuted(p),
            mul: self.mul.permuted(p),
        }
    }

    /// Direct product; carrier indices are `a * n2 + b`.
    pub fn product(&self, other: &SemiringTables) -> SemiringTables {
        let (n1, n2) = (self.add.n, other.add.n);
        let n = n1 * n2;
        let combine = |t1: &OpTable, t2: &OpTable| {
            let mut cells = vec![0; n * n];
            for a1 in 0..n1 {
                for b1 in 0..n2 {
                    for a2 in 0..n1 {
                        for b2 in 0..n2 {
                            let x = a1 * n2 + b1;
                            let y = a2 * n2 + b2;
                            cells[x * n + y] = t1.at(a1, a2) * n2 + t2.at(b1, b2);
                        }
                    }
                }
            }
            OpTable { n, cells }
        };
        SemiringTables {
            add: combine(&self.add, &other.add),
            mul: combine(&self.mul, &other.mul),
        }
    }
}

/// Every labeled semiring of order `n <= 3`.
pub fn all_semirings(n: usize) -> Vec<SemiringTables> {
    assert!(n <= 3, "exhaustive semiring enumeration is capped at order 3");
    let adds = all_commutative_semigroups(n);
    let muls = all_semigroups(n);
    let mut out = Vec::new();
    for add in &adds {
        for mul in &muls {
            if distributes(add, mul) {
                out.push(SemiringTables {
                    add: add.clone(),
                    mul: mul.clone(),
                });
            }
        }
    }
    out
}

fn table_from_structure(g: &GroundStructure, op: OpKind) -> OpTable {
    let n = g.carrier_size();
    let cells = (0..n * n)
        .map(|i| g.apply(op, i / n, i % n).expect("total"))
        .collect();
    OpTable { n, cells }
}

/// Saturating min-plus / max-plus arithmetic on `{0..n-1}`: total semirings
/// at any order.
fn saturating_tropical(n: usize, use_max: bool) -> SemiringTables {
    let add_cells = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            if use_max {
                a.max(b)
            } else {
                a.min(b)
            }
        })
        .collect();
    let mul_cells = (0..n * n).map(|i| (i / n + i % n).min(n - 1)).collect();
    SemiringTables {
        add: OpTable { n, cells: add_cells },
        mul: OpTable { n, cells: mul_cells },
    }
}

/// A curated family of order-4 semirings: zmod(4), the 4-chain lattices,
/// saturating tropical pairs, and all products of order-2 semirings.
pub fn curated_order4_semirings() -> Vec<SemiringTables> {
    let mut out = Vec::new();
    let z4 = GroundStructure::zmod(4);
    out.push(SemiringTables {
        add: table_from_structure(&z4, OpKind::Add),
        mul: table_from_structure(&z4, OpKind::Mul),
    });
    // chain lattice: join = max, meet = min (and the swapped pair)
    let max_t = OpTable {
        n: 4,
        cells: (0..16).map(|i| (i / 4).max(i % 4)).collect(),
    };
    let min_t = OpTable {
        n: 4,
        cells: (0..16).map(|i| (i / 4).min(i % 4)).collect(),
    };
    out.push(SemiringTables {
        add: max_t.clone(),
        mul: min_t.clone(),
    });
    out.push(SemiringTables {
        add: min_t,
        mul: max_t,
    });
    out.push(saturating_tropical(4, false));
    out.push(saturating_tropical(4, true));
    let order2 = all_semirings(2);
    for a in &order2 {
        for b in &order2 {
            out.push(a.product(b));
        }
    }
    out.retain(|s| {
        s.add.is_associative()
            && s.add.is_commutative()
            && s.mul.is_associative()
            && distributes(&s.add, &s.mul)
    });
    out
}

/// Seeded pool of valid semigroup Cayley tables of order 2..=4: rejection
/// sampling where the associative density allows it (orders 2 and 3, and
/// commutative order 4), permuted products of smaller tables elsewhere.
pub fn sample_semigroups(count: usize, seed: u64) -> Vec<OpTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let twos = all_semigroups(2);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match rng.gen_range(0..4u32) {
            // order 2 or 3 by rejection over raw random tables
            0 | 1 => {
                let n = rng.gen_range(2..=3usize);
                loop {
                    let table = OpTable {
                        n,
                        cells: (0..n * n).map(|_| rng.gen_range(0..n)).collect(),
                    };
                    if table.is_associative() {
                        out.push(table);
                        break;
                    }
                }
            }
            // commutative order 4 by rejection
            2 => loop {
                let n = 4;
                let mut table = OpTable {
                    n,
                    cells: vec![0; 16],
                };
                for a in 0..n {
                    for b in a..n {
                        let v = rng.gen_range(0..n);
                        table.cells[a * n + b] = v;
                        table.cells[b * n + a] = v;
                    }
                }
                if table.is_associative() {
                    out.push(table);
                    break;
                }
            },
            // order 4 (possibly non-commutative) as a permuted product of
            // order-2 semigroups
            _ => {
                let a = twos.choose(&mut rng).unwrap();
                let b = twos.choose(&mut rng).unwrap();
                let n = 4;
                let mut cells = vec![0; 16];
                for x in 0..n {
                    for y in 0..n {
                        let (x1, x2) = (x / 2, x % 2);
                        let (y1, y2) = (y / 2, y % 2);
                        cells[x * n + y] = a.at(x1, y1) * 2 + b.at(x2, y2);
                    }
                }
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                out.push(OpTable { n, cells }.permuted(&p));
            }
        }
    }
    out
}

/// Seeded pool of semirings of order 2..=4 drawn from the exhaustive small
/// lists and the curated order-4 family, scrambled by random permutations.
pub fn sample_semirings(count: usize, seed: u64) -> Vec<SemiringTables> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = all_semirings(2);
    pool.extend(all_semirings(3));
    pool.extend(curated_order4_semirings());
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let base = pool.choose(&mut rng).unwrap();
        let mut p: Vec<usize> = (0..base.add.n).collect();
        p.shuffle(&mut rng);
        out.push(base.permuted(&p));
    }
    out
}

/// Builds a semigroup [`GroundStructure`] from a table under `op`.
pub fn semigroup_structure(table: &OpTable, op: OpKind) -> GroundStructure {
    GroundStructure::semigroup_from_table(table.n, op, table.cells.clone())
}

/// The standard small windowed structures used across the test suites.
pub fn windowed_examples() -> Vec<GroundStructure> {
    vec![
        GroundStructure::nat_window(12),
        GroundStructure::from_builder(
            StructureKind::Semiring,
            Builder::PolyNat {
                max_deg: 1,
                max_coeff: 2,
            },
        )
        .expect("valid"),
        GroundStructure::from_builder(
            StructureKind::Semiring,
            Builder::TropicalWindow { max: 6 },
        )
        .expect("valid"),
    ]
}
