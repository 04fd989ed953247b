//! The structure file format.
//!
//! ```text
//! kind: semiring
//! builder: zmod(6)
//! ```
//!
//! or, with explicit tables (`-` marks an undefined cell):
//!
//! ```text
//! kind: semigroup
//! elements: 3
//! table mul:
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! Builders: `nat-window(hi)`, `nat-window(lo..hi)`, `zmod(m)`,
//! `poly-nat(max_deg,max_coeff)`, `tropical-window(max)`,
//! `free-words(alphabet,max_len)`. Blank lines and `#` comments are ignored.

use super::{AlgebraError, Builder, GroundStructure, StructureKind};
use crate::Elem;

pub fn parse_structure(text: &str) -> Result<GroundStructure, AlgebraError> {
    let err = |line: usize, message: String| AlgebraError::Parse { line, message };
    let mut kind: Option<StructureKind> = None;
    let mut builder: Option<Builder> = None;
    let mut elements: Option<usize> = None;
    let mut add: Option<Vec<Option<Elem>>> = None;
    let mut mul: Option<Vec<Option<Elem>>> = None;

    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, raw)) = lines.next() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(lineno, format!("expected `key: value`, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "kind" => {
                kind = Some(match value {
                    "semigroup" => StructureKind::Semigroup,
                    "semiring" => StructureKind::Semiring,
                    other => return Err(err(lineno, format!("unknown kind {other:?}"))),
                })
            }
            "builder" => builder = Some(parse_builder(value, lineno)?),
            "elements" => {
                elements = Some(
                    value
                        .parse()
                        .map_err(|_| err(lineno, format!("bad element count {value:?}")))?,
                )
            }
            "table add" | "table mul" => {
                let n = elements
                    .ok_or_else(|| err(lineno, "`elements:` must precede tables".into()))?;
                let mut cells = Vec::with_capacity(n * n);
                for _ in 0..n {
                    let (rlineno, row) = loop {
                        match lines.next() {
                            Some((j, raw)) => {
                                let row = raw.split('#').next().unwrap_or("").trim();
                                if !row.is_empty() {
                                    break (j + 1, row);
                                }
                            }
                            None => {
                                return Err(err(lineno, format!("table needs {n} rows")));
                            }
                        }
                    };
                    let mut count = 0;
                    for tok in row.split_whitespace() {
                        count += 1;
                        if tok == "-" {
                            cells.push(None);
                        } else {
                            let v: u64 = tok.parse().map_err(|_| {
                                err(rlineno, format!("bad table entry {tok:?}"))
                            })?;
                            if v as usize >= n {
                                return Err(AlgebraError::EntryOutOfRange {
                                    value: v,
                                    carrier: n,
                                });
                            }
                            cells.push(Some(v as usize));
                        }
                    }
                    if count != n {
                        return Err(err(rlineno, format!("expected {n} entries per row")));
                    }
                }
                if key == "table add" {
                    add = Some(cells);
                } else {
                    mul = Some(cells);
                }
            }
            other => return Err(err(lineno, format!("unknown field {other:?}"))),
        }
    }

    let kind = kind.ok_or_else(|| err(0, "missing `kind:`".into()))?;
    match builder {
        Some(b) => {
            if elements.is_some() || add.is_some() || mul.is_some() {
                return Err(err(0, "builder structures take no explicit tables".into()));
            }
            GroundStructure::from_builder(kind, b)
        }
        None => {
            let n = elements.ok_or_else(|| err(0, "missing `elements:` or `builder:`".into()))?;
            GroundStructure::from_tables(kind, n, add, mul)
        }
    }
}

fn parse_builder(value: &str, lineno: usize) -> Result<Builder, AlgebraError> {
    let err = |message: String| AlgebraError::Parse { line: lineno, message };
    let open = value
        .find('(')
        .ok_or_else(|| err(format!("builder needs arguments: {value:?}")))?;
    if !value.ends_with(')') {
        return Err(err(format!("unclosed builder arguments: {value:?}")));
    }
    let name = value[..open].trim();
    let args: Vec<&str> = value[open + 1..value.len() - 1]
        .split(',')
        .map(|s| s.trim())
        .collect();
    let int = |s: &str| -> Result<u64, AlgebraError> {
        s.parse().map_err(|_| err(format!("bad integer {s:?}")))
    };
    match (name, args.as_slice()) {
        ("zmod", [m]) => Ok(Builder::ZMod { modulus: int(m)? }),
        ("nat-window", [spec]) => {
            if let Some((lo, hi)) = spec.split_once("..") {
                Ok(Builder::NatWindow {
                    lo: int(lo)?,
                    hi: int(hi)?,
                })
            } else {
                Ok(Builder::NatWindow { lo: 1, hi: int(spec)? })
            }
        }
        ("poly-nat", [d, c]) => Ok(Builder::PolyNat {
            max_deg: int(d)? as usize,
            max_coeff: int(c)?,
        }),
        ("tropical-window", [m]) => Ok(Builder::TropicalWindow { max: int(m)? }),
        ("free-words", [a, l]) => Ok(Builder::FreeWords {
            alphabet: int(a)? as usize,
            max_len: int(l)? as usize,
        }),
        _ => Err(err(format!("unknown builder {value:?}"))),
    }
}
