//! Recursive-descent parser for the pattern DSL.
//!
//! ```text
//! family := "{" term ("," term)* (":" binder ("," binder)*)? "}"
//! binder := ident "in" int ".." (int | ident)
//! term   := sum
//! sum    := prod ("+" prod)*
//! prod   := atom ("*" atom)*
//! atom   := coeff? ident ("^" (int | ident))? | int | "(" sum ")"
//! coeff  := int
//! ```
//!
//! Identifiers in element position become pattern variables (in first
//! appearance order) unless they name a binder, in which case they act as a
//! coefficient: `i*y` with `i in 1..k` means `y` added `i` times. Exponent
//! identifiers must name a binder. Binder upper bounds may name an external
//! parameter supplied at expansion time.

use super::ast::{BinderDef, IntRef, PatternFamily, TermExpr};
use super::PatternError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Plus,
    Star,
    Caret,
    DotDot,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, PatternError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, PatternError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let simple = |t| Ok(Some((start, t)));
        match c {
            b'{' => {
                self.pos += 1;
                simple(Tok::LBrace)
            }
            b'}' => {
                self.pos += 1;
                simple(Tok::RBrace)
            }
            b'(' => {
                self.pos += 1;
                simple(Tok::LParen)
            }
            b')' => {
                self.pos += 1;
                simple(Tok::RParen)
            }
            b',' => {
                self.pos += 1;
                simple(Tok::Comma)
            }
            b':' => {
                self.pos += 1;
                simple(Tok::Colon)
            }
            b'+' => {
                self.pos += 1;
                simple(Tok::Plus)
            }
            b'*' => {
                self.pos += 1;
                simple(Tok::Star)
            }
            b'^' => {
                self.pos += 1;
                simple(Tok::Caret)
            }
            b'.' => {
                if self.src.get(self.pos + 1) == Some(&b'.') {
                    self.pos += 2;
                    simple(Tok::DotDot)
                } else {
                    Err(PatternError::Syntax {
                        pos: start,
                        message: "expected `..`".into(),
                    })
                }
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                let v: u32 = text.parse().map_err(|_| PatternError::Syntax {
                    pos: start,
                    message: format!("integer {text} too large"),
                })?;
                self.pos = end;
                simple(Tok::Int(v))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                simple(Tok::Ident(text))
            }
            other => Err(PatternError::Syntax {
                pos: start,
                message: format!("unexpected character {:?}", other as char),
            }),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

/// Raw atoms before binder classification.
#[derive(Debug, Clone)]
enum RawAtom {
    Int(usize, u32),
    Ident {
        pos: usize,
        name: String,
        coeff: Option<(usize, u32)>,
        exponent: Option<(usize, IntId)>,
    },
    Paren(RawSum),
}

#[derive(Debug, Clone)]
enum IntId {
    Int(u32),
    Name(String),
}

#[derive(Debug, Clone)]
struct RawSum(Vec<RawProd>);

#[derive(Debug, Clone)]
struct RawProd(Vec<RawAtom>);

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), PatternError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(PatternError::Syntax {
                pos,
                message: format!("expected {what}"),
            }),
        }
    }

    fn sum(&mut self) -> Result<RawSum, PatternError> {
        let mut prods = vec![self.prod()?];
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            prods.push(self.prod()?);
        }
        Ok(RawSum(prods))
    }

    fn prod(&mut self) -> Result<RawProd, PatternError> {
        let mut atoms = vec![self.atom()?];
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            atoms.push(self.atom()?);
        }
        Ok(RawProd(atoms))
    }

    fn atom(&mut self) -> Result<RawAtom, PatternError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(RawAtom::Paren(inner))
            }
            Some(Tok::Int(v)) => {
                // either a bare scalar factor or a coefficient glued to an
                // identifier, as in `2y`
                if let Some(Tok::Ident(_)) = self.peek() {
                    let ident_pos = self.pos();
                    let Some(Tok::Ident(name)) = self.bump() else {
                        unreachable!()
                    };
                    let exponent = self.maybe_exponent()?;
                    Ok(RawAtom::Ident {
                        pos: ident_pos,
                        name,
                        coeff: Some((pos, v)),
                        exponent,
                    })
                } else {
                    Ok(RawAtom::Int(pos, v))
                }
            }
            Some(Tok::Ident(name)) => {
                let exponent = self.maybe_exponent()?;
                Ok(RawAtom::Ident {
                    pos,
                    name,
                    coeff: None,
                    exponent,
                })
            }
            _ => Err(PatternError::Syntax {
                pos,
                message: "expected a term".into(),
            }),
        }
    }

    fn maybe_exponent(&mut self) -> Result<Option<(usize, IntId)>, PatternError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(Some((pos, IntId::Int(v)))),
            Some(Tok::Ident(n)) => Ok(Some((pos, IntId::Name(n)))),
            _ => Err(PatternError::Syntax {
                pos,
                message: "expected an exponent".into(),
            }),
        }
    }

    fn binder(&mut self) -> Result<BinderDef, PatternError> {
        let pos = self.pos();
        let Some(Tok::Ident(name)) = self.bump() else {
            return Err(PatternError::Syntax {
                pos,
                message: "expected a binder name".into(),
            });
        };
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(kw)) if kw == "in" => {}
            _ => {
                return Err(PatternError::Syntax {
                    pos,
                    message: "expected `in`".into(),
                })
            }
        }
        let pos = self.pos();
        let Some(Tok::Int(lo)) = self.bump() else {
            return Err(PatternError::Syntax {
                pos,
                message: "expected the lower bound".into(),
            });
        };
        self.expect(Tok::DotDot, "`..`")?;
        let pos = self.pos();
        let hi = match self.bump() {
            Some(Tok::Int(v)) => IntRef::Lit(v),
            Some(Tok::Ident(n)) => IntRef::Name(n),
            _ => {
                return Err(PatternError::Syntax {
                    pos,
                    message: "expected the upper bound".into(),
                })
            }
        };
        Ok(BinderDef { name, lo, hi })
    }
}

/// Binder-aware lowering of raw terms.
struct Lowerer<'a> {
    binders: &'a [BinderDef],
    variables: Vec<String>,
}

impl<'a> Lowerer<'a> {
    fn is_binder(&self, name: &str) -> bool {
        self.binders.iter().any(|b| b.name == name)
    }

    fn var_slot(&mut self, name: &str) -> usize {
        match self.variables.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                self.variables.push(name.to_string());
                self.variables.len() - 1
            }
        }
    }

    fn lower_sum(&mut self, s: &RawSum) -> Result<TermExpr, PatternError> {
        let mut parts = Vec::new();
        for p in &s.0 {
            parts.push(self.lower_prod(p)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            TermExpr::Sum(parts)
        })
    }

    fn lower_prod(&mut self, p: &RawProd) -> Result<TermExpr, PatternError> {
        // split the factors into scalar multipliers (ints and binder
        // indices) and genuine element factors
        let mut multipliers: Vec<(usize, IntRef)> = Vec::new();
        let mut factors: Vec<TermExpr> = Vec::new();
        let mut first_pos = 0;
        for atom in &p.0 {
            match atom {
                RawAtom::Int(pos, v) => {
                    if *v == 0 {
                        return Err(PatternError::NonPositive { pos: *pos });
                    }
                    first_pos = *pos;
                    multipliers.push((*pos, IntRef::Lit(*v)));
                }
                RawAtom::Paren(inner) => {
                    factors.push(self.lower_sum(inner)?);
                }
                RawAtom::Ident {
                    pos,
                    name,
                    coeff,
                    exponent,
                } => {
                    first_pos = *pos;
                    if let Some((cpos, c)) = coeff {
                        if *c == 0 {
                            return Err(PatternError::NonPositive { pos: *cpos });
                        }
                        multipliers.push((*cpos, IntRef::Lit(*c)));
                    }
                    if self.is_binder(name) {
                        if exponent.is_some() {
                            return Err(PatternError::Syntax {
                                pos: *pos,
                                message: format!("binder index {name} cannot be exponentiated"),
                            });
                        }
                        multipliers.push((*pos, IntRef::Name(name.clone())));
                        continue;
                    }
                    let base = TermExpr::Var(self.var_slot(name));
                    let term = match exponent {
                        None => base,
                        Some((epos, IntId::Int(v))) => {
                            if *v == 0 {
                                return Err(PatternError::NonPositive { pos: *epos });
                            }
                            TermExpr::Power(Box::new(base), IntRef::Lit(*v))
                        }
                        Some((epos, IntId::Name(n))) => {
                            if !self.is_binder(n) {
                                return Err(PatternError::UnboundIndex {
                                    pos: *epos,
                                    name: n.clone(),
                                });
                            }
                            TermExpr::Power(Box::new(base), IntRef::Name(n.clone()))
                        }
                    };
                    factors.push(term);
                }
            }
        }
        if factors.is_empty() {
            return Err(PatternError::NoElementPart { pos: first_pos });
        }
        let mut term = if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            TermExpr::Product(factors)
        };
        for (_, m) in multipliers.into_iter().rev() {
            term = TermExpr::Coeff(m, Box::new(term));
        }
        Ok(term)
    }
}

/// Parses a pattern family from its source text.
pub fn parse_pattern(text: &str) -> Result<PatternFamily, PatternError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    p.expect(Tok::LBrace, "`{`")?;
    let mut raw_terms = vec![p.sum()?];
    while p.peek() == Some(&Tok::Comma) {
        p.bump();
        raw_terms.push(p.sum()?);
    }
    let mut binders = Vec::new();
    if p.peek() == Some(&Tok::Colon) {
        p.bump();
        binders.push(p.binder()?);
        while p.peek() == Some(&Tok::Comma) {
            p.bump();
            binders.push(p.binder()?);
        }
    }
    p.expect(Tok::RBrace, "`}`")?;
    if p.peek().is_some() {
        return Err(PatternError::Syntax {
            pos: p.pos(),
            message: "trailing input after `}`".into(),
        });
    }

    let mut lower = Lowerer {
        binders: &binders,
        variables: Vec::new(),
    };
    let mut terms = Vec::new();
    for raw in &raw_terms {
        terms.push(lower.lower_sum(raw)?);
    }
    Ok(PatternFamily {
        source: text.to_string(),
        variables: lower.variables,
        binders,
        terms,
        distinct: true,
        min_element: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn basic_family() {
        let fam = parse_pattern("{x, y, x+y, x*y}").unwrap();
        assert_eq!(fam.variables, vec!["x", "y"]);
        assert_eq!(fam.terms.len(), 4);
        assert!(fam.distinct);
        assert!(fam.is_ground());
    }

    #[test]
    fn binder_family_expands() {
        let fam = parse_pattern("{x, y, x*y, x + i*y : i in 1..k}").unwrap();
        assert_eq!(fam.variables, vec!["x", "y"]);
        let params = BTreeMap::from([("k".to_string(), 3u32)]);
        let pat = fam.expand(&params).unwrap();
        assert_eq!(pat.terms.len(), 6);
        let rendered: Vec<String> = pat.terms.iter().map(|t| t.render(&pat.variables)).collect();
        assert_eq!(rendered, vec!["x", "y", "x*y", "x+1y", "x+2y", "x+3y"]);
    }

    #[test]
    fn exponent_binder() {
        let fam = parse_pattern("{x, y, x^i*y : i in 1..2}").unwrap();
        let pat = fam.expand(&BTreeMap::new()).unwrap();
        let rendered: Vec<String> = pat.terms.iter().map(|t| t.render(&pat.variables)).collect();
        assert_eq!(rendered, vec!["x", "y", "x^1*y", "x^2*y"]);
    }

    #[test]
    fn coefficient_shorthand() {
        let fam = parse_pattern("{2x + y}").unwrap();
        assert_eq!(fam.variables, vec!["x", "y"]);
        let pat = fam.expand(&BTreeMap::new()).unwrap();
        assert_eq!(pat.terms[0].render(&pat.variables), "2x+y");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_pattern("{x, x+ }").unwrap_err();
        match err {
            // the dangling `+` is noticed at the closing brace
            PatternError::Syntax { pos, .. } => assert_eq!(pos, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_pattern("{x, y x}").is_err());
        assert!(parse_pattern("").is_err());
    }

    #[test]
    fn unbound_exponent_rejected() {
        let err = parse_pattern("{x^j*y}").unwrap_err();
        assert!(matches!(err, PatternError::UnboundIndex { name, .. } if name == "j"));
    }

    #[test]
    fn zero_positions_rejected() {
        assert!(matches!(
            parse_pattern("{0x}"),
            Err(PatternError::NonPositive { .. })
        ));
        assert!(matches!(
            parse_pattern("{x^0}"),
            Err(PatternError::NonPositive { .. })
        ));
    }

    #[test]
    fn scalar_only_term_rejected() {
        assert!(matches!(
            parse_pattern("{x, 2}"),
            Err(PatternError::NoElementPart { .. })
        ));
    }

    #[test]
    fn missing_param_reported() {
        let fam = parse_pattern("{x, x + i*y : i in 1..k}").unwrap();
        assert!(matches!(
            fam.expand(&BTreeMap::new()),
            Err(PatternError::MissingParam { name }) if name == "k"
        ));
    }
}
