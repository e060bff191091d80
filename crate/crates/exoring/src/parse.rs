//! Expression parser for the polynomial grammar.
//!
//! ```text
//! expr   := ('-'|'+')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coefficient | variable ('^' '-'? digits)? | '(' expr ')'
//! ```
//!
//! Coefficients are integers or `a/b` rationals; whitespace is insignificant;
//! juxtaposition is not multiplication. Negative exponents are legal only on
//! variables the caller marks as Laurent (here: x). Printing uses the same
//! grammar, so parse∘print is the identity on canonical forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::laurent::{LaurentPoly, LAURENT_VARS};
use crate::poly::{Coeff, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// Parse over the given variable list; all exponents must be non-negative.
pub fn parse_multipoly(text: &str, vars: &[&str]) -> Result<MultiPoly, ParseError> {
    let raw = Parser::new(text, vars, &[])?.parse_all()?;
    let terms = raw.into_iter().map(|(exps, c)| {
        let exps_u: Vec<u32> = exps.iter().map(|&e| e as u32).collect();
        (exps_u, c)
    });
    Ok(MultiPoly::from_terms(vars, terms))
}

/// Parse over (x, s, t) with negative exponents permitted on x.
pub fn parse_laurent(text: &str) -> Result<LaurentPoly, ParseError> {
    let raw = Parser::new(text, &LAURENT_VARS, &["x"])?.parse_all()?;
    Ok(LaurentPoly::from_terms(raw.into_iter().map(|(exps, c)| {
        ((exps[0], exps[1] as u32, exps[2] as u32), c)
    })))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    end: usize,
    vars: Vec<String>,
    laurent: Vec<bool>,
}

type RawTerms = BTreeMap<Vec<i64>, Coeff>;

impl Parser {
    fn new(text: &str, vars: &[&str], negatable: &[&str]) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        Ok(Self {
            toks,
            cursor: 0,
            end: text.len(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            laurent: vars.iter().map(|v| negatable.contains(v)).collect(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.cursor).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cursor).map(|(_, t)| t.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(ref t) if t == want => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }

    fn parse_all(mut self) -> Result<RawTerms, ParseError> {
        let out = self.parse_expr()?;
        if self.cursor < self.toks.len() {
            return err(self.pos(), "trailing input");
        }
        Ok(out)
    }

    fn parse_expr(&mut self) -> Result<RawTerms, ParseError> {
        // one optional leading sign
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.bump();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = neg_terms(acc);
        }
        loop {
            let sub = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.bump();
            let rhs = self.parse_term()?;
            let rhs = if sub { neg_terms(rhs) } else { rhs };
            acc = add_terms(acc, rhs);
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<RawTerms, ParseError> {
        let mut acc = self.parse_factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let rhs = self.parse_factor()?;
            acc = mul_terms(&acc, &rhs, self.vars.len());
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<RawTerms, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => {
                // optional /denominator forms a rational literal
                let coeff = if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Num(d)) => {
                            if d.is_zero() {
                                return err(dpos, "zero denominator");
                            }
                            Coeff::new(n, d)
                        }
                        _ => return err(dpos, "expected denominator digits"),
                    }
                } else {
                    Coeff::from_integer(n)
                };
                Ok(constant_terms(coeff, self.vars.len()))
            }
            Some(Tok::Ident(name)) => {
                let Some(idx) = self.vars.iter().position(|v| *v == name) else {
                    return err(pos, format!("unknown variable `{name}`"));
                };
                let mut exp: i64 = 1;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    let mut sign = 1i64;
                    if matches!(self.peek(), Some(Tok::Minus)) {
                        self.bump();
                        sign = -1;
                    }
                    let epos = self.pos();
                    match self.bump() {
                        Some(Tok::Num(k)) => {
                            let k: i64 = k
                                .try_into()
                                .map_err(|_| ParseError {
                                    pos: epos,
                                    message: "exponent too large".into(),
                                })?;
                            exp = sign * k;
                        }
                        _ => return err(epos, "expected exponent digits"),
                    }
                    if exp < 0 && !self.laurent[idx] {
                        return err(
                            pos,
                            format!("negative exponent on non-Laurent variable `{name}`"),
                        );
                    }
                }
                let mut exps = vec![0i64; self.vars.len()];
                exps[idx] = exp;
                let mut out = RawTerms::new();
                out.insert(exps, Coeff::one());
                Ok(out)
            }
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => err(pos, "expected coefficient, variable, or `(`"),
        }
    }
}

fn constant_terms(c: Coeff, nvars: usize) -> RawTerms {
    let mut out = RawTerms::new();
    if !c.is_zero() {
        out.insert(vec![0; nvars], c);
    }
    out
}

fn neg_terms(t: RawTerms) -> RawTerms {
    t.into_iter().map(|(e, c)| (e, -c)).collect()
}

fn add_terms(mut a: RawTerms, b: RawTerms) -> RawTerms {
    for (e, c) in b {
        match a.entry(e) {
            std::collections::btree_map::Entry::Vacant(en) => {
                en.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut en) => {
                let sum = en.get() + &c;
                if sum.is_zero() {
                    en.remove();
                } else {
                    *en.get_mut() = sum;
                }
            }
        }
    }
    a
}

fn mul_terms(a: &RawTerms, b: &RawTerms, nvars: usize) -> RawTerms {
    let mut out = RawTerms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut e = vec![0i64; nvars];
            for i in 0..nvars {
                e[i] = ea[i] + eb[i];
            }
            let c = ca * cb;
            match out.entry(e) {
                std::collections::btree_map::Entry::Vacant(en) => {
                    if !c.is_zero() {
                        en.insert(c);
                    }
                }
                std::collections::btree_map::Entry::Occupied(mut en) => {
                    let sum = en.get() + &c;
                    if sum.is_zero() {
                        en.remove();
                    } else {
                        *en.get_mut() = sum;
                    }
                }
            }
        }
    }
    out
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character `{}`", &text[i..i + 1])),
        }
    }
    Ok(out)
}
