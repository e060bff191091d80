//! Sparse multivariate polynomials over ℚ.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so every polynomial
//! has one canonical form and printing is deterministic. The map order is
//! plain lexicographic on exponent tuples; monomial orders for Gröbner work
//! are layered on top in [`crate::groebner`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::laurent::LaurentPoly;

/// Exact coefficient type: arbitrary-precision rationals, always reduced.
pub type Coeff = BigRational;

/// Build a coefficient from a machine integer.
pub fn coeff_int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Build a coefficient from a numerator/denominator pair.
pub fn coeff_ratio(num: i64, den: i64) -> Coeff {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    VarMismatch,
    UnknownVariable(String),
    MissingBinding(String),
    ZeroPolynomial,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::VarMismatch => write!(f, "operands have different variable sets"),
            PolyError::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            PolyError::MissingBinding(v) => write!(f, "no binding for variable `{v}`"),
            PolyError::ZeroPolynomial => write!(f, "operation undefined on the zero polynomial"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Sparse polynomial in a declared, ordered variable set.
///
/// Invariants: no stored zero coefficients; every exponent vector has the
/// same length as the variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        Self {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Coeff) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, Coeff::one())
    }

    pub fn var(vars: &[&str], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let idx = p.var_index(name)?;
        let mut exps = vec![0; p.vars.len()];
        exps[idx] = 1;
        p.terms.insert(exps, Coeff::one());
        Ok(p)
    }

    /// Assemble from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Coeff)>,
    {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), p.vars.len(), "exponent vector length mismatch");
            p.add_term(exps, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Coeff> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn same_vars(&self, other: &Self) -> bool {
        self.vars == other.vars
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if !self.same_vars(other) {
            return Err(PolyError::VarMismatch);
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if !self.same_vars(other) {
            return Err(PolyError::VarMismatch);
        }
        let mut out = Self::zero_like(self);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    fn zero_like(p: &Self) -> Self {
        Self {
            vars: p.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero_like(self);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// p^k by repeated squaring; p^0 = 1.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one_like(self);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base).expect("same vars");
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base).expect("same vars");
            }
        }
        result
    }

    fn one_like(p: &Self) -> Self {
        let mut out = Self::zero_like(p);
        out.terms.insert(vec![0; p.vars.len()], Coeff::one());
        out
    }

    /// Formal partial derivative with respect to `name`.
    pub fn partial_derivative(&self, name: &str) -> Result<Self, PolyError> {
        let idx = self.var_index(name)?;
        let mut out = Self::zero_like(self);
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[idx] = k - 1;
            out.add_term(exps, c * coeff_int(k as i64));
        }
        Ok(out)
    }

    /// Total degree (max over monomials of the exponent sum); `None` for 0.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in_index(&self, idx: usize) -> u32 {
        self.terms.keys().map(|e| e[idx]).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> Result<u32, PolyError> {
        Ok(self.degree_in_index(self.var_index(name)?))
    }

    /// Leading term in the map's lexicographic order.
    pub fn leading_lex(&self) -> Option<(&Vec<u32>, &Coeff)> {
        self.terms.iter().next_back()
    }

    /// Scale so the lexicographic leading coefficient is 1.
    pub fn normalize_lex_monic(&self) -> Self {
        match self.leading_lex() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Division with remainder by a single divisor, in the map's lex order:
    /// self = q·quot + rem where no term of rem is divisible by the leading
    /// monomial of q. The pair is unique, so the map self ↦ (quot, rem) is
    /// ℚ-linear in self.
    pub fn div_rem(&self, q: &Self) -> (Self, Self) {
        assert!(self.same_vars(q), "div_rem on mismatched variable sets");
        assert!(!q.is_zero(), "division by the zero polynomial");
        let (qe, qc) = q.leading_lex().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut work = self.clone();
        let mut quot = Self::zero_like(self);
        let mut rem = Self::zero_like(self);
        while let Some((we, wc)) = work.leading_lex().map(|(e, c)| (e.clone(), c.clone())) {
            if we.iter().zip(&qe).all(|(a, b)| a >= b) {
                let step: Vec<u32> = we.iter().zip(&qe).map(|(a, b)| a - b).collect();
                let mono = Self::from_terms(&vars, [(step, &wc / &qc)]);
                quot = quot.checked_add(&mono).expect("same vars");
                work = work
                    .checked_sub(&mono.checked_mul(q).expect("same vars"))
                    .expect("same vars");
            } else {
                let t = Self::from_terms(&vars, [(we, wc)]);
                rem = rem.checked_add(&t).expect("same vars");
                work = work.checked_sub(&t).expect("same vars");
            }
        }
        (quot, rem)
    }

    /// Exact division: returns h with self = q·h when it exists.
    ///
    /// Non-divisibility is a normal result (`None`). The quotient is verified
    /// by multiplication before being returned.
    pub fn divide_exact(&self, q: &Self) -> Option<Self> {
        if self.is_zero() {
            assert!(!q.is_zero(), "division by the zero polynomial");
            return Some(Self::zero_like(self));
        }
        let (quot, rem) = self.div_rem(q);
        if !rem.is_zero() {
            return None;
        }
        debug_assert_eq!(quot.checked_mul(q).expect("same vars"), *self);
        Some(quot)
    }

    /// Substitute `value` for variable `name`; result keeps the variable set.
    pub fn substitute_var(&self, name: &str, value: &Self) -> Result<Self, PolyError> {
        let idx = self.var_index(name)?;
        if !self.same_vars(value) {
            return Err(PolyError::VarMismatch);
        }
        let mut out = Self::zero_like(self);
        for (e, c) in &self.terms {
            let mut base = e.clone();
            let k = base[idx];
            base[idx] = 0;
            let varnames: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
            let mono = Self::from_terms(&varnames, [(base, c.clone())]);
            let contrib = mono.checked_mul(&value.pow(k))?;
            out = out.checked_add(&contrib)?;
        }
        Ok(out)
    }

    /// Set one variable to zero.
    pub fn set_var_zero(&self, name: &str) -> Result<Self, PolyError> {
        let idx = self.var_index(name)?;
        let mut out = Self::zero_like(self);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                out.add_term(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Re-express over a new variable list; every variable actually present
    /// must appear in `vars`.
    pub fn with_vars(&self, vars: &[&str]) -> Result<Self, PolyError> {
        let mut mapping = Vec::with_capacity(self.vars.len());
        for (idx, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => mapping.push(Some(j)),
                None => {
                    if self.degree_in_index(idx) > 0 {
                        return Err(PolyError::UnknownVariable(v.clone()));
                    }
                    mapping.push(None);
                }
            }
        }
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; vars.len()];
            for (idx, k) in e.iter().enumerate() {
                if *k > 0 {
                    exps[mapping[idx].unwrap()] = *k;
                }
            }
            out.add_term(exps, c.clone());
        }
        Ok(out)
    }

    /// Evaluation homomorphism into the Laurent ring: every variable of the
    /// polynomial must carry a binding.
    pub fn substitute_laurent(
        &self,
        bindings: &BTreeMap<String, LaurentPoly>,
    ) -> Result<LaurentPoly, PolyError> {
        for v in &self.vars {
            if !bindings.contains_key(v) {
                return Err(PolyError::MissingBinding(v.clone()));
            }
        }
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(c.clone());
            for (idx, k) in e.iter().enumerate() {
                if *k > 0 {
                    term = term.mul(&bindings[&self.vars[idx]].pow(*k));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Rescale to integer coefficients with content 1 and positive leading
    /// (lex) coefficient. The result generates the same ideal; basis-building
    /// reductions use it to stop rational coefficient growth.
    pub fn primitive_integer(&self) -> Self {
        use num_integer::Integer as _;
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let mut factor = BigRational::new(denom_lcm, numer_gcd);
        if self
            .leading_lex()
            .map(|(_, c)| (c * &factor).is_negative())
            .unwrap_or(false)
        {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Multivariate gcd, normalized so the lexicographic leading coefficient
    /// is 1. Content/primitive-part recursion down to constants; fine for the
    /// small instances that arise here.
    pub fn gcd(&self, other: &Self) -> Self {
        assert!(self.same_vars(other), "gcd on mismatched variable sets");
        assert!(
            !(self.is_zero() && other.is_zero()),
            "gcd of two zero polynomials"
        );
        gcd_rec(self, other).normalize_lex_monic()
    }
}

/// Arithmetic ops on references; variable sets must match.
impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("variable set mismatch")
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("variable set mismatch")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("variable set mismatch")
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

// ---- gcd internals ----------------------------------------------------

fn gcd_rec(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
        return MultiPoly::one(&vars);
    }
    // main variable: the first one occurring in either operand
    let nvars = p.vars().len();
    let v = (0..nvars)
        .find(|&k| p.degree_in_index(k) > 0 || q.degree_in_index(k) > 0)
        .expect("non-constant polynomial has a variable");
    let dp = p.degree_in_index(v);
    let dq = q.degree_in_index(v);
    if dp == 0 {
        return gcd_rec(p, &content_in(q, v));
    }
    if dq == 0 {
        return gcd_rec(&content_in(p, v), q);
    }
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let cont = gcd_rec(&cp, &cq);
    let pp = p.divide_exact(&cp).expect("content divides");
    let pq = q.divide_exact(&cq).expect("content divides");
    // primitive Euclidean loop on the main variable
    let (mut a, mut b) = if pp.degree_in_index(v) >= pq.degree_in_index(v) {
        (pp, pq)
    } else {
        (pq, pp)
    };
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = if r.is_zero() {
            r
        } else {
            let c = content_in(&r, v);
            r.divide_exact(&c).expect("content divides")
        };
    }
    let ca = content_in(&a, v);
    let a = a.divide_exact(&ca).expect("content divides");
    cont.checked_mul(&a).expect("same vars")
}

/// gcd of the coefficients of `p` seen as univariate in variable index `v`.
fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut by_exp: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
    for (e, c) in p.terms() {
        let k = e[v];
        let mut stripped = e.clone();
        stripped[v] = 0;
        by_exp
            .entry(k)
            .or_insert_with(|| MultiPoly::zero(&vars))
            .add_term(stripped, c.clone());
    }
    let mut acc: Option<MultiPoly> = None;
    for coeff in by_exp.values() {
        acc = Some(match acc {
            None => coeff.clone(),
            Some(g) => gcd_rec(&g, coeff),
        });
        if let Some(g) = &acc {
            if g.is_constant() {
                break;
            }
        }
    }
    acc.expect("nonzero polynomial").normalize_lex_monic()
}

/// Coefficient of v^k in `p` viewed as univariate in variable index `v`.
fn coeff_of(p: &MultiPoly, v: usize, k: u32) -> MultiPoly {
    let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
    let mut out = MultiPoly::zero(&vars);
    for (e, c) in p.terms() {
        if e[v] == k {
            let mut stripped = e.clone();
            stripped[v] = 0;
            out.add_term(stripped, c.clone());
        }
    }
    out
}

fn var_power(p: &MultiPoly, v: usize, k: u32) -> MultiPoly {
    let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
    let mut exps = vec![0u32; vars.len()];
    exps[v] = k;
    MultiPoly::from_terms(&vars, [(exps, Coeff::one())])
}

/// Pseudo-remainder of `a` by `b` in the variable with index `v`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in_index(v);
    let lb = coeff_of(b, v, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in_index(v);
        if dr < db {
            break;
        }
        let lr = coeff_of(&r, v, dr);
        let shift = var_power(a, v, dr - db);
        // r := lb·r − lr·b·v^(dr−db)
        let left = lb.checked_mul(&r).expect("same vars");
        let right = lr
            .checked_mul(b)
            .expect("same vars")
            .checked_mul(&shift)
            .expect("same vars");
        r = left.checked_sub(&right).expect("same vars");
    }
    r
}

// ---- printing ----------------------------------------------------------

pub(crate) fn fmt_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Render one term (sign handled by the caller); exponents print as `v^k`.
fn fmt_term(vars: &[String], exps: &[u32], c: &Coeff) -> String {
    let mut factors: Vec<String> = Vec::new();
    let abs = c.abs();
    if !abs.is_one() || exps.iter().all(|&k| k == 0) {
        factors.push(fmt_coeff(&abs));
    }
    for (v, &k) in vars.iter().zip(exps) {
        match k {
            0 => {}
            1 => factors.push(v.clone()),
            _ => factors.push(format!("{v}^{k}")),
        }
    }
    factors.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // descending lex order so leading terms print first
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let body = fmt_term(&self.vars, e, c);
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}
