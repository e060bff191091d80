//! Sparse Laurent polynomials in k[x,x⁻¹,s,t].
//!
//! The x exponent ranges over ℤ; s and t stay non-negative. This is the
//! ambient ring in which every domain of interest is realized, so the module
//! keeps the operations small and exact: ring arithmetic, the x-adic order,
//! slices, and exact division.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::{fmt_coeff, Coeff, MultiPoly};

/// Exponents of (x, s, t).
pub type LaurentMono = (i64, u32, u32);

pub const LAURENT_VARS: [&str; 3] = ["x", "s", "t"];
pub const ST_VARS: [&str; 2] = ["s", "t"];

/// Sparse Laurent polynomial; no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<LaurentMono, Coeff>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((0, 0, 0), c);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn monomial(exps: LaurentMono, c: Coeff) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn x_pow(k: i64) -> Self {
        Self::monomial((k, 0, 0), Coeff::one())
    }

    pub fn var_x() -> Self {
        Self::x_pow(1)
    }

    pub fn var_s() -> Self {
        Self::monomial((0, 1, 0), Coeff::one())
    }

    pub fn var_t() -> Self {
        Self::monomial((0, 0, 1), Coeff::one())
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (LaurentMono, Coeff)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<LaurentMono, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: LaurentMono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(entry) => {
                entry.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut entry) => {
                let sum = entry.get() + &c;
                if sum.is_zero() {
                    entry.remove();
                } else {
                    *entry.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((xa, sa, ta), ca) in &self.terms {
            for ((xb, sb, tb), cb) in &other.terms {
                out.add_term((xa + xb, sa + sb, ta + tb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn mul_x_pow(&self, k: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((a, b, c), v)| ((a + k, *b, *c), v.clone()))
                .collect(),
        }
    }

    /// Minimal x-exponent; `None` on the zero polynomial (order −∞).
    pub fn x_order(&self) -> Option<i64> {
        self.terms.keys().map(|(a, _, _)| *a).min()
    }

    pub fn max_x_exp(&self) -> Option<i64> {
        self.terms.keys().map(|(a, _, _)| *a).max()
    }

    /// Largest s+t total degree over the terms; `None` on zero.
    pub fn max_st_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(_, b, c)| b + c).max()
    }

    /// Coefficient of x^ord as a polynomial in (s, t).
    pub fn slice_at(&self, ord: i64) -> MultiPoly {
        MultiPoly::from_terms(
            &ST_VARS,
            self.terms
                .iter()
                .filter(|((a, _, _), _)| *a == ord)
                .map(|((_, b, c), v)| (vec![*b, *c], v.clone())),
        )
    }

    /// The x-adic order together with the bottom slice; `None` on zero.
    pub fn x_order_and_slice(&self) -> Option<(i64, MultiPoly)> {
        let ord = self.x_order()?;
        Some((ord, self.slice_at(ord)))
    }

    /// Embed a polynomial over (x, s, t); fails only on other variable sets.
    pub fn from_xst_poly(p: &MultiPoly) -> Self {
        let p = p.with_vars(&LAURENT_VARS).expect("polynomial not over (x,s,t)");
        Self::from_terms(
            p.terms()
                .iter()
                .map(|(e, c)| ((e[0] as i64, e[1], e[2]), c.clone())),
        )
    }

    /// Embed a polynomial in (s, t).
    pub fn from_st_poly(p: &MultiPoly) -> Self {
        let p = p.with_vars(&ST_VARS).expect("polynomial not over (s,t)");
        Self::from_terms(p.terms().iter().map(|(e, c)| ((0, e[0], e[1]), c.clone())))
    }

    /// Back to k[x,s,t]; `None` if any x exponent is negative.
    pub fn to_xst_poly(&self) -> Option<MultiPoly> {
        if self.x_order().map(|o| o < 0).unwrap_or(false) {
            return None;
        }
        Some(MultiPoly::from_terms(
            &LAURENT_VARS,
            self.terms
                .iter()
                .map(|((a, b, c), v)| (vec![*a as u32, *b, *c], v.clone())),
        ))
    }

    /// Exact division in the Laurent ring. Shift both operands x-free, then
    /// divide as ordinary polynomials; x powers are units so divisibility is
    /// unaffected.
    pub fn divide_exact(&self, q: &Self) -> Option<Self> {
        assert!(!q.is_zero(), "division by the zero Laurent polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let op = self.x_order().unwrap();
        let oq = q.x_order().unwrap();
        let p_shift = self.mul_x_pow(-op).to_xst_poly().unwrap();
        let q_shift = q.mul_x_pow(-oq).to_xst_poly().unwrap();
        let h = p_shift.divide_exact(&q_shift)?;
        Some(Self::from_xst_poly(&h).mul_x_pow(op - oq))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, ((a, b, c), v)) in self.terms.iter().rev().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            let abs = v.abs();
            if !abs.is_one() || (*a == 0 && *b == 0 && *c == 0) {
                factors.push(fmt_coeff(&abs));
            }
            match a {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{a}")),
            }
            match b {
                0 => {}
                1 => factors.push("s".into()),
                _ => factors.push(format!("s^{b}")),
            }
            match c {
                0 => {}
                1 => factors.push("t".into()),
                _ => factors.push(format!("t^{c}")),
            }
            let body = factors.join("*");
            if idx == 0 {
                if v.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if v.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_laurent, parse_multipoly};
    use crate::poly::coeff_int;
    use crate::rng::XorShift64;

    fn lp(text: &str) -> LaurentPoly {
        parse_laurent(text).expect("parse")
    }

    #[test]
    fn shifting_by_x_powers_cancels() {
        let f = lp("x^-2*(s^2 + t^3 + x)");
        let g = f.mul(&LaurentPoly::x_pow(2));
        assert_eq!(g, lp("s^2 + t^3 + x"));
    }

    #[test]
    fn order_and_slice_of_y_for_s1() {
        // y = x^-2 (s^2 + t^3 + x)
        let y = lp("x^-2*(s^2 + t^3 + x)");
        let (ord, slice) = y.x_order_and_slice().unwrap();
        assert_eq!(ord, -2);
        assert_eq!(slice, parse_multipoly("s^2 + t^3", &ST_VARS).unwrap());
    }

    #[test]
    fn order_and_slice_of_z_for_s1() {
        // z = x^-5 ((s^2+t^3+x)^2 − x^4 s)
        let f = lp("s^2 + t^3 + x");
        let z = f.pow(2).sub(&lp("x^4*s")).mul_x_pow(-5);
        let (ord, slice) = z.x_order_and_slice().unwrap();
        assert_eq!(ord, -5);
        let expected = parse_multipoly("s^2 + t^3", &ST_VARS).unwrap().pow(2);
        assert_eq!(slice, expected);
    }

    #[test]
    fn order_of_pure_power() {
        let p = LaurentPoly::x_pow(3);
        let (ord, slice) = p.x_order_and_slice().unwrap();
        assert_eq!(ord, 3);
        assert!(slice.is_one());
    }

    #[test]
    fn zero_has_no_order() {
        assert_eq!(LaurentPoly::zero().x_order(), None);
    }

    #[test]
    fn laurent_exact_division() {
        let f = lp("x^-2*(s^2+t^3)");
        let g = lp("x^-3*(s^2+t^3)");
        let h = f.divide_exact(&g).unwrap();
        assert_eq!(h, lp("x"));
        assert_eq!(f.divide_exact(&lp("s")), None);
    }

    fn random_laurent(rng: &mut XorShift64) -> LaurentPoly {
        let n = rng.below(4) + 1;
        let mut p = LaurentPoly::zero();
        for _ in 0..n {
            let e = (
                rng.range_i64(-4, 4),
                rng.range_u32(0, 4),
                rng.range_u32(0, 4),
            );
            p = p.add(&LaurentPoly::monomial(e, coeff_int(rng.nonzero_int(9))));
        }
        p
    }

    #[test]
    fn x_order_is_a_valuation() {
        let mut rng = XorShift64::new(99);
        for _ in 0..1000 {
            let p = random_laurent(&mut rng);
            let q = random_laurent(&mut rng);
            if p.is_zero() || q.is_zero() {
                continue;
            }
            let op = p.x_order().unwrap();
            let oq = q.x_order().unwrap();
            assert_eq!(p.mul(&q).x_order().unwrap(), op + oq);
            let sum = p.add(&q);
            if !sum.is_zero() {
                assert!(sum.x_order().unwrap() >= op.min(oq));
            }
        }
    }
}
