//! Buchberger's algorithm, normal forms, and ideal membership.
//!
//! Instances here are tiny (two or three generators in three variables), so
//! the implementation favors auditability: plain Buchberger with the product
//! and chain criteria for pair skipping, full interreduction to the unique
//! reduced monic basis, and a deterministic ordering of the result.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;


use crate::linalg::{RowSpace, SparseVec};
use crate::poly::{Coeff, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroebnerError {
    EmptyGenerators,
    VarMismatch,
    NegativeWeight,
}

impl fmt::Display for GroebnerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroebnerError::EmptyGenerators => write!(f, "no nonzero generators"),
            GroebnerError::VarMismatch => write!(f, "generators over different variable sets"),
            GroebnerError::NegativeWeight => {
                write!(f, "weighted order requires non-negative weights")
            }
        }
    }
}

impl std::error::Error for GroebnerError {}

/// Total order on monomials, compatible with multiplication, 1 minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Weighted degree with lex tie-break; weights must be non-negative.
    WeightedLex(Vec<i64>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => {
                let da: u64 = a.iter().map(|&k| k as u64).sum();
                let db: u64 = b.iter().map(|&k| k as u64).sum();
                match da.cmp(&db) {
                    Ordering::Equal => {
                        // rightmost differing exponent: smaller wins
                        for (x, y) in a.iter().zip(b).rev() {
                            match x.cmp(y) {
                                Ordering::Equal => continue,
                                Ordering::Less => return Ordering::Greater,
                                Ordering::Greater => return Ordering::Less,
                            }
                        }
                        Ordering::Equal
                    }
                    other => other,
                }
            }
            MonomialOrder::WeightedLex(w) => {
                let da: i64 = a.iter().zip(w).map(|(&k, &wi)| k as i64 * wi).sum();
                let db: i64 = b.iter().zip(w).map(|(&k, &wi)| k as i64 * wi).sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            }
        }
    }
}

fn leading<'a>(p: &'a MultiPoly, order: &MonomialOrder) -> Option<(&'a Vec<u32>, &'a Coeff)> {
    p.terms()
        .iter()
        .max_by(|(ea, _), (eb, _)| order.cmp(ea, eb))
}

fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn mono_sub(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_poly(template: &MultiPoly, exps: Vec<u32>, c: Coeff) -> MultiPoly {
    let vars: Vec<&str> = template.vars().iter().map(|s| s.as_str()).collect();
    MultiPoly::from_terms(&vars, [(exps, c)])
}

/// Remainder of `p` on full division by `basis`: no term of the result is
/// divisible by any basis leading monomial. With `rescale`, the working
/// polynomial is renormalized to primitive integer form after each division
/// step; the remainder is then only determined up to a positive rational
/// factor, which is all basis construction needs, and it keeps coefficients
/// from exploding on hard inputs.
fn reduce(p: &MultiPoly, basis: &[MultiPoly], order: &MonomialOrder, rescale: bool) -> MultiPoly {
    let leads: Vec<(Vec<u32>, Coeff)> = basis
        .iter()
        .map(|g| {
            let (e, c) = leading(g, order).expect("nonzero basis element");
            (e.clone(), c.clone())
        })
        .collect();
    let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
    let mut work = p.clone();
    let mut rem = MultiPoly::zero(&vars);
    while let Some((we, wc)) = leading(&work, order).map(|(e, c)| (e.clone(), c.clone())) {
        let mut reduced = false;
        for (g, (ge, gc)) in basis.iter().zip(&leads) {
            if mono_divides(ge, &we) {
                let factor = mono_poly(p, mono_sub(&we, ge), &wc / gc);
                work = &work - &(&factor * g);
                // rescaling is sound only while the remainder is empty;
                // afterwards both parts must share one scale
                if rescale && rem.is_zero() {
                    work = work.primitive_integer();
                }
                reduced = true;
                break;
            }
        }
        if !reduced {
            let t = mono_poly(p, we, wc);
            rem = &rem + &t;
            work = &work - &t;
        }
    }
    rem
}

fn reduce_full(p: &MultiPoly, basis: &[MultiPoly], order: &MonomialOrder) -> MultiPoly {
    reduce(p, basis, order, false)
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly, order: &MonomialOrder) -> MultiPoly {
    let (fe, fc) = leading(f, order).expect("nonzero");
    let (ge, gc) = leading(g, order).expect("nonzero");
    let lcm = mono_lcm(fe, ge);
    let a = mono_poly(f, mono_sub(&lcm, fe), fc.recip());
    let b = mono_poly(g, mono_sub(&lcm, ge), gc.recip());
    &(&a * f) - &(&b * g)
}

/// Reduced Gröbner basis: monic, auto-reduced, sorted by descending leading
/// monomial, hence canonical for the ideal and order.
pub fn buchberger(gens: &[MultiPoly], order: &MonomialOrder) -> Result<Vec<MultiPoly>, GroebnerError> {
    let mut basis: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.primitive_integer())
        .collect();
    if basis.is_empty() {
        return Err(GroebnerError::EmptyGenerators);
    }
    if !basis.windows(2).all(|w| w[0].same_vars(&w[1])) {
        return Err(GroebnerError::VarMismatch);
    }
    if let MonomialOrder::WeightedLex(w) = order {
        if w.len() != basis[0].vars().len() || w.iter().any(|&x| x < 0) {
            return Err(GroebnerError::NegativeWeight);
        }
    }

    let lcm_degree = |basis: &[MultiPoly], i: usize, j: usize| -> u64 {
        let (le_i, _) = leading(&basis[i], order).unwrap();
        let (le_j, _) = leading(&basis[j], order).unwrap();
        mono_lcm(le_i, le_j).iter().map(|&k| k as u64).sum()
    };

    // normal selection: process pairs by smallest lcm total degree
    let mut queue: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in 0..i {
            queue.insert((lcm_degree(&basis, j, i), j, i));
            pending.insert((j, i));
        }
    }
    while let Some(&(deg, i, j)) = queue.iter().next() {
        queue.remove(&(deg, i, j));
        pending.remove(&(i, j));
        let (le_i, _) = leading(&basis[i], order).unwrap();
        let (le_j, _) = leading(&basis[j], order).unwrap();
        let lcm = mono_lcm(le_i, le_j);
        // product criterion: coprime leading monomials reduce to zero
        if lcm.iter().zip(le_i.iter().zip(le_j)).all(|(l, (a, b))| *l == a + b) {
            continue;
        }
        // chain criterion: a third element divides the lcm and both of its
        // pairs with i and j are already settled
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let (le_k, _) = leading(g, order).unwrap();
            if mono_divides(le_k, &lcm) {
                let p1 = (i.min(k), i.max(k));
                let p2 = (j.min(k), j.max(k));
                if !pending.contains(&p1) && !pending.contains(&p2) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order, true);
        if !r.is_zero() {
            basis.push(r.primitive_integer());
            let new = basis.len() - 1;
            for k in 0..new {
                queue.insert((lcm_degree(&basis, k, new), k, new));
                pending.insert((k, new));
            }
        }
    }

    Ok(interreduce(basis, order))
}

fn interreduce(mut basis: Vec<MultiPoly>, order: &MonomialOrder) -> Vec<MultiPoly> {
    // minimalize: drop elements whose leading monomial another one divides
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (le_i, _) = leading(&basis[i], order).unwrap();
        let le_i = le_i.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (le_j, _) = leading(&basis[j], order).unwrap();
            if mono_divides(&le_j.clone(), &le_i)
                && (le_j != &le_i || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    basis = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // tail-reduce each element against the others and normalize monic
    let mut reduced: Vec<MultiPoly> = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let others: Vec<MultiPoly> = basis
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then(|| g.clone()))
            .collect();
        let r = if others.is_empty() {
            basis[i].clone()
        } else {
            reduce_full(&basis[i], &others, order)
        };
        let (_, lc) = leading(&r, order).expect("minimal basis element stays nonzero");
        let inv = lc.recip();
        reduced.push(r.scale(&inv));
    }
    reduced.sort_by(|a, b| {
        let (ea, _) = leading(a, order).unwrap();
        let (eb, _) = leading(b, order).unwrap();
        order.cmp(eb, ea)
    });
    reduced
}

/// An ideal of k[vars] presented by generators, with its reduced basis.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    generators: Vec<MultiPoly>,
    order: MonomialOrder,
    basis: Vec<MultiPoly>,
}

impl IdealPresentation {
    pub fn new(generators: Vec<MultiPoly>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        let basis = buchberger(&generators, &order)?;
        Ok(Self {
            generators,
            order,
            basis,
        })
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    /// Unique remainder modulo the reduced basis.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        reduce_full(p, &self.basis, &self.order)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    /// Mutual membership of generators.
    pub fn ideal_equal(&self, other: &Self) -> bool {
        self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Cached-basis consistency: every generator reduces to zero against the
    /// basis and every basis element lies in the generator ideal.
    pub fn verify_cached_basis(&self) -> bool {
        let regen = match buchberger(&self.generators, &self.order) {
            Ok(b) => b,
            Err(_) => return false,
        };
        let by_cached = self.generators.iter().all(|g| self.contains(g));
        let by_regen = self
            .basis
            .iter()
            .all(|b| reduce_full(b, &regen, &self.order).is_zero());
        by_cached && by_regen && regen == self.basis
    }
}

/// Independent degree-bounded membership oracle: the row space of all
/// products (generator × monomial) of total degree ≤ `bound`, over the
/// monomial columns. With a graded order this span is exactly the bounded
/// slice of the ideal.
pub fn linear_slice_oracle(gens: &[MultiPoly], bound: u32) -> RowSpace<Vec<u32>> {
    let mut space = RowSpace::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let gdeg = g.total_degree().unwrap();
        if gdeg > bound {
            continue;
        }
        for m in monomials_up_to(g.vars().len(), bound - gdeg) {
            let shifted: SparseVec<Vec<u32>> = SparseVec::from_iter(
                g.terms()
                    .iter()
                    .map(|(e, c)| (e.iter().zip(&m).map(|(a, b)| a + b).collect(), c.clone())),
            );
            space.insert_echelon(shifted);
        }
    }
    space
}

/// All exponent vectors in `nvars` variables with total degree ≤ `bound`.
pub fn monomials_up_to(nvars: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, idx: usize, left: u32) {
        if idx == current.len() {
            out.push(current.clone());
            return;
        }
        for k in 0..=left {
            current[idx] = k;
            rec(out, current, idx + 1, left - k);
        }
        current[idx] = 0;
    }
    rec(&mut out, &mut current, 0, bound);
    out
}
