//! Weight degree functions, homogeneous decompositions, and top components.
//!
//! A weight function assigns an integer to each variable; the degree of a
//! monomial is the weighted exponent sum and the degree of a polynomial is
//! the maximum over its monomials. On the Laurent realization the induced
//! degree function is minus the x-adic order.

use std::collections::BTreeMap;
use std::fmt;

use crate::laurent::LaurentPoly;
use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradingError {
    ZeroPolynomial,
    MissingWeight(String),
}

impl fmt::Display for GradingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingError::ZeroPolynomial => {
                write!(f, "weight degree undefined on the zero polynomial")
            }
            GradingError::MissingWeight(v) => write!(f, "no weight assigned to variable `{v}`"),
        }
    }
}

impl std::error::Error for GradingError {}

/// Integer weights, one per variable name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    weights: BTreeMap<String, i64>,
}

impl WeightFunction {
    pub fn new<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        Self {
            weights: pairs.into_iter().map(|(v, w)| (v.into(), w)).collect(),
        }
    }

    pub fn weight_of(&self, var: &str) -> Option<i64> {
        self.weights.get(var).copied()
    }

    pub fn weights(&self) -> &BTreeMap<String, i64> {
        &self.weights
    }

    fn monomial_degree(&self, vars: &[String], exps: &[u32]) -> Result<i64, GradingError> {
        let mut total = 0i64;
        for (v, &k) in vars.iter().zip(exps) {
            if k == 0 {
                continue;
            }
            let w = self
                .weight_of(v)
                .ok_or_else(|| GradingError::MissingWeight(v.clone()))?;
            total += w * k as i64;
        }
        Ok(total)
    }
}

/// Decomposition of a polynomial into its ω-homogeneous components,
/// keyed by degree. Reassembling the components recovers the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousDecomposition {
    components: BTreeMap<i64, MultiPoly>,
}

impl HomogeneousDecomposition {
    pub fn components(&self) -> &BTreeMap<i64, MultiPoly> {
        &self.components
    }

    pub fn top_degree(&self) -> i64 {
        *self.components.keys().next_back().expect("nonempty")
    }

    pub fn reassemble(&self) -> MultiPoly {
        let mut it = self.components.values();
        let first = it.next().expect("nonempty").clone();
        it.fold(first, |acc, c| &acc + c)
    }
}

/// ω-degree of a nonzero polynomial: max over monomials of Σ w(v)·exp(v).
pub fn weight_degree(p: &MultiPoly, w: &WeightFunction) -> Result<i64, GradingError> {
    decompose(p, w).map(|d| d.top_degree())
}

pub fn decompose(
    p: &MultiPoly,
    w: &WeightFunction,
) -> Result<HomogeneousDecomposition, GradingError> {
    if p.is_zero() {
        return Err(GradingError::ZeroPolynomial);
    }
    let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
    let mut components: BTreeMap<i64, Vec<(Vec<u32>, crate::poly::Coeff)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        let deg = w.monomial_degree(p.vars(), e)?;
        components.entry(deg).or_default().push((e.clone(), c.clone()));
    }
    Ok(HomogeneousDecomposition {
        components: components
            .into_iter()
            .map(|(deg, terms)| (deg, MultiPoly::from_terms(&vars, terms)))
            .collect(),
    })
}

/// Highest homogeneous component, together with the full decomposition.
pub fn top_component(
    p: &MultiPoly,
    w: &WeightFunction,
) -> Result<(MultiPoly, HomogeneousDecomposition), GradingError> {
    let decomp = decompose(p, w)?;
    let top = decomp.components[&decomp.top_degree()].clone();
    Ok((top, decomp))
}

/// Outcome of the gcd criterion for a two-generator top-component ideal:
/// when gcd(P̂, Q̂) = 1 the ideal of top components is exactly ⟨P̂, Q̂⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopIdealPairReport {
    pub hat_p: MultiPoly,
    pub hat_q: MultiPoly,
    pub gcd: MultiPoly,
    pub certified: bool,
}

pub fn check_top_ideal_pair(
    p: &MultiPoly,
    q: &MultiPoly,
    w: &WeightFunction,
) -> Result<TopIdealPairReport, GradingError> {
    let (hat_p, _) = top_component(p, w)?;
    let (hat_q, _) = top_component(q, w)?;
    let gcd = hat_p.gcd(&hat_q);
    let certified = gcd.is_one();
    Ok(TopIdealPairReport {
        hat_p,
        hat_q,
        gcd,
        certified,
    })
}

/// The induced degree function on the Laurent realization: −(x-adic order).
/// `None` on the zero polynomial.
pub fn omega_b(p: &LaurentPoly) -> Option<i64> {
    p.x_order().map(|o| -o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_laurent, parse_multipoly};
    use crate::rng::XorShift64;

    const PRES: [&str; 5] = ["X", "Y", "Z", "S", "T"];

    fn s1_weights() -> WeightFunction {
        // n=2, e=1, m=2 → weights (−1, n, nm+e, 0, 0) = (−1, 2, 5, 0, 0)
        WeightFunction::new([("X", -1), ("Y", 2), ("Z", 5), ("S", 0), ("T", 0)])
    }

    fn pp(text: &str) -> MultiPoly {
        parse_multipoly(text, &PRES).unwrap()
    }

    #[test]
    fn degree_of_first_relation_is_zero() {
        let rel = pp("X^2*Y - S^2 - T^3 - X");
        assert_eq!(weight_degree(&rel, &s1_weights()).unwrap(), 0);
    }

    #[test]
    fn degree_of_second_relation() {
        let rel = pp("Y^2 - X*Z - S");
        assert_eq!(weight_degree(&rel, &s1_weights()).unwrap(), 4);
    }

    #[test]
    fn degree_of_nonzero_constant_is_zero() {
        assert_eq!(weight_degree(&pp("7"), &s1_weights()).unwrap(), 0);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert_eq!(
            weight_degree(&pp("0"), &s1_weights()),
            Err(GradingError::ZeroPolynomial)
        );
    }

    #[test]
    fn top_components_of_the_defining_relations() {
        let w = s1_weights();
        let (top1, _) = top_component(&pp("X^2*Y - S^2 - T^3 - X"), &w).unwrap();
        assert_eq!(top1, pp("X^2*Y - S^2 - T^3"));
        let (top2, _) = top_component(&pp("Y^2 - X*Z - S"), &w).unwrap();
        assert_eq!(top2, pp("Y^2 - X*Z"));
    }

    #[test]
    fn single_component_when_weights_agree() {
        let w = s1_weights();
        let (top, decomp) = top_component(&pp("S + T"), &w).unwrap();
        assert_eq!(top, pp("S + T"));
        assert_eq!(decomp.components().len(), 1);
    }

    #[test]
    fn top_ideal_pair_for_s1_is_certified() {
        let w = s1_weights();
        let rep = check_top_ideal_pair(
            &pp("X^2*Y - S^2 - T^3 - X"),
            &pp("Y^2 - X*Z - S"),
            &w,
        )
        .unwrap();
        assert_eq!(rep.hat_p, pp("X^2*Y - S^2 - T^3"));
        assert_eq!(rep.hat_q, pp("Y^2 - X*Z"));
        assert!(rep.gcd.is_one());
        assert!(rep.certified);
    }

    #[test]
    fn equal_inputs_are_not_certified() {
        let w = s1_weights();
        let p = pp("X^2*Y - S^2 - T^3 - X");
        let rep = check_top_ideal_pair(&p, &p, &w).unwrap();
        assert!(!rep.certified);
        assert_eq!(rep.gcd, rep.hat_p.normalize_lex_monic());
    }

    #[test]
    fn coprime_variables_are_certified() {
        let w = s1_weights();
        let rep = check_top_ideal_pair(&pp("X"), &pp("Y"), &w).unwrap();
        assert!(rep.certified);
    }

    #[test]
    fn omega_b_on_generators() {
        assert_eq!(omega_b(&parse_laurent("x").unwrap()), Some(-1));
        let y = parse_laurent("x^-2*(s^2 + t^3 + x)").unwrap();
        assert_eq!(omega_b(&y), Some(2));
        let f = parse_laurent("s^2 + t^3 + x").unwrap();
        let z = f.pow(2).sub(&parse_laurent("x^4*s").unwrap()).mul_x_pow(-5);
        assert_eq!(omega_b(&z), Some(5));
        assert_eq!(omega_b(&LaurentPoly::zero()), None);
    }

    fn random_poly(rng: &mut XorShift64) -> MultiPoly {
        let n = rng.below(4) + 1;
        let mut terms = Vec::new();
        for _ in 0..n {
            terms.push((
                (0..5).map(|_| rng.range_u32(0, 3)).collect::<Vec<_>>(),
                crate::poly::coeff_int(rng.nonzero_int(9)),
            ));
        }
        MultiPoly::from_terms(&PRES, terms)
    }

    #[test]
    fn weight_degree_is_multiplicative() {
        let w = s1_weights();
        let mut rng = XorShift64::new(17);
        for _ in 0..500 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let da = weight_degree(&a, &w).unwrap();
            let db = weight_degree(&b, &w).unwrap();
            assert_eq!(weight_degree(&(&a * &b), &w).unwrap(), da + db);
        }
    }

    #[test]
    fn top_component_is_multiplicative() {
        let w = s1_weights();
        let mut rng = XorShift64::new(19);
        for _ in 0..500 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let (ta, _) = top_component(&a, &w).unwrap();
            let (tb, _) = top_component(&b, &w).unwrap();
            let (tab, _) = top_component(&(&a * &b), &w).unwrap();
            assert_eq!(tab, &ta * &tb);
        }
    }

    #[test]
    fn decomposition_reassembles() {
        let w = s1_weights();
        let mut rng = XorShift64::new(29);
        for _ in 0..200 {
            let a = random_poly(&mut rng);
            if a.is_zero() {
                continue;
            }
            let d = decompose(&a, &w).unwrap();
            assert_eq!(d.reassemble(), a);
            for (deg, comp) in d.components() {
                assert!(!comp.is_zero());
                // every monomial of a component sits at the component's degree
                let dd = decompose(comp, &w).unwrap();
                assert_eq!(dd.components().len(), 1);
                assert_eq!(dd.top_degree(), *deg);
            }
        }
    }

    #[test]
    fn omega_b_is_a_degree_function() {
        let mut rng = XorShift64::new(31);
        for _ in 0..500 {
            let mk = |rng: &mut XorShift64| {
                let n = rng.below(4) + 1;
                let mut p = LaurentPoly::zero();
                for _ in 0..n {
                    p = p.add(&LaurentPoly::monomial(
                        (
                            rng.range_i64(-4, 4),
                            rng.range_u32(0, 3),
                            rng.range_u32(0, 3),
                        ),
                        crate::poly::coeff_int(rng.nonzero_int(9)),
                    ));
                }
                p
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let da = omega_b(&a).unwrap();
            let db = omega_b(&b).unwrap();
            assert_eq!(omega_b(&a.mul(&b)), Some(da + db));
            let sum = a.add(&b);
            if !sum.is_zero() {
                assert!(omega_b(&sum).unwrap() <= da.max(db));
            }
        }
    }
}
