//! Derivations of k[x,x⁻¹,s,t] and the standard locally nilpotent pair.
//!
//! A derivation is stored by its images of x, s, t only; images of y and z
//! are always derived through Laurent differentiation, which keeps the
//! presentation and the realization from drifting apart. The standard pair
//! D₁ (s ↦ x^(n+e)) and D₂ (t ↦ x^(n+e)) annihilates x and restricts to the
//! domain; its degree, nilpotency, and restriction ideals are all checked
//! here rather than assumed.

use std::fmt;

use crate::domains::{Domain, DomainSpec, MembershipOutcome};
use crate::grading::omega_b;
use crate::laurent::LaurentPoly;
use crate::poly::{coeff_int, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationError {
    RussellSpec,
    CapExceeded { cap: u32 },
    DoesNotRestrict { generator: String, witness: LaurentPoly },
    ZeroDerivation,
    NotAnnihilatingX,
    NotDivisible { generator: String },
}

impl fmt::Display for DerivationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationError::RussellSpec => {
                write!(f, "the standard derivation pair needs an extended-class spec")
            }
            DerivationError::CapExceeded { cap } => {
                write!(f, "nilpotency cap {cap} exceeded (inconclusive)")
            }
            DerivationError::DoesNotRestrict { generator, .. } => {
                write!(f, "image of `{generator}` is not in the domain")
            }
            DerivationError::ZeroDerivation => write!(f, "zero derivation has no degree"),
            DerivationError::NotAnnihilatingX => write!(f, "derivation does not annihilate x"),
            DerivationError::NotDivisible { generator } => {
                write!(f, "image of `{generator}` is not divisible by x^(n+e)")
            }
        }
    }
}

impl std::error::Error for DerivationError {}

/// A k-derivation of k[x,x⁻¹,s,t], determined by the images of x, s, t via
/// the Leibniz rule (with D(x⁻¹) = −x⁻²·D(x)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub image_x: LaurentPoly,
    pub image_s: LaurentPoly,
    pub image_t: LaurentPoly,
}

impl Derivation {
    pub fn new(image_x: LaurentPoly, image_s: LaurentPoly, image_t: LaurentPoly) -> Self {
        Self {
            image_x,
            image_s,
            image_t,
        }
    }

    /// Exact image of p, term by term.
    pub fn apply(&self, p: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(a, b, c), v) in p.terms() {
            if a != 0 && !self.image_x.is_zero() {
                let factor = LaurentPoly::monomial((a - 1, b, c), v * coeff_int(a));
                out = out.add(&factor.mul(&self.image_x));
            }
            if b != 0 && !self.image_s.is_zero() {
                let factor = LaurentPoly::monomial((a, b - 1, c), v * coeff_int(b as i64));
                out = out.add(&factor.mul(&self.image_s));
            }
            if c != 0 && !self.image_t.is_zero() {
                let factor = LaurentPoly::monomial((a, b, c - 1), v * coeff_int(c as i64));
                out = out.add(&factor.mul(&self.image_t));
            }
        }
        out
    }

    /// Least k with D^k(p) = 0, or `CapExceeded` (inconclusive, not a proof
    /// of non-nilpotency).
    pub fn nilpotency_index(&self, p: &LaurentPoly, cap: u32) -> Result<u32, DerivationError> {
        let mut current = p.clone();
        for k in 0..=cap {
            if current.is_zero() {
                return Ok(k);
            }
            current = self.apply(&current);
        }
        Err(DerivationError::CapExceeded { cap })
    }

    pub fn is_zero(&self) -> bool {
        self.image_x.is_zero() && self.image_s.is_zero() && self.image_t.is_zero()
    }
}

/// The standard locally nilpotent pair for an extended-class domain:
/// D₁: s ↦ x^(n+e), D₂: t ↦ x^(n+e), both annihilating x and the other
/// coordinate.
pub fn standard_derivations(domain: &Domain) -> Result<(Derivation, Derivation), DerivationError> {
    let DomainSpec::NewClass { n, e, .. } = domain.spec() else {
        return Err(DerivationError::RussellSpec);
    };
    let xne = LaurentPoly::x_pow((n + e) as i64);
    let d1 = Derivation::new(LaurentPoly::zero(), xne.clone(), LaurentPoly::zero());
    let d2 = Derivation::new(LaurentPoly::zero(), LaurentPoly::zero(), xne);
    Ok((d1, d2))
}

/// Closed forms of the standard images of y and z:
/// D₁(y) = xᵉ(d·s^(d−1) + x·∂Q/∂s), D₁(z) = m·y^(m−1)(d·s^(d−1) + x·∂Q/∂s) − xⁿ,
/// and the t-analogues for D₂ (without the −xⁿ term).
pub struct StandardImages {
    pub d1_y: LaurentPoly,
    pub d1_z: LaurentPoly,
    pub d2_y: LaurentPoly,
    pub d2_z: LaurentPoly,
}

pub fn standard_closed_forms(domain: &Domain) -> Result<StandardImages, DerivationError> {
    let DomainSpec::NewClass { n, e, m, d, r, q } = domain.spec() else {
        return Err(DerivationError::RussellSpec);
    };
    let q = LaurentPoly::from_xst_poly(q);
    let dq_ds = partial_s(&q);
    let dq_dt = partial_t(&q);
    let s_part = LaurentPoly::monomial((0, d - 1, 0), coeff_int(*d as i64))
        .add(&LaurentPoly::var_x().mul(&dq_ds));
    let t_part = LaurentPoly::monomial((0, 0, r - 1), coeff_int(*r as i64))
        .add(&LaurentPoly::var_x().mul(&dq_dt));
    let y_pow = domain.y().pow(m - 1).scale(&coeff_int(*m as i64));
    Ok(StandardImages {
        d1_y: LaurentPoly::x_pow(*e as i64).mul(&s_part),
        d1_z: y_pow.mul(&s_part).sub(&LaurentPoly::x_pow(*n as i64)),
        d2_y: LaurentPoly::x_pow(*e as i64).mul(&t_part),
        d2_z: y_pow.mul(&t_part),
    })
}

fn partial_s(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().iter().filter(|(&(_, b, _), _)| b > 0).map(
        |(&(a, b, c), v)| ((a, b - 1, c), v * coeff_int(b as i64)),
    ))
}

fn partial_t(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().iter().filter(|(&(_, _, c), _)| c > 0).map(
        |(&(a, b, c), v)| ((a, b, c - 1), v * coeff_int(c as i64)),
    ))
}

/// Generators of the domain with their names, z last and only when present.
fn generator_list(domain: &Domain) -> Vec<(&'static str, LaurentPoly)> {
    let mut gens = vec![
        ("x", LaurentPoly::var_x()),
        ("s", LaurentPoly::var_s()),
        ("t", LaurentPoly::var_t()),
        ("y", domain.y().clone()),
    ];
    if let Some(z) = domain.z() {
        gens.push(("z", z.clone()));
    }
    gens
}

/// Degree data of a derivation with respect to the x-adic filtration,
/// computed on the algebra generators. The maximum is a certified upper
/// bound for the degree on the whole domain (Leibniz), not an independent
/// computation of the filtration-theoretic degree.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub per_generator: Vec<(String, Option<i64>)>,
    pub upper_bound: i64,
    /// −(n+e): every nonzero locally nilpotent derivation respects it.
    pub lnd_bound: i64,
}

impl DegreeReport {
    pub fn satisfies_lnd_bound(&self) -> bool {
        self.upper_bound <= self.lnd_bound
    }
}

pub fn derivation_degree(domain: &Domain, d: &Derivation) -> Result<DegreeReport, DerivationError> {
    if d.is_zero() {
        return Err(DerivationError::ZeroDerivation);
    }
    let (n, e) = domain.spec().n_e();
    let mut per_generator = Vec::new();
    let mut max: Option<i64> = None;
    for (name, g) in generator_list(domain) {
        let image = d.apply(&g);
        if image.is_zero() {
            per_generator.push((name.to_string(), None));
            continue;
        }
        if !domain.membership(&image).is_member() {
            return Err(DerivationError::DoesNotRestrict {
                generator: name.to_string(),
                witness: image,
            });
        }
        let delta = omega_b(&image).unwrap() - omega_b(&g).unwrap();
        per_generator.push((name.to_string(), Some(delta)));
        max = Some(max.map_or(delta, |m| m.max(delta)));
    }
    let upper_bound = max.ok_or(DerivationError::ZeroDerivation)?;
    Ok(DegreeReport {
        per_generator,
        upper_bound,
        lnd_bound: -((n + e) as i64),
    })
}

/// Containment checks for a derivation that restricts to the domain:
/// images of x, s, t in x^(n+e)·k[x,s,t]; image of y in xᵉ·B; image of z in B.
#[derive(Clone, Debug)]
pub struct RestrictionReport {
    pub coordinate_images_ok: bool,
    pub y_image_ok: bool,
    pub z_image_ok: bool,
    pub failures: Vec<String>,
}

impl RestrictionReport {
    pub fn all_hold(&self) -> bool {
        self.coordinate_images_ok && self.y_image_ok && self.z_image_ok
    }
}

pub fn verify_restriction_ideals(domain: &Domain, d: &Derivation) -> RestrictionReport {
    let (n, e) = domain.spec().n_e();
    let mut failures = Vec::new();
    let ne = (n + e) as i64;
    let mut coordinate_images_ok = true;
    for (name, image) in [("x", &d.image_x), ("s", &d.image_s), ("t", &d.image_t)] {
        if image.is_zero() {
            continue;
        }
        let in_ideal = image.to_xst_poly().is_some() && image.x_order().unwrap() >= ne;
        if !in_ideal {
            coordinate_images_ok = false;
            failures.push(format!("D({name}) = {image} is not in x^{ne}·k[x,s,t]"));
        }
    }
    let dy = d.apply(domain.y());
    let y_image_ok = if dy.is_zero() {
        true
    } else {
        let shifted = dy.mul_x_pow(-(e as i64));
        let ok = domain.membership(&shifted).is_member();
        if !ok {
            failures.push(format!("D(y)/x^{e} = {shifted} is not a member"));
        }
        ok
    };
    let z_image_ok = match domain.z() {
        None => true,
        Some(z) => {
            let dz = d.apply(z);
            let ok = dz.is_zero() || domain.membership(&dz).is_member();
            if !ok {
                failures.push(format!("D(z) = {dz} is not a member"));
            }
            ok
        }
    };
    RestrictionReport {
        coordinate_images_ok,
        y_image_ok,
        z_image_ok,
        failures,
    }
}

/// Factor a derivation with D(x) = 0 as x^(n+e)·δ for a polynomial
/// derivation δ of k[x,s,t] with δ(x) = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaParts {
    pub delta_s: MultiPoly,
    pub delta_t: MultiPoly,
}

pub fn structure_check(domain: &Domain, d: &Derivation) -> Result<DeltaParts, DerivationError> {
    if !d.image_x.is_zero() {
        return Err(DerivationError::NotAnnihilatingX);
    }
    let (n, e) = domain.spec().n_e();
    let shift = -((n + e) as i64);
    let divide = |name: &str, image: &LaurentPoly| -> Result<MultiPoly, DerivationError> {
        if image.is_zero() {
            return Ok(MultiPoly::zero(&crate::laurent::LAURENT_VARS));
        }
        image
            .mul_x_pow(shift)
            .to_xst_poly()
            .ok_or(DerivationError::NotDivisible {
                generator: name.to_string(),
            })
    };
    Ok(DeltaParts {
        delta_s: divide("s", &d.image_s)?,
        delta_t: divide("t", &d.image_t)?,
    })
}

/// Leibniz-based degree subadditivity: ω(D(p)) ≤ ω(p) + deg(D) for members.
pub fn degree_subadditive_on(domain: &Domain, d: &Derivation, p: &LaurentPoly, bound: i64) -> bool {
    let image = d.apply(p);
    if image.is_zero() || p.is_zero() {
        return true;
    }
    match domain.membership(p) {
        MembershipOutcome::Member(_) => {
            omega_b(&image).unwrap() <= omega_b(p).unwrap() + bound
        }
        MembershipOutcome::NonMember(_) => true,
    }
}
