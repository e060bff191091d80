//! Contraction chains, exponential chains, and the collapse fingerprint.
//!
//! For a domain realized as a modification of k[x,s,t] along a power of x,
//! the contraction of ⟨x^N⟩ back to k[x,s,t] has an explicit generator list
//! in terms of F and G. Dividing a step's generators by x^N generates the
//! N-th member of the exponential chain, which is itself a recognized domain
//! (k[x,s,t], some R_(k,F), or some B_(n,e₀,Q)). Consecutive equal members
//! form the collapse pattern; the extended class collapses across the middle
//! steps while Russell chains never collapse, which is what the comparator
//! exploits.

use std::fmt;

use crate::domains::{Domain, DomainError, DomainSpec};
use crate::groebner::{monomials_up_to, GroebnerError, IdealPresentation, MonomialOrder};
use crate::laurent::{LaurentMono, LaurentPoly, LAURENT_VARS};
use crate::linalg::{unit_tag, RowSpace, SparseVec, TaggedRowSpace};
use num_traits::One;
use crate::poly::{Coeff, MultiPoly};

#[derive(Clone, Debug)]
pub enum ChainError {
    StepOutOfRange { step: u32, max: u32 },
    BoundTooSmall { step: u32, needed: u32, bound: u32 },
    Identification { step: u32, detail: String },
    IncompatibleParameters(String),
    Domain(DomainError),
    Groebner(GroebnerError),
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::StepOutOfRange { step, max } => {
                write!(f, "step {step} outside 1..={max}")
            }
            ChainError::BoundTooSmall { step, needed, bound } => write!(
                f,
                "degree bound {bound} below generator degree {needed} at step {step}"
            ),
            ChainError::Identification { step, detail } => {
                write!(f, "member {step} identification failed: {detail}")
            }
            ChainError::IncompatibleParameters(msg) => write!(f, "{msg}"),
            ChainError::Domain(e) => write!(f, "{e}"),
            ChainError::Groebner(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ChainError {}

impl From<DomainError> for ChainError {
    fn from(e: DomainError) -> Self {
        ChainError::Domain(e)
    }
}

impl From<GroebnerError> for ChainError {
    fn from(e: GroebnerError) -> Self {
        ChainError::Groebner(e)
    }
}

fn x_poly_pow(k: u32) -> MultiPoly {
    MultiPoly::var(&LAURENT_VARS, "x").unwrap().pow(k)
}

/// Closed-form generators of the contraction ⟨x^step⟩ ∩ k[x,s,t].
///
/// Extended class, with F = s^d+t^r+xQ and G = F^m − x^(nm)s:
///   step = n₀ ≤ n:            { F, x^(n₀) }
///   step = n·m₀+n₀ ≤ nm:      { F^(m₀+1) } ∪ { x^((m₀−j)n+n₀)·F^j : j = m₀..0 }
///   step = nm+e₀:             { G } ∪ { x^((m−j)n+e₀)·F^j : j = m..0 }
/// Russell chains use { F, x^step } throughout.
pub fn contraction_generators(domain: &Domain, step: u32) -> Result<Vec<MultiPoly>, ChainError> {
    let max = domain.total_steps();
    if step < 1 || step > max {
        return Err(ChainError::StepOutOfRange { step, max });
    }
    let f = domain.f();
    match domain.spec() {
        DomainSpec::Russell { .. } => Ok(vec![f.clone(), x_poly_pow(step)]),
        DomainSpec::NewClass { n, e: _, m, .. } => {
            let (n, m) = (*n, *m);
            if step <= n {
                Ok(vec![f.clone(), x_poly_pow(step)])
            } else if step <= n * m {
                let n0 = ((step - 1) % n) + 1;
                let m0 = (step - n0) / n;
                let mut gens = vec![f.pow(m0 + 1)];
                for j in (0..=m0).rev() {
                    gens.push(&x_poly_pow((m0 - j) * n + n0) * &f.pow(j));
                }
                Ok(gens)
            } else {
                let e0 = step - n * m;
                let g = domain.g().expect("extended class has G");
                let mut gens = vec![g.clone()];
                for j in (0..=m).rev() {
                    gens.push(&x_poly_pow((m - j) * n + e0) * &f.pow(j));
                }
                Ok(gens)
            }
        }
    }
}

/// True on the middle steps (n < step ≤ nm) of an extended-class chain,
/// where the closed-form exponent is read as n·m₀+n₀; reports carry the flag.
pub fn uses_middle_step_reading(domain: &Domain, step: u32) -> bool {
    match domain.spec() {
        DomainSpec::NewClass { n, m, .. } => step > *n && step <= n * m,
        DomainSpec::Russell { .. } => false,
    }
}

/// Identity of an exponential-chain member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberId {
    /// k[x,s,t]
    Base,
    /// R_(n,F)
    Russell { n: u32 },
    /// B_(n,e,Q)
    NewClass { n: u32, e: u32 },
}

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemberId::Base => write!(f, "k[x,s,t]"),
            MemberId::Russell { n } => write!(f, "R(n={n})"),
            MemberId::NewClass { n, e } => write!(f, "B(n={n}, e={e})"),
        }
    }
}

/// One member of the exponential chain: the subalgebra generated over
/// k[x,s,t] by the step generators divided by x^step.
#[derive(Clone, Debug)]
pub struct ChainMember {
    pub step: u32,
    pub id: MemberId,
    pub generators: Vec<LaurentPoly>,
}

#[derive(Clone, Debug)]
pub struct ExponentialChain {
    pub members: Vec<ChainMember>,
    /// distinct_flags[N]: member N ⊊ member N+1 (strict inclusion).
    pub distinct_flags: Vec<bool>,
}

/// Collapse data of the exponential chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub total_steps: u32,
    pub distinct_members: u32,
    /// collapse_pattern[N]: member N = member N+1.
    pub collapse_pattern: Vec<bool>,
}

fn predicted_member_id(domain: &Domain, step: u32) -> MemberId {
    if step == 0 {
        return MemberId::Base;
    }
    match domain.spec() {
        DomainSpec::Russell { .. } => MemberId::Russell { n: step },
        DomainSpec::NewClass { n, m, .. } => {
            if step < *n {
                MemberId::Russell { n: step }
            } else if step <= n * m {
                MemberId::Russell { n: *n }
            } else {
                MemberId::NewClass {
                    n: *n,
                    e: step - n * m,
                }
            }
        }
    }
}

/// Realize a member identity as a domain (None for the base ring).
fn member_domain(domain: &Domain, id: &MemberId) -> Result<Option<Domain>, ChainError> {
    let spec = match (id, domain.spec()) {
        (MemberId::Base, _) => return Ok(None),
        (MemberId::Russell { n }, _) => DomainSpec::Russell {
            n: *n,
            f: domain.f().clone(),
        },
        (MemberId::NewClass { n, e }, DomainSpec::NewClass { m, d, r, q, .. }) => {
            DomainSpec::NewClass {
                n: *n,
                e: *e,
                m: *m,
                d: *d,
                r: *r,
                q: q.clone(),
            }
        }
        (MemberId::NewClass { .. }, DomainSpec::Russell { .. }) => {
            unreachable!("Russell chains never predict extended-class members")
        }
    };
    let (dom, _) = Domain::build(spec)?;
    Ok(Some(dom))
}

fn member_contains(member: &Option<Domain>, p: &LaurentPoly) -> bool {
    match member {
        None => p.x_order().map(|o| o >= 0).unwrap_or(true),
        Some(dom) => dom.membership(p).is_member(),
    }
}

/// Compute the exponential chain with verified member identifications.
///
/// Member N is generated by {g/x^N}; the predicted identity is checked in
/// both directions: every member generator lies in the predicted domain, and
/// the predicted domain's defining generators occur among the member
/// generators exactly. Both together pin the member to the prediction.
pub fn exponential_chain(domain: &Domain) -> Result<ExponentialChain, ChainError> {
    let total = domain.total_steps();
    let mut members = Vec::with_capacity(total as usize + 1);
    members.push(ChainMember {
        step: 0,
        id: MemberId::Base,
        generators: Vec::new(),
    });
    for step in 1..=total {
        let id = predicted_member_id(domain, step);
        let generators: Vec<LaurentPoly> = contraction_generators(domain, step)?
            .iter()
            .map(|g| LaurentPoly::from_xst_poly(g).mul_x_pow(-(step as i64)))
            .collect();
        let predicted = member_domain(domain, &id)?;
        for g in &generators {
            if !member_contains(&predicted, g) {
                return Err(ChainError::Identification {
                    step,
                    detail: format!("generator {g} is not in the predicted member {id}"),
                });
            }
        }
        if let Some(pd) = &predicted {
            let mut required = vec![pd.y().clone()];
            if let Some(z) = pd.z() {
                required.push(z.clone());
            }
            for req in required {
                if !generators.iter().any(|g| *g == req) {
                    return Err(ChainError::Identification {
                        step,
                        detail: format!(
                            "defining generator {req} of {id} is missing from the member"
                        ),
                    });
                }
            }
        }
        members.push(ChainMember {
            step,
            id,
            generators,
        });
    }

    // strict-inclusion flags between consecutive members, decided by actual
    // membership of the later member's generators in the earlier member
    let mut distinct_flags = Vec::with_capacity(total as usize);
    for pair in members.windows(2) {
        let earlier = member_domain(domain, &pair[0].id)?;
        let all_inside = pair[1]
            .generators
            .iter()
            .all(|g| member_contains(&earlier, g));
        let ids_equal = pair[0].id == pair[1].id;
        if all_inside != ids_equal {
            return Err(ChainError::Identification {
                step: pair[1].step,
                detail: format!(
                    "membership-based equality ({all_inside}) contradicts identification {} vs {}",
                    pair[0].id, pair[1].id
                ),
            });
        }
        distinct_flags.push(!all_inside);
    }
    Ok(ExponentialChain {
        members,
        distinct_flags,
    })
}

pub fn fingerprint(domain: &Domain) -> Result<Fingerprint, ChainError> {
    let chain = exponential_chain(domain)?;
    let collapse_pattern: Vec<bool> = chain.distinct_flags.iter().map(|b| !b).collect();
    let collapses = collapse_pattern.iter().filter(|&&b| b).count() as u32;
    Ok(Fingerprint {
        total_steps: domain.total_steps(),
        distinct_members: domain.total_steps() + 1 - collapses,
        collapse_pattern,
    })
}

/// Verification data for one contraction step at a degree bound.
#[derive(Clone, Debug)]
pub struct ContractionStepReport {
    pub step: u32,
    pub degree_bound: u32,
    pub generators: Vec<MultiPoly>,
    pub middle_step_reading: bool,
    /// ⊇: every closed-form generator divided by x^step is a member.
    pub generators_in_domain: bool,
    /// ⊆ carrier: every bounded ideal element divided by x^step is a member.
    pub products_in_member: bool,
    /// Rank of the bounded slice of ⟨generators⟩.
    pub ideal_rank: usize,
    /// Rank of { f : deg f ≤ bound, f/x^step ∈ B }.
    pub member_rank: usize,
    pub verified: bool,
    pub witness: Option<MultiPoly>,
}

/// Check ⟨x^step⟩ ∩ k[x,s,t] = ⟨closed-form generators⟩ on the slice of
/// total degree ≤ bound.
///
/// The member side { f : deg f ≤ bound, f/x^step ∈ B } is the kernel of the
/// ℚ-linear obstruction sweep, so its dimension comes from one rank
/// computation over the monomial basis. The ideal side is spanned by the
/// bounded products of the reduced Gröbner basis (the order is graded, so
/// division never raises total degree). Containment of the ideal side in the
/// member side is checked on those spanning products; rank equality then
/// forces the two slices to coincide.
pub fn verify_contraction_step(
    domain: &Domain,
    step: u32,
    bound: u32,
) -> Result<ContractionStepReport, ChainError> {
    let generators = contraction_generators(domain, step)?;
    let needed = generators
        .iter()
        .map(|g| g.total_degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    if needed > bound {
        return Err(ChainError::BoundTooSmall {
            step,
            needed,
            bound,
        });
    }

    let shift = -(step as i64);
    let mut generators_in_domain = true;
    let mut witness = None;
    for g in &generators {
        let q = LaurentPoly::from_xst_poly(g).mul_x_pow(shift);
        if !domain.membership(&q).is_member() {
            generators_in_domain = false;
            witness = Some(g.clone());
        }
    }

    let ideal = IdealPresentation::new(generators.clone(), MonomialOrder::GrevLex)?;

    // ideal-side slice span and its containment in the member side
    let mut ideal_space: RowSpace<Vec<u32>> = RowSpace::new();
    let mut products_in_member = true;
    for b in ideal.basis() {
        let bdeg = b.total_degree().expect("basis elements are nonzero");
        if bdeg > bound {
            continue;
        }
        for mono in monomials_up_to(3, bound - bdeg) {
            let product_vec = SparseVec::from_iter(b.terms().iter().map(|(e, c)| {
                (
                    e.iter().zip(&mono).map(|(a, b)| a + b).collect::<Vec<u32>>(),
                    c.clone(),
                )
            }));
            let fresh = ideal_space.insert_echelon(product_vec);
            if fresh && products_in_member {
                let product = &MultiPoly::from_terms(
                    &LAURENT_VARS,
                    [(mono.clone(), Coeff::one())],
                ) * b;
                let q = LaurentPoly::from_xst_poly(&product).mul_x_pow(shift);
                let profile = domain.obstruction_profile(&q, step as i64);
                if !profile.is_clear() {
                    products_in_member = false;
                    witness = witness.or(Some(product));
                }
            }
        }
    }
    let ideal_rank = ideal_space.rank();

    // member-side slice: kernel of the obstruction sweep over all monomials
    let monomials = monomials_up_to(3, bound);
    let mut obstruction_space: RowSpace<LaurentMono> = RowSpace::new();
    let mut member_rank = 0usize;
    for mono in &monomials {
        let p = LaurentPoly::monomial(
            (mono[0] as i64 + shift, mono[1], mono[2]),
            Coeff::one(),
        );
        let vec = domain.obstruction_profile(&p, step as i64).to_vec();
        if !obstruction_space.insert_echelon(vec) {
            member_rank += 1;
        }
    }

    let mut verified = generators_in_domain && products_in_member && member_rank == ideal_rank;
    if verified {
        debug_assert!(member_rank >= ideal_rank);
    } else if witness.is_none() {
        // ranks differ: extract a kernel element of the member side that the
        // ideal misses
        witness = find_member_not_in_ideal(domain, step, &monomials, &ideal);
        verified = false;
    }

    Ok(ContractionStepReport {
        step,
        degree_bound: bound,
        generators,
        middle_step_reading: uses_middle_step_reading(domain, step),
        generators_in_domain,
        products_in_member,
        ideal_rank,
        member_rank,
        verified,
        witness,
    })
}

fn find_member_not_in_ideal(
    domain: &Domain,
    step: u32,
    monomials: &[Vec<u32>],
    ideal: &IdealPresentation,
) -> Option<MultiPoly> {
    let shift = -(step as i64);
    let mut tagged: TaggedRowSpace<LaurentMono, usize> = TaggedRowSpace::new();
    for (idx, mono) in monomials.iter().enumerate() {
        let p = LaurentPoly::monomial((mono[0] as i64 + shift, mono[1], mono[2]), Coeff::one());
        let vec = domain.obstruction_profile(&p, step as i64).to_vec();
        if let Some(combo) = tagged.insert(vec, unit_tag(idx)) {
            let candidate = MultiPoly::from_terms(
                &LAURENT_VARS,
                combo
                    .entries()
                    .iter()
                    .map(|(&i, c)| (monomials[i].clone(), c.clone())),
            );
            if !candidate.is_zero() && !ideal.contains(&candidate) {
                return Some(candidate);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NecessarilyNonIsomorphic,
    ConditionsConsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NecessarilyNonIsomorphic => write!(f, "necessarily non-isomorphic"),
            Verdict::ConditionsConsistent => write!(f, "conditions consistent"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionOutcome {
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

impl ConditionOutcome {
    fn vacuous(detail: &str) -> Self {
        Self {
            applicable: false,
            passed: true,
            detail: detail.to_string(),
        }
    }

    pub fn fails(&self) -> bool {
        self.applicable && !self.passed
    }
}

/// Necessary-condition comparison of two domains. A failed condition proves
/// non-isomorphism; consistency of all conditions never claims isomorphism.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    /// n₁+e₁ = n₂+e₂ (Russell counts as e = 0).
    pub sum_condition: ConditionOutcome,
    /// (n₁,e₁) = (n₂,e₂).
    pub pair_condition: ConditionOutcome,
    /// Extended class vs Russell forces e = 0 and n = n′.
    pub russell_condition: ConditionOutcome,
    /// Equality of chain fingerprints.
    pub fingerprint_condition: ConditionOutcome,
    pub fingerprints: (Fingerprint, Fingerprint),
    pub verdict: Verdict,
}

pub fn compare(a: &Domain, b: &Domain) -> Result<ComparisonReport, ChainError> {
    if let (
        DomainSpec::NewClass {
            m: m1, d: d1, r: r1, ..
        },
        DomainSpec::NewClass {
            m: m2, d: d2, r: r2, ..
        },
    ) = (a.spec(), b.spec())
    {
        if (m1, d1, r1) != (m2, d2, r2) {
            return Err(ChainError::IncompatibleParameters(format!(
                "comparison requires shared (m, d, r): ({m1}, {d1}, {r1}) vs ({m2}, {d2}, {r2})"
            )));
        }
    }
    let (n1, e1) = a.spec().n_e();
    let (n2, e2) = b.spec().n_e();
    let sum_condition = ConditionOutcome {
        applicable: true,
        passed: n1 + e1 == n2 + e2,
        detail: format!("n+e: {} vs {}", n1 + e1, n2 + e2),
    };
    let pair_condition = ConditionOutcome {
        applicable: true,
        passed: (n1, e1) == (n2, e2),
        detail: format!("(n, e): ({n1}, {e1}) vs ({n2}, {e2})"),
    };
    let russell_condition = match (a.spec().is_newclass(), b.spec().is_newclass()) {
        (true, false) => ConditionOutcome {
            applicable: true,
            passed: e1 == 0 && n1 == n2,
            detail: format!("requires e = 0 and n = n': e = {e1}, n = {n1}, n' = {n2}"),
        },
        (false, true) => ConditionOutcome {
            applicable: true,
            passed: e2 == 0 && n2 == n1,
            detail: format!("requires e = 0 and n = n': e = {e2}, n = {n2}, n' = {n1}"),
        },
        _ => ConditionOutcome::vacuous("both domains are of the same family"),
    };
    let fp_a = fingerprint(a)?;
    let fp_b = fingerprint(b)?;
    let fingerprint_condition = ConditionOutcome {
        applicable: true,
        passed: fp_a == fp_b,
        detail: format!(
            "distinct members {} vs {}, totals {} vs {}",
            fp_a.distinct_members, fp_b.distinct_members, fp_a.total_steps, fp_b.total_steps
        ),
    };
    let any_failed = sum_condition.fails()
        || pair_condition.fails()
        || russell_condition.fails()
        || fingerprint_condition.fails();
    Ok(ComparisonReport {
        sum_condition,
        pair_condition,
        russell_condition,
        fingerprint_condition,
        fingerprints: (fp_a, fp_b),
        verdict: if any_failed {
            Verdict::NecessarilyNonIsomorphic
        } else {
            Verdict::ConditionsConsistent
        },
    })
}
