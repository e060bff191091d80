//! Exact symbolic computation for subalgebras of the Laurent ring k[x,x⁻¹,s,t].
//!
//! The library constructs two families of finitely generated ℚ-domains inside
//! k[x,x⁻¹,s,t] — Russell domains R_(n,F) = k[x,s,t][F/xⁿ] and the extended
//! class B_(n,e,Q) = k[x,s,t][y,z] with y = F/xⁿ, z = (Fᵐ − xⁿᵐs)/xⁿᵐ⁺ᵉ —
//! and verifies their computable structure: defining relations, x-adic weight
//! filtrations and graded pieces, locally nilpotent derivations with their
//! degree bounds, contraction ideals of powers of x, and the exponential
//! chains of modifications whose collapse pattern separates the two families.
//!
//! All arithmetic is exact over ℚ (arbitrary-precision rationals); every
//! decision procedure is paired with an independent oracle in the test suites.

pub mod chains;
pub mod derivations;
pub mod domains;
pub mod grading;
pub mod groebner;
pub mod laurent;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rng;

pub use chains::{compare, ComparisonReport, ExponentialChain, Fingerprint, MemberId};
pub use derivations::Derivation;
pub use domains::{Domain, DomainSpec, GradedPieceIndex, MembershipOutcome};
pub use grading::{omega_b, WeightFunction};
pub use groebner::{IdealPresentation, MonomialOrder};
pub use laurent::LaurentPoly;
pub use poly::{Coeff, MultiPoly};
