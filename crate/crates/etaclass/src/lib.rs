//! Class polynomials for singular values of multiple eta-quotients.
//!
//! A multiple eta-quotient w_{p1,...,pk} is the quotient of 2^k transformed
//! Dedekind eta functions obtained by iterating
//!
//! ```text
//! w_{p1}(z)        = eta(z/p1) / eta(z),
//! w_{p1,...,pk+1}  = w_{p1,...,pk}(z) / w_{p1,...,pk}(z / p_{k+1}).
//! ```
//!
//! For suitable exponents e and discriminants D < 0, the singular value
//! w_{p1,...,pk}^e(tau) at a CM point tau is a class invariant: it generates
//! (a subfield of) the ring class field of the order of discriminant D, and
//! its characteristic polynomial H_D — the class polynomial — has exact
//! coefficients in Z or in Z + wZ.
//!
//! The interesting case is when k' >= 2 of the level primes ramify in the
//! imaginary-quadratic field: the singular values then lie in a subfield of
//! index 2^(k'-1), the class polynomial is a 2^(k'-1)-th power, and only its
//! 2^(k'-1)-th root needs to be computed, at a fraction of the evaluations.
//!
//! Pipeline: [`etaquot::EtaQuotientSpec`] fixes the function, a
//! [`qforms::NSystem`] provides normalized quadratic forms whose basis
//! quotients enumerate the Galois conjugates, [`plan::EvaluationPlan`]
//! collapses them along the ramified symmetries, and [`classpoly`] evaluates,
//! assembles and rounds the polynomial.

pub mod arith;
pub mod classpoly;
pub mod corpus;
pub mod eta;
pub mod etaquot;
pub mod mpc;
pub mod plan;
pub mod poly;
pub mod qforms;

pub use classpoly::{compute_class_poly, oracle_full_product, ClassPolynomial};
pub use etaquot::EtaQuotientSpec;
pub use mpc::Complex;
pub use plan::EvaluationPlan;
pub use qforms::{ClassGroup, NSystem, QuadForm};

/// Errors surfaced by the library.
///
/// The CLI maps these onto process exit codes, so the variants mirror the
/// user-visible failure classes rather than internal call sites.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("invalid exponent {e}: must be a positive divisor of s = {s}")]
    InvalidExponent { e: i64, s: i64 },
    #[error("invalid primes: {0}")]
    InvalidPrimes(String),
    #[error("prime {p} is inert in the field of discriminant {d}")]
    InertPrime { p: i64, d: i64 },
    #[error("prime {p} divides the conductor of discriminant {d}")]
    UnsupportedConductor { p: i64, d: i64 },
    #[error("no form of norm {n} with the required coprimality for discriminant {d}")]
    NoNormForm { n: i64, d: i64 },
    #[error("degenerate discriminant: |D| = {d_abs} lies in {{N, 4N}} for N = {n}")]
    DegenerateDiscriminant { d_abs: i64, n: i64 },
    #[error("level {n} does not divide the discriminant {d}; not totally ramified")]
    NotTotallyRamified { n: i64, d: i64 },
    #[error("invariance conditions not met: {0}")]
    InvarianceConditionsUnmet(String),
    #[error("rounding failure: residual {residual:e} exceeds tolerance at {prec} bits")]
    RoundingFailure { residual: f64, prec: u32 },
    #[error("precision failure: {0}")]
    PrecisionFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
