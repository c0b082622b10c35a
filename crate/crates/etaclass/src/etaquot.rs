//! Multiple eta-quotients and their class-invariance conditions.
//!
//! For distinct primes p_1 < ... < p_k the quotient expands to the
//! 2^k-factor product
//!
//! ```text
//! w_{p1,...,pk}(z) = prod_{S subset of {p1..pk}} eta(z / prod S)^((-1)^(|S|+1)),
//! ```
//!
//! equivalent to iterating w_{..., p}(z) = w_...(z) / w_...(z/p). With
//! s = 24 / gcd(24, (p1-1)...(pk-1)) and e | s, the power w^e is a modular
//! function of level n = (s/e) N for N = p1...pk, with rational q-expansion;
//! under the Fricke involution w(-N/z) = w(z)^((-1)^k).
//!
//! Whether a singular value w^e(tau) lands in the ring class field of
//! discriminant D is decided by congruence conditions on e, the p_i and D
//! ([`check_invariance`]); the level primes must additionally be non-inert
//! and coprime to the conductor, which the planning layer checks where the
//! discriminant is in scope.

use crate::arith::{gcd, is_prime, odd_part};
use crate::eta::{eta, UnimodularMatrix};
use crate::mpc::Complex;
use crate::{Error, Result};

/// A multiple eta-quotient w_{p1,...,pk}^e together with its level data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    primes: Vec<i64>,
    e: i64,
    level: i64,
    s: i64,
    n: i64,
}

impl EtaQuotientSpec {
    /// Strictly increasing distinct primes, k >= 2, and an exponent e | s.
    pub fn new(primes: &[i64], e: i64) -> Result<Self> {
        if primes.len() < 2 {
            return Err(Error::InvalidPrimes(
                "need at least two primes (simple quotients are building blocks only)".into(),
            ));
        }
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(Error::InvalidPrimes("repeated prime".into()));
        }
        for &p in &sorted {
            if !is_prime(p) {
                return Err(Error::InvalidPrimes(format!("{p} is not prime")));
            }
        }
        let level: i64 = sorted.iter().product();
        let phi: i64 = sorted.iter().map(|&p| p - 1).product();
        let s = 24 / gcd(24, phi);
        if e < 1 || s % e != 0 {
            return Err(Error::InvalidExponent { e, s });
        }
        let n = (s / e) * level;
        Ok(EtaQuotientSpec { primes: sorted, e, level, s, n })
    }

    pub fn primes(&self) -> &[i64] {
        &self.primes
    }

    pub fn k(&self) -> usize {
        self.primes.len()
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    /// N = p_1 ... p_k.
    pub fn level(&self) -> i64 {
        self.level
    }

    /// Full exponent s = 24 / gcd(24, prod (p_i - 1)).
    pub fn s(&self) -> i64 {
        self.s
    }

    /// Function level n = (s/e) N.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Label like "w_{5,7}^e" used in output.
    pub fn name(&self) -> String {
        let ps: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        if self.e == 1 {
            format!("w_{{{}}}", ps.join(","))
        } else {
            format!("w_{{{}}}^{}", ps.join(","), self.e)
        }
    }
}

/// Which invariance clause a (spec, D) combination satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceClause {
    /// k = 2, both primes away from {2,3}, congruences mod 3 and mod 8.
    DoubleGeneric,
    /// k = 2, p_1 = 3.
    DoubleWithThree,
    /// k = 2, p_1 = 2, 24 | e(p_2 - 1).
    DoubleWithTwo,
    /// k >= 3, 24 | e(p_1-1)...(p_k-1).
    MultiDivisible,
    /// k >= 3, all p_i odd and ≡ -1 mod 3, 3 not dividing D.
    MultiMinusOneModThree,
}

impl std::fmt::Display for InvarianceClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InvarianceClause::DoubleGeneric => "double quotient, generic primes",
            InvarianceClause::DoubleWithThree => "double quotient with p1 = 3",
            InvarianceClause::DoubleWithTwo => "double quotient with p1 = 2",
            InvarianceClause::MultiDivisible => "higher quotient, 24 | e(p1-1)...(pk-1)",
            InvarianceClause::MultiMinusOneModThree => {
                "higher quotient, all primes ≡ -1 mod 3 and 3 does not divide D"
            }
        };
        f.write_str(s)
    }
}

/// Decide whether singular values of the spec are class invariants for
/// discriminant D, and report the matching clause. Only the congruence
/// clauses are decided here; the side conditions (level primes non-inert
/// and coprime to the conductor) are the caller's to check. The clauses
/// are sufficient conditions — a `fail` means "conditions not met", not a
/// proof of non-invariance.
pub fn check_invariance(spec: &EtaQuotientSpec, d: i64) -> std::result::Result<InvarianceClause, String> {
    crate::qforms::validate_discriminant(d).map_err(|e| e.to_string())?;
    let e = spec.e();
    let ps = spec.primes();
    if spec.k() == 2 {
        let (p1, p2) = (ps[0], ps[1]);
        let prod = e * (p1 - 1) * (p2 - 1);
        if p1 != 2 && p1 != 3 && p2 != 3 {
            let mod3 = prod % 3 == 0 || d % 3 != 0;
            let mod8 = prod % 8 == 0 || d % 2 != 0;
            if mod3 && mod8 {
                return Ok(InvarianceClause::DoubleGeneric);
            }
            return Err(format!(
                "e(p1-1)(p2-1) = {prod}: needs (3 | {prod} or 3 ∤ D) and (8 | {prod} or 2 ∤ D)"
            ));
        }
        if p1 == 3 {
            let ep2 = e * (p2 - 1);
            if ep2 % 3 == 0 && (ep2 % 4 == 0 || d % 2 != 0) {
                return Ok(InvarianceClause::DoubleWithThree);
            }
            return Err(format!(
                "p1 = 3: needs 3 | e(p2-1) and (4 | e(p2-1) or 2 ∤ D), e(p2-1) = {ep2}"
            ));
        }
        if p1 == 2 {
            if (e * (p2 - 1)) % 24 == 0 {
                return Ok(InvarianceClause::DoubleWithTwo);
            }
            return Err(format!("p1 = 2: needs 24 | e(p2-1) = {}", e * (p2 - 1)));
        }
        // p2 = 3 (p1 = 2 handled above): no clause applies
        return Err("no clause covers p2 = 3 with p1 = 2 excluded".into());
    }
    let phi: i64 = ps.iter().map(|&p| p - 1).product();
    if (e * phi) % 24 == 0 {
        return Ok(InvarianceClause::MultiDivisible);
    }
    if ps.iter().all(|&p| p % 2 == 1 && p % 3 == 2) && d % 3 != 0 {
        return Ok(InvarianceClause::MultiMinusOneModThree);
    }
    Err(format!(
        "neither 24 | e·prod(p_i - 1) = {} nor (all p_i ≡ -1 mod 3 with 3 ∤ D)",
        e * phi
    ))
}

/// w_{p1..pk}(z)^e via the expanded 2^k-factor eta product.
pub fn eval_w(spec: &EtaQuotientSpec, z: &Complex, prec: u32) -> Result<Complex> {
    // elevated working precision: 2^k eta factors plus the final power
    let wp = prec + 32 + 8 * spec.k() as u32;
    let zw = z.rounded_to(wp);
    let mut num = Complex::one(wp);
    let mut den = Complex::one(wp);
    for mask in 0..(1u32 << spec.k()) {
        let mut divisor = 1i64;
        for (i, &p) in spec.primes().iter().enumerate() {
            if mask & (1 << i) != 0 {
                divisor *= p;
            }
        }
        let value = eta(&zw.div_i64(divisor), wp)?;
        if mask.count_ones() % 2 == 1 {
            num = num.mul(&value);
        } else {
            den = den.mul(&value);
        }
    }
    Ok(num.div(&den).pow_i64(spec.e()).rounded_to(prec))
}

/// Same function by the textbook recursion w_{..,p}(z) = w_..(z)/w_..(z/p);
/// exponentially many eta calls, kept as the second route for tests.
pub fn eval_w_recursive(spec: &EtaQuotientSpec, z: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + 32 + 8 * spec.k() as u32;
    fn w(primes: &[i64], z: &Complex, prec: u32) -> Result<Complex> {
        match primes {
            [p] => Ok(eta(&z.div_i64(*p), prec)?.div(&eta(z, prec)?)),
            [rest @ .., p] => Ok(w(rest, z, prec)?.div(&w(rest, &z.div_i64(*p), prec)?)),
            [] => unreachable!("spec has k >= 2"),
        }
    }
    Ok(w(spec.primes(), &z.rounded_to(wp), wp)?
        .pow_i64(spec.e())
        .rounded_to(prec))
}

/// Transformation exponent t with w^e(Mz) = zeta_24^t w^e(z) for
/// M = (a, N*b0; c, d) in Gamma^0(N):
///
/// ```text
/// t = -e (p1-1)...(pk-1) (a b0 + (-1)^k c (d (1-a^2) - a))
///     - 3 e (-1)^k (p1'-1)...(pk'-1) c' (a-1)   (mod 24).
/// ```
pub fn transformation_exponent(spec: &EtaQuotientSpec, m: &UnimodularMatrix) -> Result<u8> {
    if m.b() % spec.level() != 0 {
        return Err(Error::InvalidArgument(format!(
            "matrix is not in Gamma^0({}): b = {}",
            spec.level(),
            m.b()
        )));
    }
    let b0 = (m.b() / spec.level()) as i128;
    let (a, c, d) = (m.a() as i128, m.c() as i128, m.d() as i128);
    let sign = if spec.k() % 2 == 0 { 1i128 } else { -1i128 };
    let phi: i128 = spec.primes().iter().map(|&p| (p - 1) as i128).product();
    let phi_odd: i128 = spec
        .primes()
        .iter()
        .map(|&p| (odd_part(p) - 1) as i128)
        .product();
    let cp = odd_part(m.c()) as i128;
    let t = -phi * (a * b0 + sign * c * (d * (1 - a * a) - a)) - 3 * sign * phi_odd * cp * (a - 1);
    Ok((spec.e() as i128 * t).rem_euclid(24) as u8)
}

/// Transformation law of the simple quotient w_N(z) = eta(z/N)/eta(z) for
/// M in Gamma^0(N): w_N(Mz) = sign * zeta_24^t * w_N(z). Used as a
/// cross-check oracle; the planning layer needs only k >= 2.
pub fn simple_quotient_transformation(level: i64, m: &UnimodularMatrix) -> Result<(i32, u8)> {
    if m.b() % level != 0 {
        return Err(Error::InvalidArgument(format!(
            "matrix is not in Gamma^0({level})"
        )));
    }
    let b0 = (m.b() / level) as i128;
    let (a, c, d) = (m.a() as i128, m.c() as i128, m.d() as i128);
    let np = odd_part(level) as i128;
    let cp = odd_part(m.c()) as i128;
    // lambda(N c) - lambda(c): 0 for c = 0, lambda(N) otherwise
    let lam = if m.c() == 0 {
        0
    } else {
        crate::arith::odd_part_and_lambda(level).1 as i128
    };
    let t = (level as i128 - 1) * (-a * b0 + c * (d * (1 - a * a) - a))
        + 3 * (np - 1) * cp * (a - 1)
        + 3 * lam * (a * a - 1) / 2;
    let sym = crate::arith::kronecker(m.a(), np as i64)?;
    Ok((sym, t.rem_euclid(24) as u8))
}

/// w^e under the Fricke involution: w^e(-N/z).
pub fn fricke_value(spec: &EtaQuotientSpec, z: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + 32;
    let zw = z.rounded_to(wp);
    let arg = zw.recip().neg().scale_i64(spec.level());
    eval_w(spec, &arg, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::inv_mod;
    use crate::mpc::pow2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rug::Float;

    #[test]
    fn spec_level_data() {
        let s = EtaQuotientSpec::new(&[7, 11], 1).unwrap();
        assert_eq!((s.s(), s.n(), s.level()), (2, 154, 77));
        let s = EtaQuotientSpec::new(&[2, 3, 5], 3).unwrap();
        assert_eq!((s.s(), s.n()), (3, 30));
        let s = EtaQuotientSpec::new(&[5, 7], 1).unwrap();
        assert_eq!((s.s(), s.n()), (1, 35));
        let s = EtaQuotientSpec::new(&[2, 3, 7], 2).unwrap();
        assert_eq!((s.s(), s.n()), (2, 42));
    }

    #[test]
    fn spec_rejects_bad_input() {
        assert!(matches!(
            EtaQuotientSpec::new(&[7, 11], 5),
            Err(Error::InvalidExponent { e: 5, s: 2 })
        ));
        assert!(matches!(
            EtaQuotientSpec::new(&[7, 7], 1),
            Err(Error::InvalidPrimes(_))
        ));
        assert!(EtaQuotientSpec::new(&[7], 1).is_err());
        assert!(EtaQuotientSpec::new(&[6, 7], 1).is_err());
        assert!(EtaQuotientSpec::new(&[7, 11], 0).is_err());
    }

    #[test]
    fn invariance_clauses() {
        let s = EtaQuotientSpec::new(&[7, 11], 1).unwrap();
        assert_eq!(check_invariance(&s, -215), Ok(InvarianceClause::DoubleGeneric));
        // 60 is not divisible by 8 and -260 is even
        assert!(check_invariance(&s, -260).is_err());

        let s = EtaQuotientSpec::new(&[3, 5, 11], 3).unwrap();
        assert_eq!(check_invariance(&s, -3795), Ok(InvarianceClause::MultiDivisible));
        let s = EtaQuotientSpec::new(&[3, 5, 11], 1).unwrap();
        assert!(check_invariance(&s, -3795).is_err()); // needs e = 3

        let s = EtaQuotientSpec::new(&[5, 11], 1).unwrap();
        // all primes ≡ -1 mod 3... but k = 2 goes through the double clause:
        // e(p1-1)(p2-1) = 40: 3 ∤ 40 but 3 ∤ -215 is fine; 8 | 40 ok
        assert_eq!(check_invariance(&s, -215), Ok(InvarianceClause::DoubleGeneric));

        let s = EtaQuotientSpec::new(&[2, 13], 2).unwrap();
        assert_eq!(check_invariance(&s, -215), Ok(InvarianceClause::DoubleWithTwo));
        let s = EtaQuotientSpec::new(&[3, 13], 1).unwrap();
        assert_eq!(check_invariance(&s, -215), Ok(InvarianceClause::DoubleWithThree));

        let s = EtaQuotientSpec::new(&[5, 11, 17], 1).unwrap();
        // 4*10*16 = 640, 24 ∤ 640; 17 ≡ 2 mod 3, 5 ≡ 2, 11 ≡ 2, and 3 ∤ 215
        assert_eq!(
            check_invariance(&s, -215),
            Ok(InvarianceClause::MultiMinusOneModThree)
        );
        assert!(check_invariance(&s, -339).is_err()); // 3 | 339
    }

    #[test]
    fn invariance_monotone_in_exponent() {
        // once a clause holds for e, it holds for every multiple of e dividing s
        for primes in [vec![7i64, 11], vec![5, 7], vec![2, 3, 7], vec![3, 5, 11]] {
            let s_full = EtaQuotientSpec::new(&primes, 1)
                .map(|s| s.s())
                .unwrap_or_else(|_| {
                    // e = 1 may be rejected only via the exponent check, never here
                    unreachable!()
                });
            for d in [-215i64, -260, -3795, -420] {
                for e in 1..=s_full {
                    if s_full % e != 0 {
                        continue;
                    }
                    let se = EtaQuotientSpec::new(&primes, e).unwrap();
                    if check_invariance(&se, d).is_ok() {
                        for m in (e..=s_full).step_by(e as usize) {
                            if s_full % m != 0 || m % e != 0 {
                                continue;
                            }
                            let sm = EtaQuotientSpec::new(&primes, m).unwrap();
                            assert!(
                                check_invariance(&sm, d).is_ok(),
                                "clause lost raising e = {e} to {m} ({primes:?}, D = {d})"
                            );
                        }
                    }
                }
            }
        }
    }

    fn tol(prec: u32, guard: i64) -> Float {
        pow2(prec, -(prec as i64) + guard)
    }

    #[test]
    fn eval_w_d455_walkthrough_values() {
        // singular values for the 35-system of discriminant -455
        let prec = 192;
        let spec = EtaQuotientSpec::new(&[5, 7], 1).unwrap();
        let tau = |a: i64, b: i64| {
            let sq = Float::with_val(prec, 455u32).sqrt();
            Complex::new(
                prec,
                Float::with_val(prec, -b) / (2 * a),
                sq / (2 * a),
            )
        };
        let z1 = eval_w(&spec, &tau(1, 35), prec).unwrap();
        assert!((z1.re().to_f64() + 6.029).abs() < 0.01, "z1 = {z1}");
        assert!(z1.im().clone().abs() < 1e-40, "z1 should be real");

        let z2 = eval_w(&spec, &tau(2, 105), prec).unwrap();
        assert!((z2.re().to_f64() - 0.65).abs() < 0.01, "z2 = {z2}");
        assert!((z2.im().to_f64() + 2.05).abs() < 0.01, "z2 = {z2}");

        let z3 = eval_w(&spec, &tau(3, 175), prec).unwrap();
        assert!((z3.re().to_f64() - 1.50).abs() < 0.01, "z3 = {z3}");
        assert!((z3.im().to_f64() + 0.53).abs() < 0.01, "z3 = {z3}");
    }

    #[test]
    fn eval_w_routes_agree() {
        let prec = 160;
        let z = Complex::from_f64(prec + 64, 0.21, 1.3);
        for (primes, e) in [(vec![2i64, 3, 7], 2i64), (vec![5, 7], 1), (vec![2, 3, 5, 7], 1)] {
            let spec = EtaQuotientSpec::new(&primes, e).unwrap();
            let a = eval_w(&spec, &z, prec).unwrap();
            let b = eval_w_recursive(&spec, &z, prec).unwrap();
            let err = a.dist(&b);
            assert!(err < tol(prec, 64) * a.abs(), "{primes:?}: {a} vs {b}");
        }
    }

    /// Random normalized element of Gamma^0(N): a coprime to Nc, then
    /// d = a^{-1} mod Nc makes b = (ad-1)/c divisible by N.
    fn random_gamma0(n: i64, rng: &mut ChaCha8Rng) -> UnimodularMatrix {
        loop {
            let c = rng.gen_range(1..=40i64);
            let a0 = rng.gen_range(1..=60i64);
            if crate::arith::gcd(a0, n * c) != 1 {
                continue;
            }
            let a = a0;
            let Some(d) = inv_mod(a, n * c) else { continue };
            let b = (a as i128 * d as i128 - 1) / c as i128;
            if d > 10_000 || b.abs() > 10_000 {
                continue;
            }
            debug_assert_eq!(b.rem_euclid(n as i128), 0);
            return UnimodularMatrix::new(a, b as i64, c, d).unwrap();
        }
    }

    #[test]
    fn transformation_exponent_matches_numeric_ratio() {
        let prec = 192;
        let mut rng = ChaCha8Rng::seed_from_u64(0x77);
        for (primes, e) in [
            (vec![5i64, 7], 1i64),
            (vec![7, 11], 1),
            (vec![2, 3, 7], 2),
            (vec![2, 3, 5], 3),
            (vec![3, 5, 11], 3),
        ] {
            let spec = EtaQuotientSpec::new(&primes, e).unwrap();
            for _ in 0..200 {
                let m = random_gamma0(spec.level(), &mut rng);
                let z = Complex::from_f64(prec, rng.gen_range(-0.5..0.5), rng.gen_range(0.6..3.0));
                let t = transformation_exponent(&spec, &m).unwrap();
                let lhs = eval_w(&spec, &m.apply(&z), prec).unwrap();
                let rhs = Complex::root_of_unity(prec, t as i64, 24)
                    .mul(&eval_w(&spec, &z, prec).unwrap());
                let err = lhs.dist(&rhs);
                assert!(
                    err < tol(prec, 64) * rhs.abs(),
                    "spec {primes:?}^{e}, matrix {m:?}: t = {t}"
                );
            }
        }
    }

    #[test]
    fn transformation_exponent_is_zero_at_full_exponent() {
        // s = 1 for {5, 7}: the function is invariant under all of Gamma^0(35)
        let spec = EtaQuotientSpec::new(&[5, 7], 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let m = random_gamma0(35, &mut rng);
            assert_eq!(transformation_exponent(&spec, &m).unwrap(), 0);
        }
        // identity with b0 = 0
        let spec = EtaQuotientSpec::new(&[7, 11], 1).unwrap();
        assert_eq!(
            transformation_exponent(&spec, &UnimodularMatrix::identity()).unwrap(),
            0
        );
        // but a non-Gamma^0(77) matrix is rejected
        assert!(transformation_exponent(&spec, &UnimodularMatrix::translation(1)).is_err());
    }

    #[test]
    fn simple_quotient_law_numeric() {
        let prec = 192;
        let mut rng = ChaCha8Rng::seed_from_u64(0x51);
        for level in [5i64, 7, 14] {
            for _ in 0..50 {
                let m = random_gamma0(level, &mut rng);
                let z = Complex::from_f64(prec, rng.gen_range(-0.5..0.5), rng.gen_range(0.7..2.5));
                let (sym, t) = simple_quotient_transformation(level, &m).unwrap();
                let w = |z: &Complex| -> Complex {
                    eta(&z.div_i64(level), prec)
                        .unwrap()
                        .div(&eta(z, prec).unwrap())
                };
                let lhs = w(&m.apply(&z));
                let mut rhs = Complex::root_of_unity(prec, t as i64, 24).mul(&w(&z));
                if sym < 0 {
                    rhs = rhs.neg();
                }
                assert!(lhs.dist(&rhs) < tol(prec, 64) * rhs.abs(), "N = {level}, {m:?}");
            }
        }
    }

    #[test]
    fn fricke_involution() {
        let prec = 160;
        let z = Complex::from_f64(prec + 32, 0.1, 2.0);
        // even k: invariant
        let spec = EtaQuotientSpec::new(&[5, 7], 1).unwrap();
        let a = fricke_value(&spec, &z, prec).unwrap();
        let b = eval_w(&spec, &z, prec).unwrap();
        assert!(a.dist(&b) < tol(prec, 64) * b.abs());
        // odd k: inverted
        let spec = EtaQuotientSpec::new(&[2, 3, 5], 3).unwrap();
        let a = fricke_value(&spec, &z, prec).unwrap();
        let b = eval_w(&spec, &z, prec).unwrap();
        assert!(a.mul(&b).dist(&Complex::one(prec)) < tol(prec, 64));
        // fixed point z = i sqrt(N) of the involution: w^{2e} = 1 for odd k
        let sqrt_n = Float::with_val(prec + 32, 30u32).sqrt();
        let fixed = Complex::new(prec + 32, Float::with_val(prec + 32, 0), sqrt_n);
        let v = eval_w(&spec, &fixed, prec).unwrap();
        assert!(v.pow_i64(2).dist(&Complex::one(prec)) < tol(prec, 64));
    }
}
