//! Dedekind eta on the upper half-plane.
//!
//! eta(z) = q^(1/24) * sum_{n in Z} (-1)^n q^(n(3n-1)/2),  q = e^(2 pi i z).
//!
//! Arguments arising from eta-quotients (z/N for CM points z) can have tiny
//! imaginary part, where the series converges slowly. [`eta`] therefore first
//! reduces z to the standard fundamental domain |Re z| <= 1/2, |z| >= 1 of
//! SL2(Z), where |q| <= e^(-pi sqrt(3)) and a handful of terms suffice, and
//! carries the accumulated transformation multiplier back.
//!
//! For a normalized unimodular matrix M = (a b; c d) the multiplier is
//!
//! ```text
//! eta(M z) = epsilon(M) sqrt(c z + d) eta(z),
//! epsilon(M) = (a | c') zeta_24^(e(M)),
//! ebar(M) = ab + c(d(1 - a^2) - a) + 3 c'(a - 1),
//! e(M) = ebar(M) + 3/2 lambda(c) (a^2 - 1),
//! ```
//!
//! with c = c' 2^lambda(c) the 2-adic splitting and (a | c') the Jacobi
//! symbol. [`epsilon_exponent`] computes the pair ((a | c'), e(M) mod 24)
//! exactly in integers; the reduction loop instead accumulates its root of
//! unity exactly and the sqrt factors numerically, which keeps long
//! reduction chains free of angular drift.

use crate::arith::{kronecker, odd_part_and_lambda};
use crate::mpc::{pi, pow2, Complex, MIN_PREC};
use crate::{Error, Result};
use rug::Float;

/// Extra working bits used inside [`eta`] on top of the requested output
/// precision. The documented error guard is g = 32 + ceil(log2(series terms
/// + reduction steps + 1)); both series length (sub-hundreds) and reduction
/// chains stay far below 2^32, so 64 guard bits dominate the true error.
const GUARD_BITS: u32 = 64;

/// Element of SL2(Z) / {±1}, normalized so that c >= 0, and d > 0 if c = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnimodularMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl UnimodularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::InvalidArgument(format!(
                "matrix ({a},{b};{c},{d}) has determinant {det}, expected 1"
            )));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: i64, b: i64, c: i64, d: i64) -> Self {
        if c < 0 || (c == 0 && d < 0) {
            UnimodularMatrix { a: -a, b: -b, c: -c, d: -d }
        } else {
            UnimodularMatrix { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        UnimodularMatrix { a: 1, b: 0, c: 0, d: 1 }
    }

    /// T^k : z -> z + k.
    pub fn translation(k: i64) -> Self {
        UnimodularMatrix { a: 1, b: k, c: 0, d: 1 }
    }

    /// S : z -> -1/z.
    pub fn inversion() -> Self {
        UnimodularMatrix { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Matrix product self * rhs (acting as z -> self(rhs(z))).
    pub fn mul(&self, rhs: &Self) -> Self {
        let a = self.a as i128 * rhs.a as i128 + self.b as i128 * rhs.c as i128;
        let b = self.a as i128 * rhs.b as i128 + self.b as i128 * rhs.d as i128;
        let c = self.c as i128 * rhs.a as i128 + self.d as i128 * rhs.c as i128;
        let d = self.c as i128 * rhs.b as i128 + self.d as i128 * rhs.d as i128;
        Self::normalized(
            a.try_into().expect("matrix entry overflow"),
            b.try_into().expect("matrix entry overflow"),
            c.try_into().expect("matrix entry overflow"),
            d.try_into().expect("matrix entry overflow"),
        )
    }

    /// Moebius action (az + b) / (cz + d).
    pub fn apply(&self, z: &Complex) -> Complex {
        let num = z.scale_i64(self.a).add_i64(self.b);
        let den = z.scale_i64(self.c).add_i64(self.d);
        num.div(&den)
    }
}

/// epsilon(M) split into its sign and 24th-root-of-unity exponent:
/// epsilon(M) = sym * zeta_24^t with sym = (a | c').
pub fn epsilon_exponent(m: &UnimodularMatrix) -> Result<(i32, u8)> {
    // constructors enforce normalization; re-check to honor the contract
    if m.c < 0 || (m.c == 0 && m.d <= 0) {
        return Err(Error::InvalidArgument(format!(
            "matrix ({},{};{},{}) is not normalized",
            m.a, m.b, m.c, m.d
        )));
    }
    let (cp, lambda) = odd_part_and_lambda(m.c);
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    let ebar = a * b + c * (d * (1 - a * a) - a) + 3 * cp as i128 * (a - 1);
    // a is odd whenever c is even, so 8 | a^2 - 1 and the division is exact
    let e = ebar + 3 * lambda as i128 * (a * a - 1) / 2;
    let sym = kronecker(m.a, cp)?;
    debug_assert!(sym != 0, "a and c' are coprime");
    Ok((sym, e.rem_euclid(24) as u8))
}

/// epsilon(M) as a complex number at the given precision.
pub fn epsilon_value(m: &UnimodularMatrix, prec: u32) -> Result<Complex> {
    let (sym, t) = epsilon_exponent(m)?;
    let z = Complex::root_of_unity(prec, t as i64, 24);
    Ok(if sym < 0 { z.neg() } else { z })
}

/// Accumulated transformation data relating eta at a point to eta at its
/// fundamental-domain reduction: eta(z) = prefactor * zeta_24^k * eta(z').
#[derive(Debug, Clone)]
pub struct EtaMultiplier {
    zeta24_exponent: u8,
    prefactor: Complex,
}

impl EtaMultiplier {
    pub fn identity(prec: u32) -> Self {
        EtaMultiplier {
            zeta24_exponent: 0,
            prefactor: Complex::one(prec),
        }
    }

    pub fn zeta24_exponent(&self) -> u8 {
        self.zeta24_exponent
    }

    pub fn prefactor(&self) -> &Complex {
        &self.prefactor
    }

    pub fn apply(&self, eta_value: &Complex) -> Complex {
        let zeta = Complex::root_of_unity(eta_value.prec(), self.zeta24_exponent as i64, 24);
        self.prefactor.rounded_to(eta_value.prec()).mul(&zeta).mul(eta_value)
    }
}

/// Reduce z to the fundamental domain |Re z'| <= 1/2, |z'| >= 1.
///
/// Returns (z', M, mult) with z' = Mz and eta(z) = mult.apply(eta(z')).
pub fn reduce_to_fundamental(
    z: &Complex,
) -> Result<(Complex, UnimodularMatrix, EtaMultiplier)> {
    if !(z.im().is_sign_positive() && !z.im().is_zero() && z.is_finite()) {
        return Err(Error::InvalidArgument(
            "eta requires Im z > 0".to_string(),
        ));
    }
    let prec = z.prec();
    let one = Float::with_val(prec, 1);
    let mut cur = z.clone();
    let mut m = UnimodularMatrix::identity();
    let mut zeta_exp: i64 = 0;
    let mut prefactor = Complex::one(prec);

    for _ in 0..100_000 {
        // recenter: |Re| <= 1/2
        let t = cur
            .re()
            .clone()
            .round()
            .to_integer()
            .and_then(|i| i.to_i64())
            .ok_or_else(|| Error::PrecisionFailure("real part out of range".into()))?;
        if t != 0 {
            cur = cur.add_i64(-t);
            m = UnimodularMatrix::translation(-t).mul(&m);
            // eta(old) = zeta_24^t eta(new)
            zeta_exp = (zeta_exp + t).rem_euclid(24);
        }
        if cur.norm_sqr() >= one {
            let mult = EtaMultiplier {
                zeta24_exponent: zeta_exp as u8,
                prefactor,
            };
            return Ok((cur, m, mult));
        }
        // invert: eta(old) = eta(-1/old) / sqrt(-i * old)
        let minus_i_z = Complex::new(prec, cur.im().clone(), Float::with_val(prec, -cur.re()));
        prefactor = prefactor.div(&minus_i_z.sqrt());
        cur = cur.recip().neg();
        m = UnimodularMatrix::inversion().mul(&m);
    }
    Err(Error::PrecisionFailure(
        "fundamental-domain reduction did not terminate".to_string(),
    ))
}

/// Dedekind eta at z (Im z > 0) with relative error below 2^(-prec+g) for
/// the guard g documented on [`GUARD_BITS`].
pub fn eta(z: &Complex, prec: u32) -> Result<Complex> {
    let prec = prec.max(MIN_PREC);
    let wp = prec + GUARD_BITS;
    let (zf, _, mult) = reduce_to_fundamental(&z.rounded_to(wp))?;

    // q^(1/24) = e^(2 pi i z / 24), directly from z to avoid branch ambiguity
    let i_pi_over_12 = Complex::new(wp, Float::with_val(wp, 0), pi(wp) / 12u32);
    let q24 = zf.mul(&i_pi_over_12).exp();
    let q = q24.pow_i64(24);

    // sum_{n in Z} (-1)^n q^(n(3n-1)/2) with exponents 0, 1, 2, 5, 7, 12, 15, ...
    // runners: r1 = q^(2n-1) advances by q^2, r2 = q^n advances by q
    let thresh = {
        let t = pow2(wp, -((prec as i64) + 32));
        Float::with_val(wp, t.square_ref())
    };
    let q2 = q.mul(&q);
    let mut sum = Complex::one(wp);
    let mut r1 = q.clone();
    let mut r2 = q.clone();
    let mut run = Complex::one(wp);
    let mut n: u64 = 1;
    loop {
        run = run.mul(&r1); // q^(n(3n-1)/2)
        let t1 = run.clone();
        run = run.mul(&r2); // q^(n(3n+1)/2)
        let t2 = run.clone();
        let term = t1.add(&t2);
        sum = if n % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        if run.norm_sqr() < thresh {
            break;
        }
        r1 = r1.mul(&q2);
        r2 = r2.mul(&q);
        n += 1;
        if n > 1_000_000 {
            return Err(Error::PrecisionFailure("eta series did not converge".into()));
        }
    }

    Ok(mult.apply(&q24.mul(&sum)).rounded_to(prec))
}
