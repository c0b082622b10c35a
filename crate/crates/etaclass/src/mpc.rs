//! Arbitrary-precision complex arithmetic on MPFR floats.
//!
//! A [`Complex`] is a pair of `rug::Float`s at a common working precision.
//! Every operation rounds to nearest at the precision of its operands, so a
//! chain of n operations carries a relative error below roughly n * 2^(1-p).
//! Callers that need a guaranteed output accuracy work at an elevated
//! precision and round down once at the end.
//!
//! Square roots use the principal branch: the argument of the result lies in
//! (-pi/2, pi/2]. The eta machinery only ever takes square roots of values
//! off the negative real axis, so no branch-cut jumps occur there.

use rug::{ops::Pow, Float, Integer};

/// Minimum working precision in bits.
pub const MIN_PREC: u32 = 64;

/// Complex number with arbitrary-precision real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    re: Float,
    im: Float,
}

impl Complex {
    pub fn new(prec: u32, re: Float, im: Float) -> Self {
        let mut re = re;
        let mut im = im;
        re.set_prec(prec);
        im.set_prec(prec);
        Complex { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_i64(prec: u32, re: i64, im: i64) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(prec, 0, 0)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(prec, 1, 0)
    }

    /// e^(2 pi i * numer / denom), the root of unity zeta_denom^numer.
    pub fn root_of_unity(prec: u32, numer: i64, denom: i64) -> Self {
        let theta: Float = Float::with_val(prec, rug::float::Constant::Pi) * 2 * numer / denom;
        let (sin, cos) = theta.sin_cos(Float::new(prec));
        Complex { re: cos, im: sin }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Round both parts to a (usually lower) precision.
    pub fn rounded_to(&self, prec: u32) -> Self {
        let mut out = self.clone();
        out.re.set_prec(prec);
        out.im.set_prec(prec);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, -&self.re),
            im: Float::with_val(p, -&self.im),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec();
        debug_assert_eq!(p, rhs.prec());
        Complex {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.prec();
        debug_assert_eq!(p, rhs.prec());
        Complex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec();
        debug_assert_eq!(p, rhs.prec());
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        Complex {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        Complex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -&self.im) / n,
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re / k),
            im: Float::with_val(p, &self.im / k),
        }
    }

    pub fn add_i64(&self, k: i64) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re + k),
            im: self.im.clone(),
        }
    }

    /// |self|^2 as a real float.
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// Distance |self - rhs|.
    pub fn dist(&self, rhs: &Self) -> Float {
        self.sub(rhs).abs()
    }

    /// Principal square root (result argument in (-pi/2, pi/2]).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                // negative real axis: sqrt(-x) = i sqrt(x)
                let v = Float::with_val(p, -&self.re).sqrt();
                return Complex {
                    re: Float::with_val(p, 0),
                    im: v,
                };
            }
            return Complex {
                re: Float::with_val(p, self.re.sqrt_ref()),
                im: Float::with_val(p, 0),
            };
        }
        let r = self.abs();
        if self.re.is_sign_positive() || self.re.is_zero() {
            let mut w = Float::with_val(p, &r + &self.re);
            w /= 2u32;
            let w = w.sqrt();
            let mut v = Float::with_val(p, &self.im / &w);
            v /= 2u32;
            Complex { re: w, im: v }
        } else {
            let mut v = Float::with_val(p, &r - &self.re);
            v /= 2u32;
            let mut v = v.sqrt();
            if self.im.is_sign_negative() {
                v = -v;
            }
            let mut w = Float::with_val(p, &self.im / &v);
            w /= 2u32;
            Complex { re: w, im: v }
        }
    }

    /// Complex exponential e^self.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let mag = Float::with_val(p, self.re.exp_ref());
        let (sin, cos) = self.im.clone().sin_cos(Float::new(p));
        Complex {
            re: Float::with_val(p, &mag * &cos),
            im: Float::with_val(p, &mag * &sin),
        }
    }

    /// Integer power by binary exponentiation; negative exponents invert.
    pub fn pow_i64(&self, n: i64) -> Self {
        if n < 0 {
            return self.recip().pow_i64(-n);
        }
        let mut acc = Complex::one(self.prec());
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Nearest integers to the real and imaginary parts.
    pub fn round_parts(&self) -> (Integer, Integer) {
        let re = self
            .re
            .clone()
            .round()
            .to_integer()
            .expect("finite real part");
        let im = self
            .im
            .clone()
            .round()
            .to_integer()
            .expect("finite imaginary part");
        (re, im)
    }
}

impl std::fmt::Display for Complex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", self.re, Float::with_val(self.prec(), self.im.abs_ref()))
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// 2^e as a float, for tolerance thresholds.
pub fn pow2(prec: u32, e: i64) -> Float {
    Float::with_val(prec, 1u32) << e as i32
}

/// pi at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// Integer power of a float.
pub fn float_pow_u32(x: &Float, n: u32) -> Float {
    Float::with_val(x.prec(), x.pow(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (Float::with_val(a.prec(), a - b)).abs() < tol
    }

    #[test]
    fn field_ops() {
        let p = 128;
        let a = Complex::from_f64(p, 1.5, -2.0);
        let b = Complex::from_f64(p, -0.25, 3.0);
        let sum = a.add(&b);
        assert!(close(sum.re(), 1.25, 1e-30) && close(sum.im(), 1.0, 1e-30));
        let prod = a.mul(&b);
        // (1.5 - 2i)(-0.25 + 3i) = (-0.375 + 6) + (4.5 + 0.5)i
        assert!(close(prod.re(), 5.625, 1e-28) && close(prod.im(), 5.0, 1e-28));
        let q = prod.div(&b);
        assert!(q.dist(&a) < 1e-30);
        let r = a.recip().mul(&a);
        assert!(r.dist(&Complex::one(p)) < 1e-30);
    }

    #[test]
    fn sqrt_principal_branch() {
        let p = 128;
        for (re, im) in [(2.0, 3.0), (-2.0, 3.0), (-2.0, -3.0), (2.0, -3.0), (0.0, 5.0)] {
            let z = Complex::from_f64(p, re, im);
            let s = z.sqrt();
            assert!(s.mul(&s).dist(&z) < 1e-30, "sqrt^2 != z for {re}+{im}i");
            // principal branch: Re >= 0, and Im > 0 when Re == 0
            assert!(!s.re().is_sign_negative());
        }
        // negative real axis maps to the positive imaginary axis
        let z = Complex::from_f64(p, -4.0, 0.0);
        let s = z.sqrt();
        assert!(close(s.re(), 0.0, 1e-30) && close(s.im(), 2.0, 1e-30));
    }

    #[test]
    fn exp_and_roots_of_unity() {
        let p = 128;
        let z24 = Complex::root_of_unity(p, 1, 24);
        assert!(z24.pow_i64(24).dist(&Complex::one(p)) < 1e-30);
        assert!(z24.pow_i64(12).dist(&Complex::from_i64(p, -1, 0)) < 1e-30);
        // e^{i pi} = -1
        let ipi = Complex::new(p, Float::with_val(p, 0), pi(p));
        assert!(ipi.exp().dist(&Complex::from_i64(p, -1, 0)) < 1e-30);
    }

    #[test]
    fn pow_negative_exponent() {
        let p = 128;
        let z = Complex::from_f64(p, 0.7, 1.3);
        let w = z.pow_i64(-3).mul(&z.pow_i64(3));
        assert!(w.dist(&Complex::one(p)) < 1e-30);
    }

    #[test]
    fn rounding_precision() {
        let z = Complex::from_f64(256, std::f64::consts::PI, 0.0);
        let w = z.rounded_to(64);
        assert_eq!(w.prec(), 64);
        assert!(z.rounded_to(64).dist(&w) == 0.0);
    }
}
