//! Exact polynomial arithmetic over Z and over quadratic orders Z + wZ.
//!
//! Class polynomials land here after rounding: coefficients are either
//! rational integers or u + v*w with w = (1 + sqrt(D))/2 (odd D) or
//! w = sqrt(D)/2 (D divisible by 4). Multiplication, powers and a
//! gcd-with-derivative squarefreeness test are all that is needed; degrees
//! are class-number sized, so naive algorithms are fine.

use crate::mpc::Complex;
use rug::{Float, Integer, Rational};

/// Generator w of the quadratic order of discriminant D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaBasis {
    d: i64,
}

impl OmegaBasis {
    pub fn new(d: i64) -> Self {
        debug_assert!(d < 0 && matches!(d.rem_euclid(4), 0 | 1));
        OmegaBasis { d }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// w = (1 + sqrt(D))/2 rather than sqrt(D)/2.
    pub fn half_integral(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// Trace t and norm n with w^2 = t*w - n.
    pub fn trace_norm(&self) -> (i64, i64) {
        if self.half_integral() {
            (1, (1 - self.d) / 4)
        } else {
            (0, -self.d / 4)
        }
    }

    pub fn value(&self, prec: u32) -> Complex {
        let half_sqrt = Float::with_val(prec, self.d.unsigned_abs()).sqrt() / 2u32;
        let re = if self.half_integral() {
            Float::with_val(prec, 0.5)
        } else {
            Float::with_val(prec, 0)
        };
        Complex::new(prec, re, half_sqrt)
    }
}

impl std::fmt::Display for OmegaBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.half_integral() {
            write!(f, "(1 + sqrt({}))/2", self.d)
        } else {
            write!(f, "sqrt({})/2", self.d)
        }
    }
}

/// Coefficient u + v*w of a quadratic-order polynomial.
pub type QuadInt = (Integer, Integer);

/// Monic class-polynomial coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyCoeffs {
    Int(Vec<Integer>),
    Quad {
        omega: OmegaBasis,
        coeffs: Vec<QuadInt>,
    },
}

impl PolyCoeffs {
    pub fn degree(&self) -> usize {
        match self {
            PolyCoeffs::Int(c) => c.len() - 1,
            PolyCoeffs::Quad { coeffs, .. } => coeffs.len() - 1,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, PolyCoeffs::Int(_))
    }

    /// Display with descending powers, like "X^2 + 46*X + 1".
    pub fn format(&self) -> String {
        match self {
            PolyCoeffs::Int(c) => format_terms(c.len() - 1, |i| int_term(&c[i])),
            PolyCoeffs::Quad { coeffs, .. } => {
                format_terms(coeffs.len() - 1, |i| quad_term(&coeffs[i]))
            }
        }
    }
}

/// (sign, bare term text without sign) or None for a zero coefficient.
fn int_term(c: &Integer) -> Option<(bool, String)> {
    if c.cmp0() == std::cmp::Ordering::Equal {
        return None;
    }
    let neg = c.cmp0() == std::cmp::Ordering::Less;
    let mag = Integer::from(c.abs_ref());
    Some((neg, mag.to_string()))
}

fn quad_term(c: &QuadInt) -> Option<(bool, String)> {
    let (u, v) = c;
    let uz = u.cmp0() == std::cmp::Ordering::Equal;
    let vz = v.cmp0() == std::cmp::Ordering::Equal;
    if uz && vz {
        return None;
    }
    if vz {
        return int_term(u);
    }
    // render as (u + v*w); the sign stays inside the parentheses
    let vs = if *v == 1 {
        "w".to_string()
    } else if *v == -1 {
        "-w".to_string()
    } else {
        format!("{v}*w")
    };
    let s = if uz {
        vs
    } else if v.cmp0() == std::cmp::Ordering::Greater {
        format!("{u}+{vs}")
    } else {
        format!("{u}{vs}")
    };
    Some((false, format!("({s})")))
}

fn format_terms(degree: usize, term: impl Fn(usize) -> Option<(bool, String)>) -> String {
    let mut out = String::new();
    for i in (0..=degree).rev() {
        let Some((neg, text)) = term(i) else { continue };
        let xpow = match i {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{i}"),
        };
        let coeff_text = if text == "1" && i > 0 {
            xpow.clone()
        } else if xpow.is_empty() {
            text.clone()
        } else {
            format!("{text}*{xpow}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
            out.push_str(&coeff_text);
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&coeff_text);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn int_poly_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

pub fn int_poly_pow(a: &[Integer], k: usize) -> Vec<Integer> {
    let mut acc = vec![Integer::from(1)];
    for _ in 0..k {
        acc = int_poly_mul(&acc, a);
    }
    acc
}

/// Squarefreeness over Q: gcd(P, P') is constant.
pub fn int_poly_is_squarefree(a: &[Integer]) -> bool {
    let p: Vec<Rational> = a.iter().map(Rational::from).collect();
    let dp: Vec<Rational> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| Rational::from(Integer::from(c * Integer::from(i))))
        .collect();
    rat_poly_gcd_degree(p, dp) == 0
}

fn rat_is_zero(r: &Rational) -> bool {
    r.cmp0() == std::cmp::Ordering::Equal
}

fn rat_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && rat_is_zero(p.last().unwrap()) {
        p.pop();
    }
    p
}

/// Degree of gcd(a, b) over Q by the Euclidean algorithm.
fn rat_poly_gcd_degree(a: Vec<Rational>, b: Vec<Rational>) -> usize {
    let (mut a, mut b) = (rat_trim(a), rat_trim(b));
    loop {
        if b.len() == 1 && rat_is_zero(&b[0]) {
            return a.len() - 1;
        }
        // r = a mod b
        let mut r = a.clone();
        let lead = b.last().unwrap().clone();
        while r.len() >= b.len() && !(r.len() == 1 && rat_is_zero(&r[0])) {
            let shift = r.len() - b.len();
            let q = Rational::from(r.last().unwrap() / &lead);
            for (i, c) in b.iter().enumerate() {
                let sub = Rational::from(&q * c);
                r[shift + i] -= sub;
            }
            r = rat_trim(r);
        }
        a = b;
        b = r;
    }
}

/// Field element of Q(w), coordinates over the basis {1, w}.
#[derive(Debug, Clone, PartialEq)]
struct QNum {
    u: Rational,
    v: Rational,
}

impl QNum {
    fn is_zero(&self) -> bool {
        rat_is_zero(&self.u) && rat_is_zero(&self.v)
    }
    fn sub_assign_mul(&mut self, q: &QNum, c: &QNum, omega: OmegaBasis) {
        let prod = qnum_mul(q, c, omega);
        self.u -= prod.u;
        self.v -= prod.v;
    }
}

fn qnum_mul(a: &QNum, b: &QNum, omega: OmegaBasis) -> QNum {
    let (t, n) = omega.trace_norm();
    // (u1 + v1 w)(u2 + v2 w) with w^2 = t w - n
    let vv = Rational::from(&a.v * &b.v);
    let u = Rational::from(&a.u * &b.u) - Rational::from(&vv * Integer::from(n));
    let v = Rational::from(&a.u * &b.v)
        + Rational::from(&a.v * &b.u)
        + Rational::from(&vv * Integer::from(t));
    QNum { u, v }
}

fn qnum_inv(a: &QNum, omega: OmegaBasis) -> QNum {
    let (t, n) = omega.trace_norm();
    // conjugate: (u + v t) - v w; norm: u^2 + u v t + v^2 n
    let norm = Rational::from(&a.u * &a.u)
        + Rational::from(&a.u * &a.v) * Integer::from(t)
        + Rational::from(&a.v * &a.v) * Integer::from(n);
    let cu = Rational::from(&a.u) + Rational::from(&a.v) * Integer::from(t);
    let cv = Rational::from(-&a.v);
    QNum { u: cu / norm.clone(), v: cv / norm }
}

/// Squarefreeness over Q(w): gcd(P, P') is constant.
pub fn quad_poly_is_squarefree(coeffs: &[QuadInt], omega: OmegaBasis) -> bool {
    let p: Vec<QNum> = coeffs
        .iter()
        .map(|(u, v)| QNum { u: Rational::from(u), v: Rational::from(v) })
        .collect();
    let dp: Vec<QNum> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, (u, v))| QNum {
            u: Rational::from(Integer::from(u * Integer::from(i))),
            v: Rational::from(Integer::from(v * Integer::from(i))),
        })
        .collect();
    qnum_poly_gcd_degree(p, dp, omega) == 0
}

fn qnum_trim(mut p: Vec<QNum>) -> Vec<QNum> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn qnum_poly_gcd_degree(a: Vec<QNum>, b: Vec<QNum>, omega: OmegaBasis) -> usize {
    let (mut a, mut b) = (qnum_trim(a), qnum_trim(b));
    loop {
        if b.len() == 1 && b[0].is_zero() {
            return a.len() - 1;
        }
        let mut r = a.clone();
        let lead_inv = qnum_inv(b.last().unwrap(), omega);
        while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
            let shift = r.len() - b.len();
            let q = qnum_mul(r.last().unwrap(), &lead_inv, omega);
            for (i, c) in b.iter().enumerate() {
                r[shift + i].sub_assign_mul(&q, c, omega);
            }
            r = qnum_trim(r);
        }
        a = b;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn multiply_and_power() {
        // (X + 1)^2 = X^2 + 2X + 1
        let p = ints(&[1, 1]);
        assert_eq!(int_poly_pow(&p, 2), ints(&[1, 2, 1]));
        // (X^2 + 46X + 1)^2 = X^4 + 92X^3 + 2118X^2 + 92X + 1
        let q = ints(&[1, 46, 1]);
        assert_eq!(int_poly_pow(&q, 2), ints(&[1, 92, 2118, 92, 1]));
    }

    #[test]
    fn squarefree_detection() {
        assert!(int_poly_is_squarefree(&ints(&[1, 46, 1])));
        assert!(!int_poly_is_squarefree(&ints(&[1, 92, 2118, 92, 1])));
        assert!(int_poly_is_squarefree(&ints(&[2, 3]))); // linear
        assert!(!int_poly_is_squarefree(&ints(&[1, 2, 1])));
        assert!(int_poly_is_squarefree(&ints(&[-1, 0, 1])));
    }

    #[test]
    fn quad_squarefree_detection() {
        let omega = OmegaBasis::new(-215);
        let one = (Integer::from(1), Integer::from(0));
        // (X + w)(X + 1) squarefree
        let p = vec![
            (Integer::from(0), Integer::from(1)),
            (Integer::from(1), Integer::from(1)),
            one.clone(),
        ];
        assert!(quad_poly_is_squarefree(&p, omega));
        // (X + w)^2 = X^2 + 2w X + w^2 with w^2 = w - 54
        let sq = vec![
            (Integer::from(-54), Integer::from(1)),
            (Integer::from(0), Integer::from(2)),
            one,
        ];
        assert!(!quad_poly_is_squarefree(&sq, omega));
    }

    #[test]
    fn formatting() {
        let p = PolyCoeffs::Int(ints(&[-1, 3, 1]));
        assert_eq!(p.format(), "X^2 + 3*X - 1");
        let p = PolyCoeffs::Int(ints(&[1, -5, 0, 1]));
        assert_eq!(p.format(), "X^3 - 5*X + 1");
        let omega = OmegaBasis::new(-215);
        let p = PolyCoeffs::Quad {
            omega,
            coeffs: vec![
                (Integer::from(1), Integer::from(0)),
                (Integer::from(18), Integer::from(-1)),
                (Integer::from(1), Integer::from(0)),
            ],
        };
        assert_eq!(p.format(), "X^2 + (18-w)*X + 1");
    }

    #[test]
    fn omega_basis_values() {
        let o = OmegaBasis::new(-215);
        assert!(o.half_integral());
        assert_eq!(o.trace_norm(), (1, 54));
        let v = o.value(96);
        assert!((v.re().to_f64() - 0.5).abs() < 1e-15);
        assert!((v.im().to_f64() - (215.0f64).sqrt() / 2.0).abs() < 1e-12);
        let o = OmegaBasis::new(-16);
        assert!(!o.half_integral());
        assert_eq!(o.trace_norm(), (0, 4));
    }
}
