//! Integer primitives: gcd, extended gcd, 2-adic splitting, Jacobi symbols,
//! CRT and small prime checks.

use crate::{Error, Result};

/// Greatest common divisor, always non-negative.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

pub fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd(gcd(a, b), c)
}

/// Extended gcd: returns (g, x, y) with g = x*a + y*b and g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_x, mut x) = (1i128, 0i128);
    let (mut old_y, mut y) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_x, x) = (x, old_x - q * x);
        (old_y, y) = (y, old_y - q * y);
    }
    if old_r < 0 {
        (old_r, old_x, old_y) = (-old_r, -old_x, -old_y);
    }
    (old_r as i64, old_x as i64, old_y as i64)
}

/// Inverse of `a` modulo `m` (m >= 1, gcd(a, m) = 1).
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m))
}

/// Chinese remainder: smallest x >= 0 with x ≡ r1 (mod m1) and x ≡ r2 (mod m2).
/// Moduli need not be coprime; returns None if the congruences conflict.
pub fn crt(r1: i64, m1: i64, r2: i64, m2: i64) -> Option<i64> {
    let (g, p, _) = ext_gcd(m1, m2);
    if (r2 - r1) % g != 0 {
        return None;
    }
    let lcm = m1 / g * m2;
    let diff = ((r2 - r1) / g) as i128;
    let x = r1 as i128 + (diff * p as i128).rem_euclid((m2 / g) as i128) * m1 as i128;
    Some(x.rem_euclid(lcm as i128) as i64)
}

/// Split n = n' * 2^lambda with n' odd of the same sign as n.
///
/// For n = 0 returns (1, 0), so n' is usable as a Jacobi denominator.
pub fn odd_part_and_lambda(n: i64) -> (i64, u32) {
    if n == 0 {
        return (1, 0);
    }
    let lambda = n.trailing_zeros();
    (n >> lambda, lambda)
}

/// Odd part of n, with the n = 0 convention 0' = 1.
pub fn odd_part(n: i64) -> i64 {
    odd_part_and_lambda(n).0
}

/// Jacobi symbol (a | m) for odd positive m; (a | 1) = 1 for every a.
pub fn kronecker(a: i64, m: i64) -> Result<i32> {
    if m <= 0 || m % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "kronecker: denominator {m} must be odd and positive"
        )));
    }
    let mut num = a.rem_euclid(m);
    let mut den = m;
    let mut acc = 1i32;
    loop {
        num %= den;
        if num == 0 {
            return Ok(if den == 1 { acc } else { 0 });
        }
        let twos = num.trailing_zeros();
        num >>= twos;
        if twos % 2 == 1 && (den % 8 == 3 || den % 8 == 5) {
            acc = -acc;
        }
        // now num, den odd positive; quadratic reciprocity
        if num % 4 == 3 && den % 4 == 3 {
            acc = -acc;
        }
        (num, den) = (den, num);
    }
}

/// Splitting behaviour of a prime in the order of discriminant d: the
/// Kronecker symbol (d | p) extended to p = 2. Returns -1 (inert),
/// 0 (ramified) or +1 (split).
pub fn disc_symbol(d: i64, p: i64) -> i32 {
    if p == 2 {
        match d.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0, // even discriminant
        }
    } else {
        kronecker(d, p).expect("odd prime denominator")
    }
}

/// Deterministic trial-division primality for the small primes used as levels.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Prime factorization (ascending primes with exponents) by trial division.
pub fn factor(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_part_conventions() {
        assert_eq!(odd_part_and_lambda(0), (1, 0));
        assert_eq!(odd_part_and_lambda(12), (3, 2));
        assert_eq!(odd_part_and_lambda(7), (7, 0));
        assert_eq!(odd_part_and_lambda(-12), (-3, 2));
        assert_eq!(odd_part_and_lambda(1), (1, 0));
    }

    #[test]
    fn kronecker_known_values() {
        assert_eq!(kronecker(5, 7).unwrap(), -1);
        assert_eq!(kronecker(0, 1).unwrap(), 1);
        assert_eq!(kronecker(2, 7).unwrap(), 1); // squares mod 7 are {1, 2, 4}
        assert_eq!(kronecker(14, 7).unwrap(), 0);
        assert!(kronecker(3, 4).is_err());
        assert!(kronecker(3, -5).is_err());
        assert!(kronecker(3, 0).is_err());
    }

    /// Brute-force Legendre symbol by enumerating squares mod p.
    fn legendre_brute(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        for x in 1..p {
            if (x * x) % p == a {
                return 1;
            }
        }
        -1
    }

    #[test]
    fn kronecker_matches_brute_force_legendre() {
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            for a in -60..60 {
                assert_eq!(
                    kronecker(a, p).unwrap(),
                    legendre_brute(a, p),
                    "({a} | {p})"
                );
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_in_denominator() {
        for (m1, m2) in [(3, 5), (5, 7), (9, 35), (15, 77)] {
            for a in -40..40 {
                assert_eq!(
                    kronecker(a, m1 * m2).unwrap(),
                    kronecker(a, m1).unwrap() * kronecker(a, m2).unwrap()
                );
            }
        }
    }

    #[test]
    fn ext_gcd_bezout() {
        for a in -30..30 {
            for b in -30..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(x * a + y * b, g);
            }
        }
    }

    #[test]
    fn crt_basic() {
        assert_eq!(crt(2, 3, 3, 5), Some(8));
        assert_eq!(crt(1, 4, 9, 6), Some(9)); // compatible non-coprime moduli
        assert_eq!(crt(1, 4, 2, 6), None); // conflicting parity mod 2
        let x = crt(5, 14, 19, 22).unwrap();
        assert_eq!(x % 14, 5);
        assert_eq!(x % 22, 19);
    }

    #[test]
    fn disc_symbol_at_two() {
        assert_eq!(disc_symbol(-215, 2), 1); // -215 ≡ 1 (mod 8): split
        assert_eq!(disc_symbol(-3, 2), -1); // -3 ≡ 5 (mod 8): inert
        assert_eq!(disc_symbol(-4, 2), 0);
    }

    #[test]
    fn small_primes() {
        let primes: Vec<i64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert_eq!(factor(3795), vec![(3, 1), (5, 1), (11, 1), (23, 1)]);
        assert_eq!(factor(-12), vec![(2, 2), (3, 1)]);
    }
}
