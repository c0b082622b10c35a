//! Binary quadratic forms of negative discriminant.
//!
//! A primitive positive form [A, B, C] = AX^2 + BXY + CY^2 with
//! B^2 - 4AC = D < 0 stands in for the ideal class of
//! A*Z + (-B + sqrt(D))/2 * Z in the order of discriminant D; proper
//! equivalence of forms matches equality of ideal classes, and composition
//! realizes the class-group product. The basis quotient
//! tau = (-B + sqrt(D))/(2A) is the form's root in the upper half-plane.
//!
//! Composition is Dirichlet's: the right factor is first moved to an
//! equivalent form whose leading coefficient is coprime to the left one's,
//! the middle coefficients are merged by CRT, and
//! [A1*A2, B, (B^2-D)/(4*A1*A2)] is reduced. No NUCOMP — discriminants stay
//! desk-sized here.
//!
//! An n-system (the input the class-polynomial machinery consumes) is a set
//! of forms representing every ideal class once, with gcd(A_i, n) = 1 and
//! B_i ≡ B_1 (mod 2n); its basis quotients enumerate the Galois conjugates
//! of a class invariant of level n.

use crate::arith::{crt, disc_symbol, ext_gcd, factor, gcd, gcd3, is_prime};
use crate::mpc::Complex;
use crate::{Error, Result};
use rug::Float;

/// Check that d is a valid imaginary-quadratic discriminant.
pub fn validate_discriminant(d: i64) -> Result<()> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

/// D = c^2 * Delta with Delta a fundamental discriminant; returns (Delta, c).
pub fn discriminant_decompose(d: i64) -> Result<(i64, i64)> {
    validate_discriminant(d)?;
    let mut cond: i64 = 1;
    for (p, e) in factor(d) {
        cond *= p.pow(e / 2);
    }
    let mut delta = d / (cond * cond);
    while !matches!(delta.rem_euclid(4), 0 | 1) {
        // moved one 2 too many into the conductor
        cond /= 2;
        delta = d / (cond * cond);
    }
    debug_assert_eq!(cond * cond * delta, d);
    Ok((delta, cond))
}

/// The conductor c of D = c^2 * Delta.
pub fn conductor(d: i64) -> Result<i64> {
    discriminant_decompose(d).map(|(_, c)| c)
}

/// Primitive positive-definite binary quadratic form [A, B, C].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let d = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        if d >= 0 {
            return Err(Error::InvalidArgument(format!(
                "form [{a}, {b}, {c}] has non-negative discriminant"
            )));
        }
        if a <= 0 {
            return Err(Error::InvalidArgument(format!(
                "form [{a}, {b}, {c}] is not positive definite"
            )));
        }
        if gcd3(a, b, c) != 1 {
            return Err(Error::InvalidArgument(format!(
                "form [{a}, {b}, {c}] is imprimitive"
            )));
        }
        Ok(QuadForm { a, b, c })
    }

    /// Principal form of discriminant d: [1, 0, -d/4] or [1, 1, (1-d)/4].
    pub fn principal(d: i64) -> Result<Self> {
        validate_discriminant(d)?;
        if d.rem_euclid(4) == 0 {
            QuadForm::new(1, 0, -d / 4)
        } else {
            QuadForm::new(1, 1, (1 - d) / 4)
        }
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

    pub fn discriminant(&self) -> i64 {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        d.try_into().expect("discriminant overflow")
    }

    /// Represented value A t^2 + B t s + C s^2.
    pub fn eval(&self, t: i64, s: i64) -> i64 {
        let v = self.a as i128 * (t as i128 * t as i128)
            + self.b as i128 * (t as i128 * s as i128)
            + self.c as i128 * (s as i128 * s as i128);
        v.try_into().expect("represented value overflow")
    }

    pub fn is_reduced(&self) -> bool {
        let ab = self.b.abs();
        ab <= self.a && self.a <= self.c && (self.b >= 0 || (ab < self.a && self.a < self.c))
    }

    /// Gauss reduction: |B| <= A <= C with B >= 0 if |B| = A or A = C.
    pub fn reduce(&self) -> QuadForm {
        let d = self.discriminant() as i128;
        let mut f = *self;
        loop {
            // normalize B into (-A, A]
            let two_a = 2 * f.a;
            let mut b = f.b.rem_euclid(two_a);
            if b > f.a {
                b -= two_a;
            }
            let c = ((b as i128 * b as i128 - d) / (4 * f.a as i128))
                .try_into()
                .expect("coefficient overflow");
            f = QuadForm { a: f.a, b, c };
            if f.a > f.c {
                f = QuadForm { a: f.c, b: -f.b, c: f.a };
                continue;
            }
            if f.b < 0 && (f.b == -f.a || f.a == f.c) {
                f = QuadForm { a: f.a, b: -f.b, c: f.c };
            }
            debug_assert!(f.is_reduced());
            debug_assert_eq!(f.discriminant() as i128, d);
            return f;
        }
    }

    /// An equivalent form with leading coefficient coprime to m, found by a
    /// bounded search over primitively represented values f(t, s). The
    /// search radius starts at 10 and doubles; a primitive form represents
    /// values coprime to any modulus, so the search terminates.
    pub fn represent_coprime(&self, m: i64) -> QuadForm {
        let m = m.abs().max(1);
        let mut bound = 10i64;
        loop {
            if let Some((t, s)) = self.search_rings(bound, m) {
                return self.transform(t, s);
            }
            bound *= 2;
        }
    }

    /// Probe the square ring max(|t|,|s|) = r for r = 1..bound, axis points
    /// first ((1,0) before (0,1) before diagonals), so that a form whose own
    /// A is already coprime to m is returned unchanged.
    fn search_rings(&self, bound: i64, m: i64) -> Option<(i64, i64)> {
        let probe = |t: i64, s: i64| gcd(t, s) == 1 && gcd(self.eval(t, s), m) == 1;
        let mut ring: Vec<(i64, i64)> = Vec::new();
        for r in 1..=bound {
            ring.clear();
            for t in -r..=r {
                for s in -r..=r {
                    if t.abs().max(s.abs()) == r {
                        ring.push((t, s));
                    }
                }
            }
            ring.sort_by_key(|&(t, s)| (s.abs(), t.abs(), t < 0, s < 0));
            for &(t, s) in &ring {
                if probe(t, s) {
                    return Some((t, s));
                }
            }
        }
        None
    }

    /// Unimodular substitution sending (1,0) to the primitive vector (t,s);
    /// yields a properly equivalent form with leading coefficient f(t,s).
    fn transform(&self, t: i64, s: i64) -> QuadForm {
        let (g, x, y) = ext_gcd(t, s);
        debug_assert_eq!(g, 1);
        // second column (u, v) = (-y, x) makes det(t u; s v) = 1
        let (u, v) = (-y as i128, x as i128);
        let (t, s) = (t as i128, s as i128);
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let a2 = a * t * t + b * t * s + c * s * s;
        let b2 = 2 * a * t * u + b * (t * v + s * u) + 2 * c * s * v;
        let c2 = a * u * u + b * u * v + c * v * v;
        QuadForm {
            a: a2.try_into().expect("overflow"),
            b: b2.try_into().expect("overflow"),
            c: c2.try_into().expect("overflow"),
        }
    }

    /// Class-group product (Dirichlet composition); returns the reduced form.
    pub fn compose(&self, other: &QuadForm) -> Result<QuadForm> {
        if self.discriminant() != other.discriminant() {
            return Err(Error::InvalidArgument(format!(
                "composing forms of discriminants {} and {}",
                self.discriminant(),
                other.discriminant()
            )));
        }
        let d = self.discriminant() as i128;
        let g = other.represent_coprime(self.a);
        debug_assert_eq!(gcd(self.a, g.a), 1);
        // common middle coefficient: B ≡ b1 (mod 2 a1) and B ≡ b2 (mod 2 a2)
        let bb = crt(self.b, 2 * self.a, g.b, 2 * g.a).expect("parities agree");
        let aa = self.a as i128 * g.a as i128;
        let cc = (bb as i128 * bb as i128 - d) / (4 * aa);
        let f = QuadForm {
            a: aa.try_into().expect("overflow"),
            b: bb,
            c: cc.try_into().expect("overflow"),
        };
        debug_assert_eq!(f.discriminant() as i128, d);
        Ok(f.reduce())
    }

    /// Opposite class: reduce([A, -B, C]).
    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Class-group power by square-and-multiply.
    pub fn pow(&self, n: u32) -> Result<QuadForm> {
        let mut acc = QuadForm::principal(self.discriminant())?;
        let mut base = self.reduce();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            base = base.compose(&base)?;
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn is_principal(&self) -> bool {
        self.reduce().a == 1
    }

    /// Order of the class in the class group.
    pub fn order(&self) -> Result<u32> {
        let me = self.reduce();
        let mut acc = me;
        let mut n = 1;
        while !acc.is_principal() {
            acc = acc.compose(&me)?;
            n += 1;
            debug_assert!(n < 1_000_000);
        }
        Ok(n)
    }

    /// Basis quotient tau = (-B + i sqrt(|D|)) / (2A).
    pub fn basis_quotient(&self, prec: u32) -> Complex {
        let sq = Float::with_val(prec, self.discriminant().unsigned_abs()).sqrt();
        let re = Float::with_val(prec, -self.b) / (2 * self.a);
        let im = sq / (2 * self.a);
        Complex::new(prec, re, im)
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Enumerate all reduced forms of discriminant d by the A-loop
/// 1 <= A <= sqrt(|d|/3), in canonical order (ascending A, then B).
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    validate_discriminant(d)?;
    let mut out = Vec::new();
    let mut bound = 1i64;
    while (bound + 1) * (bound + 1) * 3 <= -d {
        bound += 1;
    }
    for a in 1..=bound {
        for b in -a..=a {
            let num = b as i128 * b as i128 - d as i128;
            if num % (4 * a as i128) != 0 {
                continue;
            }
            let c = (num / (4 * a as i128)) as i64;
            if c < a {
                continue;
            }
            if b < 0 && (b == -a || a == c) {
                continue; // the positive-B twin is the canonical one
            }
            if gcd3(a, b, c) != 1 {
                continue;
            }
            out.push(QuadForm { a, b, c });
        }
    }
    Ok(out)
}

/// The form class group: reduced representatives in canonical order, the
/// class number, and the elementary divisors d_1 | d_2 | ... of the group.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    pub d: i64,
    pub forms: Vec<QuadForm>,
    pub h: usize,
    pub structure: Vec<u32>,
}

impl ClassGroup {
    /// Index of a form's class in the canonical enumeration.
    pub fn index_of(&self, f: &QuadForm) -> usize {
        let r = f.reduce();
        self.forms
            .binary_search_by(|g| (g.a, g.b).cmp(&(r.a, r.b)))
            .expect("reduced form of the same discriminant")
    }

    pub fn principal_index(&self) -> usize {
        0
    }
}

pub fn class_group(d: i64) -> Result<ClassGroup> {
    let forms = reduced_forms(d)?;
    let h = forms.len();
    let structure = group_structure(d, &forms)?;
    debug_assert_eq!(structure.iter().map(|&x| x as usize).product::<usize>(), h);
    debug_assert!(structure.windows(2).all(|w| w[1] % w[0] == 0));
    Ok(ClassGroup { d, forms, h, structure })
}

/// Elementary divisors by greedy extraction: an element of maximal order
/// generates a direct summand, so repeatedly quotienting by one yields the
/// invariant-factor chain. The partition of forms into cosets is refined in
/// place; group sizes here are small enough for the quadratic scan.
fn group_structure(d: i64, forms: &[QuadForm]) -> Result<Vec<u32>> {
    let index_of = |f: &QuadForm| -> usize {
        let r = f.reduce();
        forms
            .binary_search_by(|g| (g.a, g.b).cmp(&(r.a, r.b)))
            .expect("closed under composition")
    };
    let principal = index_of(&QuadForm::principal(d)?);
    // cell_of: form index -> current quotient element; reps: one form per cell
    let mut cell_of: Vec<usize> = (0..forms.len()).collect();
    let mut reps: Vec<usize> = (0..forms.len()).collect();
    let mut divisors: Vec<u32> = Vec::new();
    while reps.len() > 1 {
        let order_in_quotient = |rep: usize| -> Result<u32> {
            let mut cur = forms[rep];
            let mut n = 1u32;
            while cell_of[index_of(&cur)] != cell_of[principal] {
                cur = cur.compose(&forms[rep])?;
                n += 1;
            }
            Ok(n)
        };
        let mut best = (1u32, reps[0]);
        for &rep in &reps {
            let o = order_in_quotient(rep)?;
            if o > best.0 {
                best = (o, rep);
            }
        }
        let (max_order, g_rep) = best;
        divisors.push(max_order);
        if max_order as usize == reps.len() {
            break; // cyclic quotient, done
        }
        // refine: merge cells along multiplication by the extracted generator
        let g = forms[g_rep];
        let mut new_of_old = vec![usize::MAX; forms.len()];
        let mut new_reps: Vec<usize> = Vec::new();
        for &rep in &reps {
            let old_cell = cell_of[rep];
            if new_of_old[old_cell] != usize::MAX {
                continue;
            }
            let id = new_reps.len();
            new_reps.push(rep);
            let mut cur = forms[rep];
            loop {
                new_of_old[cell_of[index_of(&cur)]] = id;
                cur = cur.compose(&g)?;
                if cell_of[index_of(&cur)] == old_cell {
                    break;
                }
            }
        }
        for c in cell_of.iter_mut() {
            *c = new_of_old[*c];
        }
        reps = new_reps;
    }
    divisors.reverse();
    Ok(divisors)
}

/// Form of norm p above a non-inert prime p coprime to the conductor:
/// [p, b, (b^2 - D)/(4p)] with the smallest b in [0, p] solving
/// b^2 ≡ D (mod 4p). Returns None when p is inert.
pub fn prime_form(d: i64, p: i64) -> Result<Option<QuadForm>> {
    validate_discriminant(d)?;
    if !is_prime(p) {
        return Err(Error::InvalidPrimes(format!("{p} is not prime")));
    }
    if conductor(d)? % p == 0 {
        return Err(Error::UnsupportedConductor { p, d });
    }
    if disc_symbol(d, p) == -1 {
        return Ok(None);
    }
    for b in 0..=p {
        let num = b as i128 * b as i128 - d as i128;
        if num % (4 * p as i128) != 0 {
            continue;
        }
        let c = (num / (4 * p as i128)) as i64;
        if gcd3(p, b, c) == 1 {
            return Ok(Some(QuadForm { a: p, b, c }));
        }
    }
    unreachable!("non-inert prime away from the conductor always lifts");
}

/// System of h quadratic forms representing every class, with
/// gcd(A_i, n) = 1, B_i ≡ B_1 (mod 2n), and C_1 = N for the designated
/// first form.
#[derive(Debug, Clone)]
pub struct NSystem {
    pub n: i64,
    pub level: i64,
    pub d: i64,
    pub forms: Vec<QuadForm>,
}

impl NSystem {
    pub fn h(&self) -> usize {
        self.forms.len()
    }

    pub fn first(&self) -> &QuadForm {
        &self.forms[0]
    }

    /// Check every defining invariant.
    pub fn verify(&self, group: &ClassGroup) -> Result<()> {
        let b1 = self.forms[0].b;
        if self.forms[0].c % self.level != 0 {
            return Err(Error::InvalidArgument("C_1 is not divisible by N".into()));
        }
        let mut seen = vec![false; group.h];
        for f in &self.forms {
            if gcd(f.a, self.n) != 1 {
                return Err(Error::InvalidArgument(format!("gcd(A, n) > 1 for {f}")));
            }
            if (f.b - b1).rem_euclid(2 * self.n) != 0 {
                return Err(Error::InvalidArgument(format!("B mismatch mod 2n for {f}")));
            }
            if f.discriminant() != self.d {
                return Err(Error::InvalidArgument("discriminant mismatch".into()));
            }
            let i = group.index_of(f);
            if seen[i] {
                return Err(Error::InvalidArgument(format!("class of {f} repeated")));
            }
            seen[i] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidArgument("classes not all covered".into()));
        }
        Ok(())
    }
}

/// Build an n-system whose first element has C_1 = N whenever that is
/// attainable.
///
/// The first form is [A_1, -B_N, N] where B_N is the smallest square root
/// of D mod 4N (non-negative before negative) making A_1 = (B_N^2 - D)/(4N)
/// coprime to n. For D ≡ 1 (mod 8) with odd N and even n no such form
/// exists — B_N is odd, so 8 | B_N^2 - D forces A_1 even; the anchor then
/// falls back to the principal-class form [1, -B_N, (B_N^2 - D)/4], which
/// still has N | C_1. Every other class is represented by transforming its
/// reduced representative to leading coefficient coprime to n, then moving
/// the middle coefficient into the CRT-canonical residue matching B_1.
pub fn n_system(d: i64, n: i64, level: i64) -> Result<NSystem> {
    validate_discriminant(d)?;
    if n <= 0 || level <= 0 || n % level != 0 {
        return Err(Error::InvalidArgument(format!(
            "n-system needs N | n, got n = {n}, N = {level}"
        )));
    }
    let cond = conductor(d)?;
    if gcd(n, cond) != 1 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} shares a factor with the conductor {cond}"
        )));
    }
    for (p, _) in factor(level) {
        if disc_symbol(d, p) == -1 {
            return Err(Error::InertPrime { p, d });
        }
    }

    let first = first_form(d, n, level)?;
    let b1 = first.b;
    let reps = reduced_forms(d)?;
    let first_reduced = first.reduce();

    let mut forms = vec![first];
    for rep in &reps {
        if *rep == first_reduced {
            continue;
        }
        forms.push(align_to_system(rep, b1, n, d));
    }
    Ok(NSystem { n, level, d, forms })
}

/// Smallest-|B_N| first form [A_1, -B_N, N], with the parity fallback
/// described on [`n_system`].
fn first_form(d: i64, n: i64, level: i64) -> Result<QuadForm> {
    let four_n = 4 * level as i128;
    let bound = 4 * n * level + 4 * level + 64;
    // with this parity pattern A_1 = (B_N^2 - D)/(4N) is even for every B_N
    let obstructed = n % 2 == 0 && level % 2 == 1 && d.rem_euclid(8) == 1;
    let candidates = (0..=bound).flat_map(|t| if t == 0 { vec![0] } else { vec![t, -t] });
    for bn in candidates {
        let num = bn as i128 * bn as i128 - d as i128;
        if num % four_n != 0 {
            continue;
        }
        if !obstructed {
            if let Ok(a1) = i64::try_from(num / four_n) {
                if gcd(a1, n) == 1 {
                    if let Ok(f) = QuadForm::new(a1, -bn, level) {
                        return Ok(f);
                    }
                }
            }
        } else if let Ok(c1) = i64::try_from(num / 4) {
            return QuadForm::new(1, -bn, c1);
        }
    }
    Err(Error::NoNormForm { n: level, d })
}

/// Class of the norm-N ideal attached to an n-system's anchor root: the
/// reduction of [(B_1^2 - D)/(4N), B_1, N]. Drives the complex-conjugation
/// pairing of roots.
pub fn norm_level_class(sys: &NSystem) -> QuadForm {
    let b1 = sys.forms[0].b;
    let m = ((b1 as i128 * b1 as i128 - sys.d as i128) / (4 * sys.level as i128)) as i64;
    debug_assert_eq!(gcd3(m, b1, sys.level), 1);
    QuadForm { a: m, b: b1, c: sys.level }.reduce()
}

/// Move a class representative into the n-system; see [`n_system`].
fn align_to_system(rep: &QuadForm, b1: i64, n: i64, d: i64) -> QuadForm {
    let g = rep.represent_coprime(n);
    let bb = crt(g.b, 2 * g.a, b1, 2 * n).expect("parities agree");
    let cc = (bb as i128 * bb as i128 - d as i128) / (4 * g.a as i128);
    let f = QuadForm {
        a: g.a,
        b: bb,
        c: cc.try_into().expect("coefficient overflow"),
    };
    debug_assert_eq!(f.discriminant(), d);
    debug_assert_eq!(f.reduce(), rep.reduce());
    f
}

/// Number of 2-torsion classes (including the principal one).
pub fn two_torsion_count(group: &ClassGroup) -> usize {
    group
        .structure
        .iter()
        .map(|&d| if d % 2 == 0 { 2 } else { 1 })
        .product()
}
