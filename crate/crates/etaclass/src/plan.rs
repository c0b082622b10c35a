//! Evaluation plans: how the Galois symmetries of ramified level primes cut
//! down the singular values that actually need computing.
//!
//! For a ramified level prime p with ideal class P (2-torsion), moving a
//! class by P sends its singular value to xi / value, with xi = +1 for
//! k >= 3 and xi = (p2 | p1')^e for k = 2 when moving by the class of p1
//! (numerically verified orientation of the Jacobi symbol). When k' >= 2 level primes
//! ramify, the products P1*Pj fix the values outright, so the n-system
//! splits into cosets of the subgroup U = <P1 Pj> ("orbits") sharing a
//! single root, the class polynomial is the |U|-th power of the polynomial
//! on orbit representatives, and only one value per orbit — further paired
//! by complex conjugation and by the xi-inversion — is evaluated.
//!
//! Complex-conjugate pairing: roots at classes a_i and a_j are conjugate
//! when a_i * a_j is equivalent to the anchor class n * c^{-1}, where n is
//! the norm-N ideal class of the n-system and c = O (even k), c = P1
//! (odd k with a ramified level prime), or the polynomial is not real.
//!
//! The same plan shape covers generic functions on X_0^+(N) (invariant
//! under Gamma^0(N) and the Fricke involution) when every prime dividing N
//! ramifies: the norm-N class n has order 2, a_i and a_i*n share a root,
//! and inverse classes give conjugate roots.

use crate::arith::{disc_symbol, factor, gcd, kronecker, odd_part};
use crate::etaquot::{check_invariance, EtaQuotientSpec};
use crate::qforms::{
    conductor, n_system, norm_level_class, prime_form, reduced_forms, validate_discriminant,
    NSystem, QuadForm,
};
use crate::{Error, Result};

/// What the plan evaluates.
#[derive(Debug, Clone)]
pub enum PlanFunction {
    /// A multiple eta-quotient power.
    EtaQuotient(EtaQuotientSpec),
    /// Any Gamma^0(N)-modular, Fricke-invariant function with rational
    /// q-expansions; the plan is function-agnostic.
    FrickeInvariant { level: i64 },
}

/// Constant-coefficient prediction for the polynomial being assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantPrediction {
    PlusOne,
    MinusOne,
    Unknown,
}

/// Value relation of an orbit to its evaluation group's representative.
#[derive(Debug, Clone, Copy)]
pub struct OrbitRole {
    pub orbit: usize,
    /// complex-conjugate the representative value
    pub conj: bool,
    /// replace value v by xi / v
    pub inv: bool,
}

/// One function evaluation and the orbits whose roots derive from it.
#[derive(Debug, Clone)]
pub struct EvalGroup {
    /// n-system index to evaluate at
    pub rep_index: usize,
    pub members: Vec<OrbitRole>,
}

#[derive(Debug, Clone)]
pub struct EvaluationPlan {
    pub d: i64,
    pub function: PlanFunction,
    pub nsystem: NSystem,
    /// reduced class representatives in canonical order
    pub classes: Vec<QuadForm>,
    /// n-system index -> class index
    pub class_of: Vec<usize>,
    /// level primes, ramified ones first
    pub ordered_primes: Vec<i64>,
    /// k': number of ramified level primes
    pub k_ramified: usize,
    /// classes of P1*Pj for j = 2..=k' (the orbit-collapse generators)
    pub generators: Vec<QuadForm>,
    /// the reduced class polynomial is the root_power-th root of the full one
    pub root_power: usize,
    /// sign in the inversion action value -> xi / value
    pub xi: i32,
    /// sign of the sigma(P1 P2) action for k = 2 (+1 means orbit collapse)
    pub sign_p1p2: i32,
    /// partition of n-system indices into same-value cosets
    pub orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    /// index -> index involution pairing complex-conjugate roots
    pub conj_pairing: Option<Vec<usize>>,
    /// index -> index map onto the xi-inverted root (via P1)
    pub inv_pairing: Option<Vec<usize>>,
    /// |D| in {P, 4P} for even k': the full ramified product is principal
    pub degenerate: bool,
    pub predicted_constant: ConstantPrediction,
    pub real_poly: bool,
}

/// Ramified level primes (those dividing the fundamental discriminant),
/// and the level primes reordered so they come first.
pub fn ramified_subset(d: i64, spec: &EtaQuotientSpec) -> Result<(usize, Vec<i64>)> {
    validate_discriminant(d)?;
    let (delta, _) = crate::qforms::discriminant_decompose(d)?;
    let mut ramified: Vec<i64> = Vec::new();
    let mut rest: Vec<i64> = Vec::new();
    for &p in spec.primes() {
        if delta % p == 0 {
            ramified.push(p);
        } else {
            rest.push(p);
        }
    }
    let k = ramified.len();
    ramified.extend(rest);
    Ok((k, ramified))
}

struct ClassIndex {
    classes: Vec<QuadForm>,
}

impl ClassIndex {
    fn index_of(&self, f: &QuadForm) -> usize {
        let r = f.reduce();
        self.classes
            .binary_search_by(|g| (g.a(), g.b()).cmp(&(r.a(), r.b())))
            .expect("reduced form of this discriminant")
    }

    fn compose_idx(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.index_of(&self.classes[i].compose(&self.classes[j])?))
    }
}

impl EvaluationPlan {
    pub fn h(&self) -> usize {
        self.nsystem.h()
    }

    /// Degree of the (root-power-reduced) polynomial.
    pub fn degree(&self) -> usize {
        self.orbits.len()
    }

    /// Orbit-level conjugation map, when the polynomial is real.
    pub fn conj_orbit_map(&self) -> Option<Vec<usize>> {
        self.conj_pairing
            .as_ref()
            .map(|cp| self.lift_to_orbits(cp))
    }

    /// Orbit-level inversion map, when a level prime ramifies.
    pub fn inv_orbit_map(&self) -> Option<Vec<usize>> {
        self.inv_pairing.as_ref().map(|ip| self.lift_to_orbits(ip))
    }

    fn lift_to_orbits(&self, index_map: &[usize]) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.orbits.len()];
        for (i, &j) in index_map.iter().enumerate() {
            let (oi, oj) = (self.orbit_of[i], self.orbit_of[j]);
            debug_assert!(out[oi] == usize::MAX || out[oi] == oj, "map must respect orbits");
            out[oi] = oj;
        }
        out
    }

    /// Group the orbits under the conjugation/inversion pairings; one
    /// function evaluation per group covers every orbit root in it.
    pub fn evaluation_groups(&self) -> Vec<EvalGroup> {
        let conj_o = self.conj_orbit_map();
        let inv_o = self.inv_orbit_map();
        let mut seen = vec![false; self.orbits.len()];
        let mut groups = Vec::new();
        for start in 0..self.orbits.len() {
            if seen[start] {
                continue;
            }
            let mut members = vec![OrbitRole { orbit: start, conj: false, inv: false }];
            seen[start] = true;
            let mut frontier = 0;
            while frontier < members.len() {
                let cur = members[frontier];
                frontier += 1;
                let mut push = |orbit: usize, conj: bool, inv: bool, seen: &mut Vec<bool>| {
                    if !seen[orbit] {
                        seen[orbit] = true;
                        members.push(OrbitRole { orbit, conj, inv });
                    }
                };
                if let Some(cm) = &conj_o {
                    push(cm[cur.orbit], !cur.conj, cur.inv, &mut seen);
                }
                if let Some(im) = &inv_o {
                    push(im[cur.orbit], cur.conj, !cur.inv, &mut seen);
                }
            }
            let rep_index = *self.orbits[start].iter().min().expect("orbit not empty");
            groups.push(EvalGroup { rep_index, members });
        }
        groups
    }
}

/// Plan construction for a multiple eta-quotient.
pub fn build_plan(d: i64, spec: &EtaQuotientSpec) -> Result<EvaluationPlan> {
    check_invariance(spec, d).map_err(Error::InvarianceConditionsUnmet)?;
    let cond = conductor(d)?;
    for &p in spec.primes() {
        if disc_symbol(d, p) == -1 {
            return Err(Error::InertPrime { p, d });
        }
        if cond % p == 0 {
            return Err(Error::UnsupportedConductor { p, d });
        }
    }
    let (k_ramified, ordered_primes) = ramified_subset(d, spec)?;
    let nsystem = n_system(d, spec.n(), spec.level())?;
    let classes = reduced_forms(d)?;
    let index = ClassIndex { classes };
    let class_of: Vec<usize> = nsystem.forms.iter().map(|f| index.index_of(f)).collect();
    let h = nsystem.h();
    let k = spec.k();
    let e = spec.e();

    // member lookup: class index -> n-system index
    let mut member_of = vec![usize::MAX; index.classes.len()];
    for (i, &c) in class_of.iter().enumerate() {
        member_of[c] = i;
    }

    let ramified_forms: Vec<QuadForm> = ordered_primes[..k_ramified]
        .iter()
        .map(|&p| Ok(prime_form(d, p)?.expect("ramified prime lifts")))
        .collect::<Result<_>>()?;

    // sign of the sigma(P1 P2) action for double quotients
    let sign_p1p2: i32 = if k == 2 {
        let (p1, p2) = (spec.primes()[0], spec.primes()[1]);
        let exponent = if p1 == 2 {
            e * (p2 * p2 - 1) / 8
        } else {
            e * (p1 - 1) * (p2 - 1) / 4
        };
        if exponent % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        1
    };

    // degenerate: the product of all ramified level primes is principal
    let ramified_product: i64 = ordered_primes[..k_ramified].iter().product();
    let degenerate =
        k_ramified >= 2 && k_ramified % 2 == 0 && (-d == ramified_product || -d == 4 * ramified_product);

    // orbit-collapse subgroup U = <P1 Pj : 2 <= j <= k'>
    let collapse = k_ramified >= 2 && (k >= 3 || sign_p1p2 == 1);
    let mut generators: Vec<QuadForm> = Vec::new();
    let principal_idx = index.index_of(&QuadForm::principal(d)?);
    let mut subgroup: Vec<usize> = vec![principal_idx];
    if collapse {
        for j in 1..k_ramified {
            generators.push(ramified_forms[0].compose(&ramified_forms[j])?);
        }
        let mut frontier = 0;
        while frontier < subgroup.len() {
            let cur = subgroup[frontier];
            frontier += 1;
            for g in &generators {
                let next = index.index_of(&index.classes[cur].compose(g)?);
                if !subgroup.contains(&next) {
                    subgroup.push(next);
                }
            }
        }
        debug_assert_eq!(
            subgroup.len(),
            (1usize << (k_ramified - 1)) >> usize::from(degenerate)
        );
    }
    let root_power = subgroup.len();

    // orbits: U-cosets, in order of smallest member index
    let mut orbit_of = vec![usize::MAX; h];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..h {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::with_capacity(root_power);
        for &u in &subgroup {
            let m = member_of[index.compose_idx(class_of[i], u)?];
            debug_assert!(orbit_of[m] == usize::MAX || orbit_of[m] == id);
            if orbit_of[m] == usize::MAX {
                orbit_of[m] = id;
                members.push(m);
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }

    // xi: sign twisting the P1-inversion. Translating by the class of the
    // ramified p1 scales by (p2 | p1')^e: the numerator is the other prime.
    let xi = if k_ramified == 0 {
        1
    } else if k == 2 {
        let p1 = ordered_primes[0];
        let p2 = ordered_primes[1];
        let sym = kronecker(p2, odd_part(p1))?;
        if sym == 1 || e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        1
    };

    // complex-conjugation pairing target t: roots at a_i, a_j conjugate
    // when a_i a_j ~ t
    let anchor = norm_level_class(&nsystem);
    let conj_target: Option<usize> = if k % 2 == 0 {
        Some(index.index_of(&anchor))
    } else if k_ramified >= 1 {
        Some(index.index_of(&anchor.compose(&ramified_forms[0])?))
    } else if nsystem.first().b() % nsystem.n == 0 {
        // n | B_1: inverse classes carry conjugate roots
        Some(principal_idx)
    } else {
        None
    };
    let conj_pairing = match conj_target {
        None => None,
        Some(t) => {
            let mut map = vec![usize::MAX; h];
            for i in 0..h {
                let partner =
                    index.index_of(&index.classes[t].compose(&index.classes[class_of[i]].inverse())?);
                map[i] = member_of[partner];
            }
            debug_assert!((0..h).all(|i| map[map[i]] == i));
            Some(map)
        }
    };

    let inv_pairing = if k_ramified >= 1 {
        let mut map = vec![usize::MAX; h];
        for i in 0..h {
            let partner = index.compose_idx(class_of[i], index.index_of(&ramified_forms[0]))?;
            map[i] = member_of[partner];
        }
        debug_assert!((0..h).all(|i| map[map[i]] == i));
        Some(map)
    } else {
        None
    };

    // constant coefficient of the polynomial being assembled
    let predicted_constant = predict_constant(spec, k_ramified, &ordered_primes, h, root_power, degenerate)?;

    let real_poly = conj_pairing.is_some();

    Ok(EvaluationPlan {
        d,
        function: PlanFunction::EtaQuotient(spec.clone()),
        nsystem,
        classes: index.classes,
        class_of,
        ordered_primes,
        k_ramified,
        generators,
        root_power,
        xi,
        sign_p1p2,
        orbits,
        orbit_of,
        conj_pairing,
        inv_pairing,
        degenerate,
        predicted_constant,
        real_poly,
    })
}

fn predict_constant(
    spec: &EtaQuotientSpec,
    k_ramified: usize,
    ordered_primes: &[i64],
    h: usize,
    root_power: usize,
    degenerate: bool,
) -> Result<ConstantPrediction> {
    if k_ramified == 0 {
        return Ok(ConstantPrediction::Unknown);
    }
    let k = spec.k();
    let e = spec.e();
    let sign_power = |sym: i32, num: i64, den: i64| -> ConstantPrediction {
        if num % den != 0 {
            return ConstantPrediction::Unknown;
        }
        if sym == 1 || (num / den) % 2 == 0 {
            ConstantPrediction::PlusOne
        } else {
            ConstantPrediction::MinusOne
        }
    };
    // the k = 2 constants are powers of the same xi that pairs each root
    // with its inverse
    if root_power > 1 {
        if degenerate {
            return Ok(ConstantPrediction::Unknown);
        }
        if k == 2 {
            let sym = kronecker(ordered_primes[1], odd_part(ordered_primes[0]))?;
            return Ok(sign_power(sym, e * h as i64, 4));
        }
        return Ok(ConstantPrediction::PlusOne);
    }
    if k == 2 {
        let sym = kronecker(ordered_primes[1], odd_part(ordered_primes[0]))?;
        return Ok(sign_power(sym, e * h as i64, 2));
    }
    Ok(ConstantPrediction::PlusOne)
}

/// Plan for a generic Fricke-invariant function of square-free level N with
/// N | D: the norm-N class has order 2; a_i and a_i*n share a root, and
/// inverse classes carry the conjugate roots. The square root of the class
/// polynomial is real of degree h/2.
pub fn atkin_lehner_plan(d: i64, level: i64) -> Result<EvaluationPlan> {
    validate_discriminant(d)?;
    if level < 2 || factor(level).iter().any(|&(_, e)| e > 1) {
        return Err(Error::InvalidArgument(format!(
            "level {level} must be square-free and at least 2"
        )));
    }
    if d % level != 0 {
        return Err(Error::NotTotallyRamified { n: level, d });
    }
    let cond = conductor(d)?;
    if gcd(level, cond) != 1 {
        let p = factor(gcd(level, cond))[0].0;
        return Err(Error::UnsupportedConductor { p, d });
    }
    if -d == level || -d == 4 * level {
        return Err(Error::DegenerateDiscriminant { d_abs: -d, n: level });
    }

    let nsystem = n_system(d, level, level)?;
    debug_assert_eq!(nsystem.first().c(), level);
    debug_assert_eq!(nsystem.first().b().rem_euclid(level), 0);
    let classes = reduced_forms(d)?;
    let index = ClassIndex { classes };
    let class_of: Vec<usize> = nsystem.forms.iter().map(|f| index.index_of(f)).collect();
    let h = nsystem.h();
    let mut member_of = vec![usize::MAX; index.classes.len()];
    for (i, &c) in class_of.iter().enumerate() {
        member_of[c] = i;
    }

    let anchor = norm_level_class(&nsystem);
    let anchor_idx = index.index_of(&anchor);
    let principal_idx = index.index_of(&QuadForm::principal(d)?);
    if anchor_idx == principal_idx || anchor.compose(&anchor)?.a() != 1 {
        return Err(Error::InvalidArgument(format!(
            "norm-{level} class is not of order 2 for discriminant {d}"
        )));
    }

    let subgroup = vec![principal_idx, anchor_idx];
    let mut orbit_of = vec![usize::MAX; h];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..h {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::new();
        for &u in &subgroup {
            let m = member_of[index.compose_idx(class_of[i], u)?];
            if orbit_of[m] == usize::MAX {
                orbit_of[m] = id;
                members.push(m);
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }

    // conjugate root at the inverse class (and its n-translate, same orbit)
    let mut conj = vec![usize::MAX; h];
    for i in 0..h {
        conj[i] = member_of[index.index_of(&index.classes[class_of[i]].inverse())];
    }

    let k_ramified = factor(level).len();
    Ok(EvaluationPlan {
        d,
        function: PlanFunction::FrickeInvariant { level },
        generators: vec![anchor],
        nsystem,
        classes: index.classes,
        class_of,
        ordered_primes: factor(level).iter().map(|&(p, _)| p).collect(),
        k_ramified,
        root_power: 2,
        xi: 1,
        sign_p1p2: 1,
        orbits,
        orbit_of,
        conj_pairing: Some(conj),
        inv_pairing: None,
        degenerate: false,
        predicted_constant: ConstantPrediction::Unknown,
        real_poly: true,
    })
}
