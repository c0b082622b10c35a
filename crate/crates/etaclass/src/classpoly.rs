//! Evaluate singular values per plan, assemble the class polynomial from
//! linear factors and round the coefficients into Z or Z + wZ.
//!
//! The polynomial on orbit representatives has one root per orbit. Each
//! evaluation group supplies a representative value v; roots of the other
//! orbits in the group are derived exactly as conj(v), xi/v and conj(xi/v),
//! so the eta-product is evaluated only once per group. A balanced product
//! tree multiplies the linear factors at working precision; coefficients
//! are accepted when they sit within 1e-4 absolutely and 2^-20 relatively
//! of a lattice point, and the whole computation retries at doubled
//! precision when rounding fails (geometric cost, at most four retries).
//!
//! [`oracle_full_product`] is the independent route: it evaluates all h
//! singular values directly (no orbit collapse, no derived roots) and
//! assembles the full class polynomial, which must equal the reduced
//! polynomial raised to the root power.

use crate::etaquot::{eval_w, EtaQuotientSpec};
use crate::mpc::Complex;
use crate::plan::{build_plan, ConstantPrediction, EvaluationPlan, PlanFunction};
use crate::poly::{
    int_poly_is_squarefree, int_poly_pow, quad_poly_is_squarefree, OmegaBasis, PolyCoeffs,
};
use crate::{Error, Result};
use rayon::prelude::*;
use rug::{Float, Integer};

/// Hard ceiling on working precision (bits).
pub const PREC_CEILING: u32 = 1 << 20;
const PREC_FLOOR: u32 = 128;
const MAX_RETRIES: u32 = 4;

/// A class polynomial (or its 2-power root) with exact coefficients.
#[derive(Debug, Clone)]
pub struct ClassPolynomial {
    pub d: i64,
    pub spec: EtaQuotientSpec,
    /// the full class polynomial is this polynomial to the root_power
    pub root_power: usize,
    pub coeffs: PolyCoeffs,
    /// largest rounding distance seen when snapping coefficients
    pub residual: f64,
    pub squarefree: bool,
    /// precision at which the accepted rounding happened
    pub prec: u32,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.degree()
    }

    pub fn constant_coefficient(&self) -> Option<&Integer> {
        match &self.coeffs {
            PolyCoeffs::Int(c) => c.first(),
            PolyCoeffs::Quad { coeffs, .. } => {
                coeffs.first().map(|(u, v)| if v.cmp0() == std::cmp::Ordering::Equal { u } else { u })
            }
        }
    }
}

impl std::fmt::Display for ClassPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.coeffs.format())
    }
}

/// Role of one evaluated representative.
#[derive(Debug, Clone, Copy)]
pub struct RootRole {
    /// the value is its own complex conjugate
    pub real_root: bool,
    /// a conjugate partner root is derived from this value
    pub conj_paired: bool,
    /// an inverse partner root is derived from this value
    pub inv_paired: bool,
}

/// One evaluated singular value.
#[derive(Debug, Clone)]
pub struct SingularValue {
    /// n-system index of the evaluated form
    pub form_index: usize,
    pub value: Complex,
    pub role: RootRole,
}

/// All evaluated representatives plus the derived root of every orbit.
#[derive(Debug, Clone)]
pub struct SingularValueSet {
    pub prec: u32,
    pub entries: Vec<SingularValue>,
    /// root per orbit, in canonical orbit order
    pub orbit_roots: Vec<Complex>,
}

/// Initial working precision: 64 + ceil(1.5 * (pi sqrt|D| / ln 2) *
/// (e prod(p_i - 1) / (24 N)) * sum over assembled roots of 1/A_i),
/// clamped to [128, 2^20]. The middle factor is the negated leading
/// q-exponent of w^e; the sum estimates the total bit size of the roots.
pub fn estimate_precision(plan: &EvaluationPlan) -> u32 {
    let reps: Vec<usize> = plan.orbits.iter().map(|o| o[0]).collect();
    estimate_precision_for(plan, &reps)
}

fn estimate_precision_for(plan: &EvaluationPlan, indices: &[usize]) -> u32 {
    let PlanFunction::EtaQuotient(spec) = &plan.function else {
        return PREC_FLOOR;
    };
    let phi: i64 = spec.primes().iter().map(|&p| p - 1).product();
    let weight = spec.e() as f64 * phi as f64 / (24.0 * spec.level() as f64);
    let inv_a: f64 = indices
        .iter()
        .map(|&i| 1.0 / plan.nsystem.forms[i].a() as f64)
        .sum();
    let height = std::f64::consts::PI * (plan.d.unsigned_abs() as f64).sqrt()
        / std::f64::consts::LN_2;
    let bits = 64.0 + (1.5 * height * weight * inv_a).ceil();
    (bits as u32).clamp(PREC_FLOOR, PREC_CEILING)
}

/// Evaluate one representative per pairing-closure group and derive the
/// roots of every orbit. Evaluations are independent and run in parallel;
/// results land in canonical orbit order, so the outcome does not depend
/// on scheduling.
pub fn evaluate_values(plan: &EvaluationPlan, prec: u32) -> Result<SingularValueSet> {
    let PlanFunction::EtaQuotient(spec) = &plan.function else {
        return Err(Error::InvalidArgument(
            "plan carries no eta-quotient to evaluate".into(),
        ));
    };
    let groups = plan.evaluation_groups();
    let values: Vec<Complex> = groups
        .par_iter()
        .map(|g| {
            let tau = plan.nsystem.forms[g.rep_index].basis_quotient(prec + 64);
            eval_w(spec, &tau, prec)
        })
        .collect::<Result<_>>()?;

    let conj_map = plan.conj_orbit_map();
    let mut orbit_roots: Vec<Option<Complex>> = vec![None; plan.orbits.len()];
    let mut entries = Vec::with_capacity(groups.len());
    for (group, value) in groups.iter().zip(values) {
        if !value.is_finite() || value.is_zero() {
            return Err(Error::PrecisionFailure(format!(
                "singular value at form index {} degenerated",
                group.rep_index
            )));
        }
        let rep_orbit = plan.orbit_of[group.rep_index];
        let real_root = conj_map.as_ref().map(|m| m[rep_orbit] == rep_orbit) == Some(true);
        entries.push(SingularValue {
            form_index: group.rep_index,
            value: value.clone(),
            role: RootRole {
                real_root,
                conj_paired: plan.conj_pairing.is_some(),
                inv_paired: plan.inv_pairing.is_some(),
            },
        });
        for member in &group.members {
            let mut root = value.clone();
            if member.inv {
                root = root.recip().scale_i64(plan.xi as i64);
            }
            if member.conj {
                root = root.conj();
            }
            debug_assert!(orbit_roots[member.orbit].is_none());
            orbit_roots[member.orbit] = Some(root);
        }
    }
    let orbit_roots: Vec<Complex> = orbit_roots
        .into_iter()
        .map(|r| r.expect("every orbit reached by its group"))
        .collect();
    Ok(SingularValueSet { prec, entries, orbit_roots })
}

/// Balanced product of the linear factors (X - r) over the given roots.
/// Coefficients ascending, monic.
fn product_tree(roots: &[Complex], prec: u32) -> Vec<Complex> {
    let mut layer: Vec<Vec<Complex>> = roots
        .iter()
        .map(|r| vec![r.rounded_to(prec).neg(), Complex::one(prec)])
        .collect();
    if layer.is_empty() {
        return vec![Complex::one(prec)];
    }
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        let mut it = layer.chunks(2);
        for pair in &mut it {
            match pair {
                [a, b] => next.push(poly_mul(a, b, prec)),
                [a] => next.push(a.clone()),
                _ => unreachable!(),
            }
        }
        layer = next;
    }
    layer.pop().unwrap()
}

fn poly_mul(a: &[Complex], b: &[Complex], prec: u32) -> Vec<Complex> {
    let mut out = vec![Complex::zero(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Snap a complex coefficient into the target domain; returns the lattice
/// point and the rounding distance.
fn snap(c: &Complex, omega: Option<&OmegaBasis>, prec: u32) -> (Integer, Integer, f64) {
    match omega {
        None => {
            let (u, _) = c.round_parts();
            let du = Float::with_val(prec, c.re() - &u).to_f64().abs();
            let dv = c.im().to_f64().abs();
            (u, Integer::new(), du.max(dv))
        }
        Some(basis) => {
            let w = basis.value(prec);
            let v = Float::with_val(prec, c.im() / w.im())
                .round()
                .to_integer()
                .expect("finite coefficient");
            let target_re = Float::with_val(prec, c.re() - Float::with_val(prec, w.re() * &v));
            let u = target_re.clone().round().to_integer().expect("finite");
            let du = Float::with_val(prec, &target_re - &u).to_f64().abs();
            let dv = Float::with_val(prec, c.im() - Float::with_val(prec, w.im() * &v))
                .to_f64()
                .abs();
            (u, v, du.max(dv))
        }
    }
}

/// Assemble the polynomial from the orbit roots, round the coefficients and
/// verify the structural predictions.
pub fn assemble(
    values: &SingularValueSet,
    plan: &EvaluationPlan,
    prec: u32,
) -> Result<ClassPolynomial> {
    let raw = product_tree(&values.orbit_roots, prec);
    let omega = if plan.real_poly {
        None
    } else {
        Some(OmegaBasis::new(plan.d))
    };

    let mut residual = 0f64;
    let mut us: Vec<Integer> = Vec::with_capacity(raw.len());
    let mut vs: Vec<Integer> = Vec::with_capacity(raw.len());
    for c in &raw {
        let (u, v, dist) = snap(c, omega.as_ref(), prec);
        // absolute and relative acceptance thresholds
        let mag = c.abs().to_f64().abs() + 1.0;
        if dist > 1e-4 || dist > mag * 2f64.powi(-20) {
            return Err(Error::RoundingFailure { residual: dist, prec });
        }
        residual = residual.max(dist);
        us.push(u);
        vs.push(v);
    }

    if *us.last().unwrap() != 1 || vs.last().unwrap().cmp0() != std::cmp::Ordering::Equal {
        return Err(Error::RoundingFailure { residual: 1.0, prec });
    }

    let constant_ok = match plan.predicted_constant {
        ConstantPrediction::Unknown => true,
        ConstantPrediction::PlusOne => us[0] == 1 && vs[0].cmp0() == std::cmp::Ordering::Equal,
        ConstantPrediction::MinusOne => us[0] == -1 && vs[0].cmp0() == std::cmp::Ordering::Equal,
    };
    if !constant_ok {
        return Err(Error::RoundingFailure { residual, prec });
    }

    let (coeffs, squarefree) = match omega {
        None => {
            let sf = int_poly_is_squarefree(&us);
            (PolyCoeffs::Int(us), sf)
        }
        Some(basis) => {
            let coeffs: Vec<(Integer, Integer)> = us.into_iter().zip(vs).collect();
            let sf = quad_poly_is_squarefree(&coeffs, basis);
            (PolyCoeffs::Quad { omega: basis, coeffs }, sf)
        }
    };

    let PlanFunction::EtaQuotient(spec) = &plan.function else {
        return Err(Error::InvalidArgument("plan carries no eta-quotient".into()));
    };
    Ok(ClassPolynomial {
        d: plan.d,
        spec: spec.clone(),
        root_power: plan.root_power,
        coeffs,
        residual,
        squarefree,
        prec,
    })
}

/// Precision-related knobs for the pipeline.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComputeOptions {
    /// fixed starting precision instead of the estimate
    pub prec: Option<u32>,
    /// ceiling applied on top of the built-in 2^20
    pub prec_cap: Option<u32>,
}

/// Full pipeline: spec -> plan -> n-system -> evaluate -> assemble, with
/// doubling retries on rounding failure.
pub fn compute_class_poly(d: i64, primes: &[i64], e: i64) -> Result<ClassPolynomial> {
    compute_class_poly_with(d, primes, e, ComputeOptions::default())
}

pub fn compute_class_poly_with(
    d: i64,
    primes: &[i64],
    e: i64,
    opts: ComputeOptions,
) -> Result<ClassPolynomial> {
    let spec = EtaQuotientSpec::new(primes, e)?;
    let plan = build_plan(d, &spec)?;
    let cap = opts.prec_cap.unwrap_or(PREC_CEILING).min(PREC_CEILING);
    let mut prec = opts.prec.unwrap_or_else(|| estimate_precision(&plan)).min(cap);
    let mut last_err = None;
    for _ in 0..=MAX_RETRIES {
        match evaluate_values(&plan, prec).and_then(|v| assemble(&v, &plan, prec)) {
            Ok(poly) => return Ok(poly),
            Err(e @ (Error::RoundingFailure { .. } | Error::PrecisionFailure(_))) => {
                last_err = Some(e);
                if prec >= cap {
                    break;
                }
                prec = (prec * 2).min(cap);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionFailure(format!(
        "no acceptable rounding up to {prec} bits: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Independent oracle: evaluate your way around the symmetries. All h
/// singular values are computed directly from the eta product and the full
/// class polynomial is assembled; callers check it equals the reduced
/// polynomial to the root_power.
pub fn oracle_full_product(d: i64, primes: &[i64], e: i64) -> Result<ClassPolynomial> {
    let spec = EtaQuotientSpec::new(primes, e)?;
    let plan = build_plan(d, &spec)?;
    let all: Vec<usize> = (0..plan.h()).collect();
    let mut prec = estimate_precision_for(&plan, &all);
    let mut last_err = None;
    for _ in 0..=MAX_RETRIES {
        let roots: Result<Vec<Complex>> = all
            .par_iter()
            .map(|&i| {
                let tau = plan.nsystem.forms[i].basis_quotient(prec + 64);
                eval_w(&spec, &tau, prec)
            })
            .collect();
        let result = roots.and_then(|roots| {
            let values = SingularValueSet {
                prec,
                entries: Vec::new(),
                orbit_roots: roots,
            };
            // full product: same rounding path, trivial orbit structure
            let full_plan = EvaluationPlan {
                orbits: (0..plan.h()).map(|i| vec![i]).collect(),
                orbit_of: (0..plan.h()).collect(),
                root_power: 1,
                predicted_constant: ConstantPrediction::Unknown,
                ..plan.clone()
            };
            assemble(&values, &full_plan, prec)
        });
        match result {
            Ok(poly) => return Ok(poly),
            Err(e @ (Error::RoundingFailure { .. } | Error::PrecisionFailure(_))) => {
                last_err = Some(e);
                if prec >= PREC_CEILING {
                    break;
                }
                prec = (prec * 2).min(PREC_CEILING);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionFailure(format!(
        "oracle product failed up to {prec} bits: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Exact identity check: full == reduced^root_power (integer polynomials).
pub fn oracle_matches(reduced: &ClassPolynomial, full: &ClassPolynomial) -> bool {
    match (&reduced.coeffs, &full.coeffs) {
        (PolyCoeffs::Int(r), PolyCoeffs::Int(f)) => &int_poly_pow(r, reduced.root_power) == f,
        (PolyCoeffs::Quad { coeffs: r, .. }, PolyCoeffs::Quad { coeffs: f, .. }) => {
            reduced.root_power == 1 && r == f
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpc::pow2;
    use rug::Integer;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn sqrt_class_poly_d455() {
        let poly = compute_class_poly(-455, &[5, 7], 1).unwrap();
        assert_eq!(poly.root_power, 2);
        assert_eq!(poly.degree(), 10);
        assert!(poly.residual < 1e-6);
        assert!(poly.squarefree);
        let expected = ints(&[-1, 3, 12, 32, 38, -17, -38, 32, -12, 3, 1]);
        assert_eq!(poly.coeffs, PolyCoeffs::Int(expected));
    }

    #[test]
    fn degree14_class_poly_d215() {
        let poly = compute_class_poly(-215, &[7, 11], 1).unwrap();
        assert_eq!(poly.root_power, 1);
        let expected = ints(&[
            1, -5, 20, -28, -23, 113, -124, 25, 89, -147, 144, -97, 42, -10, 1,
        ]);
        assert_eq!(poly.coeffs, PolyCoeffs::Int(expected));
    }

    #[test]
    fn quartic_root_polys_d3795() {
        let poly = compute_class_poly(-3795, &[3, 5, 11], 3).unwrap();
        assert_eq!(poly.root_power, 4);
        assert_eq!(
            poly.coeffs,
            PolyCoeffs::Int(ints(&[1, -200596, -511194, -200596, 1]))
        );
        assert!(poly.squarefree);

        let poly = compute_class_poly(-3795, &[3, 5, 11, 19], 1).unwrap();
        assert_eq!(poly.coeffs, PolyCoeffs::Int(ints(&[1, -46, 2115, -46, 1])));
        assert!(poly.squarefree);

        let poly = compute_class_poly(-3795, &[3, 5, 11, 13], 1).unwrap();
        assert_eq!(poly.coeffs, PolyCoeffs::Int(ints(&[1, 92, 2118, 92, 1])));
        assert!(!poly.squarefree, "this quartic is a perfect square");
    }

    #[test]
    fn omega_coefficients_d215() {
        let poly = compute_class_poly(-215, &[2, 3, 7], 2).unwrap();
        assert_eq!(poly.root_power, 1);
        let pairs: Vec<(i64, i64)> = vec![
            (1, 0),
            (18, -1),
            (120, -16),
            (318, -107),
            (-194, -379),
            (-3460, -737),
            (-9544, -686),
            (-13247, 0),
            (-10230, 686),
            (-4197, 737),
            (-573, 379),
            (211, 107),
            (104, 16),
            (17, 1),
            (1, 0),
        ];
        let expected: Vec<(Integer, Integer)> = pairs
            .iter()
            .map(|&(u, v)| (Integer::from(u), Integer::from(v)))
            .collect();
        match &poly.coeffs {
            PolyCoeffs::Quad { omega, coeffs } => {
                assert!(omega.half_integral());
                assert_eq!(coeffs, &expected);
                // v-components are antisymmetric around the middle
                let deg = coeffs.len() - 1;
                for i in 0..=deg {
                    assert_eq!(coeffs[i].1, -coeffs[deg - i].1.clone());
                }
            }
            _ => panic!("expected quadratic-order coefficients"),
        }
    }

    #[test]
    fn real_palindromic_d215() {
        let poly = compute_class_poly(-215, &[2, 3, 5], 3).unwrap();
        let expected = ints(&[
            1, 22, 175, 578, 819, 2190, 10130, 17295, 10130, 2190, 819, 578, 175, 22, 1,
        ]);
        assert_eq!(poly.coeffs, PolyCoeffs::Int(expected));
    }

    #[test]
    fn quartic_and_quintic_level_d215() {
        let poly = compute_class_poly(-215, &[2, 3, 5, 7], 1).unwrap();
        let expected = ints(&[
            1, -1, -8, -12, -7, -4, -17, -29, -17, -4, -7, -12, -8, -1, 1,
        ]);
        assert_eq!(poly.coeffs, PolyCoeffs::Int(expected));

        let poly = compute_class_poly(-215, &[2, 3, 5, 7, 11], 1).unwrap();
        let expected = ints(&[
            1, -3, 6, 35, 80, 130, 188, 201, 188, 130, 80, 35, 6, -3, 1,
        ]);
        assert_eq!(poly.coeffs, PolyCoeffs::Int(expected));
    }

    #[test]
    fn oracle_equivalence_d455() {
        let reduced = compute_class_poly(-455, &[5, 7], 1).unwrap();
        let full = oracle_full_product(-455, &[5, 7], 1).unwrap();
        assert_eq!(full.degree(), 20);
        assert!(oracle_matches(&reduced, &full));
    }

    #[test]
    fn oracle_equivalence_root_power_one() {
        let reduced = compute_class_poly(-215, &[7, 11], 1).unwrap();
        let full = oracle_full_product(-215, &[7, 11], 1).unwrap();
        assert!(oracle_matches(&reduced, &full));
    }

    #[test]
    fn evaluation_counts() {
        // D = -455: 3 evaluations for 10 roots
        let spec = EtaQuotientSpec::new(&[5, 7], 1).unwrap();
        let plan = build_plan(-455, &spec).unwrap();
        let values = evaluate_values(&plan, 192).unwrap();
        assert_eq!(values.entries.len(), 3);
        assert_eq!(values.orbit_roots.len(), 10);
        // paper walkthrough: z1 real, z2 and z3 complex
        assert_eq!(values.entries.iter().filter(|e| e.role.real_root).count(), 1);

        // D = -215, {7,11}: at most 8 evaluations for 14 roots
        let spec = EtaQuotientSpec::new(&[7, 11], 1).unwrap();
        let plan = build_plan(-215, &spec).unwrap();
        let values = evaluate_values(&plan, 192).unwrap();
        assert!(values.entries.len() <= 8);
        assert_eq!(values.orbit_roots.len(), 14);
    }

    #[test]
    fn class_number_one_linear_poly() {
        // h(-19) = 1 and both 5 and 7 split: a single real singular value
        let poly = compute_class_poly(-19, &[5, 7], 1).unwrap();
        assert_eq!(poly.degree(), 1);
        assert!(poly.residual < 1e-6);
    }

    #[test]
    fn estimate_precision_clamps() {
        let spec = EtaQuotientSpec::new(&[5, 7], 1).unwrap();
        let plan = build_plan(-19, &spec).unwrap();
        assert_eq!(estimate_precision(&plan), 128);
        let plan = build_plan(-455, &spec).unwrap();
        let p = estimate_precision(&plan);
        assert!((128..=512).contains(&p));
    }

    #[test]
    fn determinism_across_runs() {
        let a = compute_class_poly(-455, &[5, 7], 1).unwrap();
        let b = compute_class_poly(-455, &[5, 7], 1).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
        assert_eq!(a.residual, b.residual);
        assert_eq!(a.prec, b.prec);
    }

    /// Quartic factor with roots {z, conj z, xi/z, xi/conj z} for xi = -1:
    /// (X^2 - 2xX + n)(X^2 + (2x/n)X + 1/n)
    /// = X^4 + 2x(1/n - 1)(X^3 - X) + (n + (1 - 4x^2)/n) X^2 + 1.
    #[test]
    fn paired_quartic_factor_identity() {
        let prec = 192;
        let spec = EtaQuotientSpec::new(&[5, 7], 1).unwrap();
        let plan = build_plan(-455, &spec).unwrap();
        let values = evaluate_values(&plan, prec).unwrap();
        let z = values
            .entries
            .iter()
            .find(|e| !e.role.real_root)
            .unwrap()
            .value
            .clone();
        let x = z.re().clone();
        let n = z.norm_sqr();
        // product of the four linear factors
        let roots = [
            z.clone(),
            z.conj(),
            z.recip().neg(),
            z.conj().recip().neg(),
        ];
        let prod = product_tree(&roots, prec);
        // corrected closed form
        let one = Float::with_val(prec, 1);
        let n_inv = Float::with_val(prec, &one / &n);
        let a3 = Float::with_val(prec, 2 * &x) * (n_inv.clone() - &one);
        let a2 = Float::with_val(prec, &n + &n_inv)
            - Float::with_val(prec, 4 * Float::with_val(prec, x.square_ref())) / n.clone();
        let tol = pow2(prec, -(prec as i64) + 80);
        assert!(Float::with_val(prec, prod[3].re() - &a3).abs() < tol);
        assert!(Float::with_val(prec, prod[1].re() + &a3).abs() < tol);
        assert!(Float::with_val(prec, prod[2].re() - &a2).abs() < tol);
        assert!(Float::with_val(prec, prod[0].re() - 1u32).abs() < tol);
        for c in &prod {
            assert!(c.im().clone().abs() < tol);
        }
    }

    /// Every root r of a computed polynomial with a ramified level prime
    /// has xi/r as a root too (numeric roots by Durand-Kerner iteration).
    #[test]
    fn root_closure_under_inversion() {
        for (d, primes, e, xi) in [
            (-455i64, vec![5i64, 7], 1i64, -1i64),
            (-3795, vec![3, 5, 11], 3, 1),
            (-215, vec![2, 3, 5], 3, 1),
            (-215, vec![2, 3, 5, 7], 1, 1),
        ] {
            let poly = compute_class_poly(d, &primes, e).unwrap();
            let PolyCoeffs::Int(coeffs) = &poly.coeffs else { panic!() };
            let roots = durand_kerner(coeffs);
            for r in &roots {
                let target = r.recip().scale_i64(xi);
                let found = roots
                    .iter()
                    .any(|s| s.dist(&target).to_f64() < 1e-6 * (1.0 + target.abs().to_f64()));
                assert!(found, "xi/root missing for {primes:?}, root {r}");
            }
        }
    }

    fn durand_kerner(coeffs: &[Integer]) -> Vec<Complex> {
        let prec = 128;
        let n = coeffs.len() - 1;
        let cs: Vec<Complex> = coeffs
            .iter()
            .map(|c| Complex::new(prec, Float::with_val(prec, c), Float::with_val(prec, 0)))
            .collect();
        let eval = |z: &Complex| -> Complex {
            let mut acc = Complex::zero(prec);
            for c in cs.iter().rev() {
                acc = acc.mul(z).add(c);
            }
            acc
        };
        let seed = Complex::from_f64(prec, 0.4, 0.9);
        let mut ws: Vec<Complex> = (0..n).map(|i| seed.pow_i64(i as i64 + 1)).collect();
        for _ in 0..300 {
            for i in 0..n {
                let mut denom = Complex::one(prec);
                for j in 0..n {
                    if i != j {
                        denom = denom.mul(&ws[i].sub(&ws[j]));
                    }
                }
                ws[i] = ws[i].sub(&eval(&ws[i]).div(&denom));
            }
        }
        ws
    }
}
