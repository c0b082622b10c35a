// debug: ratios of singular values under prime translations
use etaclass::etaquot::{eval_w, EtaQuotientSpec};
use etaclass::plan::build_plan;
use etaclass::qforms::prime_form;

fn probe(d: i64, p1: i64, p2: i64) {
    let prec = 192;
    let sp = EtaQuotientSpec::new(&[p1, p2], 1).unwrap();
    let plan = build_plan(d, &sp).unwrap();
    let value = |i: usize| eval_w(&sp, &plan.nsystem.forms[i].basis_quotient(prec + 64), prec).unwrap();
    let f1 = prime_form(d, p1).unwrap().unwrap();
    let f2 = prime_form(d, p2).unwrap().unwrap();
    let member = |f: &etaclass::qforms::QuadForm| -> usize {
        let r = f.reduce();
        (0..plan.h()).find(|&i| plan.classes[plan.class_of[i]] == r).unwrap()
    };
    let c = plan.classes[plan.class_of[0]];
    let v = value(0);
    let prod1 = value(member(&c.compose(&f1).unwrap())).mul(&v);
    let prod2 = value(member(&c.compose(&f2).unwrap())).mul(&v);
    println!("D={d} {{{p1},{p2}}}: v*v(a*P{p1}) = {:+.4}{:+.4}i   v*v(a*P{p2}) = {:+.4}{:+.4}i",
        prod1.re().to_f64(), prod1.im().to_f64(), prod2.re().to_f64(), prod2.im().to_f64());
}

fn main() {
    probe(-231, 3, 7);   // (3|7) = -1, (7|3) = +1
    probe(-231, 7, 11); // (7|11) = -1, (11|7) = +1
    probe(-455, 5, 7);   // both -1
}
