#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use maxcurve::catalog;
use maxcurve::curves::{hermitian_points, CurveModel};
use maxcurve::gf::{build_field, Fe, FieldCtx};
use maxcurve::group_action::{fixed_points, orbits, CPoint};
use maxcurve::linpoly::{compose, decompose, LinPoly};
use maxcurve::numtheory::prime_power;
use maxcurve::pgu3::{CycleShape, Pgu, Projectivity};
use maxcurve::proj3::{HermitianForm, ProjPoint};
use maxcurve::verifier;

pub type Prop = Result<(), TestCaseError>;

/// Small fields plus one that is too large for log tables.
pub const FIELDS: &[(u64, u32)] = &[(2, 1), (2, 4), (2, 8), (3, 2), (3, 5), (5, 3), (7, 2), (2, 30), (3, 19)];

pub fn field(i: usize) -> Arc<FieldCtx> {
    let (p, k) = FIELDS[i % FIELDS.len()];
    build_field(p, k).unwrap()
}

pub fn elem(f: &FieldCtx, seed: u64) -> Fe {
    f.elem(seed % f.size()).unwrap()
}

pub fn field_axioms(fi: usize, a: u64, b: u64, c: u64) -> Prop {
    let f = field(fi);
    let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
    prop_assert_eq!(f.add(a, b), f.add(b, a));
    prop_assert_eq!(f.mul(a, b), f.mul(b, a));
    prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
    prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
    prop_assert_eq!(f.mul(a, f.one()), a);
    prop_assert_eq!(f.sub(f.add(a, b), b), a);
    if !f.is_zero(a) {
        let inv = f.inv(a).unwrap();
        prop_assert_eq!(f.mul(a, inv), f.one());
        prop_assert_eq!(f.pow(a, (f.size() - 1) as u128), f.one());
    } else {
        prop_assert!(f.inv(a).is_none());
    }
    prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
    prop_assert_eq!(f.frobenius(a, f.degree()), a);
    Ok(())
}

pub fn form(fermat: bool, q: u64) -> HermitianForm {
    if fermat {
        HermitianForm::Fermat { q }
    } else {
        HermitianForm::NormTrace { q }
    }
}

pub fn pgu(fermat: bool, q: u64) -> Pgu {
    Pgu::new(form(fermat, q)).unwrap()
}

pub fn point(f: &FieldCtx, seed: [u64; 3]) -> Option<ProjPoint> {
    ProjPoint::new(f, seed.map(|s| elem(f, s))).ok()
}

pub fn polarity_involution(fermat: bool, q: u64, seed: [u64; 3]) -> Prop {
    let g = pgu(fermat, q);
    let f = g.field();
    let h = g.form();
    let Some(p) = point(f, seed) else { return Ok(()) };
    let l = h.polar(f, &p);
    prop_assert_eq!(h.pole(f, &l), p);
    // a point lies on its own polar exactly when it lies on the curve
    prop_assert_eq!(maxcurve::proj3::incident(f, &p, &l), h.on_curve(f, p.coords()));
    Ok(())
}

/// Norm-one element of `F_{q^2}` built from a seed.
fn norm_one(f: &FieldCtx, q: u64, seed: u64) -> Fe {
    let g = f.generator();
    f.pow(g, ((q - 1) * (seed % (q + 1))) as u128)
}

/// A word in standard generators of the unitary group of the form.
pub fn random_element(g: &Pgu, word: &[(u8, u64)]) -> Projectivity {
    let f = g.field().clone();
    let q = g.q();
    let mut acc = g.identity();
    for &(kind, s) in word {
        let x = match (g.form(), kind % 3) {
            (HermitianForm::Fermat { .. }, 0) => g.make_alpha(norm_one(&f, q, s), (s / 7 % 64) as i64).unwrap(),
            (HermitianForm::Fermat { .. }, 1) => g.make_three_cycle(CycleShape::A, norm_one(&f, q, s), norm_one(&f, q, s / 5)).unwrap(),
            (HermitianForm::Fermat { .. }, _) => {
                let (z, o) = (f.zero(), f.one());
                g.projectivity([[z, o, z], [o, z, z], [z, z, norm_one(&f, q, s)]]).unwrap()
            }
            (HermitianForm::NormTrace { .. }, 0) => g.make_alpha_a(elem(&f, s.max(1) % (f.size() - 1) + 1)).unwrap(),
            (HermitianForm::NormTrace { .. }, 1) => {
                let c = f.elements().filter(|&c| f.is_zero(f.add(f.frobenius(c, f.degree() / 2), c))).nth((s % q) as usize).unwrap();
                g.make_beta(c).unwrap()
            }
            (HermitianForm::NormTrace { .. }, _) => {
                let (z, o) = (f.zero(), f.one());
                g.projectivity([[z, z, o], [z, o, z], [o, z, z]]).unwrap()
            }
        };
        acc = g.mul(&acc, &x);
    }
    acc
}

pub fn curve_points(g: &Pgu) -> Vec<ProjPoint> {
    let model = match g.form() {
        HermitianForm::Fermat { q } => CurveModel::fermat(q).unwrap(),
        HermitianForm::NormTrace { q } => CurveModel::norm_trace(q).unwrap(),
    };
    hermitian_points(&model, g.field()).unwrap()
}

/// Rational fixed points from the eigenvector method agree with a scan of the curve.
pub fn fixed_point_oracle(fermat: bool, q: u64, word: &[(u8, u64)]) -> Prop {
    let g = pgu(fermat, q);
    let s = random_element(&g, word);
    prop_assume!(!g.is_identity(&s));
    let fp = fixed_points(&g, &s).unwrap();
    let scan: BTreeSet<CPoint> =
        curve_points(&g).iter().filter(|p| g.apply(&s, p) == **p).map(CPoint::rational).collect();
    match fp.on_curve_points() {
        Some(pts) => {
            let rational: BTreeSet<CPoint> = pts.into_iter().filter(|p| p.degree() == 1).collect();
            prop_assert_eq!(rational, scan);
        }
        None => prop_assert!(false, "axis points unavailable over a table field"),
    }
    for (p, on) in &fp.points {
        if p.degree() == 1 {
            let pp = ProjPoint::new(g.field(), p.coords()).unwrap();
            prop_assert_eq!(g.apply(&s, &pp), pp);
            prop_assert_eq!(*on, g.form().on_curve(g.field(), p.coords()));
        }
    }
    Ok(())
}

pub fn orbit_stabilizer(fermat: bool, q: u64, gens: &[Vec<(u8, u64)>]) -> Prop {
    let g = pgu(fermat, q);
    let gens: Vec<Projectivity> = gens.iter().map(|w| random_element(&g, w)).collect();
    let Ok(grp) = g.generate(&gens, 5000) else { return Ok(()) };
    let pts: Vec<CPoint> = curve_points(&g).iter().map(CPoint::rational).collect();
    let orbs = orbits(&grp, &pts).unwrap();
    prop_assert_eq!(orbs.iter().map(|o| o.points.len()).sum::<usize>(), pts.len());
    for o in &orbs {
        let rep = ProjPoint::new(g.field(), o.representative.coords()).unwrap();
        let stab = grp.elements().iter().filter(|s| g.apply(s, &rep) == rep).count();
        prop_assert_eq!(o.points.len() * stab, grp.order());
    }
    Ok(())
}

/// `sum_{s != 1} |Fix(s)| = sum_P (|Stab(P)| - 1)` over the rational points of the curve.
pub fn incidence_double_count(fermat: bool, q: u64, gens: &[Vec<(u8, u64)>]) -> Prop {
    let g = pgu(fermat, q);
    let gens: Vec<Projectivity> = gens.iter().map(|w| random_element(&g, w)).collect();
    let Ok(grp) = g.generate(&gens, 2000) else { return Ok(()) };
    let pts = curve_points(&g);
    let by_element: usize = grp.elements()[1..]
        .iter()
        .map(|s| {
            let fp = fixed_points(&g, s).unwrap();
            fp.on_curve_points().unwrap().iter().filter(|p| p.degree() == 1).count()
        })
        .sum();
    let by_point: usize =
        pts.iter().map(|p| grp.elements().iter().filter(|s| g.apply(s, p) == *p).count() - 1).sum();
    prop_assert_eq!(by_element, by_point);
    Ok(())
}

pub fn linpoly_homomorphism(fi: usize, coeffs: &[u64], x: u64, y: u64, k: u8) -> Prop {
    let f = field(fi);
    let l = LinPoly::new(&f, coeffs.iter().map(|&c| elem(&f, c)).collect());
    let (x, y) = (elem(&f, x), elem(&f, y));
    prop_assert_eq!(l.eval(&f, f.add(x, y)), f.add(l.eval(&f, x), l.eval(&f, y)));
    let c = f.from_int(k as i64);
    prop_assert_eq!(l.eval(&f, f.mul(c, x)), f.mul(c, l.eval(&f, x)));
    Ok(())
}

pub fn linpoly_round_trip(fi: usize, outer: &[u64], inner: &[u64], x: u64) -> Prop {
    let f = field(fi);
    let a = LinPoly::new(&f, outer.iter().map(|&c| elem(&f, c)).collect());
    let b = LinPoly::new(&f, inner.iter().map(|&c| elem(&f, c)).collect());
    prop_assume!(!b.is_zero());
    let ab = compose(&f, &a, &b);
    let x = elem(&f, x);
    prop_assert_eq!(ab.eval(&f, x), a.eval(&f, b.eval(&f, x)));
    prop_assert_eq!(decompose(&f, &ab, &b), Some(a));
    Ok(())
}

/// Every catalogued subgroup order divides the order of the ambient group.
pub fn catalog_divisibility(q: u64) -> Prop {
    let (p, e) = prime_power(q).unwrap();
    let psu = catalog::psu3_order(p, e);
    for entry in catalog::mh_orders(q).unwrap() {
        prop_assert!((&psu % &entry.order).is_zero(), "{} = {} does not divide |PSU(3,{})|", entry.label, entry.order, q);
    }
    let qq = BigUint::from(q);
    let pgl = &qq * (&qq * &qq - 1u32);
    for entry in catalog::dickson_orders(q).unwrap() {
        prop_assert!((&pgl % &entry.order).is_zero(), "{} = {} does not divide |PGL(2,{})|", entry.label, entry.order, q);
    }
    Ok(())
}

pub const PRIME_POWERS: &[u64] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 125, 128, 243, 256, 343, 512, 729, 1024];

/// `run_all` output, without timings, under a pool of `threads` workers.
pub fn run_all_json(threads: usize, filter: Option<&str>) -> Vec<String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| verifier::run_all(filter, false).0.iter().map(|r| r.to_json_line()).collect())
}

pub fn word() -> impl Strategy<Value = Vec<(u8, u64)>> {
    prop::collection::vec((0u8..3, any::<u64>()), 1..6)
}
