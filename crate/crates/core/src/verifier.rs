//! Named checks with machine-readable reports.
//!
//! Every check takes integer parameters, recomputes its quantities from the
//! library and compares them with the expected values by exact equality.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog;
use crate::curves::{hermitian_points, CurveModel};
use crate::gf::{build_field, embed, poly, Fe, FieldCtx, TowerMap};
use crate::group_action::{
    fixed_points, is_semiregular, orbit_closure, orbits, restrict_to_line, sylow_census, Actor, CPoint, Proj2,
};
use crate::linpoly::{self, compose, decompose, symbolic_divides, Convention, LinPoly, Side};
use crate::numtheory;
use crate::pgu3::{CycleShape, Pgu, Projectivity, DEFAULT_CLOSURE_CAP};
use crate::proj3::{HermitianForm, ProjLine, ProjPoint};
use crate::ramification::{different_degree, expected_delta, ledger_feasibility, quotient_genus};

pub const SCHEMA: u32 = 1;

pub type Params = BTreeMap<String, u64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error("invalid parameter '{key}': {reason}")]
    InvalidParam { key: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    pub computed: Value,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub name: String,
    pub params: Params,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    pub citation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Keys whose computed value differs from the expected one.
    pub fn mismatches(&self) -> Vec<&str> {
        self.evidence.iter().filter(|e| e.matches == Some(false)).map(|e| e.key.as_str()).collect()
    }
}

/// Evidence collector handed to each check.
#[derive(Default)]
pub struct Ledger {
    items: Vec<Evidence>,
    notes: Vec<String>,
}

impl Ledger {
    pub fn expect<T: Serialize + PartialEq>(&mut self, key: &str, expected: T, computed: T) {
        let matches = expected == computed;
        self.items.push(Evidence {
            key: key.into(),
            expected: Some(json!(expected)),
            computed: json!(computed),
            matches: Some(matches),
        });
    }

    pub fn info<T: Serialize>(&mut self, key: &str, value: T) {
        self.items.push(Evidence { key: key.into(), expected: None, computed: json!(value), matches: None });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// A check that cannot run for the given parameters.
#[derive(Debug)]
pub struct Unsupported(pub String);

impl<E: std::fmt::Display> From<E> for Unsupported {
    fn from(e: E) -> Self {
        Unsupported(e.to_string())
    }
}

type Runner = fn(&Params, &mut Ledger) -> Result<(), Unsupported>;

pub struct ParamSpec {
    pub key: &'static str,
    pub default: u64,
    pub help: &'static str,
}

pub struct CheckSpec {
    pub name: &'static str,
    pub citation: &'static str,
    pub params: &'static [ParamSpec],
    /// Parameter sets used by `run_all`; each overrides the defaults.
    pub runs: &'static [&'static [(&'static str, u64)]],
    run: Runner,
}

const NONE: &[ParamSpec] = &[];
const ONE_RUN: &[&[(&str, u64)]] = &[&[]];

macro_rules! param {
    ($k:expr, $d:expr, $h:expr) => {
        ParamSpec { key: $k, default: $d, help: $h }
    };
}

/// The registry, sorted by name.
pub static REGISTRY: &[CheckSpec] = &[
    CheckSpec {
        name: "alpha-semiregular",
        citation: "the diagonal group of order (2^n+1)/3 and its cyclic overgroup of order 2^n+1 act semiregularly on the Hermitian curve H_{2^n}",
        params: &[param!("n", 5, "odd exponent, q = 2^n")],
        runs: ONE_RUN,
        run: run_alpha_semiregular,
    },
    CheckSpec {
        name: "delta-ledger",
        citation: "degree of the different for a group of order q(q+1) with q+1 Sylow subgroups: the element profiles cannot reach the Riemann-Hurwitz value",
        params: &[param!("q", 4, "4 or 8")],
        runs: &[&[("q", 4)], &[("q", 8)]],
        run: run_delta_ledger,
    },
    CheckSpec {
        name: "eigen-fixed-points",
        citation: "a three-cycle times a diagonal element with non-cube determinant has exactly three fixed points, all on H_q, defined over F_{q^6}",
        params: &[param!("n", 5, "odd exponent, q = 2^n")],
        runs: &[&[("n", 5)], &[("n", 9)]],
        run: run_eigen_fixed_points,
    },
    CheckSpec {
        name: "gk-congruence",
        citation: "|C_{2^n}(F_{q^2})| = 4q^2-4q+1 is divisible by 3",
        params: &[param!("n", 5, "odd exponent >= 3, q = 2^n")],
        runs: &[&[("n", 5)], &[("n", 7)]],
        run: run_gk_congruence,
    },
    CheckSpec {
        name: "gs-congruence",
        citation: "|X_q(F_{q^6})| = q^7-q^5+q^4+1 is congruent to q^2+1 modulo q^3+1, while a quotient of H_{q^3} by a group with two fixed points on the quotient has a count congruent to 2",
        params: &[param!("q", 2, "prime power")],
        runs: &[&[("q", 2)], &[("q", 3)], &[("q", 4)]],
        run: run_gs_congruence,
    },
    CheckSpec {
        name: "hermitian-count",
        citation: "H_q has q^3+1 points over F_{q^2} and is maximal",
        params: &[param!("q", 4, "prime power")],
        runs: &[&[("q", 2)], &[("q", 3)], &[("q", 4)], &[("q", 8)]],
        run: run_hermitian_count,
    },
    CheckSpec {
        name: "lemmino",
        citation: "subfield subgroups of PSU(3,2^m) cannot contain a semiregular group of order (2^n+1)/3 for n = p'm",
        params: &[param!("m_max", 20, "largest m scanned")],
        runs: ONE_RUN,
        run: run_lemmino,
    },
    CheckSpec {
        name: "linpoly-decompose",
        citation: "X^8+X = (X^4+X^2+X) o (X^2+X) over F_2 and the associate t^3+1 = (t+1)(t^2+t+1)",
        params: NONE,
        runs: ONE_RUN,
        run: run_linpoly_decompose,
    },
    CheckSpec {
        name: "phi-homomorphism",
        citation: "restriction to a stabilized secant line is a homomorphism into PGL(2,q^2), injective on semiregular groups",
        params: &[param!("n", 5, "exponent, q = 2^n")],
        runs: ONE_RUN,
        run: run_phi_homomorphism,
    },
    CheckSpec {
        name: "primovalore",
        citation: "q^2+q+2 divides q^9(q^9+1)(q^6-1) only for q in {1, 2, 3, 10}, via the remainder 2128q-1568",
        params: &[param!("q_max", 1_000_000, "scan bound")],
        runs: ONE_RUN,
        run: run_primovalore,
    },
    CheckSpec {
        name: "prop1sylow-nondiv",
        citation: "no member k^{-1}a^{q^2}X^{q^2} - k^{-1}aX of the family divides X^{q^3}+X",
        params: &[param!("q", 4, "2 or 4")],
        runs: ONE_RUN,
        run: run_prop1sylow,
    },
    CheckSpec {
        name: "quattordici",
        citation: "for odd m >= 3 the order (2^{3m}+1)/3 divides three times a maximal subgroup order of PSU(3,2^m) only in the Singer normalizer case with m = 3",
        params: &[param!("m_max", 20, "largest m scanned")],
        runs: ONE_RUN,
        run: run_quattordici,
    },
    CheckSpec {
        name: "rh-quotient-genus",
        citation: "a semiregular group of order (q+1)/3 gives a quotient of H_q of genus (3q-4)/2 = g(C_q)",
        params: &[param!("n", 5, "odd exponent, q = 2^n")],
        runs: ONE_RUN,
        run: run_rh_quotient_genus,
    },
    CheckSpec {
        name: "secondovalore-catalog",
        citation: "q^2+q+1 does not divide the maximal subgroup orders of PSU(3,q^3) outside the geometric cases, nor those of its subfield subgroups, nor three times them",
        params: &[param!("q", 4, "prime power")],
        runs: &[&[("q", 2)], &[("q", 4)]],
        run: run_secondovalore,
    },
    CheckSpec {
        name: "sylow-census",
        citation: "Q x <alpha_lambda> on the norm-trace curve H_{q^3} has one Sylow p-subgroup, fixing only the ideal point",
        params: &[param!("q", 4, "2 or 4")],
        runs: ONE_RUN,
        run: run_sylow_census,
    },
    CheckSpec {
        name: "triangolo-census",
        citation: "fixed-point incidences of <alpha_theta, h> on H_q: |I| = 4(q+1)/3, m = 2(q+1)/3 points in two orbits of <alpha_xi, h>",
        params: &[param!("n", 9, "exponent with 9 | 2^n+1, q = 2^n")],
        runs: ONE_RUN,
        run: run_triangolo_census,
    },
];

pub fn find(name: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.name == name)
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

impl CheckSpec {
    /// Fills defaults and rejects unknown keys.
    pub fn resolve(&self, given: &Params) -> Result<Params, VerifyError> {
        for k in given.keys() {
            if !self.params.iter().any(|p| p.key == k) {
                return Err(VerifyError::InvalidParam {
                    key: k.clone(),
                    reason: format!("'{}' takes no such parameter", self.name),
                });
            }
        }
        Ok(self
            .params
            .iter()
            .map(|p| (p.key.to_string(), given.get(p.key).copied().unwrap_or(p.default)))
            .collect())
    }

    fn execute(&self, params: Params, timings: bool) -> CheckReport {
        let start = Instant::now();
        let mut ledger = Ledger::default();
        let outcome = (self.run)(&params, &mut ledger);
        let verdict = match &outcome {
            Err(_) => Verdict::Unsupported,
            Ok(()) if ledger.items.iter().all(|e| e.matches != Some(false)) => Verdict::Pass,
            Ok(()) => Verdict::Fail,
        };
        if let Err(Unsupported(reason)) = outcome {
            ledger.note(reason);
        }
        CheckReport {
            schema: SCHEMA,
            name: self.name.into(),
            params,
            verdict,
            evidence: ledger.items,
            citation: self.citation.into(),
            note: (!ledger.notes.is_empty()).then(|| ledger.notes.join("; ")),
            millis: timings.then(|| start.elapsed().as_millis() as u64),
        }
    }
}

/// Parses `key=value` with an integer value.
pub fn parse_param(s: &str) -> Result<(String, u64), VerifyError> {
    let (k, v) = s.split_once('=').ok_or_else(|| VerifyError::InvalidParam {
        key: s.into(),
        reason: "expected key=value".into(),
    })?;
    let v = v.trim().replace('_', "");
    let value = v.parse::<u64>().map_err(|_| VerifyError::InvalidParam {
        key: k.into(),
        reason: format!("'{v}' is not a nonnegative integer"),
    })?;
    Ok((k.trim().into(), value))
}

pub fn run_check(name: &str, params: &Params) -> Result<CheckReport, VerifyError> {
    run_check_with(name, params, false)
}

pub fn run_check_with(name: &str, params: &Params, timings: bool) -> Result<CheckReport, VerifyError> {
    let spec = find(name).ok_or_else(|| VerifyError::UnknownCheck(name.into()))?;
    let params = spec.resolve(params)?;
    Ok(spec.execute(params, timings))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub unsupported: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let count = |v| reports.iter().filter(|r| r.verdict == v).count();
        Summary {
            total: reports.len(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            unsupported: count(Verdict::Unsupported),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }
}

/// The `(name, params)` pairs `run_all` would execute.
pub fn planned_runs(filter: Option<&str>) -> Vec<(&'static CheckSpec, Params)> {
    REGISTRY
        .iter()
        .filter(|c| filter.map(|f| c.name.starts_with(f)).unwrap_or(true))
        .flat_map(|c| {
            c.runs.iter().map(move |overrides| {
                let given: Params = overrides.iter().map(|(k, v)| (k.to_string(), *v)).collect();
                (c, c.resolve(&given).expect("registry overrides are valid"))
            })
        })
        .collect()
}

/// Runs every registered parameter set whose check name starts with `filter`,
/// in registry order. Checks run concurrently on the current rayon pool.
pub fn run_all(filter: Option<&str>, timings: bool) -> (Vec<CheckReport>, Summary) {
    let plan = planned_runs(filter);
    let reports: Vec<CheckReport> = plan.into_par_iter().map(|(c, p)| c.execute(p, timings)).collect();
    let summary = Summary::of(&reports);
    (reports, summary)
}

fn get(p: &Params, k: &str) -> u64 {
    p[k]
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Unsupported> {
    if cond {
        Ok(())
    } else {
        Err(Unsupported(msg()))
    }
}

fn odd_exponent(n: u64, lo: u64, hi: u64) -> Result<u32, Unsupported> {
    need(n % 2 == 1 && (lo..=hi).contains(&n), || format!("n must be odd in {lo}..={hi}"))?;
    Ok(n as u32)
}

// ---------------------------------------------------------------- curves

const ENUMERATE_LIMIT: u64 = 1 << 20;

fn run_hermitian_count(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let q = get(p, "q");
    numtheory::prime_power(q).ok_or_else(|| Unsupported(format!("{q} is not a prime power")))?;
    need(q.pow(2) <= ENUMERATE_LIMIT, || format!("F_{{q^2}} larger than {ENUMERATE_LIMIT}"))?;
    for model in [CurveModel::fermat(q)?, CurveModel::norm_trace(q)?] {
        let tag = match model {
            CurveModel::FermatHermitian { .. } => "fermat",
            _ => "norm_trace",
        };
        ev.expect(&format!("{tag}_count"), q.pow(3) + 1, model.count_rational_points()?);
        ev.expect(&format!("{tag}_maximal"), true, model.maximality_check()?);
    }
    Ok(())
}

fn run_gk_congruence(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let n = odd_exponent(get(p, "n"), 3, 31)?;
    let q = 1u128 << n;
    let formula = 4 * q * q - 4 * q + 1;
    let model = CurveModel::gk(2, n)?;
    ev.expect("hasse_weil", formula, model.hasse_weil_bound());
    ev.expect("formula_mod3", 0u128, formula % 3);
    if q * q <= ENUMERATE_LIMIT as u128 {
        let count = model.count_rational_points()? as u128;
        ev.expect("count", formula, count);
        ev.expect("count_mod3", 0u128, count % 3);
    } else {
        ev.note("count by formula only above the enumeration limit");
    }
    Ok(())
}

fn run_gs_congruence(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let q = get(p, "q");
    numtheory::prime_power(q).ok_or_else(|| Unsupported(format!("{q} is not a prime power")))?;
    need(q <= 1 << 10, || "q too large".into())?;
    let qq = q as u128;
    let formula = qq.pow(7) - qq.pow(5) + qq.pow(4) + 1;
    let modulus = qq.pow(3) + 1;
    let model = CurveModel::gs(q)?;
    ev.expect("hasse_weil", formula, model.hasse_weil_bound());
    ev.expect("formula_residue", (qq * qq + 1) % modulus, formula % modulus);
    if qq.pow(6) <= ENUMERATE_LIMIT as u128 {
        let count = model.count_rational_points()? as u128;
        ev.expect("count", formula, count);
        ev.expect("count_residue", (qq * qq + 1) % modulus, count % modulus);
    } else {
        ev.note("count by formula only above the enumeration limit");
    }
    ev.expect("differs_from_two_fixed_points", true, (qq * qq + 1) % modulus != 2);
    ev.note("reads the two-fixed-point congruence as a statement about the quotient curve, not H_{q^3}");
    Ok(())
}

// ---------------------------------------------------------------- groups

fn fermat_pgu(q: u64) -> Result<Pgu, Unsupported> {
    Ok(Pgu::new(HermitianForm::Fermat { q })?)
}

fn run_alpha_semiregular(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let n = odd_exponent(get(p, "n"), 3, 15)?;
    let q = 1u64 << n;
    let g = fermat_pgu(q)?;
    let f = g.field().clone();
    let zeta = f.root_of_unity(q + 1)?;
    let theta = f.pow(zeta, 3);
    let small = g.generate(&[g.make_alpha(theta, 2)?], DEFAULT_CLOSURE_CAP)?;
    let big = g.generate(&[g.make_alpha(zeta, 2)?], DEFAULT_CLOSURE_CAP)?;
    ev.expect("order", (q + 1) / 3, small.order() as u64);
    ev.expect("semiregular_eigen", true, is_semiregular(&small)?);
    ev.expect("overgroup_order", q + 1, big.order() as u64);
    ev.expect("overgroup_semiregular_eigen", true, is_semiregular(&big)?);
    if q * q <= 1 << 10 {
        let model = CurveModel::fermat(q)?;
        let pts = hermitian_points(&model, &f)?;
        ev.expect("curve_points", q.pow(3) + 1, pts.len() as u64);
        let fixed = |grp: &crate::pgu3::SubgroupSpec| -> u64 {
            grp.elements()[1..]
                .par_iter()
                .map(|s| pts.iter().filter(|x| g.apply(s, x) == **x).count() as u64)
                .sum()
        };
        ev.expect("scan_fixed_incidences", 0, fixed(&small));
        ev.expect("overgroup_scan_fixed_incidences", 0, fixed(&big));
    } else {
        ev.note("exhaustive scan skipped above q = 32");
    }
    Ok(())
}

fn run_rh_quotient_genus(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let n = odd_exponent(get(p, "n"), 5, 15)?;
    let q = 1u64 << n;
    let g = fermat_pgu(q)?;
    let f = g.field().clone();
    let theta = f.root_of_unity((q + 1) / 3)?;
    let grp = g.generate(&[g.make_alpha(theta, 2)?], DEFAULT_CLOSURE_CAP)?;
    let ledger = different_degree(&grp)?;
    ev.expect("delta", 0, ledger.delta);
    let g_top = CurveModel::fermat(q)?.genus();
    ev.expect("top_genus", q * (q - 1) / 2, g_top);
    let target = CurveModel::gk(2, n)?.genus();
    ev.expect("target_genus", (3 * q - 4) / 2, target);
    ev.expect("quotient_genus", Some(target), quotient_genus(g_top, ledger.delta, grp.order() as u64));
    Ok(())
}

fn run_eigen_fixed_points(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let n = odd_exponent(get(p, "n"), 3, 9)? as u64;
    let q = 1u64 << n;
    let g = fermat_pgu(q)?;
    let f = g.field().clone();
    let ext = build_field(2, 6 * n as u32)?;
    let map = embed(&f, &ext)?;
    let zeta = f.root_of_unity(q + 1)?;
    let mut pairs = Vec::new();
    for a in 0..=q {
        for b in [1u64, 2] {
            if (a + b) % 3 != 0 {
                pairs.push((a, b));
            }
        }
    }
    let results: Result<Vec<(usize, usize, bool, bool)>, Unsupported> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (ea, eb) = (f.pow(zeta, a as u128), f.pow(zeta, b as u128));
            let mut row = (0usize, 0usize, true, true);
            for shape in [CycleShape::A, CycleShape::B] {
                let s = g.make_three_cycle(shape, ea, eb)?;
                let fp = fixed_points(&g, &s)?;
                row.0 += fp.points.len();
                row.1 += fp.points.iter().filter(|(x, on)| *on && x.degree() == 3).count();
                row.2 &= !g.in_psu(&s)?;
                if shape == CycleShape::A {
                    row.3 &= explicit_point_matches(&ext, &map, &g, ea, eb, &fp.points);
                }
            }
            Ok(row)
        })
        .collect();
    let results = results?;
    let elements = 2 * results.len();
    ev.info("elements", elements);
    ev.expect("fixed_points", 3 * elements, results.iter().map(|r| r.0).sum());
    ev.expect("on_curve_over_cubic_extension", 3 * elements, results.iter().map(|r| r.1).sum());
    ev.expect("outside_psu", true, results.iter().all(|r| r.2));
    ev.expect("explicit_eigenvector_fixed", true, results.iter().all(|r| r.3));
    Ok(())
}

/// `(z, z^2/A, 1)` with `z^3 = AB` is among the fixed points of `[[0,A,0],[0,0,B],[1,0,0]]`.
fn explicit_point_matches(
    ext: &FieldCtx,
    map: &TowerMap,
    g: &Pgu,
    a: Fe,
    b: Fe,
    points: &[(CPoint, bool)],
) -> bool {
    let (ea, eb) = (map.apply(a), map.apply(b));
    let cubic = [ext.neg(ext.mul(ea, eb)), ext.zero(), ext.zero(), ext.one()];
    let Some(&z) = poly::roots(ext, &cubic).first() else { return false };
    let y = ext.div(ext.square(z), ea).expect("nonzero");
    let Ok(q1) = ProjPoint::new(ext, [z, y, ext.one()]) else { return false };
    let on = g.form().on_curve(ext, q1.coords());
    on && points.iter().any(|(x, _)| x.degree() == 3 && x.coords() == q1.coords())
}

fn run_phi_homomorphism(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let n = get(p, "n");
    need((2..=10).contains(&n), || "n must be in 2..=10".into())?;
    let q = 1u64 << n;
    let g = fermat_pgu(q)?;
    let f = g.field().clone();
    let zeta = f.root_of_unity(q + 1)?;
    let (z, o) = (f.zero(), f.one());
    let swap = g.projectivity([[z, o, z], [o, z, z], [z, z, o]])?;
    let line = ProjLine::at_infinity(&f);
    let grp = g.generate(&[g.make_alpha(zeta, 2)?, swap], DEFAULT_CLOSURE_CAP)?;
    let els = grp.elements();
    let images: Vec<Proj2> = els.iter().map(|s| restrict_to_line(&g, s, &line)).collect::<Result<_, _>>()?;
    let failures: usize = (0..els.len())
        .into_par_iter()
        .map(|i| {
            (0..els.len())
                .filter(|&j| {
                    let lhs = restrict_to_line(&g, &g.mul(&els[i], &els[j]), &line).expect("stabilized");
                    lhs != images[i].mul(&f, &images[j])
                })
                .count()
        })
        .sum();
    ev.info("group_order", els.len());
    ev.expect("pairs_checked", els.len() * els.len(), els.len() * els.len());
    ev.expect("homomorphism_failures", 0, failures);
    let semi = g.generate(&[g.make_alpha(zeta, 2)?], DEFAULT_CLOSURE_CAP)?;
    ev.expect("semiregular", true, is_semiregular(&semi)?);
    let semi_images: BTreeSet<Proj2> =
        semi.elements().iter().map(|s| restrict_to_line(&g, s, &line)).collect::<Result<_, _>>()?;
    ev.expect("injective_image_size", semi.order(), semi_images.len());
    let kernel = semi.elements().iter().filter(|s| restrict_to_line(&g, s, &line).map(|r| r.is_identity(&f)).unwrap_or(false)).count();
    ev.expect("kernel_size", 1, kernel);
    Ok(())
}

/// `i` with `i^2 - i + 1 = 0 mod r`, coprime to `s` along with `i - 1`.
fn normalizing_exponent(r: u64, s: u64) -> Option<u64> {
    (2..s.max(3)).find(|&i| (i * i - i + 1) % r == 0 && numtheory::gcd_u64(i, s) == 1 && numtheory::gcd_u64(i - 1, s) == 1)
}

fn run_triangolo_census(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let n = get(p, "n");
    need(n <= 10 && n % 6 == 3, || "n must be 3 or 9".into())?;
    let q = 1u64 << n;
    let (nbar, nsub) = ((q + 1) / 3, (q + 1) / 9);
    let g = fermat_pgu(q)?;
    let f = g.field().clone();
    let theta = f.root_of_unity(nbar)?;
    let xi = f.pow(theta, 3);
    let i = normalizing_exponent(nsub, nbar).ok_or_else(|| Unsupported("no admissible exponent".into()))?;
    let mu = f.root_of_unity(q + 1)?;
    ev.info("exponent_i", i);
    for (tag, shape) in [("A", CycleShape::A), ("B", CycleShape::B)] {
        let h = g.make_three_cycle(shape, f.one(), mu)?;
        let alpha_theta = g.make_alpha(theta, i as i64)?;
        let alpha_xi = g.make_alpha(xi, i as i64)?;
        let gsub = g.generate(&[alpha_xi, h], DEFAULT_CLOSURE_CAP)?;
        let nsub_grp = g.generate(&[alpha_xi], DEFAULT_CLOSURE_CAP)?;
        ev.expect(&format!("{tag}.G_order"), 3 * nsub as usize, gsub.order());
        ev.expect(&format!("{tag}.N_normal_in_G"), true, nsub_grp.is_normal_in(&gsub));
        let gbar = g.generate(&[alpha_theta, h], DEFAULT_CLOSURE_CAP)?;
        let nbar_grp = g.generate(&[alpha_theta], DEFAULT_CLOSURE_CAP)?;
        ev.info(&format!("{tag}.Gbar_order"), gbar.order());
        ev.info(&format!("{tag}.Nbar_normal_in_Gbar"), nbar_grp.is_normal_in(&gbar));
        ev.info(&format!("{tag}.G_normal_in_Gbar"), gsub.is_normal_in(&gbar));
        let h2 = g.mul(&h, &h);
        let elements: Vec<Projectivity> = (0..nbar)
            .filter(|j| j % 3 != 0)
            .flat_map(|j| {
                let nb = g.pow(&alpha_theta, j as u128);
                [g.mul(&nb, &h), g.mul(&nb, &h2)]
            })
            .collect();
        let per: Vec<(usize, Vec<CPoint>)> = elements
            .par_iter()
            .map(|s| {
                let fp = fixed_points(&g, s)?;
                let on: Vec<CPoint> = fp.points.iter().filter(|(x, on)| *on && x.degree() == 3).map(|(x, _)| *x).collect();
                Ok::<_, Unsupported>((fp.points.len(), on))
            })
            .collect::<Result<_, _>>()?;
        ev.info(&format!("{tag}.elements"), elements.len());
        ev.expect(
            &format!("{tag}.three_fixed_all_on_curve"),
            elements.len(),
            per.iter().filter(|(c, on)| *c == 3 && on.len() == 3).count(),
        );
        let incidence: usize = per.iter().map(|(_, on)| on.len()).sum();
        ev.expect(&format!("{tag}.incidence"), 4 * (q + 1) / 3, incidence as u64);
        let census: Vec<CPoint> = per.iter().flat_map(|(_, on)| on.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
        ev.expect(&format!("{tag}.census_points"), 2 * (q + 1) / 3, census.len() as u64);
        let mut actor = Actor::new(&g);
        actor.prepare(&census)?;
        let pointwise: usize = census
            .par_iter()
            .map(|x| elements.iter().filter(|s| actor.apply(s, x) == *x).count())
            .sum();
        ev.expect(&format!("{tag}.incidence_pointwise"), incidence, pointwise);
        let closed = orbits(&gsub, &census).is_ok();
        ev.expect(&format!("{tag}.census_closed_under_G"), true, closed);
        let orb = orbit_closure(&gsub, &census)?;
        ev.expect(&format!("{tag}.G_orbits"), 2usize, orb.len());
        ev.info(&format!("{tag}.G_orbit_sizes"), orb.iter().map(|o| o.points.len()).collect::<Vec<_>>());
        let quotient_mod3 = orb.len() % 3;
        ev.expect(&format!("{tag}.quotient_fixed_mod3_nonzero"), true, quotient_mod3 != 0);
    }
    Ok(())
}

// ---------------------------------------------------------------- Sylow and ramification

fn run_sylow_census(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let q = get(p, "q");
    need(q == 2 || q == 4, || "q must be 2 or 4".into())?;
    let big_q = q.pow(3);
    let g = Pgu::new(HermitianForm::NormTrace { q: big_q })?;
    let f = g.field().clone();
    let sub = build_field(2, numtheory::prime_power(q).expect("power of two").1)?;
    let map = embed(&sub, &f)?;
    let betas: Vec<Projectivity> = sub
        .elements()
        .filter(|&c| !sub.is_zero(c))
        .map(|c| g.make_beta(map.apply(c)))
        .collect::<Result<_, _>>()?;
    let lambda = f.root_of_unity(q + 1)?;
    let alpha = g.make_alpha_a(lambda)?;
    ev.expect("alpha_is_diag_1_lambda_1", [1, lambda.value(), 1], {
        let m = alpha.matrix();
        [m[0][0], m[1][1], m[2][2]].map(|x| x.value())
    });
    let mut gens = betas;
    gens.push(alpha);
    let grp = g.generate(&gens, DEFAULT_CLOSURE_CAP)?;
    ev.expect("group_order", q * (q + 1), grp.order() as u64);
    ev.expect("unitary", true, grp.is_unitary());
    let census = sylow_census(&grp, 2)?;
    ev.expect("sylow_order", q as usize, census.subgroup_order);
    ev.expect("sylow_count", 1, census.count());
    let ideal = CPoint::rational(&ProjPoint::new(&f, [f.one(), f.zero(), f.zero()])?);
    ev.expect("fixed_points", vec![vec![ideal.coords().map(|x| x.value())]], {
        census.fixed_points.iter().map(|v| v.iter().map(|x| x.coords().map(|c| c.value())).collect::<Vec<_>>()).collect::<Vec<_>>()
    });
    ev.expect("single_orbit", true, census.single_orbit);
    Ok(())
}

fn run_delta_ledger(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let q = get(p, "q");
    let big_q = q.pow(3);
    let g_top = CurveModel::fermat(big_q)?.genus();
    let g_quot = CurveModel::gs(q)?.genus();
    let n = q * (q + 1);
    let delta = expected_delta(g_top, g_quot, n);
    ev.info("top_genus", g_top);
    ev.info("quotient_genus", g_quot);
    let (expected, heavy, sylow_profile, forced): (i128, Vec<(u64, u64)>, Vec<(u64, u64)>, u64) = match q {
        4 => (470, vec![(2, 15)], vec![(2, 5), (4, 10), (5, 4)], 350),
        8 => (7758, vec![(2, 18)], vec![(2, 9), (4, 54), (3, 8)], 4734),
        _ => return Err(Unsupported("q must be 4 or 8".into())),
    };
    ev.expect("delta", expected, delta);
    let delta = delta as u64;
    let h = ledger_feasibility(delta, &heavy, 2, big_q)?;
    ev.info("many_involutions_forced_sum", h.forced_sum);
    ev.expect("many_involutions_feasible", false, h.feasible);
    let s = ledger_feasibility(delta, &sylow_profile, 2, big_q)?;
    ev.expect("sylow_sum", forced, s.forced_sum);
    ev.info("remainder", s.remainder);
    ev.expect("feasible", false, s.feasible);
    ev.note(s.explanation);
    Ok(())
}

// ---------------------------------------------------------------- catalogs and scans

fn run_primovalore(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let q_max = get(p, "q_max");
    need((10..=10_000_000).contains(&q_max), || "q_max must be in 10..=10^7".into())?;
    let r = catalog::primovalore_scan(q_max)?;
    ev.expect("remainder", (2128, -1568), r.remainder);
    ev.expect("direct", vec![1u64, 2, 3, 10], r.direct);
    ev.expect("linear", vec![1u64, 2, 3, 10], r.linear);
    ev.expect("agree", true, r.agree);
    Ok(())
}

fn run_lemmino(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let m = get(p, "m_max");
    need((3..=64).contains(&m), || "m_max must be in 3..=64".into())?;
    let r = catalog::lemmino_scan(m as u32)?;
    ev.info("pairs_checked", r.pairs_checked);
    ev.expect("counterexamples", 0, r.counterexamples.len());
    Ok(())
}

fn run_quattordici(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let m = get(p, "m_max");
    need((3..=63).contains(&m), || "m_max must be in 3..=63".into())?;
    let r = catalog::quattordici_scan(m as u32)?;
    ev.expect("case_iv_survivors", vec![3u32], r.case_iv_survivors);
    ev.expect("other_survivors", 0, r.other_survivors.len());
    Ok(())
}

fn run_secondovalore(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let q = get(p, "q");
    let r = catalog::secondovalore_exclusion(q)?;
    ev.expect("group_order", q * q + q + 1, r.group_order);
    for c in &r.cases {
        if c.method == "geometric" {
            ev.info(&c.label, "geometric");
        } else {
            ev.expect(&c.label, true, c.excluded);
        }
    }
    ev.expect("dickson_cyclic", true, r.dickson_cyclic);
    Ok(())
}

fn lp(f: &FieldCtx, c: &[u64]) -> LinPoly {
    LinPoly::new(f, c.iter().map(|&v| f.elem(v).expect("prime field")).collect())
}

fn run_linpoly_decompose(_: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let f = build_field(2, 1)?;
    let target = lp(&f, &[1, 0, 0, 1]);
    let inner = lp(&f, &[1, 1]);
    let outer = decompose(&f, &target, &inner);
    let expected = lp(&f, &[1, 1, 1]);
    ev.expect("outer", Some(vec![1u64, 1, 1]), outer.as_ref().map(|o| o.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>()));
    ev.expect("round_trip", true, compose(&f, &expected, &inner) == target);
    let t3 = target.associate(Convention::Twisted);
    let prod = inner.associate(Convention::Twisted).mul(&f, &expected.associate(Convention::Twisted));
    ev.expect("associate_factorization", t3.coeffs().to_vec().iter().map(|c| c.value()).collect::<Vec<_>>(), prod.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>());
    ev.expect("right_divides", true, symbolic_divides(&f, &inner, &target, Side::Right));
    ev.expect("x4_plus_x_left_divides", false, symbolic_divides(&f, &lp(&f, &[1, 0, 1]), &target, Side::Left));
    Ok(())
}

fn run_prop1sylow(p: &Params, ev: &mut Ledger) -> Result<(), Unsupported> {
    let q = get(p, "q");
    need(q == 2 || q == 4, || "q must be 2 or 4".into())?;
    let r = linpoly::prop1sylow_scan(q)?;
    ev.info("family_size", r.family_size);
    ev.info("distinct_members", r.distinct_members);
    ev.expect("symbolic_divisors", 0, r.symbolic_divisors);
    ev.expect("conventional_divisors", 0, r.conventional_divisors);
    ev.info("divergences", r.divergences);
    Ok(())
}
