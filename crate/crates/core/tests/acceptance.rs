//! Acceptance criteria 1-10. Prints one line per criterion and exits nonzero
//! when any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::{json, Value};

use maxcurve::ramification::expected_delta;
use maxcurve::verifier::{self, CheckReport, Params, Verdict};

use common::*;

type Outcome = Result<String, String>;

fn run(name: &str, params: &[(&str, u64)]) -> Result<CheckReport, String> {
    let p: Params = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    verifier::run_check(name, &p).map_err(|e| e.to_string())
}

fn passing(name: &str, params: &[(&str, u64)]) -> Result<CheckReport, String> {
    let r = run(name, params)?;
    match r.verdict {
        Verdict::Pass => Ok(r),
        Verdict::Fail => {
            let detail: Vec<String> = r
                .evidence
                .iter()
                .filter(|e| e.matches == Some(false))
                .map(|e| format!("{} = {} (expected {})", e.key, e.computed, e.expected.clone().unwrap_or_default()))
                .collect();
            Err(format!("{name} {params:?}: {}", detail.join("; ")))
        }
        Verdict::Unsupported => Err(format!("{name} {params:?} unsupported: {}", r.note.unwrap_or_default())),
    }
}

fn computed(r: &CheckReport, key: &str) -> Result<Value, String> {
    r.evidence
        .iter()
        .find(|e| e.key == key)
        .map(|e| e.computed.clone())
        .ok_or_else(|| format!("{}: no evidence '{key}'", r.name))
}

fn equal(r: &CheckReport, key: &str, want: Value) -> Result<(), String> {
    let got = computed(r, key)?;
    if got == want {
        Ok(())
    } else {
        Err(format!("{}: {key} = {got}, expected {want}", r.name))
    }
}

fn within(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let out = f()?;
    let el = t.elapsed();
    if el > budget {
        return Err(format!("{out}; took {el:.2?}, budget {budget:.0?}"));
    }
    Ok(out)
}

fn c1() -> Outcome {
    for (q, n) in [(2u64, 9u64), (3, 28), (4, 65), (8, 513)] {
        within(Duration::from_secs(1), || {
            let r = passing("hermitian-count", &[("q", q)])?;
            equal(&r, "fermat_count", json!(n))?;
            equal(&r, "norm_trace_count", json!(n))?;
            Ok(String::new())
        })?;
    }
    Ok("counts 9, 28, 65, 513 for both models".into())
}

fn c2() -> Outcome {
    within(Duration::from_secs(5), || {
        let r = passing("gk-congruence", &[("n", 5)])?;
        equal(&r, "count", json!(3969))?;
        equal(&r, "count_mod3", json!(0))?;
        let r = passing("gk-congruence", &[("n", 7)])?;
        equal(&r, "hasse_weil", json!(65025))?;
        equal(&r, "formula_mod3", json!(0))?;
        Ok("|C_32| = 3969, |C_128| = 65025, both divisible by 3".into())
    })
}

fn c3() -> Outcome {
    within(Duration::from_secs(60), || {
        for (q, n, res) in [(2u64, 113u64, 5u64), (3, 2026, 10), (4, 15617, 17)] {
            let r = passing("gs-congruence", &[("q", q)])?;
            equal(&r, "hasse_weil", json!(n))?;
            equal(&r, "formula_residue", json!(res))?;
            equal(&r, "count", json!(n))?;
            equal(&r, "count_residue", json!(res))?;
        }
        Ok("counts 113, 2026, 15617 enumerated; residues 5, 10, 17".into())
    })
}

fn c4() -> Outcome {
    within(Duration::from_secs(10), || {
        let r = passing("primovalore", &[("q_max", 1_000_000)])?;
        equal(&r, "direct", json!([1, 2, 3, 10]))?;
        equal(&r, "linear", json!([1, 2, 3, 10]))?;
        equal(&r, "remainder", json!([2128, -1568]))?;
        Ok("{1, 2, 3, 10} by both methods up to 10^6".into())
    })
}

fn c5() -> Outcome {
    within(Duration::from_secs(1), || {
        let d = (expected_delta(2016, 90, 20), expected_delta(130816, 1764, 72));
        if d != (470, 7758) {
            return Err(format!("expected_delta gave {d:?}"));
        }
        for (q, sum) in [(4u64, 350u64), (8, 4734)] {
            let r = passing("delta-ledger", &[("q", q)])?;
            equal(&r, "sylow_sum", json!(sum))?;
            equal(&r, "feasible", json!(false))?;
        }
        Ok("delta 470 and 7758, forced sums 350 and 4734, both infeasible".into())
    })
}

fn c6() -> Outcome {
    within(Duration::from_secs(30), || {
        let r = passing("alpha-semiregular", &[("n", 5)])?;
        equal(&r, "order", json!(11))?;
        equal(&r, "semiregular_eigen", json!(true))?;
        equal(&r, "curve_points", json!(32769))?;
        equal(&r, "scan_fixed_incidences", json!(0))?;
        let r = passing("rh-quotient-genus", &[("n", 5)])?;
        equal(&r, "quotient_genus", json!(46))?;
        Ok("order 11 semiregular on 32769 points, quotient genus 46".into())
    })
}

fn c7() -> Outcome {
    within(Duration::from_secs(120), || {
        passing("triangolo-census", &[("n", 9)])?;
        Ok("|I| = 684, 342 points in 2 orbits".into())
    })
}

fn c8() -> Outcome {
    within(Duration::from_secs(1), || {
        let r = passing("lemmino", &[("m_max", 20)])?;
        equal(&r, "counterexamples", json!(0))?;
        let r = passing("quattordici", &[("m_max", 20)])?;
        equal(&r, "case_iv_survivors", json!([3]))?;
        equal(&r, "other_survivors", json!(0))?;
        Ok("no counterexamples; unique case-iv survivor m = 3".into())
    })
}

fn c9() -> Outcome {
    within(Duration::from_secs(60), || {
        let r = passing("linpoly-decompose", &[])?;
        equal(&r, "outer", json!([1, 1, 1]))?;
        let r = passing("prop1sylow-nondiv", &[("q", 4)])?;
        equal(&r, "symbolic_divisors", json!(0))?;
        equal(&r, "conventional_divisors", json!(0))?;
        Ok(format!("X^4+X^2+X; no divisor among {} members", computed(&r, "distinct_members")?))
    })
}

fn prop<S: Strategy>(name: &str, cases: u32, s: S, f: impl Fn(S::Value) -> Prop) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&s, f).map_err(|e| format!("{name}: {e}"))
}

fn c10() -> Outcome {
    let qs = [2u64, 3, 4, 5, 8];
    prop("field axioms", 256, (0..FIELDS.len(), any::<u64>(), any::<u64>(), any::<u64>()), |(i, a, b, c)| field_axioms(i, a, b, c))?;
    prop("polarity", 256, (any::<bool>(), 0..qs.len(), any::<[u64; 3]>()), |(fm, i, s)| polarity_involution(fm, qs[i], s))?;
    prop("orbit-stabilizer", 64, (any::<bool>(), 0..4usize, prop::collection::vec(word(), 1..3)), |(fm, i, g)| {
        orbit_stabilizer(fm, qs[i], &g)
    })?;
    prop("incidence double count", 64, (any::<bool>(), 0..3usize, prop::collection::vec(word(), 1..3)), |(fm, i, g)| {
        incidence_double_count(fm, qs[i], &g)
    })?;
    prop("fixed-point oracle", 64, (any::<bool>(), 0..qs.len(), word()), |(fm, i, w)| fixed_point_oracle(fm, qs[i], &w))?;
    let r = passing("triangolo-census", &[("n", 3)])?;
    for tag in ["A", "B"] {
        let key = format!("{tag}.incidence");
        equal(&r, &format!("{tag}.incidence_pointwise"), computed(&r, &key)?)?;
    }
    let one = run_all_json(1, None);
    for t in [2, 5] {
        if run_all_json(t, None) != one {
            return Err(format!("run_all differs between 1 and {t} threads"));
        }
    }
    Ok(format!("all properties hold; run_all identical on 1, 2, 5 threads ({} reports)", one.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Hermitian point counts", c1),
        ("C_{2^n} counts", c2),
        ("X_q counts and residues", c3),
        ("primovalore scan", c4),
        ("different ledgers", c5),
        ("semiregularity and quotient genus", c6),
        ("triangolo census at n = 9", c7),
        ("integer scans", c8),
        ("linearized algebra", c9),
        ("property suites", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let el = t.elapsed();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{el:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{el:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
