//! Order catalogs for the maximal subgroups of PSU(3,q) and the subgroups of
//! PGL(2,q), plus the integer scans that exclude candidate group orders.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::numtheory::{self, divisors, gcd_u64, is_prime, is_square_in_fq, prime_power};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Source {
    #[serde(rename = "MH")]
    Mh,
    #[serde(rename = "Di")]
    Di,
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub label: String,
    pub source: Source,
    pub formula: &'static str,
    pub condition: &'static str,
    pub params: BTreeMap<&'static str, u64>,
    #[serde(serialize_with = "ser_big")]
    pub order: BigUint,
}

impl CatalogEntry {
    fn new(source: Source, case: &str, formula: &'static str, condition: &'static str, order: BigUint) -> Self {
        let prefix = match source {
            Source::Mh => "MH",
            Source::Di => "Di",
        };
        CatalogEntry {
            label: format!("{prefix}-{case}"),
            source,
            formula,
            condition,
            params: BTreeMap::new(),
            order,
        }
    }

    fn with(mut self, key: &'static str, v: u64) -> Self {
        self.params.insert(key, v);
        self
    }

    /// Roman-numeral case without the source prefix.
    pub fn case(&self) -> &str {
        self.label.split_once('-').map(|(_, c)| c).unwrap_or(&self.label)
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pow(b: u64, e: u32) -> BigUint {
    num_traits::pow(big(b), e as usize)
}

fn split(q: u64) -> Result<(u64, u32), CatalogError> {
    prime_power(q).ok_or(CatalogError::NotPrimePower(q))
}

/// `|PSU(3,Q)| = Q^3 (Q^2-1)(Q^3+1) / gcd(3, Q+1)`.
pub fn psu3_order(p: u64, e: u32) -> BigUint {
    let qq = pow(p, e);
    let d = (&qq + 1u32) % 3u32;
    let d = if d.is_zero() { 3u32 } else { 1u32 };
    let q2 = &qq * &qq;
    let q3 = &q2 * &qq;
    &q3 * (&q2 - 1u32) * (&q3 + 1u32) / d
}

/// `|PGU(3,Q)| = Q^3 (Q^2-1)(Q^3+1)`.
pub fn pgu3_order(p: u64, e: u32) -> BigUint {
    let qq = pow(p, e);
    let q2 = &qq * &qq;
    let q3 = &q2 * &qq;
    &q3 * (&q2 - 1u32) * (&q3 + 1u32)
}

fn is_odd_prime(n: u32) -> bool {
    n >= 3 && is_prime(n as u64)
}

/// Applicable maximal-subgroup cases of `PSU(3,q)` with evaluated orders.
pub fn mh_orders(q: u64) -> Result<Vec<CatalogEntry>, CatalogError> {
    let (p, k) = split(q)?;
    let qb = big(q);
    let d = if (q as u128 + 1) % 3 == 0 { 3u32 } else { 1u32 };
    let q2m1 = &qb * &qb - 1u32;
    let mut out = Vec::new();
    out.push(CatalogEntry::new(
        Source::Mh,
        "i",
        "q^3(q^2-1)/d",
        "always",
        &qb * &qb * &qb * &q2m1 / d,
    ));
    out.push(CatalogEntry::new(
        Source::Mh,
        "ii",
        "q(q-1)(q+1)^2/d",
        "always",
        &qb * (&qb - 1u32) * (&qb + 1u32) * (&qb + 1u32) / d,
    ));
    out.push(CatalogEntry::new(
        Source::Mh,
        "iii",
        "6(q+1)^2/d",
        "always",
        big(6) * (&qb + 1u32) * (&qb + 1u32) / d,
    ));
    out.push(CatalogEntry::new(
        Source::Mh,
        "iv",
        "3(q^2-q+1)/d",
        "always",
        big(3) * (&qb * &qb - &qb + 1u32) / d,
    ));
    if p > 2 {
        out.push(CatalogEntry::new(Source::Mh, "v", "|PGL(2,q)|", "p>2", &qb * &q2m1));
        for m in (1..k).filter(|m| k % m == 0 && (k / m) % 2 == 1) {
            out.push(
                CatalogEntry::new(Source::Mh, "vi", "|PSU(3,p^m)|", "p>2, m|k, k/m odd", psu3_order(p, m))
                    .with("m", m as u64),
            );
        }
        if d == 3 {
            for m in (1..k).filter(|m| k % m == 0 && (k / m) % 2 == 1 && (k / m) % 3 == 0) {
                out.push(
                    CatalogEntry::new(
                        Source::Mh,
                        "vii",
                        "3|PSU(3,p^m)|",
                        "p>2, m|k, k/m odd, 3|k/m, 3|q+1",
                        big(3) * psu3_order(p, m),
                    )
                    .with("m", m as u64),
                );
            }
        }
        if (q as u128 + 1) % 9 == 0 {
            out.push(CatalogEntry::new(Source::Mh, "viii", "216", "p>2, 9|q+1", big(216)));
        }
        if d == 3 {
            out.push(CatalogEntry::new(Source::Mh, "viii", "72", "p>2, 3|q+1", big(72)));
            out.push(CatalogEntry::new(Source::Mh, "viii", "36", "p>2, 3|q+1", big(36)));
        }
        if p == 7 || !is_square_in_fq(-7, p, k) {
            out.push(CatalogEntry::new(
                Source::Mh,
                "ix",
                "|PSL(2,7)|",
                "p>2, p=7 or -7 a nonsquare in F_q",
                big(168),
            ));
        }
        let cube_roots = (q - 1) % 3 == 0;
        if (p == 3 && k % 2 == 0) || (is_square_in_fq(5, p, k) && !cube_roots) {
            out.push(CatalogEntry::new(
                Source::Mh,
                "x",
                "|A6|",
                "p>2, p=3 and k even, or 5 a square in F_q and no cube root of unity in F_q",
                big(360),
            ));
        }
        if p == 5 && k % 2 == 1 {
            out.push(CatalogEntry::new(Source::Mh, "xi", "|S6|", "p=5, k odd", big(720)));
            out.push(CatalogEntry::new(Source::Mh, "xii", "|A7|", "p=5, k odd", big(2520)));
        }
    } else {
        for m in (1..k).filter(|m| k % m == 0 && is_odd_prime(k / m)) {
            out.push(
                CatalogEntry::new(Source::Mh, "xiii", "|PSU(3,2^m)|", "p=2, m|k, k/m an odd prime", psu3_order(2, m))
                    .with("m", m as u64),
            );
        }
        if k % 3 == 0 && (k / 3) % 2 == 1 {
            let m = k / 3;
            out.push(
                CatalogEntry::new(Source::Mh, "xiv", "3|PSU(3,2^m)|", "p=2, k=3m, m odd", big(3) * psu3_order(2, m))
                    .with("m", m as u64),
            );
        }
        if k == 1 {
            out.push(CatalogEntry::new(Source::Mh, "xv", "36", "p=2, k=1", big(36)));
        }
    }
    Ok(out)
}

/// Entries whose order times `multiplier` is divisible by `m`.
pub fn order_excluded(m: &BigUint, q: u64, multiplier: u64) -> Result<Vec<CatalogEntry>, CatalogError> {
    if m.is_zero() {
        return Err(CatalogError::Precondition("m must be positive".into()));
    }
    Ok(mh_orders(q)?
        .into_iter()
        .filter(|e| (&e.order * multiplier).is_multiple_of(m))
        .collect())
}

fn psl2_order(p: u64, f: u32) -> BigUint {
    let r = pow(p, f);
    let g = if p == 2 { 1u32 } else { 2u32 };
    &r * (&r * &r - 1u32) / g
}

/// Subgroup classes of `PGL(2,q)`, one entry per parameter value.
pub fn dickson_orders(q: u64) -> Result<Vec<CatalogEntry>, CatalogError> {
    let (p, k) = split(q)?;
    let mut out = Vec::new();
    let mut hs: Vec<u64> = divisors(q - 1).into_iter().chain(divisors(q + 1)).collect();
    hs.sort_unstable();
    hs.dedup();
    for &h in &hs {
        out.push(CatalogEntry::new(Source::Di, "i", "h", "h | q-1 or h | q+1", big(h)).with("h", h));
    }
    for f in 1..=k {
        out.push(CatalogEntry::new(Source::Di, "ii", "p^f", "f <= k", pow(p, f)).with("f", f as u64));
    }
    for &h in &hs {
        out.push(CatalogEntry::new(Source::Di, "iii", "2h", "h | q-1 or h | q+1", big(2 * h)).with("h", h));
    }
    if p > 2 || k % 2 == 0 {
        out.push(CatalogEntry::new(Source::Di, "iv", "|A4|", "p>2, or p=2 and k even", big(12)));
    }
    if (q as u128 * q as u128 - 1) % 16 == 0 {
        out.push(CatalogEntry::new(Source::Di, "v", "|S4|", "16 | q^2-1", big(24)));
    }
    if p == 5 || (q as u128 * q as u128 - 1) % 5 == 0 {
        out.push(CatalogEntry::new(Source::Di, "vi", "|A5|", "p=5 or 5 | q^2-1", big(60)));
    }
    for f in 1..=k {
        for h in divisors(q - 1) {
            out.push(
                CatalogEntry::new(Source::Di, "vii", "p^f h", "f <= k, h | q-1", pow(p, f) * h)
                    .with("f", f as u64)
                    .with("h", h),
            );
        }
    }
    for f in (1..=k).filter(|f| k % f == 0) {
        out.push(CatalogEntry::new(Source::Di, "viii", "|PSL(2,p^f)|", "f | k", psl2_order(p, f)).with("f", f as u64));
    }
    for f in (1..=k).filter(|f| k % f == 0) {
        let r = pow(p, f);
        out.push(CatalogEntry::new(Source::Di, "ix", "|PGL(2,p^f)|", "f | k", &r * (&r * &r - 1u32)).with("f", f as u64));
    }
    Ok(out)
}

/// Dickson classes of `PGL(2,q)` whose order is exactly `n`.
pub fn dickson_classes_of_order(q: u64, n: u64) -> Result<Vec<CatalogEntry>, CatalogError> {
    let n = big(n);
    Ok(dickson_orders(q)?.into_iter().filter(|e| e.order == n).collect())
}

/// True when every subgroup of `PGL(2,q)` of order `n` is cyclic, i.e. only
/// case i carries that order. Vacuously true when no class has order `n`.
pub fn order_forces_cyclic(q: u64, n: u64) -> Result<bool, CatalogError> {
    Ok(dickson_classes_of_order(q, n)?.iter().all(|e| e.case() == "i"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemminoViolation {
    pub p_prime: u64,
    pub m: u32,
    pub case: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemminoReport {
    pub m_max: u32,
    pub pairs_checked: u64,
    pub counterexamples: Vec<LemminoViolation>,
}

/// `sum_{i<p'} (-1)^i 2^{im}`, which equals `(2^{p'm}+1)/(2^m+1)`.
pub fn alternating_sum(p_prime: u64, m: u32) -> BigUint {
    let base = pow(2, m);
    let mut acc = BigInt::zero();
    let mut term = BigInt::one();
    for i in 0..p_prime {
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        term *= BigInt::from(base.clone());
    }
    acc.to_biguint().expect("alternating sum is positive")
}

/// Checks the three impossibility claims for subfield cases ii, iii, iv over
/// odd primes `p' <= max(m_max, 5)` and odd `m <= m_max`, restricted to
/// `p' >= 5` or `p' = 3, m >= 5`.
pub fn lemmino_scan(m_max: u32) -> Result<LemminoReport, CatalogError> {
    if m_max < 3 {
        return Err(CatalogError::Precondition("m_max must be at least 3".into()));
    }
    let primes: Vec<u64> = (3..=u64::from(m_max.max(5))).filter(|&x| is_prime(x)).collect();
    let mut pairs = Vec::new();
    for &pp in &primes {
        for m in (1..=m_max).filter(|m| m % 2 == 1) {
            if pp >= 5 || m >= 5 {
                pairs.push((pp, m));
            }
        }
    }
    let counterexamples: Vec<LemminoViolation> = pairs
        .par_iter()
        .flat_map_iter(|&(pp, m)| {
            let two_m = pow(2, m);
            let g = (pow(2, m * pp as u32) + 1u32) / 3u32;
            let sum = alternating_sum(pp, m);
            let mut bad = Vec::new();
            debug_assert_eq!(&sum * (&two_m + 1u32), pow(2, m * pp as u32) + 1u32);
            let ii = &two_m * (&two_m - 1u32) * (&two_m + 1u32) * (&two_m + 1u32) / 3u32;
            if ii.is_multiple_of(&g) || (&two_m * &two_m - 1u32).is_multiple_of(&sum) {
                bad.push("ii");
            }
            if sum <= big(3) * (&two_m + 1u32) || (big(2) * (&two_m + 1u32) * (&two_m + 1u32)).is_multiple_of(&g) {
                bad.push("iii");
            }
            if g <= &two_m * &two_m - &two_m + 1u32 {
                bad.push("iv");
            }
            bad.into_iter().map(move |case| LemminoViolation { p_prime: pp, m, case })
        })
        .collect();
    Ok(LemminoReport {
        m_max,
        pairs_checked: pairs.len() as u64,
        counterexamples,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuattordiciRow {
    pub m: u32,
    #[serde(serialize_with = "ser_big")]
    pub group_order: BigUint,
    pub survivors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuattordiciReport {
    pub m_max: u32,
    pub rows: Vec<QuattordiciRow>,
    /// Values of `m` for which case iv survives.
    pub case_iv_survivors: Vec<u32>,
    /// Survivors outside case iv (expected empty).
    pub other_survivors: Vec<(u32, String)>,
}

/// For odd `m` in `3..=m_max`: which maximal subgroups of `PSU(3,2^m)`, with
/// orders multiplied by 3, have order divisible by `(2^{3m}+1)/3`.
pub fn quattordici_scan(m_max: u32) -> Result<QuattordiciReport, CatalogError> {
    if m_max < 3 {
        return Err(CatalogError::Precondition("m_max must be at least 3".into()));
    }
    if m_max > 63 {
        return Err(CatalogError::Precondition("m_max must be at most 63".into()));
    }
    let ms: Vec<u32> = (3..=m_max).filter(|m| m % 2 == 1).collect();
    let rows: Vec<QuattordiciRow> = ms
        .par_iter()
        .map(|&m| {
            let g = (pow(2, 3 * m) + 1u32) / 3u32;
            let survivors = order_excluded(&g, 1u64 << m, 3)
                .expect("power of two")
                .into_iter()
                .map(|e| e.label)
                .collect();
            QuattordiciRow { m, group_order: g, survivors }
        })
        .collect();
    let mut case_iv_survivors = Vec::new();
    let mut other_survivors = Vec::new();
    for r in &rows {
        for s in &r.survivors {
            if s == "MH-iv" {
                case_iv_survivors.push(r.m);
            } else {
                other_survivors.push((r.m, s.clone()));
            }
        }
    }
    Ok(QuattordiciReport {
        m_max,
        rows,
        case_iv_survivors,
        other_survivors,
    })
}

/// Remainder of `q^9(q^9+1)(q^6-1)` modulo `q^2+q+2` as `(a, b)` meaning `a q + b`,
/// by integer polynomial long division.
pub fn primovalore_remainder() -> (i64, i64) {
    // coefficients, lowest degree first
    let mut f = vec![0i128; 25];
    // q^9 (q^9 + 1)(q^6 - 1) = q^24 + q^15 - q^18 - q^9
    f[24] += 1;
    f[15] += 1;
    f[18] -= 1;
    f[9] -= 1;
    for deg in (2..f.len()).rev() {
        let c = f[deg];
        if c != 0 {
            f[deg] = 0;
            f[deg - 1] -= c;
            f[deg - 2] -= 2 * c;
        }
    }
    (f[1] as i64, f[0] as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimovaloreReport {
    pub q_max: u64,
    pub direct: Vec<u64>,
    pub linear: Vec<u64>,
    pub remainder: (i64, i64),
    pub agree: bool,
}

/// `{ q <= q_max : q^2+q+2 | q^9(q^9+1)(q^6-1) }`, computed directly and via the
/// linear remainder.
pub fn primovalore_scan(q_max: u64) -> Result<PrimovaloreReport, CatalogError> {
    if q_max < 10 {
        return Err(CatalogError::Precondition("q_max must be at least 10".into()));
    }
    let (a, b) = primovalore_remainder();
    let direct: Vec<u64> = (1..=q_max)
        .into_par_iter()
        .filter(|&q| {
            let qb = big(q);
            let q3 = &qb * &qb * &qb;
            let q6 = &q3 * &q3;
            let q9 = &q6 * &q3;
            let n = &q9 * (&q9 + 1u32) * (&q6 - 1u32);
            n.is_multiple_of(&(&qb * &qb + &qb + 2u32))
        })
        .collect();
    let linear: Vec<u64> = (1..=q_max)
        .filter(|&q| {
            let m = q as i128 * q as i128 + q as i128 + 2;
            (a as i128 * q as i128 + b as i128).rem_euclid(m) == 0
        })
        .collect();
    let agree = direct == linear;
    Ok(PrimovaloreReport {
        q_max,
        direct,
        linear,
        remainder: (a, b),
        agree,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseVerdict {
    pub label: String,
    pub method: &'static str,
    pub excluded: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecondovaloreReport {
    pub q: u64,
    pub big_q: u64,
    pub group_order: u64,
    pub cases: Vec<CaseVerdict>,
    /// Whether every subgroup of `PGL(2,Q^2)` of order `|G|` is cyclic.
    pub dickson_cyclic: bool,
    pub excluded_by_order: bool,
}

const GEOMETRIC_CASES: [&str; 3] = ["i", "ii", "v"];

/// Order-theoretic part of excluding a group of order `q^2+q+1` in `PSU(3,q^3)`.
/// Cases i, ii, v are argued geometrically and are only listed; subfield cases
/// are tested against the catalog of `PSU(3,p^m)` with multipliers 1 and 3.
pub fn secondovalore_exclusion(q: u64) -> Result<SecondovaloreReport, CatalogError> {
    let (p, k) = split(q)?;
    let big_q = numtheory::checked_pow(q, 3)
        .filter(|&x| x <= 1 << 21)
        .ok_or_else(|| CatalogError::Precondition(format!("q={q} too large")))?;
    let n = q * q + q + 1;
    let nb = big(n);
    let mut cases = Vec::new();
    for e in mh_orders(big_q)? {
        let case = e.case().to_string();
        let v = if GEOMETRIC_CASES.contains(&case.as_str()) {
            CaseVerdict {
                label: e.label.clone(),
                method: "geometric",
                excluded: false,
                note: "order divisible; excluded by fixed-point argument".into(),
            }
        } else if let Some(&m) = e.params.get("m") {
            let sub_q = p.pow(m as u32);
            let hits: Vec<String> = [1u64, 3]
                .iter()
                .flat_map(|&mult| {
                    order_excluded(&nb, sub_q, mult)
                        .expect("prime power")
                        .into_iter()
                        .map(move |s| format!("{}x{}", s.label, mult))
                })
                .collect();
            CaseVerdict {
                label: e.label.clone(),
                method: "subfield",
                excluded: hits.is_empty(),
                note: if hits.is_empty() {
                    format!("no maximal subgroup of PSU(3,{sub_q}) has order divisible by {n}, even times 3")
                } else {
                    format!("divisible in PSU(3,{sub_q}): {}", hits.join(","))
                },
            }
        } else {
            let excluded = !e.order.is_multiple_of(&nb);
            CaseVerdict {
                label: e.label.clone(),
                method: "order",
                excluded,
                note: format!("{} mod {} = {}", e.order, n, &e.order % n),
            }
        };
        cases.push(v);
    }
    let excluded_by_order = cases.iter().filter(|c| c.method != "geometric").all(|c| c.excluded);
    let dickson_cyclic = if k <= 3 { order_forces_cyclic(big_q * big_q, n)? } else { false };
    Ok(SecondovaloreReport {
        q,
        big_q,
        group_order: n,
        cases,
        dickson_cyclic,
        excluded_by_order,
    })
}

/// `gcd(q+1, 3)`.
pub fn d_factor(q: u64) -> u64 {
    gcd_u64(q + 1, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(v: &'a [CatalogEntry], label: &str) -> Vec<&'a CatalogEntry> {
        v.iter().filter(|e| e.label == label).collect()
    }

    #[test]
    fn mh_examples() {
        let c5 = mh_orders(5).unwrap();
        assert_eq!(find(&c5, "MH-i")[0].order, big(1000));
        let c8 = mh_orders(8).unwrap();
        assert_eq!(find(&c8, "MH-iv")[0].order, big(57));
        let c2 = mh_orders(2).unwrap();
        assert_eq!(find(&c2, "MH-xv")[0].order, big(36));
        assert!(find(&c8, "MH-xv").is_empty());
        assert_eq!(mh_orders(10), Err(CatalogError::NotPrimePower(10)));
    }

    #[test]
    fn formula_strings_transcribed() {
        let c = mh_orders(4).unwrap();
        assert_eq!(find(&c, "MH-ii")[0].formula, "q(q-1)(q+1)^2/d");
        assert_eq!(find(&c, "MH-iii")[0].formula, "6(q+1)^2/d");
        assert_eq!(find(&c, "MH-iv")[0].formula, "3(q^2-q+1)/d");
    }

    #[test]
    fn orders_divide_psu() {
        for q in [2u64, 3, 4, 5, 8, 32, 9, 25, 27, 49, 125, 512] {
            let (p, k) = prime_power(q).unwrap();
            let total = psu3_order(p, k);
            for e in mh_orders(q).unwrap() {
                assert!(total.is_multiple_of(&e.order), "q={q} {} {}", e.label, e.order);
            }
        }
    }

    #[test]
    fn odd_characteristic_cases() {
        let c5 = mh_orders(5).unwrap();
        let labels: Vec<_> = c5.iter().map(|e| e.label.as_str()).collect();
        for l in ["MH-v", "MH-viii", "MH-ix", "MH-x", "MH-xi", "MH-xii"] {
            assert!(labels.contains(&l), "{l}");
        }
        let c125 = mh_orders(125).unwrap();
        let vi = find(&c125, "MH-vi");
        assert_eq!(vi.len(), 1);
        assert_eq!(vi[0].order, psu3_order(5, 1));
        let vii = find(&c125, "MH-vii");
        assert_eq!(vii[0].order, big(3) * psu3_order(5, 1));
    }

    #[test]
    fn characteristic_two_subfield_cases() {
        let c8 = mh_orders(8).unwrap();
        assert_eq!(find(&c8, "MH-xiii")[0].order, big(72));
        assert_eq!(find(&c8, "MH-xiv")[0].order, big(216));
        let c4 = mh_orders(4).unwrap();
        assert!(find(&c4, "MH-xiii").is_empty() && find(&c4, "MH-xiv").is_empty());
    }

    #[test]
    fn order_exclusion() {
        assert_eq!(order_excluded(&big(1), 4, 1).unwrap().len(), mh_orders(4).unwrap().len());
        let s: Vec<_> = order_excluded(&big(21), 4, 1).unwrap().into_iter().map(|e| e.label).collect();
        assert!(!s.contains(&"MH-iii".to_string()) && !s.contains(&"MH-iv".to_string()));
        let s: Vec<_> = order_excluded(&big(171), 8, 3).unwrap().into_iter().map(|e| e.label).collect();
        assert_eq!(s, vec!["MH-iv"]);
    }

    #[test]
    fn dickson_small() {
        let d4 = dickson_orders(4).unwrap();
        let cyc: Vec<u64> = d4.iter().filter(|e| e.case() == "i").map(|e| e.order.to_u64().unwrap()).collect();
        assert_eq!(cyc, vec![1, 3, 5]);
        assert!(d4.iter().any(|e| e.label == "Di-vi"));
        assert!(d4.iter().any(|e| e.label == "Di-iv"));
        assert!(!dickson_orders(8).unwrap().iter().any(|e| e.label == "Di-iv"));
        assert!(order_forces_cyclic(4096, 21).unwrap());
        assert!(order_forces_cyclic(1 << 18, 171).unwrap());
        assert!(!order_forces_cyclic(4, 12).unwrap());
    }

    #[test]
    fn dickson_orders_divide_pgl() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let total = big(q) * (big(q) * big(q) - 1u32);
            for e in dickson_orders(q).unwrap() {
                assert!(total.is_multiple_of(&e.order), "q={q} {}", e.label);
            }
        }
    }

    #[test]
    fn alternating_sums() {
        assert_eq!(alternating_sum(3, 5), big(993));
        assert_eq!(alternating_sum(5, 1), big(11));
    }

    #[test]
    fn lemmino_clean() {
        let r = lemmino_scan(20).unwrap();
        assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
        assert!(r.pairs_checked > 20);
    }

    #[test]
    fn quattordici_only_m3() {
        let r = quattordici_scan(20).unwrap();
        assert_eq!(r.case_iv_survivors, vec![3]);
        assert!(r.other_survivors.is_empty(), "{:?}", r.other_survivors);
        assert_eq!(r.rows[0].group_order, big(171));
    }

    #[test]
    fn primovalore_remainder_is_linear() {
        assert_eq!(primovalore_remainder(), (2128, -1568));
        assert_eq!((2128 * 10 - 1568) % 112, 0);
        assert_ne!((2128 * 4 - 1568) % 22, 0);
    }

    #[test]
    fn primovalore_small() {
        let r = primovalore_scan(5000).unwrap();
        assert!(r.agree);
        assert_eq!(r.direct, vec![1, 2, 3, 10]);
    }

    #[test]
    fn secondovalore_small() {
        for q in [2u64, 4] {
            let r = secondovalore_exclusion(q).unwrap();
            assert!(r.excluded_by_order, "q={q}: {:?}", r.cases);
            assert!(r.dickson_cyclic);
        }
        let r = secondovalore_exclusion(4).unwrap();
        assert_eq!(r.group_order, 21);
        assert!(r.cases.iter().any(|c| c.label == "MH-xiii" && c.excluded));
    }

    #[test]
    fn d_values() {
        assert_eq!(d_factor(2), 3);
        assert_eq!(d_factor(4), 1);
        assert_eq!(d_factor(512), 3);
    }
}
