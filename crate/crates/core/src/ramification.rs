//! Riemann-Hurwitz bookkeeping for quotients of Hermitian curves: per-element
//! contributions to the different, its degree, and the quotient genus.

use serde::Serialize;
use thiserror::Error;

use crate::group_action::{fixed_points, ActionError, FixedKind};
use crate::numtheory;
use crate::pgu3::{Pgu, Projectivity, SubgroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RamificationError {
    #[error("the identity has no different contribution")]
    Identity,
    #[error("no contribution rule for elements of order {order} in characteristic {p}")]
    Unsupported { order: u128, p: u64 },
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// Which rule produced a contribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Order coprime to the characteristic: number of fixed points on the curve.
    Tame,
    /// Tame element fixing a secant line pointwise.
    Homology,
    /// Characteristic 2, order 2: `Q + 2`.
    WildInvolution,
    /// Characteristic 2, order 4: `2`.
    WildOrderFour,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub index: usize,
    pub order: u128,
    pub rule: Rule,
    pub value: u64,
}

/// The contribution `i(sigma)` of a nontrivial element acting on the curve of `pgu`.
pub fn i_sigma(pgu: &Pgu, sigma: &Projectivity) -> Result<(u64, Rule), RamificationError> {
    if pgu.is_identity(sigma) {
        return Err(RamificationError::Identity);
    }
    let p = pgu.field().characteristic();
    let order = pgu.order_of(sigma);
    if order % p as u128 != 0 {
        let fp = fixed_points(pgu, sigma)?;
        let value = fp.on_curve_count().expect("nontrivial");
        let rule = match &fp.kind {
            FixedKind::Line(axis) if axis.curve_count == pgu.q() + 1 => Rule::Homology,
            _ => Rule::Tame,
        };
        return Ok((value, rule));
    }
    match (p, order) {
        (2, 2) => Ok((pgu.q() + 2, Rule::WildInvolution)),
        (2, 4) => Ok((2, Rule::WildOrderFour)),
        _ => Err(RamificationError::Unsupported { order, p }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationLedger {
    pub group_order: usize,
    pub records: Vec<Contribution>,
    pub delta: u64,
    pub top_genus: u64,
    /// `1 + (2g - 2 - delta) / (2|G|)` when that is a nonnegative integer.
    pub quotient_genus: Option<u64>,
}

/// `g' = 1 + (2g - 2 - delta) / (2n)`, if integral and nonnegative.
pub fn quotient_genus(g_top: u64, delta: u64, n: u64) -> Option<u64> {
    let num = 2 * g_top as i128 - 2 - delta as i128;
    let den = 2 * n as i128;
    if num % den != 0 {
        return None;
    }
    u64::try_from(1 + num / den).ok()
}

/// Full ledger of `g` acting on its Hermitian curve.
pub fn different_degree(g: &SubgroupSpec) -> Result<RamificationLedger, RamificationError> {
    let pgu = g.pgu();
    let mut records = Vec::with_capacity(g.order().saturating_sub(1));
    for (index, s) in g.elements().iter().enumerate().skip(1) {
        let (value, rule) = i_sigma(pgu, s)?;
        records.push(Contribution { index, order: pgu.order_of(s), rule, value });
    }
    let delta = records.iter().map(|r| r.value).sum();
    let q = pgu.q();
    let top_genus = q * (q - 1) / 2;
    Ok(RamificationLedger {
        group_order: g.order(),
        quotient_genus: quotient_genus(top_genus, delta, g.order() as u64),
        records,
        delta,
        top_genus,
    })
}

/// `(2 g_top - 2) - n (2 g_quot - 2)`.
pub fn expected_delta(g_top: u64, g_quot: u64, n: u64) -> i128 {
    (2 * g_top as i128 - 2) - n as i128 * (2 * g_quot as i128 - 2)
}

/// The values `i(sigma)` may take for an element of the given order on `H_Q`.
pub fn contribution_choices(order: u64, p: u64, big_q: u64) -> Result<Vec<u64>, RamificationError> {
    if numtheory::gcd_u64(order, p) == 1 {
        return Ok(vec![0, 1, 2, 3, big_q + 1]);
    }
    match (p, order) {
        (2, 2) => Ok(vec![big_q + 2]),
        (2, 4) => Ok(vec![2]),
        _ => Err(RamificationError::Unsupported { order: order as u128, p }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Sum of the contributions with a single possible value.
    pub forced_sum: u64,
    /// What the remaining elements would have to contribute.
    pub remainder: i128,
    pub explanation: String,
}

/// Whether contributions allowed by the element profile `(order, count)` can sum to `delta`.
pub fn ledger_feasibility(delta: u64, profile: &[(u64, u64)], p: u64, big_q: u64) -> Result<Feasibility, RamificationError> {
    let mut forced_sum = 0u64;
    let mut free: Vec<(u64, u64, Vec<u64>)> = Vec::new();
    for &(order, count) in profile {
        let choices = contribution_choices(order, p, big_q)?;
        if choices.len() == 1 {
            forced_sum += choices[0] * count;
        } else {
            free.push((order, count, choices));
        }
    }
    let remainder = delta as i128 - forced_sum as i128;
    if remainder < 0 {
        return Ok(Feasibility {
            feasible: false,
            forced_sum,
            remainder,
            explanation: format!("forced contributions sum to {forced_sum} > {delta}"),
        });
    }
    let target = remainder as usize;
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for (_, count, choices) in &free {
        for _ in 0..*count {
            let mut next = vec![false; target + 1];
            for (s, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
                for &c in choices {
                    if let Some(slot) = next.get_mut(s + c as usize) {
                        *slot = true;
                    }
                }
            }
            reach = next;
        }
    }
    let feasible = reach[target];
    let free_desc: Vec<String> = free
        .iter()
        .map(|(o, c, ch)| format!("{c} of order {o} in {ch:?}"))
        .collect();
    let explanation = format!(
        "forced {forced_sum}, remaining {remainder} from [{}]: {}",
        free_desc.join(", "),
        if feasible { "reachable" } else { "unreachable" }
    );
    Ok(Feasibility { feasible, forced_sum, remainder, explanation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgu3::CycleShape;
    use crate::proj3::HermitianForm;

    #[test]
    fn expected_deltas() {
        assert_eq!(expected_delta(2016, 90, 20), 470);
        assert_eq!(expected_delta(130816, 1764, 72), 7758);
        assert_eq!(expected_delta(46, 46, 1), 0);
    }

    #[test]
    fn sylow_profiles_are_infeasible() {
        let inv = ledger_feasibility(470, &[(2, 15)], 2, 64).unwrap();
        assert!(!inv.feasible);
        assert_eq!(inv.forced_sum, 990);
        let z4 = ledger_feasibility(470, &[(2, 5), (4, 10), (5, 4)], 2, 64).unwrap();
        assert_eq!(z4.forced_sum, 350);
        assert_eq!(z4.remainder, 120);
        assert!(!z4.feasible);
        let quat = ledger_feasibility(7758, &[(2, 9), (4, 54), (3, 8)], 2, 512).unwrap();
        assert_eq!(quat.forced_sum, 4734);
        assert!(!quat.feasible);
        // sanity: a reachable target
        assert!(ledger_feasibility(350 + 65 + 3, &[(2, 5), (4, 10), (5, 4)], 2, 64).unwrap().feasible);
        assert!(ledger_feasibility(10, &[(8, 1)], 2, 64).is_err());
    }

    #[test]
    fn tame_semiregular_group_has_zero_delta() {
        let g = Pgu::new(HermitianForm::Fermat { q: 32 }).unwrap();
        let f = g.field().clone();
        let grp = g.generate(&[g.make_alpha(f.root_of_unity(11).unwrap(), 2).unwrap()], 100).unwrap();
        let ledger = different_degree(&grp).unwrap();
        assert_eq!(ledger.delta, 0);
        assert_eq!(ledger.quotient_genus, Some(46));
        let trivial = different_degree(&g.generate(&[], 1).unwrap()).unwrap();
        assert_eq!(trivial.quotient_genus, Some(496));
    }

    #[test]
    fn contribution_rules() {
        let g = Pgu::new(HermitianForm::NormTrace { q: 4 }).unwrap();
        let f = g.field().clone();
        let c = f.elements().find(|&c| !f.is_zero(c) && f.is_zero(f.add(f.pow(c, 4), c))).unwrap();
        assert_eq!(i_sigma(&g, &g.make_beta(c).unwrap()).unwrap(), (6, Rule::WildInvolution));
        let w = f.root_of_unity(5).unwrap();
        let hom = g.make_alpha_a(w).unwrap();
        assert!(g.is_unitary(&hom.matrix()));
        let (v, rule) = i_sigma(&g, &hom).unwrap();
        assert_eq!((v, rule), (5, Rule::Homology));
        assert_eq!(i_sigma(&g, &g.identity()).unwrap_err(), RamificationError::Identity);
        let fm = Pgu::new(HermitianForm::Fermat { q: 32 }).unwrap();
        let ff = fm.field().clone();
        let a = fm.make_alpha(ff.root_of_unity(11).unwrap(), 2).unwrap();
        assert_eq!(i_sigma(&fm, &a).unwrap(), (0, Rule::Tame));
        let h = fm.make_three_cycle(CycleShape::A, ff.one(), ff.root_of_unity(33).unwrap()).unwrap();
        assert_eq!(i_sigma(&fm, &h).unwrap(), (3, Rule::Tame));
    }

    #[test]
    fn tame_values_match_scan_at_small_q() {
        use crate::proj3::plane_points;
        for q in [2u64, 4, 8] {
            let g = Pgu::new(HermitianForm::Fermat { q }).unwrap();
            let f = g.field().clone();
            let z = f.root_of_unity(q + 1).unwrap();
            let grp = g.generate(&[g.make_alpha(z, 1).unwrap(), g.make_alpha(z, 0).unwrap()], 10_000).unwrap();
            let curve: Vec<_> = plane_points(&f).filter(|p| g.form().on_curve(&f, p.coords())).collect();
            for s in &grp.elements()[1..] {
                let (v, _) = i_sigma(&g, s).unwrap();
                let scan = curve.iter().filter(|p| g.apply(s, p) == **p).count() as u64;
                assert_eq!(v, scan);
            }
        }
    }
}
