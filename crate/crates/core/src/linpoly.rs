//! Linearized polynomials `sum c_i X^{p^i}` over a finite field: evaluation,
//! kernels, composition and skew division, and their `p`-associates.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{build_field, poly, FieldCtx, Fe, GfError};
use crate::numtheory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinPolyError {
    #[error("element set is not an additive subgroup")]
    NotSubgroup,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `sum_i coeffs[i] X^{p^i}`; trailing zero coefficients are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinPoly {
    coeffs: Vec<Fe>,
}

impl LinPoly {
    pub fn new(f: &FieldCtx, coeffs: Vec<Fe>) -> Self {
        LinPoly { coeffs: poly::trim(f, coeffs) }
    }

    /// `X^{p^i}`.
    pub fn monomial(f: &FieldCtx, c: Fe, i: usize) -> Self {
        let mut coeffs = vec![f.zero(); i + 1];
        coeffs[i] = c;
        Self::new(f, coeffs)
    }

    pub fn identity(f: &FieldCtx) -> Self {
        Self::monomial(f, f.one(), 0)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `i` with a nonzero coefficient; the degree is `p^i`.
    pub fn p_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree(&self, f: &FieldCtx) -> Option<u128> {
        self.p_degree().map(|d| (f.characteristic() as u128).pow(d as u32))
    }

    pub fn eval(&self, f: &FieldCtx, x: Fe) -> Fe {
        let mut acc = f.zero();
        let mut xp = x;
        for &c in &self.coeffs {
            acc = f.add(acc, f.mul(c, xp));
            xp = f.frobenius(xp, 1);
        }
        acc
    }

    pub fn add(&self, f: &FieldCtx, other: &LinPoly) -> LinPoly {
        LinPoly::new(f, poly::add(f, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, f: &FieldCtx, other: &LinPoly) -> LinPoly {
        LinPoly::new(f, poly::sub(f, &self.coeffs, &other.coeffs))
    }

    /// Ordinary associate `sum c_i t^i`.
    pub fn associate(&self, convention: Convention) -> AssociatePoly {
        AssociatePoly { coeffs: self.coeffs.clone(), convention }
    }
}

/// Power of Frobenius on coefficients, negative exponents allowed.
fn frob(f: &FieldCtx, c: Fe, i: i64) -> Fe {
    let k = f.degree() as i64;
    f.frobenius(c, i.rem_euclid(k) as u32)
}

/// `outer(inner(X))`.
pub fn compose(f: &FieldCtx, outer: &LinPoly, inner: &LinPoly) -> LinPoly {
    if outer.is_zero() || inner.is_zero() {
        return LinPoly::new(f, Vec::new());
    }
    let mut out = vec![f.zero(); outer.coeffs.len() + inner.coeffs.len() - 1];
    for (i, &a) in outer.coeffs.iter().enumerate() {
        if f.is_zero(a) {
            continue;
        }
        for (j, &b) in inner.coeffs.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(a, frob(f, b, i as i64)));
        }
    }
    LinPoly::new(f, out)
}

/// `m = quotient o divisor + remainder` with `deg remainder < deg divisor`.
pub fn right_divrem(f: &FieldCtx, m: &LinPoly, divisor: &LinPoly) -> Result<(LinPoly, LinPoly), LinPolyError> {
    let dl = divisor.p_degree().ok_or(LinPolyError::ZeroDivisor)?;
    let lead = divisor.coeffs[dl];
    let mut rem = m.clone();
    let mut quo = vec![f.zero(); m.coeffs.len().saturating_sub(dl)];
    while let Some(dr) = rem.p_degree().filter(|&d| d >= dl) {
        let d = dr - dl;
        let c = f.div(rem.coeffs[dr], frob(f, lead, d as i64)).expect("nonzero lead");
        quo[d] = c;
        rem = rem.sub(f, &compose(f, &LinPoly::monomial(f, c, d), divisor));
    }
    Ok((LinPoly::new(f, quo), rem))
}

/// `m = divisor o quotient + remainder` with `deg remainder < deg divisor`.
pub fn left_divrem(f: &FieldCtx, m: &LinPoly, divisor: &LinPoly) -> Result<(LinPoly, LinPoly), LinPolyError> {
    let dl = divisor.p_degree().ok_or(LinPolyError::ZeroDivisor)?;
    let lead = divisor.coeffs[dl];
    let mut rem = m.clone();
    let mut quo = vec![f.zero(); m.coeffs.len().saturating_sub(dl)];
    while let Some(dr) = rem.p_degree().filter(|&d| d >= dl) {
        let d = dr - dl;
        // lead * c^{p^dl} = top coefficient
        let c = frob(f, f.div(rem.coeffs[dr], lead).expect("nonzero lead"), -(dl as i64));
        quo[d] = c;
        rem = rem.sub(f, &compose(f, divisor, &LinPoly::monomial(f, c, d)));
    }
    Ok((LinPoly::new(f, quo), rem))
}

/// The `F` with `F o inner = target`, if it exists.
pub fn decompose(f: &FieldCtx, target: &LinPoly, inner: &LinPoly) -> Option<LinPoly> {
    let (q, r) = right_divrem(f, target, inner).ok()?;
    (r.is_zero() && compose(f, &q, inner) == *target).then_some(q)
}

/// The `L` with `outer o L = target`, if it exists.
pub fn left_quotient(f: &FieldCtx, target: &LinPoly, outer: &LinPoly) -> Option<LinPoly> {
    let (q, r) = left_divrem(f, target, outer).ok()?;
    (r.is_zero() && compose(f, outer, &q) == *target).then_some(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

/// Roots of `l` in `f` (an `F_p`-subspace), sorted.
pub fn kernel(f: &FieldCtx, l: &LinPoly) -> Vec<Fe> {
    let p = f.characteristic();
    let k = f.degree() as usize;
    let basis: Vec<Fe> = (0..k)
        .map(|j| {
            let mut c = vec![0u64; k];
            c[j] = 1;
            f.from_coefficients(&c).expect("basis vector")
        })
        .collect();
    let cols: Vec<Vec<u64>> = basis.iter().map(|&b| f.coefficients(l.eval(f, b))).collect();
    // rows of the matrix: coordinate i of l(basis_j)
    let mut a: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| cols[j][i]).collect()).collect();
    let null = fp_nullspace(&mut a, p);
    let mut out = BTreeSet::new();
    let count = (p as u128).pow(null.len() as u32);
    for mut idx in 0..count {
        let mut v = vec![0u64; k];
        for vec in &null {
            let s = (idx % p as u128) as u64;
            idx /= p as u128;
            for (x, y) in v.iter_mut().zip(vec) {
                *x = (*x + s * y) % p;
            }
        }
        out.insert(f.from_coefficients(&v).expect("reduced digits"));
    }
    out.into_iter().collect()
}

fn fp_nullspace(a: &mut [Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let inv = |x: u64| inv_mod_p(x, p);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, i);
        let s = inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let m = a[i][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - m * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][free]) % p;
            }
            v
        })
        .collect()
}

fn inv_mod_p(x: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// The monic linearized polynomial with the given additive subgroup as roots.
pub fn from_kernel(f: &FieldCtx, roots: &[Fe]) -> Result<LinPoly, LinPolyError> {
    let set: BTreeSet<Fe> = roots.iter().copied().collect();
    if !set.contains(&f.zero()) || set.iter().any(|&a| set.iter().any(|&b| !set.contains(&f.add(a, b)))) {
        return Err(LinPolyError::NotSubgroup);
    }
    let p = f.characteristic();
    let frob_x = LinPoly::monomial(f, f.one(), 1);
    let mut l = LinPoly::identity(f);
    let mut span: BTreeSet<Fe> = [f.zero()].into();
    for &b in &set {
        if span.contains(&b) {
            continue;
        }
        let c = l.eval(f, b);
        let scaled = LinPoly::monomial(f, f.pow(c, p as u128 - 1), 0);
        l = compose(f, &frob_x, &l).sub(f, &compose(f, &scaled, &l));
        let mut grown = BTreeSet::new();
        for &s in &span {
            let mut x = s;
            for _ in 0..p {
                grown.insert(x);
                x = f.add(x, b);
            }
        }
        span = grown;
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Ordinary polynomial multiplication.
    Conventional,
    /// `t a = a^p t`, mirroring composition.
    Twisted,
}

/// `sum c_i t^i` under a multiplication convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatePoly {
    coeffs: Vec<Fe>,
    convention: Convention,
}

impl AssociatePoly {
    pub fn new(f: &FieldCtx, coeffs: Vec<Fe>, convention: Convention) -> Self {
        AssociatePoly { coeffs: poly::trim(f, coeffs), convention }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn to_linearized(&self, f: &FieldCtx) -> LinPoly {
        LinPoly::new(f, self.coeffs.clone())
    }

    pub fn mul(&self, f: &FieldCtx, other: &AssociatePoly) -> AssociatePoly {
        let coeffs = match self.convention {
            Convention::Conventional => poly::mul(f, &self.coeffs, &other.coeffs),
            Convention::Twisted => compose(f, &self.to_linearized(f), &other.to_linearized(f)).coeffs,
        };
        AssociatePoly::new(f, coeffs, self.convention)
    }

    /// Ordinary divisibility `self | other` in `F[t]`.
    pub fn conventional_divides(&self, f: &FieldCtx, other: &AssociatePoly) -> bool {
        !self.coeffs.is_empty() && poly::rem(f, &other.coeffs, &self.coeffs).is_empty()
    }
}

/// Symbolic divisibility of `m` by `l` on the given side.
///
/// Right divisibility `m = F o l` is decided by division and cross-checked with kernel
/// containment when `l` splits with distinct roots in `f`.
pub fn symbolic_divides(f: &FieldCtx, l: &LinPoly, m: &LinPoly, side: Side) -> bool {
    match side {
        Side::Left => left_quotient(f, m, l).is_some(),
        Side::Right => {
            let by_division = decompose(f, m, l).is_some();
            let ker = kernel(f, l);
            if l.degree(f) == Some(ker.len() as u128) {
                let contained = ker.iter().all(|&x| f.is_zero(m.eval(f, x)));
                debug_assert_eq!(contained, by_division, "kernel and division criteria disagree");
            }
            by_division
        }
    }
}

/// Outcome of the non-divisibility scan over the family `k^{-1} a^{q^2} X^{q^2} - k^{-1} a X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyScan {
    pub q: u64,
    /// Number of `a` values in `F_{q^6}^*`.
    pub family_size: u64,
    /// Distinct normalized members `X^{q^2} - a^{1-q^2} X` actually tested.
    pub distinct_members: usize,
    /// Members with some `L` such that `F o L = X^{q^3} + X`.
    pub symbolic_divisors: usize,
    /// Members whose conventional associate divides that of `X^{q^3} + X`.
    pub conventional_divisors: usize,
    /// Members where the two criteria disagree.
    pub divergences: usize,
}

/// Scans the family over `F_{q^6}`.
///
/// Substituting `X -> cX` with `c^{q^2} = k a^{-q^2}` turns `F` into the monic
/// `X^{q^2} - a^{1-q^2} X` without changing whether a right factor exists, and the
/// conventional criterion only depends on the same ratio; so `k = a^{q^2}` loses nothing.
pub fn prop1sylow_scan(q: u64) -> Result<FamilyScan, LinPolyError> {
    let (p, e) = numtheory::prime_power(q).ok_or(LinPolyError::NotPrimePower(q))?;
    let f = build_field(p, 6 * e)?;
    let e = e as usize;
    let n = f.size() - 1;
    let q2 = (q * q) as u128;
    let target = LinPoly::new(&f, {
        let mut c = vec![f.zero(); 3 * e + 1];
        c[0] = f.one();
        c[3 * e] = f.one();
        c
    });
    let target_assoc = target.associate(Convention::Conventional);
    let members: BTreeSet<Fe> = f
        .elements()
        .skip(1)
        .map(|a| f.neg(f.inv(f.pow(a, q2 - 1)).expect("nonzero")))
        .collect();
    let results: Vec<(bool, bool)> = members
        .par_iter()
        .map(|&b| {
            let mut c = vec![f.zero(); 2 * e + 1];
            c[0] = b;
            c[2 * e] = f.one();
            let fam = LinPoly::new(&f, c);
            let sym = left_quotient(&f, &target, &fam).is_some();
            let conv = fam.associate(Convention::Conventional).conventional_divides(&f, &target_assoc);
            (sym, conv)
        })
        .collect();
    Ok(FamilyScan {
        q,
        family_size: n,
        distinct_members: members.len(),
        symbolic_divisors: results.iter().filter(|r| r.0).count(),
        conventional_divisors: results.iter().filter(|r| r.1).count(),
        divergences: results.iter().filter(|r| r.0 != r.1).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(f: &FieldCtx, c: &[u64]) -> LinPoly {
        LinPoly::new(f, c.iter().map(|&v| f.elem(v).unwrap()).collect())
    }

    #[test]
    fn toy_decomposition() {
        let f = build_field(2, 1).unwrap();
        let target = lp(&f, &[1, 0, 0, 1]);
        let inner = lp(&f, &[1, 1]);
        assert_eq!(decompose(&f, &target, &inner), Some(lp(&f, &[1, 1, 1])));
        assert_eq!(decompose(&f, &target, &lp(&f, &[1, 0, 1])), None);
        assert!(symbolic_divides(&f, &inner, &target, Side::Right));
        assert!(!symbolic_divides(&f, &lp(&f, &[1, 0, 1]), &target, Side::Left));
    }

    #[test]
    fn twist_is_visible() {
        let f = build_field(2, 2).unwrap();
        let c = f.generator();
        let cx = LinPoly::monomial(&f, c, 0);
        let xp = LinPoly::monomial(&f, f.one(), 1);
        assert_eq!(compose(&f, &cx, &xp), LinPoly::monomial(&f, c, 1));
        assert_eq!(compose(&f, &xp, &cx), LinPoly::monomial(&f, f.square(c), 1));
    }

    #[test]
    fn associates() {
        let f = build_field(2, 1).unwrap();
        let a = lp(&f, &[1, 0, 0, 1]).associate(Convention::Conventional);
        assert_eq!(a.coeffs(), lp(&f, &[1, 0, 0, 1]).coeffs());
        let t1 = lp(&f, &[1, 1]).associate(Convention::Conventional);
        let t2 = lp(&f, &[1, 1, 1]).associate(Convention::Conventional);
        assert_eq!(t1.mul(&f, &t2), a);
        assert!(t1.conventional_divides(&f, &a));
        assert_eq!(LinPoly::identity(&f).associate(Convention::Twisted).coeffs(), &[f.one()]);
    }

    #[test]
    fn kernels() {
        let f = build_field(2, 1).unwrap();
        assert_eq!(from_kernel(&f, &[f.zero()]).unwrap(), LinPoly::identity(&f));
        assert_eq!(from_kernel(&f, &[f.zero(), f.one()]).unwrap(), lp(&f, &[1, 1]));
        let big = build_field(2, 12).unwrap();
        let sub: Vec<Fe> = big.elements().filter(|&x| big.pow(x, 4) == x).collect();
        let l = from_kernel(&big, &sub).unwrap();
        assert_eq!(l.degree(&big), Some(4));
        assert_eq!(kernel(&big, &l), sub);
        let target = LinPoly::monomial(&big, big.one(), 6).add(&big, &LinPoly::identity(&big));
        assert!(symbolic_divides(&big, &l, &target, Side::Right));
        assert_eq!(
            decompose(&big, &target, &l),
            Some(lp(&big, &[1, 0, 1, 0, 1]))
        );
        let g = big.generator();
        assert_eq!(from_kernel(&big, &[big.zero(), big.one(), g]).unwrap_err(), LinPolyError::NotSubgroup);
    }

    #[test]
    fn family_scan_q4() {
        let s = prop1sylow_scan(4).unwrap();
        assert_eq!(s.family_size, 4095);
        assert_eq!(s.distinct_members, 273);
        assert_eq!(s.symbolic_divisors, 0);
        assert_eq!(s.conventional_divisors, 0);
    }
}
