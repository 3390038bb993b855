//! Finite fields `F_{p^k}` with deterministic moduli, subfield embeddings,
//! norm/trace and root extraction.
//!
//! Elements are base-`p` numerals of their coefficient vectors (constant term in
//! the least significant digit); this is also the canonical element ordering.
//! Fields up to the table threshold keep log/antilog tables; larger ones fall
//! back to direct polynomial arithmetic.

mod fp_poly;
pub mod poly;
mod raw;
mod registry;
mod tower;

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

use crate::numtheory;
pub use registry::{build_field, global_registry, install_global_config, FieldConfig, FieldRegistry, ModulusOverride};
pub use tower::{embed, norm, trace, TowerMap};

use raw::RawArith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field {p}^{k} exceeds the size cap of 2^{cap_bits} elements")]
    SizeCap { p: u64, k: u32, cap_bits: u32 },
    #[error("element belongs to a different field")]
    FieldMismatch,
    #[error("no embedding: degree {src} does not divide {dst}")]
    DegreeMismatch { src: u32, dst: u32 },
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u64, u64),
    #[error("{m} does not divide the multiplicative group order {order}")]
    NoRootOfUnity { m: u64, order: u64 },
    #[error("operation undefined at zero")]
    Zero,
    #[error("invalid modulus override for ({p},{k}): {reason}")]
    BadModulus { p: u64, k: u32, reason: String },
    #[error("numeral {0} is out of range for the field")]
    OutOfRange(u64),
    #[error("configuration error: {0}")]
    Config(String),
}

/// An element of a specific [`FieldCtx`]: owning-field tag plus canonical numeral.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe {
    fid: u32,
    v: u64,
}

impl Fe {
    /// Canonical numeral (base-`p` reading of the coefficient vector).
    pub fn value(self) -> u64 {
        self.v
    }

    pub fn field_id(self) -> u32 {
        self.fid
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

#[derive(Debug)]
enum Repr {
    Table { exp: Vec<u64>, log: Vec<u32> },
    Poly,
}

static NEXT_FIELD_ID: AtomicU32 = AtomicU32::new(1);

/// An immutable finite field `F_{p^k}`.
pub struct FieldCtx {
    id: u32,
    raw: RawArith,
    size: u64,
    generator: u64,
    group_factors: Vec<(u64, u32)>,
    repr: Repr,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.raw.p)
            .field("k", &self.raw.k)
            .field("modulus", &self.raw.modulus)
            .field("table", &self.is_table())
            .finish()
    }
}

impl FieldCtx {
    /// Builds a field from an explicit monic irreducible modulus.
    pub(crate) fn from_modulus(p: u64, k: u32, modulus: Vec<u64>, table_max: u64) -> Result<Self, GfError> {
        let size = p.pow(k);
        let raw = RawArith::new(p, k, modulus);
        let group_factors = numtheory::factor(size - 1);
        let mut ctx = FieldCtx {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            raw,
            size,
            generator: 0,
            group_factors,
            repr: Repr::Poly,
        };
        ctx.generator = ctx.find_primitive();
        if size <= table_max {
            let n = (size - 1) as usize;
            let mut exp = Vec::with_capacity(n);
            let mut log = vec![u32::MAX; size as usize];
            let mut x = 1u64;
            for i in 0..n {
                exp.push(x);
                log[x as usize] = i as u32;
                x = ctx.raw.mul(x, ctx.generator);
            }
            ctx.repr = Repr::Table { exp, log };
        }
        Ok(ctx)
    }

    fn find_primitive(&self) -> u64 {
        (1..self.size)
            .find(|&v| self.raw_is_primitive(v))
            .expect("multiplicative group of a field is cyclic")
    }

    fn raw_is_primitive(&self, v: u64) -> bool {
        let n = (self.size - 1) as u128;
        self.raw.pow(v, n) == 1
            && self
                .group_factors
                .iter()
                .all(|&(r, _)| self.raw.pow(v, n / r as u128) != 1)
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn characteristic(&self) -> u64 {
        self.raw.p
    }

    pub fn degree(&self) -> u32 {
        self.raw.k
    }

    /// Number of elements `p^k`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Monic modulus coefficients, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.raw.modulus
    }

    pub fn is_table(&self) -> bool {
        matches!(self.repr, Repr::Table { .. })
    }

    /// Factorization of `p^k - 1`.
    pub fn group_factors(&self) -> &[(u64, u32)] {
        &self.group_factors
    }

    pub fn elem(&self, v: u64) -> Result<Fe, GfError> {
        if v >= self.size {
            return Err(GfError::OutOfRange(v));
        }
        Ok(Fe { fid: self.id, v })
    }

    #[inline]
    fn mk(&self, v: u64) -> Fe {
        Fe { fid: self.id, v }
    }

    pub fn zero(&self) -> Fe {
        self.mk(0)
    }

    pub fn one(&self) -> Fe {
        self.mk(1)
    }

    /// The primitive element used for logarithms and roots of unity.
    pub fn generator(&self) -> Fe {
        self.mk(self.generator)
    }

    /// Root of the modulus (the class of `X`).
    pub fn modulus_root(&self) -> Fe {
        if self.raw.k == 1 {
            self.mk((self.raw.p - self.raw.modulus[0] % self.raw.p) % self.raw.p)
        } else {
            self.mk(self.raw.p)
        }
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        self.mk(n.rem_euclid(self.raw.p as i64) as u64)
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.fid == self.id
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.size).map(|v| self.mk(v))
    }

    /// Base-`p` coefficient vector of length `k`.
    pub fn coefficients(&self, a: Fe) -> Vec<u64> {
        self.raw.digits(a.v)
    }

    pub fn from_coefficients(&self, coeffs: &[u64]) -> Result<Fe, GfError> {
        if coeffs.len() != self.raw.k as usize || coeffs.iter().any(|&c| c >= self.raw.p) {
            return Err(GfError::Config("coefficient vector does not fit the field".into()));
        }
        Ok(self.mk(self.raw.from_digits(coeffs)))
    }

    #[inline]
    fn check(&self, a: Fe) {
        debug_assert_eq!(a.fid, self.id, "element from a different field");
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.check(a);
        self.check(b);
        self.mk(self.raw.add(a.v, b.v))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.check(a);
        self.mk(self.raw.neg(a.v))
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.raw.p == 2 {
            return self.add(a, b);
        }
        self.add(a, self.neg(b))
    }

    /// Multiplies by an integer (prime-field scalar).
    pub fn scale(&self, a: Fe, s: i64) -> Fe {
        self.check(a);
        self.mk(self.raw.scale(a.v, s.rem_euclid(self.raw.p as i64) as u64))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.check(a);
        self.check(b);
        if a.v == 0 || b.v == 0 {
            return self.zero();
        }
        match &self.repr {
            Repr::Table { exp, log } => {
                let n = self.size - 1;
                let s = log[a.v as usize] as u64 + log[b.v as usize] as u64;
                self.mk(exp[(if s >= n { s - n } else { s }) as usize])
            }
            Repr::Poly => self.mk(self.raw.mul(a.v, b.v)),
        }
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        self.check(a);
        if a.v == 0 {
            return None;
        }
        Some(match &self.repr {
            Repr::Table { exp, log } => {
                let n = self.size - 1;
                self.mk(exp[((n - log[a.v as usize] as u64) % n) as usize])
            }
            Repr::Poly => self.mk(self.raw.pow(a.v, (self.size - 2) as u128)),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, e: u128) -> Fe {
        self.check(a);
        if e == 0 {
            return self.one();
        }
        if a.v == 0 {
            return self.zero();
        }
        match &self.repr {
            Repr::Table { exp, log } => {
                let n = (self.size - 1) as u128;
                let idx = (log[a.v as usize] as u128 * (e % n)) % n;
                self.mk(exp[idx as usize])
            }
            Repr::Poly => self.mk(self.raw.pow(a.v, e % (self.size - 1) as u128)),
        }
    }

    /// `a^(p^j)`.
    pub fn frobenius(&self, a: Fe, j: u32) -> Fe {
        let n = (self.size - 1) as u128;
        let mut e: u128 = 1;
        for _ in 0..(j % self.raw.k) {
            e = e * self.raw.p as u128 % n.max(1);
        }
        if n <= 1 {
            return a;
        }
        self.pow(a, if e == 0 { n } else { e })
    }

    /// Discrete logarithm to the base [`Self::generator`], table mode only.
    pub fn log(&self, a: Fe) -> Option<u64> {
        self.check(a);
        match &self.repr {
            Repr::Table { log, .. } if a.v != 0 => Some(log[a.v as usize] as u64),
            _ => None,
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> Result<u64, GfError> {
        if a.v == 0 {
            return Err(GfError::Zero);
        }
        let mut n = self.size - 1;
        for &(r, e) in &self.group_factors {
            for _ in 0..e {
                if self.pow(a, (n / r) as u128) == self.one() {
                    n /= r;
                } else {
                    break;
                }
            }
        }
        Ok(n)
    }

    /// Primitive `m`-th root of unity, `g^((p^k-1)/m)`.
    pub fn root_of_unity(&self, m: u64) -> Result<Fe, GfError> {
        let n = self.size - 1;
        if m == 0 || n % m != 0 {
            return Err(GfError::NoRootOfUnity { m, order: n });
        }
        Ok(self.pow(self.generator(), (n / m) as u128))
    }

    /// Whether a nonzero `e` is a `d`-th power in this field.
    pub fn is_dth_power(&self, e: Fe, d: u64) -> Result<bool, GfError> {
        self.check(e);
        if e.v == 0 {
            return Err(GfError::Zero);
        }
        let n = self.size - 1;
        let g = numtheory::gcd_u64(d, n);
        Ok(self.pow(e, (n / g) as u128) == self.one())
    }

    /// Some `d`-th root of `e` in this field, if one exists (table mode or `gcd(d, p^k-1) = 1`).
    pub fn dth_root(&self, e: Fe, d: u64) -> Option<Fe> {
        if e.v == 0 {
            return Some(self.zero());
        }
        let n = self.size - 1;
        let g = numtheory::gcd_u64(d, n);
        if g == 1 {
            let inv = mod_inverse(d % n, n)?;
            return Some(self.pow(e, inv as u128));
        }
        let l = self.log(e)?;
        if l % g != 0 {
            return None;
        }
        // solve d*x = l (mod n)
        let (d2, l2, n2) = (d / g, l / g, n / g);
        let x = (l2 as u128 * mod_inverse(d2 % n2, n2).unwrap_or(0) as u128 % n2.max(1) as u128) as u64;
        Some(self.pow(self.generator(), x as u128))
    }

    pub fn try_add(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        if a.fid != self.id || b.fid != self.id {
            return Err(GfError::FieldMismatch);
        }
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        if a.fid != self.id || b.fid != self.id {
            return Err(GfError::FieldMismatch);
        }
        Ok(self.mul(a, b))
    }

    pub fn is_zero(&self, a: Fe) -> bool {
        a.v == 0
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_two() {
        let f = build_field(2, 1).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.modulus(), &[1, 1]);
        assert_eq!(f.elements().count(), 2);
    }

    #[test]
    fn f1024_generator_has_full_order() {
        let f = build_field(2, 10).unwrap();
        let g = f.generator();
        assert_eq!(f.pow(g, 1023), f.one());
        for r in [3u128, 11, 31] {
            assert_ne!(f.pow(g, 1023 / r), f.one());
        }
        assert_eq!(f.modulus_root(), g);
    }

    #[test]
    fn f2_18_contains_f64() {
        let f = build_field(2, 18).unwrap();
        let fixed = f.elements().filter(|&x| f.pow(x, 64) == x).count();
        assert_eq!(fixed, 64);
    }

    #[test]
    fn prime_field_five_modulus() {
        let f = build_field(5, 1).unwrap();
        // smallest c with -c a primitive root mod 5: c = 2 (root 3)
        assert_eq!(f.modulus(), &[2, 1]);
        assert_eq!(f.generator().value(), 2);
        let fifth = f.from_int(2);
        let scaled = f.scale(fifth, 3);
        assert_eq!(scaled.value(), 1);
        let a = f.elem(4).unwrap();
        assert_eq!(f.mul(a, f.from_int(3)).value(), 2);
    }

    #[test]
    fn roots_of_unity() {
        let f = build_field(2, 10).unwrap();
        let e = f.root_of_unity(33).unwrap();
        assert_eq!(f.pow(e, 33), f.one());
        assert_ne!(f.pow(e, 11), f.one());
        assert_ne!(f.pow(e, 3), f.one());
        assert!(matches!(f.root_of_unity(9), Err(GfError::NoRootOfUnity { .. })));
        assert_eq!(f.root_of_unity(1).unwrap(), f.one());
    }

    #[test]
    fn dth_powers() {
        let f = build_field(2, 10).unwrap(); // q = 32, 3 | q + 1
        assert!(f.is_dth_power(f.one(), 7).unwrap());
        assert!(!f.is_dth_power(f.generator(), 3).unwrap());
        let cubes = f.elements().skip(1).filter(|&x| f.is_dth_power(x, 3).unwrap()).count();
        assert_eq!(cubes, 1023 / 3);
        let direct: std::collections::HashSet<_> = f.elements().skip(1).map(|y| f.pow(y, 3)).collect();
        assert_eq!(direct.len(), cubes);
        assert_eq!(f.is_dth_power(f.zero(), 3), Err(GfError::Zero));
    }

    #[test]
    fn dth_root_inverts_power() {
        let f = build_field(2, 10).unwrap();
        for v in [1u64, 5, 77, 1000] {
            let x = f.elem(v).unwrap();
            let c = f.pow(x, 3);
            let r = f.dth_root(c, 3).unwrap();
            assert_eq!(f.pow(r, 3), c);
        }
        assert!(f.dth_root(f.generator(), 3).is_none());
    }

    #[test]
    fn cross_field_arithmetic_is_rejected() {
        let a = build_field(2, 4).unwrap();
        let b = build_field(2, 3).unwrap();
        assert_eq!(a.try_mul(a.one(), b.one()), Err(GfError::FieldMismatch));
        assert_eq!(a.try_add(a.one(), a.one()).unwrap(), a.zero());
    }

    #[test]
    fn poly_and_table_modes_agree() {
        let reg = FieldRegistry::new(FieldConfig { table_max: 1, ..FieldConfig::default() }).unwrap();
        let poly = reg.field(3, 5).unwrap();
        let table = build_field(3, 5).unwrap();
        assert!(!poly.is_table() && table.is_table());
        assert_eq!(poly.modulus(), table.modulus());
        for a in (0..243).step_by(7) {
            for b in (0..243).step_by(11) {
                let (pa, pb) = (poly.elem(a).unwrap(), poly.elem(b).unwrap());
                let (ta, tb) = (table.elem(a).unwrap(), table.elem(b).unwrap());
                assert_eq!(poly.mul(pa, pb).value(), table.mul(ta, tb).value());
                assert_eq!(poly.add(pa, pb).value(), table.add(ta, tb).value());
            }
            if a > 0 {
                let pa = poly.elem(a).unwrap();
                assert_eq!(poly.mul(pa, poly.inv(pa).unwrap()), poly.one());
            }
        }
    }

    #[test]
    fn element_order() {
        let f = build_field(2, 10).unwrap();
        assert_eq!(f.order(f.generator()).unwrap(), 1023);
        assert_eq!(f.order(f.root_of_unity(11).unwrap()).unwrap(), 11);
        assert_eq!(f.order(f.zero()), Err(GfError::Zero));
    }
}
