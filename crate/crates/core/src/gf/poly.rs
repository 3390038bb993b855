//! Dense univariate polynomials over a [`FieldCtx`], coefficients low degree first.
//!
//! Only what root finding of small-degree polynomials needs: division, gcd,
//! modular powering and equal-degree splitting into linear factors.

use super::{FieldCtx, Fe};

pub type Poly = Vec<Fe>;

pub fn trim(f: &FieldCtx, mut a: Poly) -> Poly {
    while a.last().is_some_and(|&c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, `None` for the zero polynomial.
pub fn degree(a: &[Fe]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn eval(f: &FieldCtx, a: &[Fe], x: Fe) -> Fe {
    a.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn add(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(f.zero());
            let y = b.get(i).copied().unwrap_or(f.zero());
            f.add(x, y)
        })
        .collect();
    trim(f, out)
}

pub fn sub(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    let nb: Poly = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> (Poly, Poly) {
    let b = trim(f, b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = trim(f, a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        q[dr - db] = c;
        for i in 0..=db {
            r[dr - db + i] = f.sub(r[dr - db + i], f.mul(c, b[i]));
        }
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn rem(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &FieldCtx, a: &[Fe]) -> Poly {
    let a = trim(f, a.to_vec());
    match a.last() {
        None => a,
        Some(&lead) => {
            let inv = f.inv(lead).expect("nonzero leading coefficient");
            a.iter().map(|&c| f.mul(c, inv)).collect()
        }
    }
}

/// Monic gcd.
pub fn gcd(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn mulmod(f: &FieldCtx, a: &[Fe], b: &[Fe], m: &[Fe]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &FieldCtx, base: &[Fe], mut e: u128, m: &[Fe]) -> Poly {
    let mut acc = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    acc
}

/// `X^(p^j) mod m`, by iterated `p`-th powers.
fn frobenius_x(f: &FieldCtx, m: &[Fe], j: u32) -> Poly {
    let x = vec![f.zero(), f.one()];
    let mut acc = rem(f, &x, m);
    for _ in 0..j {
        acc = powmod(f, &acc, f.characteristic() as u128, m);
    }
    acc
}

/// Distinct roots in `f` of a nonzero polynomial, in canonical element order.
pub fn roots(f: &FieldCtx, a: &[Fe]) -> Vec<Fe> {
    let a = monic(f, a);
    let d = degree(&a).expect("roots of the zero polynomial");
    if d == 0 {
        return Vec::new();
    }
    // product of the distinct linear factors: gcd(a, X^|F| - X)
    let xq = frobenius_x(f, &a, f.degree());
    let split = gcd(f, &a, &sub(f, &xq, &[f.zero(), f.one()]));
    let mut out = Vec::new();
    split_linear(f, split, &mut out);
    out.sort();
    out
}

fn split_linear(f: &FieldCtx, g: Poly, out: &mut Vec<Fe>) {
    match degree(&g) {
        None | Some(0) => {}
        Some(1) => out.push(f.neg(g[0])),
        Some(_) => {
            let (left, right) = split_once(f, &g);
            split_linear(f, left, out);
            split_linear(f, right, out);
        }
    }
}

/// A nontrivial factorization of a squarefree product of distinct linear factors.
fn split_once(f: &FieldCtx, g: &[Fe]) -> (Poly, Poly) {
    let dg = g.len() - 1;
    let p = f.characteristic();
    // deterministic sequence of shifts/scalings: powers of the generator, then 1
    let mut s = f.one();
    for _ in 0..f.size() {
        let h = if p == 2 {
            // absolute trace of s*X: sum of (sX)^(2^i), i < k
            let sx = vec![f.zero(), s];
            let mut term = rem(f, &sx, g);
            let mut acc = term.clone();
            for _ in 1..f.degree() {
                term = mulmod(f, &term, &term, g);
                acc = add(f, &acc, &term);
            }
            acc
        } else {
            let lin = vec![s, f.one()];
            let e = (f.size() as u128 - 1) / 2;
            sub(f, &powmod(f, &lin, e, g), &[f.one()])
        };
        let c = gcd(f, g, &h);
        if let Some(dc) = degree(&c) {
            if dc > 0 && dc < dg {
                let (other, r) = divrem(f, g, &c);
                debug_assert!(r.is_empty());
                return (c, monic(f, &other));
            }
        }
        s = f.mul(s, f.generator());
    }
    unreachable!("equal-degree splitting always succeeds for a split squarefree polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    #[test]
    fn divrem_reconstructs() {
        let f = build_field(3, 2).unwrap();
        let e = |v| f.elem(v).unwrap();
        let a = vec![e(1), e(4), e(0), e(7), e(2)];
        let b = vec![e(5), e(1), e(3)];
        let (q, r) = divrem(&f, &a, &b);
        assert!(r.len() < 3);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }

    #[test]
    fn roots_of_x_cubed_minus_one_in_f4() {
        let f = build_field(2, 2).unwrap();
        let poly = vec![f.one(), f.zero(), f.zero(), f.one()];
        let rs = roots(&f, &poly);
        assert_eq!(rs.len(), 3);
        for r in rs {
            assert_eq!(f.pow(r, 3), f.one());
        }
    }

    #[test]
    fn roots_match_scan_odd_char() {
        let f = build_field(5, 2).unwrap();
        let e = |v| f.elem(v).unwrap();
        // (X - 3)(X - 7)(X - 11)^2 (X^2 + irreducible part)
        let mut poly = vec![f.one()];
        for r in [3u64, 7, 11, 11] {
            poly = mul(&f, &poly, &[f.neg(e(r)), f.one()]);
        }
        let irreducible = (0..25u64)
            .map(|c| vec![e(c), f.zero(), f.one()])
            .find(|q| f.elements().all(|x| !f.is_zero(eval(&f, q, x))))
            .unwrap();
        poly = mul(&f, &poly, &irreducible);
        let scanned: Vec<Fe> = f.elements().filter(|&x| f.is_zero(eval(&f, &poly, x))).collect();
        assert_eq!(roots(&f, &poly), scanned);
        assert_eq!(scanned.len(), 3);
    }

    #[test]
    fn roots_in_poly_mode_field() {
        let f = build_field(2, 30).unwrap();
        assert!(!f.is_table());
        let a = f.elem(123_456_789).unwrap();
        let b = f.elem(987_654).unwrap();
        let poly = mul(&f, &[a, f.one()], &[b, f.one()]);
        let mut expect = vec![a, b];
        expect.sort();
        assert_eq!(roots(&f, &poly), expect);
    }
}
