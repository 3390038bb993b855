//! Modulus selection and validation over the prime field.

use super::raw::RawArith;
use crate::numtheory;

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
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

fn rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    a = trim(a);
    while a.len() > db {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        for i in 0..=db {
            let slot = &mut a[da - db + i];
            *slot = (*slot + p - c * b[i] % p) % p;
        }
        a = trim(a);
    }
    a
}

fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a monic modulus of degree `k`.
pub(crate) fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let k = (modulus.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    let raw = RawArith::new(p, k, modulus.to_vec());
    let x = p;
    let frob_iter = |times: u32| -> u64 {
        let mut v = x;
        for _ in 0..times {
            v = raw.pow(v, p as u128);
        }
        v
    };
    if frob_iter(k) != x {
        return false;
    }
    for (r, _) in numtheory::factor(k as u64) {
        let h = frob_iter(k / r as u32);
        let mut digits = raw.digits(h);
        digits[1] = (digits[1] + p - 1) % p;
        let g = gcd(modulus.to_vec(), digits, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn is_primitive_modulus(p: u64, modulus: &[u64], group_factors: &[(u64, u32)]) -> bool {
    let k = (modulus.len() - 1) as u32;
    let n = (p.pow(k) - 1) as u128;
    if k == 1 {
        let root = (p - modulus[0] % p) % p;
        if root == 0 {
            return false;
        }
        let pw = |e: u128| {
            let mut acc = 1u128;
            let mut b = root as u128;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % p as u128;
                }
                b = b * b % p as u128;
                e >>= 1;
            }
            acc
        };
        return group_factors.iter().all(|&(r, _)| pw(n / r as u128) != 1);
    }
    // No roots in F_p is a cheap necessary condition.
    for a in 0..p {
        let val = modulus.iter().rev().fold(0u64, |acc, &c| (acc * a + c) % p);
        if val == 0 {
            return false;
        }
    }
    let raw = RawArith::new(p, k, modulus.to_vec());
    raw.pow(p, n) == 1 && group_factors.iter().all(|&(r, _)| raw.pow(p, n / r as u128) != 1)
}

/// Lexicographically smallest monic primitive polynomial of degree `k`,
/// coefficients compared from the constant term upward.
pub(crate) fn smallest_primitive(p: u64, k: u32) -> Vec<u64> {
    let group_factors = numtheory::factor(p.pow(k) - 1);
    let k = k as usize;
    // digits[0] is the most significant position in the lexicographic order.
    let mut coeffs = vec![0u64; k + 1];
    coeffs[k] = 1;
    coeffs[0] = 1;
    loop {
        if is_primitive_modulus(p, &coeffs, &group_factors) {
            return coeffs;
        }
        // odometer: last low coefficient (degree k-1) moves fastest
        let mut pos = k - 1;
        loop {
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
            assert!(pos > 0, "a primitive polynomial always exists");
            pos -= 1;
        }
    }
}
