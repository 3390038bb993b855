//! Arithmetic on base-`p` numerals representing residues modulo a monic polynomial.
//!
//! A numeral `v` encodes `sum d_i X^i` where `d_i` is the `i`-th base-`p` digit of
//! `v` (least significant digit = constant term).

#[derive(Debug, Clone)]
pub(crate) struct RawArith {
    pub p: u64,
    pub k: u32,
    /// Monic modulus, `k + 1` coefficients, low degree first.
    pub modulus: Vec<u64>,
    /// For `p == 2`: the modulus with its leading bit cleared.
    low_mask: u64,
}

impl RawArith {
    pub fn new(p: u64, k: u32, modulus: Vec<u64>) -> Self {
        debug_assert_eq!(modulus.len(), k as usize + 1);
        let low_mask = if p == 2 {
            modulus[..k as usize]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        Self { p, k, modulus, low_mask }
    }

    pub fn digits(&self, mut v: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.k as usize];
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let d: Vec<u64> = self
            .digits(a)
            .into_iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.from_digits(&d)
    }

    pub fn scale(&self, a: u64, s: u64) -> u64 {
        let s = s % self.p;
        if self.p == 2 {
            return if s == 0 { 0 } else { a };
        }
        let d: Vec<u64> = self
            .digits(a)
            .into_iter()
            .map(|x| (x as u128 * s as u128 % self.p as u128) as u64)
            .collect();
        self.from_digits(&d)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return self.mul_gf2(a, b);
        }
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % self.p as u128) as u64;
            }
        }
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..k {
                let sub = (c as u128 * self.modulus[i] as u128 % self.p as u128) as u64;
                let slot = &mut prod[deg - k + i];
                *slot = (*slot + self.p - sub) % self.p;
            }
        }
        self.from_digits(&prod[..k])
    }

    fn mul_gf2(&self, mut a: u64, mut b: u64) -> u64 {
        let k = self.k;
        let top = 1u64 << (k - 1);
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            let carry = a & top != 0;
            a = (a << 1) & ((top << 1).wrapping_sub(1));
            if carry {
                a ^= self.low_mask;
            }
        }
        acc
    }

    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}
