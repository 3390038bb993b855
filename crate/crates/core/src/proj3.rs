//! Points and lines of the projective plane over a finite field, and the
//! unitary polarity of a Hermitian form.

use thiserror::Error;

use crate::gf::{FieldCtx, Fe};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjError {
    #[error("all coordinates are zero")]
    ZeroTriple,
    #[error("coordinates belong to a different field")]
    FieldMismatch,
    #[error("curve model has no Hermitian form")]
    NotHermitian,
}

fn normalize_triple(f: &FieldCtx, c: [Fe; 3]) -> Result<[Fe; 3], ProjError> {
    if c.iter().any(|&x| !f.contains(x)) {
        return Err(ProjError::FieldMismatch);
    }
    let lead = c.iter().copied().find(|&x| !f.is_zero(x)).ok_or(ProjError::ZeroTriple)?;
    let inv = f.inv(lead).expect("nonzero");
    Ok(c.map(|x| f.mul(x, inv)))
}

/// A point of PG(2, F), first nonzero coordinate equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [Fe; 3],
}

/// A line of PG(2, F) in dual coordinates, normalized like points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    coords: [Fe; 3],
}

impl ProjPoint {
    pub fn new(f: &FieldCtx, coords: [Fe; 3]) -> Result<Self, ProjError> {
        Ok(ProjPoint { coords: normalize_triple(f, coords)? })
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.coords
    }

    /// Sort key for enumeration: affine chart `T = 1` first, then `(x, 1, 0)`, then `(1, 0, 0)`.
    pub fn chart_key(&self, f: &FieldCtx) -> (u8, u64, u64) {
        let [x, y, t] = self.coords;
        if !f.is_zero(t) {
            let ti = f.inv(t).expect("nonzero");
            (0, f.mul(x, ti).value(), f.mul(y, ti).value())
        } else if !f.is_zero(y) {
            (1, f.mul(x, f.inv(y).expect("nonzero")).value(), 0)
        } else {
            (2, 0, 0)
        }
    }
}

impl ProjLine {
    pub fn new(f: &FieldCtx, coords: [Fe; 3]) -> Result<Self, ProjError> {
        Ok(ProjLine { coords: normalize_triple(f, coords)? })
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.coords
    }

    /// The line `T = 0`.
    pub fn at_infinity(f: &FieldCtx) -> Self {
        ProjLine { coords: [f.zero(), f.zero(), f.one()] }
    }
}

pub fn normalize(f: &FieldCtx, coords: [Fe; 3]) -> Result<ProjPoint, ProjError> {
    ProjPoint::new(f, coords)
}

fn dot(f: &FieldCtx, a: [Fe; 3], b: [Fe; 3]) -> Fe {
    (0..3).fold(f.zero(), |acc, i| f.add(acc, f.mul(a[i], b[i])))
}

pub fn incident(f: &FieldCtx, p: &ProjPoint, l: &ProjLine) -> bool {
    f.is_zero(dot(f, p.coords, l.coords))
}

/// Line through two distinct points.
pub fn join(f: &FieldCtx, a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine, ProjError> {
    ProjLine::new(f, cross(f, a.coords, b.coords))
}

/// Intersection of two distinct lines.
pub fn meet(f: &FieldCtx, a: &ProjLine, b: &ProjLine) -> Result<ProjPoint, ProjError> {
    ProjPoint::new(f, cross(f, a.coords, b.coords))
}

fn cross(f: &FieldCtx, a: [Fe; 3], b: [Fe; 3]) -> [Fe; 3] {
    let m = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
    [m(1, 2), m(2, 0), m(0, 1)]
}

/// The `q^2 + 1` points (over `f`) of a line, in chart order.
pub fn line_points(f: &FieldCtx, l: &ProjLine) -> Vec<ProjPoint> {
    let [a, b, c] = l.coords;
    // two independent vectors in the kernel of (a, b, c)
    let basis: Vec<[Fe; 3]> = if !f.is_zero(a) {
        vec![[f.neg(b), a, f.zero()], [f.neg(c), f.zero(), a]]
    } else if !f.is_zero(b) {
        vec![[f.one(), f.zero(), f.zero()], [f.zero(), f.neg(c), b]]
    } else {
        vec![[f.one(), f.zero(), f.zero()], [f.zero(), f.one(), f.zero()]]
    };
    let (u, v) = (basis[0], basis[1]);
    let mut out: Vec<ProjPoint> = f
        .elements()
        .map(|t| {
            let c = [0, 1, 2].map(|i| f.add(u[i], f.mul(t, v[i])));
            ProjPoint::new(f, c).expect("independent basis")
        })
        .collect();
    out.push(ProjPoint::new(f, v).expect("nonzero"));
    out.sort_by_key(|p| p.chart_key(f));
    out
}

/// All points of PG(2, f) in chart order.
pub fn plane_points(f: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    let affine = f.elements().flat_map(move |x| f.elements().map(move |y| [x, y, f.one()]));
    let at_inf = f.elements().map(move |x| [x, f.one(), f.zero()]);
    affine
        .chain(at_inf)
        .chain(std::iter::once([f.one(), f.zero(), f.zero()]))
        .map(move |c| ProjPoint::new(f, c).expect("nonzero"))
}

/// The two Hermitian forms used for `H_q`: Fermat `X^{q+1}+Y^{q+1}+T^{q+1}` and
/// norm-trace `Y^{q+1} - X^q T - X T^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HermitianForm {
    Fermat { q: u64 },
    NormTrace { q: u64 },
}

impl HermitianForm {
    pub fn q(&self) -> u64 {
        match *self {
            HermitianForm::Fermat { q } | HermitianForm::NormTrace { q } => q,
        }
    }

    /// Gram matrix entries as small integers.
    pub fn gram(&self) -> [[i64; 3]; 3] {
        match self {
            HermitianForm::Fermat { .. } => [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            HermitianForm::NormTrace { .. } => [[0, 0, -1], [0, 1, 0], [-1, 0, 0]],
        }
    }

    pub fn gram_in(&self, f: &FieldCtx) -> [[Fe; 3]; 3] {
        self.gram().map(|row| row.map(|v| f.from_int(v)))
    }

    pub fn conj(&self, f: &FieldCtx, x: Fe) -> Fe {
        f.pow(x, self.q() as u128)
    }

    /// `H(u, v) = conj(u)^T G v`.
    pub fn pairing(&self, f: &FieldCtx, u: [Fe; 3], v: [Fe; 3]) -> Fe {
        let g = self.gram();
        let mut acc = f.zero();
        for i in 0..3 {
            for j in 0..3 {
                if g[i][j] != 0 {
                    let term = f.mul(self.conj(f, u[i]), v[j]);
                    acc = f.add(acc, f.scale(term, g[i][j]));
                }
            }
        }
        acc
    }

    /// Whether `(x : y : t)` lies on the curve `H(P, P) = 0`.
    pub fn on_curve(&self, f: &FieldCtx, c: [Fe; 3]) -> bool {
        f.is_zero(self.pairing(f, c, c))
    }

    pub fn polar(&self, f: &FieldCtx, p: &ProjPoint) -> ProjLine {
        let g = self.gram();
        let c = p.coords;
        let l = [0, 1, 2].map(|j| {
            (0..3).fold(f.zero(), |acc, i| {
                if g[i][j] == 0 {
                    acc
                } else {
                    f.add(acc, f.scale(self.conj(f, c[i]), g[i][j]))
                }
            })
        });
        ProjLine::new(f, l).expect("polarity is nondegenerate")
    }

    /// Inverse of [`Self::polar`].
    pub fn pole(&self, f: &FieldCtx, l: &ProjLine) -> ProjPoint {
        // conj(P) = G l, since G is symmetric and G^2 = I
        let g = self.gram();
        let c = l.coords;
        let gl = [0, 1, 2].map(|i| (0..3).fold(f.zero(), |acc, j| f.add(acc, f.scale(c[j], g[i][j]))));
        // conj^{-1} on F_{q^2}-coordinates is conj itself; on larger fields use the inverse Frobenius power
        let inv = inverse_conj_exponent(f, self.q());
        ProjPoint::new(f, gl.map(|x| f.pow(x, inv))).expect("nonzero")
    }
}

fn inverse_conj_exponent(f: &FieldCtx, q: u64) -> u128 {
    // x -> x^q is the Frobenius power p^e; its inverse is p^(k - e) on F_{p^k}
    let p = f.characteristic();
    let mut e = 0u32;
    let mut v = 1u64;
    while v < q {
        v *= p;
        e += 1;
    }
    let k = f.degree();
    let shift = (k - e % k) % k;
    (p as u128).pow(shift)
}
