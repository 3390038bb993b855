//! The curve families: Hermitian (Fermat and norm-trace models), the generalized
//! GK curves `C_{l^n}` and the curves `X_l : Y^{l^2-l+1} = X^{l^2} - X`.

use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{build_field, FieldCtx, Fe, GfError};
use crate::numtheory;
use crate::proj3::{HermitianForm, ProjPoint};

/// Largest field enumerated by the point counters.
pub const ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("C_(l^n) needs odd n >= 3, got {0}")]
    BadDegree(u32),
    #[error("field of characteristic {field} is incompatible with a curve in characteristic {curve}")]
    Characteristic { field: u64, curve: u64 },
    #[error("field with {0} elements exceeds the enumeration cap")]
    EnumerationCap(u64),
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveModel {
    FermatHermitian { q: u64 },
    NormTraceHermitian { q: u64 },
    /// `Z^{(l^n+1)/(l+1)} = Y^{l^2} - Y`, `X^l + X = Y^{l+1}`.
    GeneralizedGK { l: u64, n: u32 },
    /// `Y^{l^2-l+1} = X^{l^2} - X`.
    GarciaStichtenoth { l: u64 },
}

fn check_prime_power(q: u64) -> Result<(u64, u32), CurveError> {
    numtheory::prime_power(q).ok_or(CurveError::NotPrimePower(q))
}

impl CurveModel {
    pub fn fermat(q: u64) -> Result<Self, CurveError> {
        check_prime_power(q)?;
        Ok(CurveModel::FermatHermitian { q })
    }

    pub fn norm_trace(q: u64) -> Result<Self, CurveError> {
        check_prime_power(q)?;
        Ok(CurveModel::NormTraceHermitian { q })
    }

    pub fn gk(l: u64, n: u32) -> Result<Self, CurveError> {
        check_prime_power(l)?;
        if n < 3 || n % 2 == 0 {
            return Err(CurveError::BadDegree(n));
        }
        Ok(CurveModel::GeneralizedGK { l, n })
    }

    pub fn gs(l: u64) -> Result<Self, CurveError> {
        check_prime_power(l)?;
        Ok(CurveModel::GarciaStichtenoth { l })
    }

    pub fn hermitian_form(&self) -> Option<HermitianForm> {
        match *self {
            CurveModel::FermatHermitian { q } => Some(HermitianForm::Fermat { q }),
            CurveModel::NormTraceHermitian { q } => Some(HermitianForm::NormTrace { q }),
            _ => None,
        }
    }

    fn base(&self) -> u64 {
        match *self {
            CurveModel::FermatHermitian { q } | CurveModel::NormTraceHermitian { q } => q,
            CurveModel::GeneralizedGK { l, .. } | CurveModel::GarciaStichtenoth { l } => l,
        }
    }

    pub fn characteristic(&self) -> u64 {
        numtheory::prime_power(self.base()).expect("validated").0
    }

    pub fn ambient_dimension(&self) -> u32 {
        match self {
            CurveModel::GeneralizedGK { .. } => 3,
            _ => 2,
        }
    }

    /// The `Q` for which the curve is `F_{Q^2}`-maximal.
    pub fn maximality_q(&self) -> u64 {
        match *self {
            CurveModel::FermatHermitian { q } | CurveModel::NormTraceHermitian { q } => q,
            CurveModel::GeneralizedGK { l, n } => l.pow(n),
            CurveModel::GarciaStichtenoth { l } => l.pow(3),
        }
    }

    /// `(p, k)` of the maximality field `F_{Q^2}`.
    pub fn maximality_field(&self) -> (u64, u32) {
        let (p, e) = numtheory::prime_power(self.maximality_q()).expect("validated");
        (p, 2 * e)
    }

    pub fn genus(&self) -> u64 {
        match *self {
            CurveModel::FermatHermitian { q } | CurveModel::NormTraceHermitian { q } => q * (q - 1) / 2,
            CurveModel::GeneralizedGK { l, n } => (l - 1) * (l.pow(n + 1) + l.pow(n) - l * l) / 2,
            CurveModel::GarciaStichtenoth { l } => (l - 1) * (l.pow(3) - l) / 2,
        }
    }

    /// Hasse-Weil bound `Q^2 + 1 + 2 g Q` over the maximality field.
    pub fn hasse_weil_bound(&self) -> u128 {
        let q = self.maximality_q() as u128;
        q * q + 1 + 2 * self.genus() as u128 * q
    }

    fn check_field(&self, f: &FieldCtx) -> Result<(), CurveError> {
        let p = self.characteristic();
        if f.characteristic() != p {
            return Err(CurveError::Characteristic { field: f.characteristic(), curve: p });
        }
        Ok(())
    }

    /// Membership of a projective point of a plane model; the space model `C_{l^n}` needs
    /// [`Self::contains_affine`].
    pub fn contains(&self, f: &FieldCtx, point: &ProjPoint) -> Result<bool, CurveError> {
        self.check_field(f)?;
        let [x, y, t] = point.coords();
        Ok(match *self {
            CurveModel::FermatHermitian { .. } | CurveModel::NormTraceHermitian { .. } => {
                self.hermitian_form().expect("hermitian").on_curve(f, [x, y, t])
            }
            CurveModel::GarciaStichtenoth { l } => {
                let d = l * l - l + 1;
                let lhs = f.mul(f.pow(y, d as u128), f.pow(t, (l * l - d) as u128));
                let rhs = f.sub(f.pow(x, (l * l) as u128), f.mul(x, f.pow(t, (l * l - 1) as u128)));
                lhs == rhs
            }
            CurveModel::GeneralizedGK { .. } => return Err(CurveError::Arity { expected: 3, got: 2 }),
        })
    }

    /// Membership of an affine point: `(x, y)` for plane models, `(x, y, z)` for `C_{l^n}`.
    pub fn contains_affine(&self, f: &FieldCtx, coords: &[Fe]) -> Result<bool, CurveError> {
        self.check_field(f)?;
        let expected = self.ambient_dimension() as usize;
        if coords.len() != expected {
            return Err(CurveError::Arity { expected, got: coords.len() });
        }
        match *self {
            CurveModel::GeneralizedGK { l, n } => {
                let (x, y, z) = (coords[0], coords[1], coords[2]);
                let e = (l.pow(n) + 1) / (l + 1);
                let first = f.pow(z, e as u128) == f.sub(f.pow(y, (l * l) as u128), y);
                let second = f.add(f.pow(x, l as u128), x) == f.pow(y, (l + 1) as u128);
                Ok(first && second)
            }
            _ => {
                let p = ProjPoint::new(f, [coords[0], coords[1], f.one()]).expect("nonzero");
                self.contains(f, &p)
            }
        }
    }

    /// Number of points over `f`, counting points at infinity of the nonsingular model.
    pub fn count_points_over(&self, f: &FieldCtx) -> Result<u64, CurveError> {
        self.check_field(f)?;
        if f.size() > ENUMERATION_CAP {
            return Err(CurveError::EnumerationCap(f.size()));
        }
        Ok(match *self {
            CurveModel::FermatHermitian { q } => {
                let e = (q + 1) as u128;
                let affine = separated_count(f, |x| f.add(f.pow(x, e), f.one()), |y| f.neg(f.pow(y, e)));
                let minus_one = f.neg(f.one());
                let at_inf = f.elements().filter(|&x| f.pow(x, e) == minus_one).count() as u64;
                affine + at_inf
            }
            CurveModel::NormTraceHermitian { q } => {
                let q = q as u128;
                separated_count(f, |x| f.add(f.pow(x, q), x), |y| f.pow(y, q + 1)) + 1
            }
            CurveModel::GarciaStichtenoth { l } => {
                let d = (l * l - l + 1) as u128;
                let l2 = (l * l) as u128;
                separated_count(f, |x| f.sub(f.pow(x, l2), x), |y| f.pow(y, d)) + 1
            }
            CurveModel::GeneralizedGK { l, n } => {
                let e = ((l.pow(n) + 1) / (l + 1)) as u128;
                let l = l as u128;
                let x_hist = histogram(f, |x| f.add(f.pow(x, l), x));
                let z_hist = histogram(f, |z| f.pow(z, e));
                let affine: u64 = (0..f.size())
                    .into_par_iter()
                    .map(|v| {
                        let y = f.elem(v).expect("in range");
                        let a = x_hist[f.pow(y, l + 1).value() as usize] as u64;
                        let b = z_hist[f.sub(f.pow(y, l * l), y).value() as usize] as u64;
                        a * b
                    })
                    .sum();
                affine + 1
            }
        })
    }

    /// Point count over the maximality field.
    pub fn count_rational_points(&self) -> Result<u64, CurveError> {
        let (p, k) = self.maximality_field();
        self.count_points_over(&*build_field(p, k)?)
    }

    /// Whether the count over `f` attains the Hasse-Weil bound over `f`.
    pub fn maximality_check_over(&self, f: &FieldCtx) -> Result<bool, CurveError> {
        let count = self.count_points_over(f)? as u128;
        let size = f.size() as u128;
        let root = (size as f64).sqrt().round() as u128;
        if root * root != size {
            return Ok(false);
        }
        Ok(count == size + 1 + 2 * self.genus() as u128 * root)
    }

    pub fn maximality_check(&self) -> Result<bool, CurveError> {
        let (p, k) = self.maximality_field();
        self.maximality_check_over(&*build_field(p, k)?)
    }
}

fn histogram(f: &FieldCtx, map: impl Fn(Fe) -> Fe + Sync) -> Vec<u32> {
    (0..f.size())
        .into_par_iter()
        .fold(
            || vec![0u32; f.size() as usize],
            |mut h, v| {
                h[map(f.elem(v).expect("in range")).value() as usize] += 1;
                h
            },
        )
        .reduce(
            || vec![0u32; f.size() as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// `#{(x, y) : a(x) = b(y)}` by joining value histograms.
fn separated_count(f: &FieldCtx, a: impl Fn(Fe) -> Fe + Sync, b: impl Fn(Fe) -> Fe + Sync) -> u64 {
    let ha = histogram(f, a);
    let hb = histogram(f, b);
    ha.iter().zip(&hb).map(|(&x, &y)| x as u64 * y as u64).sum()
}

/// All rational points of a Hermitian model over `f`, in chart order.
pub fn hermitian_points(model: &CurveModel, f: &FieldCtx) -> Result<Vec<ProjPoint>, CurveError> {
    let form = model.hermitian_form().ok_or(CurveError::Arity { expected: 2, got: 3 })?;
    model.check_field(f)?;
    if f.size() > ENUMERATION_CAP {
        return Err(CurveError::EnumerationCap(f.size()));
    }
    let q = form.q() as u128;
    let one = f.one();
    // affine chart: bucket x by the part of the equation depending on x only
    let (ax, by): (Box<dyn Fn(Fe) -> Fe + Sync>, Box<dyn Fn(Fe) -> Fe + Sync>) = match form {
        HermitianForm::Fermat { .. } => (
            Box::new(move |x| f.add(f.pow(x, q + 1), one)),
            Box::new(move |y| f.neg(f.pow(y, q + 1))),
        ),
        HermitianForm::NormTrace { .. } => {
            (Box::new(move |x| f.add(f.pow(x, q), x)), Box::new(move |y| f.pow(y, q + 1)))
        }
    };
    let mut keyed: Vec<(u64, u64)> = (0..f.size()).map(|v| (ax(f.elem(v).unwrap()).value(), v)).collect();
    keyed.sort_unstable();
    let mut out = Vec::new();
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for yv in 0..f.size() {
        let key = by(f.elem(yv).unwrap()).value();
        let start = keyed.partition_point(|&(k, _)| k < key);
        for &(k, xv) in &keyed[start..] {
            if k != key {
                break;
            }
            pairs.push((xv, yv));
        }
    }
    pairs.sort_unstable();
    for (xv, yv) in pairs {
        out.push(ProjPoint::new(f, [f.elem(xv)?, f.elem(yv)?, one]).expect("nonzero"));
    }
    for x in f.elements() {
        let p = ProjPoint::new(f, [x, one, f.zero()]).expect("nonzero");
        if form.on_curve(f, p.coords()) {
            out.push(p);
        }
    }
    let ideal = ProjPoint::new(f, [one, f.zero(), f.zero()]).expect("nonzero");
    if form.on_curve(f, ideal.coords()) {
        out.push(ideal);
    }
    Ok(out)
}
