//! Projectivities of PG(2, q^2) preserving a Hermitian form: unitarity, PSU
//! membership, element orders, named generators and subgroup closure.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::curves::CurveModel;
use crate::gf::{build_field, FieldCtx, Fe, GfError, TowerMap};
use crate::numtheory;
use crate::proj3::{HermitianForm, ProjPoint};

pub type Mat3 = [[Fe; 3]; 3];

/// Default closure cap for [`Pgu::generate`].
pub const DEFAULT_CLOSURE_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PguError {
    #[error("curve model has no Hermitian form")]
    NotHermitian,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unitary for the form")]
    NotUnitary,
    #[error("matrix entries belong to a different field")]
    FieldMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("closure exceeds the cap of {0} elements")]
    ClosureCap(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A 3x3 matrix modulo scalars, first nonzero entry (row-major) equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Projectivity {
    m: Mat3,
}

impl Projectivity {
    pub fn matrix(&self) -> Mat3 {
        self.m
    }

    /// Entries pushed through a field embedding.
    pub fn lift(&self, map: &TowerMap) -> Mat3 {
        self.m.map(|row| row.map(|x| map.apply(x)))
    }
}

/// Which of the two cyclic shapes a three-cycle takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleShape {
    /// `[[0, l, 0], [0, 0, m], [1, 0, 0]]`
    A,
    /// `[[0, 0, l], [m, 0, 0], [0, 1, 0]]`
    B,
}

pub fn mat_mul(f: &FieldCtx, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[f.zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).fold(f.zero(), |acc, k| f.add(acc, f.mul(a[i][k], b[k][j])));
        }
    }
    out
}

pub fn mat_apply(f: &FieldCtx, a: &Mat3, v: [Fe; 3]) -> [Fe; 3] {
    [0, 1, 2].map(|i| (0..3).fold(f.zero(), |acc, k| f.add(acc, f.mul(a[i][k], v[k]))))
}

pub fn mat_det(f: &FieldCtx, a: &Mat3) -> Fe {
    let t = |i: usize, j: usize, k: usize| f.mul(a[0][i], f.mul(a[1][j], a[2][k]));
    let pos = f.add(f.add(t(0, 1, 2), t(1, 2, 0)), t(2, 0, 1));
    let neg = f.add(f.add(t(0, 2, 1), t(1, 0, 2)), t(2, 1, 0));
    f.sub(pos, neg)
}

/// Adjugate: `a * adj(a) = det(a) I`.
pub fn mat_adj(f: &FieldCtx, a: &Mat3) -> Mat3 {
    let mut out = [[f.zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            *cell = f.sub(f.mul(a[r0][c0], a[r1][c1]), f.mul(a[r0][c1], a[r1][c0]));
        }
    }
    out
}

pub fn mat_trace(f: &FieldCtx, a: &Mat3) -> Fe {
    f.add(f.add(a[0][0], a[1][1]), a[2][2])
}

/// Sum of the principal 2x2 minors.
pub fn mat_minor_sum(f: &FieldCtx, a: &Mat3) -> Fe {
    let m = |i: usize, j: usize| f.sub(f.mul(a[i][i], a[j][j]), f.mul(a[i][j], a[j][i]));
    f.add(f.add(m(0, 1), m(0, 2)), m(1, 2))
}

fn diag(f: &FieldCtx, d: [Fe; 3]) -> Mat3 {
    let mut out = [[f.zero(); 3]; 3];
    for i in 0..3 {
        out[i][i] = d[i];
    }
    out
}


/// The group PGU(3, q) of a Hermitian form, acting on PG(2, q^2).
#[derive(Debug, Clone)]
pub struct Pgu {
    f: Arc<FieldCtx>,
    form: HermitianForm,
    gram: Mat3,
}

impl Pgu {
    pub fn new(form: HermitianForm) -> Result<Self, PguError> {
        let (p, e) = numtheory::prime_power(form.q())
            .ok_or_else(|| PguError::Precondition(format!("{} is not a prime power", form.q())))?;
        let f = build_field(p, 2 * e)?;
        let gram = form.gram_in(&f);
        Ok(Pgu { f, form, gram })
    }

    pub fn for_model(model: &CurveModel) -> Result<Self, PguError> {
        Self::new(model.hermitian_form().ok_or(PguError::NotHermitian)?)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.f
    }

    pub fn form(&self) -> HermitianForm {
        self.form
    }

    pub fn q(&self) -> u64 {
        self.form.q()
    }

    /// `q^3 (q^3 + 1) (q^2 - 1)`.
    pub fn group_order(&self) -> u128 {
        let q = self.q() as u128;
        q * q * q * (q * q * q + 1) * (q * q - 1)
    }

    fn canonical(&self, m: Mat3) -> Projectivity {
        let f = &self.f;
        let lead = m.iter().flatten().copied().find(|&x| !f.is_zero(x)).expect("nonzero matrix");
        let inv = f.inv(lead).expect("nonzero");
        Projectivity { m: m.map(|row| row.map(|x| f.mul(x, inv))) }
    }

    pub fn projectivity(&self, m: Mat3) -> Result<Projectivity, PguError> {
        if m.iter().flatten().any(|&x| !self.f.contains(x)) {
            return Err(PguError::FieldMismatch);
        }
        if self.f.is_zero(mat_det(&self.f, &m)) {
            return Err(PguError::Singular);
        }
        Ok(self.canonical(m))
    }

    pub fn identity(&self) -> Projectivity {
        let f = &self.f;
        Projectivity { m: diag(f, [f.one(); 3]) }
    }

    pub fn mul(&self, a: &Projectivity, b: &Projectivity) -> Projectivity {
        self.canonical(mat_mul(&self.f, &a.m, &b.m))
    }

    pub fn inv(&self, a: &Projectivity) -> Projectivity {
        self.canonical(mat_adj(&self.f, &a.m))
    }

    pub fn pow(&self, a: &Projectivity, mut e: u128) -> Projectivity {
        let mut acc = self.identity();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// `a b a^{-1}`.
    pub fn conjugate(&self, a: &Projectivity, b: &Projectivity) -> Projectivity {
        self.mul(&self.mul(a, b), &self.inv(a))
    }

    pub fn is_identity(&self, a: &Projectivity) -> bool {
        *a == self.identity()
    }

    pub fn det(&self, a: &Projectivity) -> Fe {
        mat_det(&self.f, &a.m)
    }

    pub fn apply(&self, a: &Projectivity, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&self.f, mat_apply(&self.f, &a.m, p.coords())).expect("invertible")
    }

    /// The scalar `l` with `conj(m)^T G m = l G`, if any.
    pub fn unitarity_scalar(&self, m: &Mat3) -> Option<Fe> {
        let f = &self.f;
        let bar_t: Mat3 = [0, 1, 2].map(|i| [0, 1, 2].map(|j| self.form.conj(f, m[j][i])));
        let prod = mat_mul(f, &mat_mul(f, &bar_t, &self.gram), m);
        let g = self.form.gram();
        let mut lambda = None;
        for i in 0..3 {
            for j in 0..3 {
                if g[i][j] == 0 {
                    if !f.is_zero(prod[i][j]) {
                        return None;
                    }
                    continue;
                }
                let l = f.div(prod[i][j], self.gram[i][j]).expect("nonzero gram entry");
                match lambda {
                    None => lambda = Some(l),
                    Some(prev) if prev != l => return None,
                    _ => {}
                }
            }
        }
        lambda.filter(|&l| !f.is_zero(l))
    }

    pub fn is_unitary(&self, m: &Mat3) -> bool {
        self.unitarity_scalar(m).is_some()
    }

    /// Membership in PSU(3, q): the determinant is a cube in `F_{q^2}`.
    ///
    /// Rescaling to unit unitarity scalar multiplies the determinant by a cube,
    /// so the class of `det(m)` decides.
    pub fn in_psu(&self, a: &Projectivity) -> Result<bool, PguError> {
        if !self.is_unitary(&a.m) {
            return Err(PguError::NotUnitary);
        }
        if (self.q() + 1) % 3 != 0 {
            return Ok(true);
        }
        Ok(self.f.is_dth_power(self.det(a), 3)?)
    }

    /// A multiple of every element order in PGL(3, q^2): `p^2 (Q + 1)(Q^3 - 1)` with `Q = q^2`,
    /// as a factorization.
    fn exponent_bound(&self) -> Vec<(u64, u32)> {
        let p = self.f.characteristic();
        let big_q = self.f.size();
        let mut fs = vec![(p, 2)];
        for n in [big_q + 1, big_q - 1, big_q * big_q + big_q + 1] {
            fs = numtheory::merge_factors(&fs, &numtheory::factor(n));
        }
        fs
    }

    /// Least `n >= 1` with `a^n` scalar.
    pub fn order_of(&self, a: &Projectivity) -> u128 {
        let fs = self.exponent_bound();
        let mut n: u128 = fs.iter().map(|&(r, e)| (r as u128).pow(e)).product();
        for &(r, e) in &fs {
            for _ in 0..e {
                if self.is_identity(&self.pow(a, n / r as u128)) {
                    n /= r as u128;
                } else {
                    break;
                }
            }
        }
        n
    }

    /// `diag(theta, theta^i, 1)`.
    pub fn make_alpha(&self, theta: Fe, i: i64) -> Result<Projectivity, PguError> {
        let f = &self.f;
        if !f.contains(theta) {
            return Err(PguError::FieldMismatch);
        }
        if f.is_zero(theta) {
            return Err(PguError::Precondition("theta must be nonzero".into()));
        }
        let e = i.rem_euclid((f.size() - 1) as i64) as u128;
        self.projectivity(diag(f, [theta, f.pow(theta, e), f.one()]))
    }

    /// `diag(a^{q+1}, a, 1)`.
    pub fn make_alpha_a(&self, a: Fe) -> Result<Projectivity, PguError> {
        let f = &self.f;
        if !f.contains(a) {
            return Err(PguError::FieldMismatch);
        }
        if f.is_zero(a) {
            return Err(PguError::Precondition("a must be nonzero".into()));
        }
        self.projectivity(diag(f, [f.pow(a, self.q() as u128 + 1), a, f.one()]))
    }

    /// `(X, Y, T) -> (X + cT, Y, T)`, requiring `c^q + c = 0`.
    pub fn make_beta(&self, c: Fe) -> Result<Projectivity, PguError> {
        let f = &self.f;
        if !f.contains(c) {
            return Err(PguError::FieldMismatch);
        }
        if !f.is_zero(f.add(self.form.conj(f, c), c)) {
            return Err(PguError::Precondition("c^q + c must vanish".into()));
        }
        let mut m = diag(f, [f.one(); 3]);
        m[0][2] = c;
        self.projectivity(m)
    }

    /// Three-cycle permuting the fundamental points, requiring `l^{q+1} = m^{q+1} = 1`.
    pub fn make_three_cycle(&self, shape: CycleShape, lambda: Fe, mu: Fe) -> Result<Projectivity, PguError> {
        let f = &self.f;
        if !f.contains(lambda) || !f.contains(mu) {
            return Err(PguError::FieldMismatch);
        }
        let e = self.q() as u128 + 1;
        if f.pow(lambda, e) != f.one() || f.pow(mu, e) != f.one() {
            return Err(PguError::Precondition("lambda and mu must have norm 1".into()));
        }
        let (z, o) = (f.zero(), f.one());
        let m = match shape {
            CycleShape::A => [[z, lambda, z], [z, z, mu], [o, z, z]],
            CycleShape::B => [[z, z, lambda], [mu, z, z], [z, o, z]],
        };
        self.projectivity(m)
    }

    /// Closure of `gens` under multiplication, breadth first.
    pub fn generate(&self, gens: &[Projectivity], cap: usize) -> Result<SubgroupSpec, PguError> {
        let mut elements = vec![self.identity()];
        let mut index = HashMap::new();
        index.insert(self.identity(), 0usize);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            head += 1;
            for g in gens {
                let y = self.mul(&x, g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(PguError::ClosureCap(cap));
                    }
                    index.insert(y, elements.len());
                    elements.push(y);
                }
            }
        }
        Ok(SubgroupSpec { pgu: self.clone(), gens: gens.to_vec(), elements, index })
    }
}

/// A finite subgroup given by generators together with its enumerated closure.
#[derive(Debug, Clone)]
pub struct SubgroupSpec {
    pgu: Pgu,
    gens: Vec<Projectivity>,
    elements: Vec<Projectivity>,
    index: HashMap<Projectivity, usize>,
}

impl SubgroupSpec {
    pub fn pgu(&self) -> &Pgu {
        &self.pgu
    }

    pub fn generators(&self) -> &[Projectivity] {
        &self.gens
    }

    /// Elements in closure order; the identity comes first.
    pub fn elements(&self) -> &[Projectivity] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &Projectivity) -> bool {
        self.index.contains_key(a)
    }

    /// Position of an element in [`Self::elements`].
    pub fn position(&self, a: &Projectivity) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupSpec) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// Whether `self` is a normal subgroup of `other` (conjugation of generators).
    pub fn is_normal_in(&self, other: &SubgroupSpec) -> bool {
        self.is_subgroup_of(other)
            && other
                .gens
                .iter()
                .all(|g| self.gens.iter().all(|h| self.contains(&self.pgu.conjugate(g, h))))
    }

    pub fn is_unitary(&self) -> bool {
        self.gens.iter().all(|g| self.pgu.is_unitary(&g.matrix()))
    }
}
