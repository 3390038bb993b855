use std::sync::Arc;

use super::{global_registry, FieldCtx, Fe, GfError};

/// A field embedding `src -> dst`, fixed by the image of the root of the source modulus.
#[derive(Debug)]
pub struct TowerMap {
    src: Arc<FieldCtx>,
    dst: Arc<FieldCtx>,
    image: Fe,
    powers: Vec<Fe>,
    // F_p-solve data for preimages: pivot coordinates of dst and the inverse of
    // the k x k minor of the basis-image matrix on them.
    pivots: Vec<usize>,
    minor_inv: Vec<Vec<u64>>,
}

fn check_compatible(src: &FieldCtx, dst: &FieldCtx) -> Result<(), GfError> {
    if src.characteristic() != dst.characteristic() {
        return Err(GfError::CharacteristicMismatch(src.characteristic(), dst.characteristic()));
    }
    if dst.degree() % src.degree() != 0 {
        return Err(GfError::DegreeMismatch { src: src.degree(), dst: dst.degree() });
    }
    Ok(())
}

fn eval_fp_poly(dst: &FieldCtx, coeffs: &[u64], x: Fe) -> Fe {
    coeffs
        .iter()
        .rev()
        .fold(dst.zero(), |acc, &c| dst.add(dst.mul(acc, x), dst.from_int(c as i64)))
}

impl TowerMap {
    /// Embedding sending the source modulus root to its smallest root in `dst`.
    pub fn new(src: Arc<FieldCtx>, dst: Arc<FieldCtx>) -> Result<Self, GfError> {
        check_compatible(&src, &dst)?;
        let k = src.degree();
        let image = if k == 1 {
            dst.from_int(src.modulus_root().value() as i64)
        } else {
            let n_src = src.size() - 1;
            let gamma = dst.pow(dst.generator(), ((dst.size() - 1) / n_src) as u128);
            let mut x = gamma;
            let mut found = None;
            for _ in 0..n_src {
                if dst.is_zero(eval_fp_poly(&dst, src.modulus(), x)) {
                    found = Some(x);
                    break;
                }
                x = dst.mul(x, gamma);
            }
            let root = found.expect("source modulus splits in the extension");
            (0..k)
                .map(|j| dst.frobenius(root, j))
                .min_by_key(|r| r.value())
                .expect("k >= 1")
        };
        Self::from_image(src, dst, image)
    }

    /// Embedding determined by an explicit image of the source modulus root.
    pub fn from_image(src: Arc<FieldCtx>, dst: Arc<FieldCtx>, image: Fe) -> Result<Self, GfError> {
        check_compatible(&src, &dst)?;
        if !dst.contains(image) || !dst.is_zero(eval_fp_poly(&dst, src.modulus(), image)) {
            return Err(GfError::Config("image is not a root of the source modulus".into()));
        }
        let k = src.degree() as usize;
        let mut powers = Vec::with_capacity(k);
        let mut acc = dst.one();
        for _ in 0..k {
            powers.push(acc);
            acc = dst.mul(acc, image);
        }
        let (pivots, minor_inv) = solve_data(&dst, &powers);
        Ok(TowerMap { src, dst, image, powers, pivots, minor_inv })
    }

    pub fn src(&self) -> &Arc<FieldCtx> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FieldCtx> {
        &self.dst
    }

    /// Image of the source modulus root.
    pub fn image(&self) -> Fe {
        self.image
    }

    pub fn apply(&self, a: Fe) -> Fe {
        debug_assert!(self.src.contains(a));
        let p = self.src.characteristic();
        let mut v = a.value();
        let mut out = self.dst.zero();
        for &pw in &self.powers {
            let d = v % p;
            v /= p;
            if d != 0 {
                out = self.dst.add(out, self.dst.scale(pw, d as i64));
            }
        }
        out
    }

    pub fn try_apply(&self, a: Fe) -> Result<Fe, GfError> {
        if !self.src.contains(a) {
            return Err(GfError::FieldMismatch);
        }
        Ok(self.apply(a))
    }

    /// The source element mapping to `b`, if `b` lies in the image.
    pub fn preimage(&self, b: Fe) -> Option<Fe> {
        debug_assert!(self.dst.contains(b));
        let p = self.src.characteristic();
        let digits = self.dst.coefficients(b);
        let rhs: Vec<u64> = self.pivots.iter().map(|&i| digits[i]).collect();
        let coeffs: Vec<u64> = self
            .minor_inv
            .iter()
            .map(|row| row.iter().zip(&rhs).fold(0u64, |acc, (x, y)| (acc + x * y) % p))
            .collect();
        let candidate = self.src.from_coefficients(&coeffs).ok()?;
        (self.apply(candidate) == b).then_some(candidate)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &TowerMap) -> Result<TowerMap, GfError> {
        if next.src.id() != self.dst.id() {
            return Err(GfError::FieldMismatch);
        }
        TowerMap::from_image(self.src.clone(), next.dst.clone(), next.apply(self.image))
    }
}

fn solve_data(dst: &FieldCtx, powers: &[Fe]) -> (Vec<usize>, Vec<Vec<u64>>) {
    let p = dst.characteristic();
    let k = powers.len();
    let kk = dst.degree() as usize;
    // rows: dst coordinates; columns: source basis
    let cols: Vec<Vec<u64>> = powers.iter().map(|&x| dst.coefficients(x)).collect();
    let inv = |a: u64| -> u64 {
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
    };
    // choose pivot rows greedily via elimination on the transposed matrix
    let mut pivots = Vec::new();
    let mut basis: Vec<Vec<u64>> = Vec::new(); // reduced rows (length k) with leading positions
    let mut leads: Vec<usize> = Vec::new();
    for row in 0..kk {
        let mut v: Vec<u64> = (0..k).map(|c| cols[c][row]).collect();
        for (b, &l) in basis.iter().zip(&leads) {
            if v[l] != 0 {
                let f = v[l];
                for c in 0..k {
                    v[c] = (v[c] + p * p - f * b[c] % p) % p;
                }
            }
        }
        if let Some(l) = v.iter().position(|&x| x != 0) {
            let s = inv(v[l]);
            for x in v.iter_mut() {
                *x = *x * s % p;
            }
            basis.push(v);
            leads.push(l);
            pivots.push(row);
            if pivots.len() == k {
                break;
            }
        }
    }
    // invert the k x k minor on the pivot rows
    let mut m: Vec<Vec<u64>> = pivots
        .iter()
        .map(|&r| {
            let mut row: Vec<u64> = (0..k).map(|c| cols[c][r]).collect();
            row.extend((0..k).map(|_| 0));
            row
        })
        .collect();
    for (i, row) in m.iter_mut().enumerate() {
        row[k + i] = 1;
    }
    for col in 0..k {
        let piv = (col..k).find(|&r| m[r][col] != 0).expect("embedding is injective");
        m.swap(col, piv);
        let s = inv(m[col][col]);
        for x in m[col].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..k {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
    }
    let minor_inv = m.into_iter().map(|row| row[k..].to_vec()).collect();
    (pivots, minor_inv)
}

/// Canonical embedding between two fields (cached in the global registry).
pub fn embed(src: &Arc<FieldCtx>, dst: &Arc<FieldCtx>) -> Result<Arc<TowerMap>, GfError> {
    global_registry().embedding(src, dst)
}

fn relative_degree(e_field: &FieldCtx, sub: &FieldCtx) -> Result<u32, GfError> {
    check_compatible(sub, e_field)?;
    Ok(e_field.degree() / sub.degree())
}

/// `N_{E/sub}(e)`, returned as an element of `sub`.
pub fn norm(e_field: &Arc<FieldCtx>, e: Fe, sub: &Arc<FieldCtx>) -> Result<Fe, GfError> {
    if !e_field.contains(e) {
        return Err(GfError::FieldMismatch);
    }
    relative_degree(e_field, sub)?;
    let exp = (e_field.size() - 1) / (sub.size() - 1);
    let value = e_field.pow(e, exp as u128);
    let map = embed(sub, e_field)?;
    Ok(map.preimage(value).expect("norm lies in the subfield"))
}

/// `Tr_{E/sub}(e)`, returned as an element of `sub`.
pub fn trace(e_field: &Arc<FieldCtx>, e: Fe, sub: &Arc<FieldCtx>) -> Result<Fe, GfError> {
    if !e_field.contains(e) {
        return Err(GfError::FieldMismatch);
    }
    let d = relative_degree(e_field, sub)?;
    let mut acc = e_field.zero();
    let mut x = e;
    for _ in 0..d {
        acc = e_field.add(acc, x);
        x = e_field.frobenius(x, sub.degree());
    }
    let map = embed(sub, e_field)?;
    Ok(map.preimage(acc).expect("trace lies in the subfield"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    #[test]
    fn prime_subfield_embedding() {
        let f2 = build_field(2, 1).unwrap();
        let f4 = build_field(2, 2).unwrap();
        let m = embed(&f2, &f4).unwrap();
        assert_eq!(m.apply(f2.zero()), f4.zero());
        assert_eq!(m.apply(f2.one()), f4.one());
    }

    #[test]
    fn degree_and_characteristic_obstructions() {
        let f4 = build_field(2, 2).unwrap();
        let f8 = build_field(2, 3).unwrap();
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(embed(&f4, &f8).unwrap_err(), GfError::DegreeMismatch { src: 2, dst: 3 });
        assert!(matches!(embed(&f4, &f9), Err(GfError::CharacteristicMismatch(2, 3))));
    }

    #[test]
    fn f64_into_f2_18_lands_in_fixed_field() {
        let f64_ = build_field(2, 6).unwrap();
        let big = build_field(2, 18).unwrap();
        let m = embed(&f64_, &big).unwrap();
        for x in f64_.elements() {
            let y = m.apply(x);
            assert_eq!(big.pow(y, 64), y);
            assert_eq!(m.preimage(y), Some(x));
        }
        // homomorphism spot checks
        for (a, b) in [(3u64, 17u64), (63, 62), (5, 40)] {
            let (a, b) = (f64_.elem(a).unwrap(), f64_.elem(b).unwrap());
            assert_eq!(m.apply(f64_.mul(a, b)), big.mul(m.apply(a), m.apply(b)));
            assert_eq!(m.apply(f64_.add(a, b)), big.add(m.apply(a), m.apply(b)));
        }
        assert!(m.preimage(big.generator()).is_none());
    }

    #[test]
    fn norm_and_trace_f4_over_f2() {
        let f2 = build_field(2, 1).unwrap();
        let f4 = build_field(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(f4.mul(w, w), f4.add(w, f4.one()));
        assert_eq!(norm(&f4, w, &f2).unwrap(), f2.one());
        assert_eq!(trace(&f4, w, &f2).unwrap(), f2.one());
    }

    #[test]
    fn norm_kernel_has_q_plus_one_elements() {
        let f16 = build_field(2, 4).unwrap();
        let f4 = build_field(2, 2).unwrap();
        let ones = f16.elements().filter(|&x| norm(&f16, x, &f4).unwrap() == f4.one()).count();
        assert_eq!(ones, 5);
        let f3 = build_field(3, 1).unwrap();
        let f27 = build_field(3, 3).unwrap();
        assert!(norm(&f27, f27.one(), &build_field(3, 2).unwrap()).is_err());
        assert_eq!(trace(&f27, f27.one(), &f3).unwrap(), f3.zero());
    }
}
