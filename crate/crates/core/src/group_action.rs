//! Fixed points of projectivities on a Hermitian curve via eigenvectors, and the
//! orbit, stabilizer and Sylow bookkeeping built on them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{build_field, embed, poly, FieldCtx, Fe, GfError, TowerMap};
use crate::pgu3::{mat_det, mat_minor_sum, mat_mul, mat_trace, Mat3, Pgu, PguError, Projectivity, SubgroupSpec};
use crate::proj3::{line_points, ProjLine, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("point set is not closed under the group")]
    NotClosed,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("projectivity does not stabilize the line")]
    NotStabilized,
    #[error("{p} does not divide the group order {order}")]
    NotDividing { p: u64, order: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Pgu(#[from] PguError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A point over `F_{q^{2d}}`, stored in its minimal field (`d` in 1..=3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CPoint {
    degree: u32,
    coords: [Fe; 3],
}

impl CPoint {
    /// Degree of the coordinate field over `F_{q^2}`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.coords
    }

    pub fn rational(p: &ProjPoint) -> Self {
        CPoint { degree: 1, coords: p.coords() }
    }
}

/// `F_{q^{2d}}` with the embedding of `F_{q^2}`.
fn extension(pgu: &Pgu, d: u32) -> Result<(Arc<FieldCtx>, Arc<TowerMap>), GfError> {
    let f = pgu.field();
    let e = build_field(f.characteristic(), f.degree() * d)?;
    let map = embed(f, &e)?;
    Ok((e, map))
}

/// Applies projectivities to points of any of the fields `F_{q^2}`, `F_{q^4}`, `F_{q^6}`.
pub struct Actor {
    pgu: Pgu,
    ext: [Option<(Arc<FieldCtx>, Arc<TowerMap>)>; 3],
}

impl Actor {
    pub fn new(pgu: &Pgu) -> Self {
        Actor { pgu: pgu.clone(), ext: [None, None, None] }
    }

    fn ensure(&mut self, d: u32) -> Result<(), GfError> {
        let slot = (d - 1) as usize;
        if d > 1 && self.ext[slot].is_none() {
            self.ext[slot] = Some(extension(&self.pgu, d)?);
        }
        Ok(())
    }

    fn field(&self, d: u32) -> &FieldCtx {
        match d {
            1 => self.pgu.field(),
            _ => &self.ext[(d - 1) as usize].as_ref().expect("extension prepared").0,
        }
    }

    /// Prepares every extension used by `points`.
    pub fn prepare(&mut self, points: &[CPoint]) -> Result<(), GfError> {
        let degrees: BTreeSet<u32> = points.iter().map(|p| p.degree).collect();
        for d in degrees {
            self.ensure(d)?;
        }
        Ok(())
    }

    pub fn apply(&self, sigma: &Projectivity, p: &CPoint) -> CPoint {
        let f = self.field(p.degree);
        let m = match p.degree {
            1 => sigma.matrix(),
            d => sigma.lift(&self.ext[(d - 1) as usize].as_ref().expect("extension prepared").1),
        };
        let v = crate::pgu3::mat_apply(f, &m, p.coords);
        CPoint { degree: p.degree, coords: ProjPoint::new(f, v).expect("invertible").coords() }
    }

    pub fn on_curve(&self, p: &CPoint) -> bool {
        self.pgu.form().on_curve(self.field(p.degree), p.coords)
    }
}

/// Intersection of a pointwise-fixed axis with the curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisInfo {
    pub line: ProjLine,
    /// `1` for a tangent, `q + 1` for a secant.
    pub curve_count: u64,
    /// The intersection points, when the base field is small enough to list them.
    pub curve_points: Option<Vec<CPoint>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedKind {
    /// The identity.
    All,
    /// At most three isolated fixed points.
    Finite,
    /// A pointwise-fixed line plus possibly an isolated center.
    Line(AxisInfo),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointSet {
    pub kind: FixedKind,
    /// Isolated fixed points with their on-curve flags.
    pub points: Vec<(CPoint, bool)>,
}

impl FixedPointSet {
    /// Number of fixed points on the curve; `None` for the identity.
    pub fn on_curve_count(&self) -> Option<u64> {
        let isolated = self.points.iter().filter(|(_, on)| *on).count() as u64;
        match &self.kind {
            FixedKind::All => None,
            FixedKind::Finite => Some(isolated),
            FixedKind::Line(axis) => Some(isolated + axis.curve_count),
        }
    }

    /// The fixed points on the curve, when they can be listed.
    pub fn on_curve_points(&self) -> Option<Vec<CPoint>> {
        let mut out: Vec<CPoint> = self.points.iter().filter(|(_, on)| *on).map(|(p, _)| *p).collect();
        match &self.kind {
            FixedKind::All => return None,
            FixedKind::Finite => {}
            FixedKind::Line(axis) => out.extend(axis.curve_points.clone()?),
        }
        out.sort();
        Some(out)
    }
}

fn nullspace(f: &FieldCtx, m: Mat3) -> Vec<[Fe; 3]> {
    let mut a = m;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..3 {
        let Some(i) = (r..3).find(|&i| !f.is_zero(a[i][c])) else { continue };
        a.swap(r, i);
        let inv = f.inv(a[r][c]).expect("nonzero");
        a[r] = a[r].map(|x| f.mul(x, inv));
        for i in 0..3 {
            if i != r && !f.is_zero(a[i][c]) {
                let s = a[i][c];
                for j in 0..3 {
                    a[i][j] = f.sub(a[i][j], f.mul(s, a[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..3)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [f.zero(); 3];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[row][free]);
            }
            v
        })
        .collect()
}

fn shift(f: &FieldCtx, m: &Mat3, r: Fe) -> Mat3 {
    let mut out = *m;
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = f.sub(row[i], r);
    }
    out
}

/// Characteristic polynomial `x^3 - tr x^2 + c2 x - det`, low degree first.
pub fn char_poly(f: &FieldCtx, m: &Mat3) -> poly::Poly {
    vec![f.neg(mat_det(f, m)), mat_minor_sum(f, m), f.neg(mat_trace(f, m)), f.one()]
}

/// Fixed points of `sigma` on PG(2), tagged by membership in the curve of `pgu`.
pub fn fixed_points(pgu: &Pgu, sigma: &Projectivity) -> Result<FixedPointSet, ActionError> {
    if pgu.is_identity(sigma) {
        return Ok(FixedPointSet { kind: FixedKind::All, points: Vec::new() });
    }
    let f = pgu.field();
    let form = pgu.form();
    let m = sigma.matrix();
    let mut rest = char_poly(f, &m);
    let roots = poly::roots(f, &rest);
    for &r in &roots {
        let lin = vec![f.neg(r), f.one()];
        loop {
            let (quo, rem) = poly::divrem(f, &rest, &lin);
            if !rem.is_empty() {
                break;
            }
            rest = quo;
        }
    }
    let mut points = Vec::new();
    let mut kind = FixedKind::Finite;
    for &r in &roots {
        let ker = nullspace(f, shift(f, &m, r));
        match ker.len() {
            1 => {
                let p = ProjPoint::new(f, ker[0]).expect("nonzero");
                points.push((CPoint::rational(&p), form.on_curve(f, p.coords())));
            }
            2 => {
                let row = shift(f, &m, r)
                    .into_iter()
                    .find(|row| row.iter().any(|&x| !f.is_zero(x)))
                    .expect("rank one");
                let line = ProjLine::new(f, row).expect("nonzero");
                kind = FixedKind::Line(axis_info(pgu, line));
            }
            _ => unreachable!("non-identity projectivity has a proper eigenspace"),
        }
    }
    let d = poly::degree(&rest).unwrap_or(0) as u32;
    if d >= 2 {
        let (e, map) = extension(pgu, d)?;
        let lifted_m = sigma.lift(&map);
        let lifted_poly: poly::Poly = rest.iter().map(|&c| map.apply(c)).collect();
        for r in poly::roots(&e, &lifted_poly) {
            let ker = nullspace(&e, shift(&e, &lifted_m, r));
            debug_assert_eq!(ker.len(), 1);
            let p = ProjPoint::new(&e, ker[0]).expect("nonzero");
            points.push((CPoint { degree: d, coords: p.coords() }, form.on_curve(&e, p.coords())));
        }
    }
    points.sort();
    Ok(FixedPointSet { kind, points })
}

fn axis_info(pgu: &Pgu, line: ProjLine) -> AxisInfo {
    let f = pgu.field();
    let form = pgu.form();
    if f.is_table() {
        let pts: Vec<CPoint> = line_points(f, &line)
            .into_par_iter()
            .filter(|p| form.on_curve(f, p.coords()))
            .map(|p| CPoint::rational(&p))
            .collect();
        let mut pts = pts;
        pts.sort();
        AxisInfo { line, curve_count: pts.len() as u64, curve_points: Some(pts) }
    } else {
        let tangent = form.on_curve(f, form.pole(f, &line).coords());
        let curve_count = if tangent { 1 } else { pgu.q() + 1 };
        AxisInfo { line, curve_count, curve_points: None }
    }
}

/// No nontrivial element fixes a point of the curve.
pub fn is_semiregular(g: &SubgroupSpec) -> Result<bool, ActionError> {
    let pgu = g.pgu();
    let counts: Result<Vec<u64>, ActionError> = g.elements()[1..]
        .par_iter()
        .map(|s| Ok(fixed_points(pgu, s)?.on_curve_count().unwrap_or(0)))
        .collect();
    Ok(counts?.iter().all(|&c| c == 0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Least point of the orbit.
    pub representative: CPoint,
    pub points: Vec<CPoint>,
}

fn orbit_of(actor: &Actor, g: &SubgroupSpec, p: &CPoint) -> Vec<CPoint> {
    let set: BTreeSet<CPoint> = g.elements().iter().map(|s| actor.apply(s, p)).collect();
    set.into_iter().collect()
}

/// Orbits of `g` on a point set, which must be closed under `g`.
pub fn orbits(g: &SubgroupSpec, points: &[CPoint]) -> Result<Vec<Orbit>, ActionError> {
    let mut actor = Actor::new(g.pgu());
    actor.prepare(points)?;
    let all: BTreeSet<CPoint> = points.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in &all {
        if seen.contains(p) {
            continue;
        }
        let orbit = orbit_of(&actor, g, p);
        if orbit.iter().any(|x| !all.contains(x)) {
            return Err(ActionError::NotClosed);
        }
        seen.extend(orbit.iter().copied());
        out.push(Orbit { representative: orbit[0], points: orbit });
    }
    Ok(out)
}

/// Orbits of `g` on the closure of a point set under `g`.
pub fn orbit_closure(g: &SubgroupSpec, points: &[CPoint]) -> Result<Vec<Orbit>, ActionError> {
    let mut actor = Actor::new(g.pgu());
    actor.prepare(points)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in points.iter().collect::<BTreeSet<_>>() {
        if seen.contains(p) {
            continue;
        }
        let orbit = orbit_of(&actor, g, p);
        seen.extend(orbit.iter().copied());
        out.push(Orbit { representative: orbit[0], points: orbit });
    }
    out.sort_by_key(|o| o.representative);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCensus {
    /// Curve points fixed by some nontrivial element, sorted.
    pub points: Vec<CPoint>,
    /// `|Stab(P)|` for each census point.
    pub stabilizer_sizes: Vec<usize>,
    /// `sum over nontrivial elements of #fixed points on the curve`.
    pub incidence_elementwise: u64,
    /// `sum over census points of (|Stab(P)| - 1)`.
    pub incidence_pointwise: u64,
    /// Census points partitioned into orbits of the normal subgroup.
    pub orbits: Vec<Orbit>,
    /// Orbits fixed by some nontrivial element of the quotient group.
    pub quotient_fixed: usize,
}

/// Counts fixed-point incidences of `gbar` on the curve both ways and splits the
/// census into orbits of the normal subgroup `g`.
pub fn stabilizer_census(gbar: &SubgroupSpec, g: &SubgroupSpec) -> Result<StabilizerCensus, ActionError> {
    if !g.is_normal_in(gbar) {
        return Err(ActionError::NotNormal);
    }
    let pgu = gbar.pgu();
    let per_element: Result<Vec<(u64, Vec<CPoint>)>, ActionError> = gbar.elements()[1..]
        .par_iter()
        .map(|s| {
            let fp = fixed_points(pgu, s)?;
            let pts = fp
                .on_curve_points()
                .ok_or_else(|| ActionError::Unsupported("axis too large to list".into()))?;
            Ok((fp.on_curve_count().unwrap_or(0), pts))
        })
        .collect();
    let per_element = per_element?;
    let incidence_elementwise = per_element.iter().map(|(c, _)| c).sum();
    let points: Vec<CPoint> = per_element
        .iter()
        .flat_map(|(_, pts)| pts.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut actor = Actor::new(pgu);
    actor.prepare(&points)?;
    let stabilizer_sizes: Vec<usize> = points
        .par_iter()
        .map(|p| gbar.elements().iter().filter(|s| actor.apply(s, p) == *p).count())
        .collect();
    let incidence_pointwise = stabilizer_sizes.iter().map(|&s| (s - 1) as u64).sum();
    let orbits = orbits(g, &points)?;
    let outside: Vec<&Projectivity> = gbar.elements().iter().filter(|s| !g.contains(s)).collect();
    let quotient_fixed = orbits
        .iter()
        .filter(|o| {
            let members: BTreeSet<&CPoint> = o.points.iter().collect();
            outside.iter().any(|s| members.contains(&actor.apply(s, &o.representative)))
        })
        .count();
    Ok(StabilizerCensus {
        points,
        stabilizer_sizes,
        incidence_elementwise,
        incidence_pointwise,
        orbits,
        quotient_fixed,
    })
}

/// A 2x2 matrix modulo scalars, first nonzero entry equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proj2 {
    m: [[Fe; 2]; 2],
}

impl Proj2 {
    pub fn new(f: &FieldCtx, m: [[Fe; 2]; 2]) -> Self {
        let lead = m.iter().flatten().copied().find(|&x| !f.is_zero(x)).expect("nonzero matrix");
        let inv = f.inv(lead).expect("nonzero");
        Proj2 { m: m.map(|row| row.map(|x| f.mul(x, inv))) }
    }

    pub fn matrix(&self) -> [[Fe; 2]; 2] {
        self.m
    }

    pub fn mul(&self, f: &FieldCtx, other: &Proj2) -> Proj2 {
        let (a, b) = (self.m, other.m);
        let e = |i: usize, j: usize| f.add(f.mul(a[i][0], b[0][j]), f.mul(a[i][1], b[1][j]));
        Proj2::new(f, [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn is_identity(&self, f: &FieldCtx) -> bool {
        self.m == [[f.one(), f.zero()], [f.zero(), f.one()]]
    }
}

/// Change of frame sending `l` to `T = 0`: standard rows completed by `l` itself.
fn frame(f: &FieldCtx, l: &ProjLine) -> (Mat3, Mat3) {
    let c = l.coords();
    let k = (0..3).find(|&i| !f.is_zero(c[i])).expect("nonzero line");
    let mut m = [[f.zero(); 3]; 3];
    let mut row = 0;
    for i in (0..3).filter(|&i| i != k) {
        m[row][i] = f.one();
        row += 1;
    }
    m[2] = c;
    let det = mat_det(f, &m);
    let adj = crate::pgu3::mat_adj(f, &m);
    let inv = f.inv(det).expect("frame is invertible");
    (m, adj.map(|r| r.map(|x| f.mul(x, inv))))
}

/// The action induced on a stabilized line.
pub fn restrict_to_line(pgu: &Pgu, sigma: &Projectivity, l: &ProjLine) -> Result<Proj2, ActionError> {
    let f = pgu.field();
    let m = sigma.matrix();
    let lc = l.coords();
    // lines transform as rows: l -> l M^{-1}; l is stable iff l M is proportional to l
    let lm: [Fe; 3] = [0, 1, 2].map(|j| (0..3).fold(f.zero(), |acc, i| f.add(acc, f.mul(lc[i], m[i][j]))));
    if ProjLine::new(f, lm).ok() != Some(*l) {
        return Err(ActionError::NotStabilized);
    }
    let (c, c_inv) = frame(f, l);
    let mp = mat_mul(f, &mat_mul(f, &c, &m), &c_inv);
    Ok(Proj2::new(f, [[mp[0][0], mp[0][1]], [mp[1][0], mp[1][1]]]))
}

fn element_order_in(g: &SubgroupSpec, s: &Projectivity) -> usize {
    let pgu = g.pgu();
    let mut x = *s;
    let mut n = 1;
    while !pgu.is_identity(&x) {
        x = pgu.mul(&x, s);
        n += 1;
    }
    n
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

#[derive(Debug, Clone)]
pub struct SylowCensus {
    pub p: u64,
    pub subgroup_order: usize,
    pub subgroups: Vec<SubgroupSpec>,
    /// Common fixed points on the curve of each Sylow subgroup.
    pub fixed_points: Vec<Vec<CPoint>>,
    /// Whether the union of those fixed points is a single orbit of the group.
    pub single_orbit: bool,
}

impl SylowCensus {
    pub fn count(&self) -> usize {
        self.subgroups.len()
    }
}

fn sorted_elements(s: &SubgroupSpec) -> Vec<Projectivity> {
    let mut v = s.elements().to_vec();
    v.sort();
    v
}

/// All Sylow `p`-subgroups of `g`, grown from one by conjugation, with their fixed points.
pub fn sylow_census(g: &SubgroupSpec, p: u64) -> Result<SylowCensus, ActionError> {
    let order = g.order();
    let pu = p as usize;
    if p < 2 || order % pu != 0 {
        return Err(ActionError::NotDividing { p, order });
    }
    let mut target = 1;
    while order % (target * pu) == 0 {
        target *= pu;
    }
    let pgu = g.pgu();
    let p_elements: Vec<Projectivity> = g
        .elements()
        .iter()
        .copied()
        .filter(|s| !pgu.is_identity(s) && is_power_of(element_order_in(g, s), pu))
        .collect();
    let mut gens: Vec<Projectivity> = Vec::new();
    let mut sylow = pgu.generate(&gens, order)?;
    while sylow.order() < target {
        let next = p_elements
            .iter()
            .find(|x| !sylow.contains(x) && sylow.generators().iter().all(|h| sylow.contains(&pgu.conjugate(x, h))))
            .copied()
            .expect("a p-subgroup below Sylow order has a p-element in its normalizer");
        gens.push(next);
        sylow = pgu.generate(&gens, order)?;
    }
    let mut seen: BTreeMap<Vec<Projectivity>, SubgroupSpec> = BTreeMap::new();
    for x in g.elements() {
        let conj_gens: Vec<Projectivity> = gens.iter().map(|h| pgu.conjugate(x, h)).collect();
        let s = pgu.generate(&conj_gens, order)?;
        seen.entry(sorted_elements(&s)).or_insert(s);
    }
    let subgroups: Vec<SubgroupSpec> = seen.into_values().collect();
    let mut fixed = Vec::new();
    for s in &subgroups {
        let mut common: Option<BTreeSet<CPoint>> = None;
        for h in s.generators() {
            let pts: BTreeSet<CPoint> = fixed_points(pgu, h)?
                .on_curve_points()
                .ok_or_else(|| ActionError::Unsupported("axis too large to list".into()))?
                .into_iter()
                .collect();
            common = Some(match common {
                None => pts,
                Some(c) => c.intersection(&pts).copied().collect(),
            });
        }
        fixed.push(common.unwrap_or_default().into_iter().collect::<Vec<_>>());
    }
    let union: Vec<CPoint> = fixed.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let single_orbit = match union.first() {
        None => false,
        Some(first) => {
            let mut actor = Actor::new(pgu);
            actor.prepare(&union)?;
            let orbit = orbit_of(&actor, g, first);
            orbit == union
        }
    };
    Ok(SylowCensus { p, subgroup_order: target, subgroups, fixed_points: fixed, single_orbit })
}

/// Sharp 2-transitivity on a closed orbit; vacuously true for at most one point and the trivial group.
pub fn sharply_2_transitive(g: &SubgroupSpec, orbit: &[CPoint]) -> Result<bool, ActionError> {
    let pts: BTreeSet<CPoint> = orbit.iter().copied().collect();
    let mut actor = Actor::new(g.pgu());
    actor.prepare(orbit)?;
    for p in &pts {
        if g.elements().iter().any(|s| !pts.contains(&actor.apply(s, p))) {
            return Err(ActionError::NotClosed);
        }
    }
    let n = pts.len();
    if n <= 1 {
        return Ok(g.order() == 1);
    }
    if g.order() != n * (n - 1) {
        return Ok(false);
    }
    let transitive = pts.first().map(|p| orbit_of(&actor, g, p).len() == n).unwrap_or(false);
    let two_point_free = g.elements()[1..]
        .iter()
        .all(|s| pts.iter().filter(|p| actor.apply(s, p) == **p).count() <= 1);
    Ok(transitive && two_point_free)
}
