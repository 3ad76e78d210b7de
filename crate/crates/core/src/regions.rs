//! Convex polyhedral regions in half-space form, wedges and their Poincaré
//! images, convex cones, and support functions.
//!
//! Regions are dimension-generic (`dim` is a runtime value) because the
//! Fourier–Laplace checks work in ℝ¹ and ℝ² as well as in Minkowski space.
//! Support functions use the Euclidean pairing unless the name says
//! otherwise. A support value of `f64::INFINITY` means the linear program is
//! unbounded, which is decided by a separate recession-cone program.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::{FourVector, PoincareElement};
use crate::lp::{LinearProgram, LpOutcome};
use crate::{Error, Result};

/// Membership tolerance for points and vertices.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Largest H-representation for which vertices and rays are enumerated.
pub const VREP_LIMIT: usize = 64;

/// `{x : ⟨n, x⟩ ≤ c}` with the Euclidean pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.iter().all(|x| *x == 0.0) {
            return Err(Error::InvalidParameter("half-space normal must be nonzero".into()));
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn from_four(n: FourVector, c: f64) -> Result<Self> {
        Self::new(n.0.to_vec(), c)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    fn normalized(&self) -> (Vec<f64>, f64) {
        let len = norm(&self.normal);
        (self.normal.iter().map(|v| v / len).collect(), self.offset / len)
    }
}

/// Vertex/ray description: `conv(vertices) + cone(rays)`. Lineality
/// directions appear as a pair of opposite rays.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VRep {
    pub vertices: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
}

/// Intersection of finitely many closed half-spaces, with an optional cached
/// vertex/ray description.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyRegion {
    pub dim: usize,
    pub halfspaces: Vec<HalfSpace>,
    pub vrep: Option<VRep>,
}

impl PolyRegion {
    /// The whole space.
    pub fn full(dim: usize) -> Self {
        PolyRegion { dim, halfspaces: Vec::new(), vrep: None }
    }

    pub fn from_halfspaces(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if halfspaces.iter().any(|h| h.normal.len() != dim) {
            return Err(Error::InvalidParameter("half-space dimension mismatch".into()));
        }
        Ok(PolyRegion { dim, halfspaces, vrep: None })
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn boxed(lo: &[f64], hi: &[f64]) -> Self {
        let dim = lo.len();
        let mut hs = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            hs.push(HalfSpace { normal: e.clone(), offset: hi[j] });
            e[j] = -1.0;
            hs.push(HalfSpace { normal: e, offset: -lo[j] });
        }
        PolyRegion { dim, halfspaces: hs, vrep: None }
    }

    /// The single point `{a}`.
    pub fn point(a: &[f64]) -> Self {
        Self::boxed(a, a)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_tol(x, MEMBERSHIP_TOL)
    }

    pub fn contains_tol(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.value(x) <= tol * (1.0 + h.offset.abs()))
    }

    pub fn contains_four(&self, x: FourVector) -> bool {
        self.contains(&x.0)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.lp(&vec![0.0; self.dim]).solve(), LpOutcome::Infeasible)
    }

    fn lp(&self, objective: &[f64]) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim).maximize(objective);
        for h in &self.halfspaces {
            lp = lp.le(&h.normal, h.offset);
        }
        lp
    }

    /// Returns the region with its vertex/ray description computed (when the
    /// H-representation has at most [`VREP_LIMIT`] half-spaces).
    pub fn with_vrep(mut self) -> Self {
        if self.halfspaces.len() <= VREP_LIMIT {
            self.vrep = Some(enumerate_vrep(self.dim, &self.halfspaces));
        }
        self
    }

    /// Membership in `conv(vertices) + cone(rays)`; `None` without a cached
    /// vertex description.
    pub fn contains_by_vrep(&self, x: &[f64]) -> Option<bool> {
        let v = self.vrep.as_ref()?;
        if v.vertices.is_empty() {
            return Some(false);
        }
        let nv = v.vertices.len();
        let nvars = nv + v.rays.len();
        let mut lp = LinearProgram::new(nvars).all_nonneg();
        for i in 0..self.dim {
            let row: Vec<f64> = v.vertices.iter().chain(v.rays.iter()).map(|g| g[i]).collect();
            lp = lp.eq(&row, x[i]);
        }
        let mut ones = vec![0.0; nvars];
        ones[..nv].iter_mut().for_each(|o| *o = 1.0);
        lp = lp.eq(&ones, 1.0);
        Some(!matches!(lp.solve(), LpOutcome::Infeasible))
    }
}

/// The standard wedge `W` together with the Poincaré frame that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Wedge {
    pub frame: PoincareElement,
    pub region: PolyRegion,
}

impl Wedge {
    /// `W̄_L = L W̄`.
    pub fn from_frame(frame: PoincareElement) -> Self {
        let region = transform_region(&frame, &standard_wedge().region);
        Wedge { frame, region }
    }

    pub fn contains(&self, x: FourVector) -> bool {
        self.region.contains_four(x)
    }
}

/// Closure of `W = {x : x³ > |x⁰|}`: `x⁰ - x³ ≤ 0` and `-x⁰ - x³ ≤ 0`.
pub fn standard_wedge() -> Wedge {
    let hs = vec![
        HalfSpace { normal: vec![1.0, 0.0, 0.0, -1.0], offset: 0.0 },
        HalfSpace { normal: vec![-1.0, 0.0, 0.0, -1.0], offset: 0.0 },
    ];
    Wedge { frame: PoincareElement::IDENTITY, region: PolyRegion { dim: 4, halfspaces: hs, vrep: None } }
}

/// Image `{Λx + a : x ∈ R}` of a four-dimensional region.
pub fn transform_region(l: &PoincareElement, r: &PolyRegion) -> PolyRegion {
    assert_eq!(r.dim, 4, "Poincaré transforms act on four-dimensional regions");
    // n' = (Λ⁻¹)ᵀ n, c' = c + ⟨n', a⟩
    let inv_t = l.lambda.inverse().transpose();
    let halfspaces = r
        .halfspaces
        .iter()
        .map(|h| {
            let n = inv_t.apply(FourVector([h.normal[0], h.normal[1], h.normal[2], h.normal[3]]));
            HalfSpace { normal: n.0.to_vec(), offset: h.offset + n.euclidean_dot(l.a) }
        })
        .collect();
    let vrep = r.vrep.as_ref().map(|v| VRep {
        vertices: v.vertices.iter().map(|p| l.apply(four(p)).0.to_vec()).collect(),
        rays: v.rays.iter().map(|d| l.lambda.apply(four(d)).0.to_vec()).collect(),
    });
    PolyRegion { dim: 4, halfspaces, vrep }
}

fn four(v: &[f64]) -> FourVector {
    FourVector([v[0], v[1], v[2], v[3]])
}

/// Intersection with duplicate and redundant half-spaces removed. The vertex
/// description is recomputed when the pruned size permits.
pub fn intersect_regions(regions: &[PolyRegion]) -> Result<PolyRegion> {
    let first = regions.first().ok_or_else(|| Error::InvalidParameter("empty region list".into()))?;
    let dim = first.dim;
    if regions.iter().any(|r| r.dim != dim) {
        return Err(Error::InvalidParameter("region dimension mismatch".into()));
    }
    let mut hs: Vec<HalfSpace> = Vec::new();
    for h in regions.iter().flat_map(|r| r.halfspaces.iter()) {
        let (n, c) = h.normalized();
        let dup = hs.iter().any(|g| {
            let (m, d) = g.normalized();
            (c - d).abs() <= 1e-12 * (1.0 + c.abs()) && n.iter().zip(&m).all(|(a, b)| (a - b).abs() <= 1e-12)
        });
        if !dup {
            hs.push(h.clone());
        }
    }
    let joined = PolyRegion { dim, halfspaces: hs, vrep: None };
    if joined.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut kept = joined.halfspaces.clone();
    let mut i = 0;
    while i < kept.len() {
        let others = PolyRegion {
            dim,
            halfspaces: kept.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, h)| h.clone()).collect(),
            vrep: None,
        };
        let redundant = match others.lp(&kept[i].normal).solve() {
            LpOutcome::Optimal { value, .. } => value <= kept[i].offset + 1e-10 * (1.0 + kept[i].offset.abs()),
            _ => false,
        };
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(PolyRegion { dim, halfspaces: kept, vrep: None }.with_vrep())
}

/// `H_R(ξ) = sup_{x∈R} ⟨x, ξ⟩` (Euclidean pairing); `+∞` when unbounded.
pub fn support_function(r: &PolyRegion, xi: &[f64]) -> Result<f64> {
    if r.is_empty() {
        return Err(Error::EmptyRegion);
    }
    // recession cone program: max ⟨ξ,d⟩, A d ≤ 0, |d_j| ≤ 1
    let scale = norm(xi).max(f64::MIN_POSITIVE);
    let mut rec = LinearProgram::new(r.dim).maximize(xi);
    for h in &r.halfspaces {
        rec = rec.le(&h.normal, 0.0);
    }
    for j in 0..r.dim {
        let mut e = vec![0.0; r.dim];
        e[j] = 1.0;
        rec = rec.le(&e, 1.0);
        e[j] = -1.0;
        rec = rec.le(&e, 1.0);
    }
    if let LpOutcome::Optimal { value, .. } = rec.solve() {
        if value > 1e-9 * scale {
            return Ok(f64::INFINITY);
        }
    }
    match r.lp(xi).solve() {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded => Ok(f64::INFINITY),
        LpOutcome::Infeasible => Err(Error::EmptyRegion),
    }
}

/// Support function with the Minkowski pairing `x⁰ξ⁰ - x·ξ`, i.e.
/// `support_function(R, gξ)`.
pub fn support_function_minkowski(r: &PolyRegion, xi: FourVector) -> Result<f64> {
    support_function(r, &xi.lowered().0)
}

/// Which pairing a support function uses; recorded in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Euclidean,
    Minkowski,
}

impl Pairing {
    pub fn tag(self) -> &'static str {
        match self {
            Pairing::Euclidean => crate::conventions::PAIRING_EUCLIDEAN,
            Pairing::Minkowski => crate::conventions::PAIRING_MINKOWSKI,
        }
    }

    pub fn support(self, r: &PolyRegion, xi: &[f64]) -> Result<f64> {
        match self {
            Pairing::Euclidean => support_function(r, xi),
            Pairing::Minkowski => support_function_minkowski(r, four(xi)),
        }
    }
}

/// Outer approximation `{x : ⟨x, ξ_k⟩ ≤ H(ξ_k)}` from sampled support values.
/// Infinite samples impose no constraint.
pub fn reconstruct_from_support(dim: usize, samples: &[(Vec<f64>, f64)]) -> PolyRegion {
    let halfspaces = samples
        .iter()
        .filter(|(d, h)| h.is_finite() && d.iter().any(|x| *x != 0.0))
        .map(|(d, h)| HalfSpace { normal: d.clone(), offset: *h })
        .collect();
    PolyRegion { dim, halfspaces, vrep: None }
}

/// `(η⁺, η⁻) = (η⁰ + η³, η⁰ - η³)`.
pub fn light_cone_coordinates(eta: FourVector) -> (f64, f64) {
    (eta[0] + eta[3], eta[0] - eta[3])
}

/// Representation of a convex cone.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeRep {
    /// `cone(generators)`.
    Generators(Vec<Vec<f64>>),
    /// `{x : ⟨n_i, x⟩ ≤ 0, ⟨e_j, x⟩ = 0}`; the inequalities are strict when the
    /// cone is open.
    Constraints { inequalities: Vec<Vec<f64>>, equalities: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    pub dim: usize,
    pub rep: ConeRep,
    pub open: bool,
}

impl Cone {
    pub fn from_generators(dim: usize, generators: Vec<Vec<f64>>, open: bool) -> Self {
        Cone { dim, rep: ConeRep::Generators(generators), open }
    }

    pub fn from_constraints(dim: usize, inequalities: Vec<Vec<f64>>, equalities: Vec<Vec<f64>>, open: bool) -> Self {
        Cone { dim, rep: ConeRep::Constraints { inequalities, equalities }, open }
    }

    /// `ℝⁿ_{≥0}` (closed) or its interior.
    pub fn orthant(dim: usize, open: bool) -> Self {
        let gens = (0..dim)
            .map(|j| {
                let mut e = vec![0.0; dim];
                e[j] = 1.0;
                e
            })
            .collect();
        Cone::from_generators(dim, gens, open)
    }

    /// `Γ⁺ = {η : η⁻ < 0, η⁺ > 0, η¹ = η² = 0}` with `η± = η⁰ ± η³`.
    pub fn wedge_imaginary_cone() -> Self {
        Cone::from_constraints(
            4,
            vec![vec![1.0, 0.0, 0.0, -1.0], vec![-1.0, 0.0, 0.0, -1.0]],
            vec![vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]],
            true,
        )
    }

    /// Image of the cone under a linear map given by its matrix rows.
    pub fn mapped(&self, rows: &[[f64; 4]; 4]) -> Cone {
        assert_eq!(self.dim, 4);
        let apply = |v: &[f64]| -> Vec<f64> { (0..4).map(|i| (0..4).map(|j| rows[i][j] * v[j]).sum()).collect() };
        match &self.rep {
            ConeRep::Generators(g) => Cone::from_generators(4, g.iter().map(|v| apply(v)).collect(), self.open),
            ConeRep::Constraints { .. } => {
                // constraints transform with the inverse transpose
                let m = crate::geometry::LorentzTransform::from_rows(*rows);
                let inv_t = invert4(&m.m).map(|inv| {
                    let t: [[f64; 4]; 4] = core::array::from_fn(|i| core::array::from_fn(|j| inv[j][i]));
                    t
                });
                let inv_t = inv_t.expect("cone map must be invertible");
                let map_n = |v: &Vec<f64>| -> Vec<f64> { (0..4).map(|i| (0..4).map(|j| inv_t[i][j] * v[j]).sum()).collect() };
                let ConeRep::Constraints { inequalities, equalities } = &self.rep else { unreachable!() };
                Cone::from_constraints(4, inequalities.iter().map(map_n).collect(), equalities.iter().map(map_n).collect(), self.open)
            }
        }
    }
}

/// Membership test; strict for open cones.
pub fn cone_contains(cone: &Cone, eta: &[f64]) -> bool {
    match &cone.rep {
        ConeRep::Constraints { inequalities, equalities } => {
            let scale = 1e-12 * (1.0 + norm(eta));
            equalities.iter().all(|e| dot(e, eta).abs() <= scale)
                && inequalities.iter().all(|n| {
                    let v = dot(n, eta);
                    if cone.open {
                        v < 0.0
                    } else {
                        v <= scale
                    }
                })
        }
        ConeRep::Generators(gens) => {
            let k = gens.len();
            if cone.open {
                // relative interior: a combination with every weight ≥ t > 0
                if k == 0 {
                    return false;
                }
                let mut lp = LinearProgram::new(k + 1);
                let mut obj = vec![0.0; k + 1];
                obj[k] = 1.0;
                lp = lp.maximize(&obj);
                for i in 0..cone.dim {
                    let mut row: Vec<f64> = gens.iter().map(|g| g[i]).collect();
                    row.push(0.0);
                    lp = lp.eq(&row, eta[i]);
                }
                for j in 0..k {
                    let mut row = vec![0.0; k + 1];
                    row[j] = -1.0;
                    row[k] = 1.0;
                    lp = lp.le(&row, 0.0);
                }
                let mut cap = vec![0.0; k + 1];
                cap[k] = 1.0;
                lp = lp.le(&cap, 1.0);
                match lp.solve() {
                    LpOutcome::Optimal { value, .. } => value > 1e-12,
                    _ => false,
                }
            } else {
                let mut lp = LinearProgram::new(k).all_nonneg();
                for i in 0..cone.dim {
                    let row: Vec<f64> = gens.iter().map(|g| g[i]).collect();
                    lp = lp.eq(&row, eta[i]);
                }
                !matches!(lp.solve(), LpOutcome::Infeasible)
            }
        }
    }
}

/// Dual cone `{y : ⟨y, x⟩ ≥ 0 for all x ∈ Γ}` (closed).
pub fn dual_cone(cone: &Cone) -> Cone {
    match &cone.rep {
        ConeRep::Generators(gens) => {
            let ineq = gens.iter().map(|g| g.iter().map(|x| -x).collect()).collect();
            Cone::from_constraints(cone.dim, ineq, Vec::new(), false)
        }
        ConeRep::Constraints { inequalities, equalities } => {
            let mut gens: Vec<Vec<f64>> = inequalities.iter().map(|n| n.iter().map(|x| -x).collect()).collect();
            for e in equalities {
                gens.push(e.clone());
                gens.push(e.iter().map(|x| -x).collect());
            }
            Cone::from_generators(cone.dim, gens, false)
        }
    }
}

// --- small dense linear algebra -------------------------------------------

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves the square system `m x = b` by Gaussian elimination with partial
/// pivoting; `None` when (numerically) singular.
pub(crate) fn solve_square(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut a: Vec<Vec<f64>> = m.iter().zip(b).map(|(row, &bi)| {
        let mut r = row.clone();
        r.push(bi);
        r
    }).collect();
    let scale = m.iter().flat_map(|r| r.iter()).fold(0.0f64, |s, x| s.max(x.abs())).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() <= 1e-10 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn invert4(m: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let rows: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
    let mut out = [[0.0; 4]; 4];
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let col = solve_square(&rows, &e)?;
        for i in 0..4 {
            out[i][j] = col[i];
        }
    }
    Some(out)
}

/// Orthonormal basis of the null space of the row set (dimension `dim`).
fn null_space(rows: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let row_basis = orthonormal_span(rows, dim);
    let mut basis = row_basis.clone();
    let mut null = Vec::new();
    for j in 0..dim {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        if let Some(v) = orthogonalize(&e, &basis) {
            basis.push(v.clone());
            null.push(v);
        }
    }
    null
}

fn orthonormal_span(rows: &[Vec<f64>], _dim: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        if let Some(v) = orthogonalize(r, &basis) {
            basis.push(v);
        }
    }
    basis
}

fn orthogonalize(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let start = norm(v);
    if start == 0.0 {
        return None;
    }
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(&w, b);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let len = norm(&w);
    if len <= 1e-10 * start {
        None
    } else {
        Some(w.into_iter().map(|x| x / len).collect())
    }
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn push_unique(list: &mut Vec<Vec<f64>>, v: Vec<f64>, tol: f64) {
    if !list.iter().any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() <= tol)) {
        list.push(v);
    }
}

/// Brute-force vertex/ray enumeration. The lineality space is split off
/// first; vertices of the pointed part come from `r`-subsets of tight
/// constraints, extreme rays from `(r-1)`-subsets.
fn enumerate_vrep(dim: usize, hs: &[HalfSpace]) -> VRep {
    let normals: Vec<Vec<f64>> = hs.iter().map(|h| h.normal.clone()).collect();
    let lineality = null_space(&normals, dim);
    let q = orthonormal_span(&normals, dim); // basis of the complement
    let r = q.len();
    let reduced: Vec<Vec<f64>> = normals.iter().map(|n| q.iter().map(|b| dot(n, b)).collect()).collect();
    let lift = |y: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for (k, b) in q.iter().enumerate() {
            x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += y[k] * bi);
        }
        x
    };
    let feasible = |x: &[f64]| hs.iter().all(|h| h.value(x) <= MEMBERSHIP_TOL * (1.0 + h.offset.abs()));

    let mut out = VRep::default();
    if r == 0 {
        if feasible(&vec![0.0; dim]) {
            out.vertices.push(vec![0.0; dim]);
        }
    } else {
        combinations(hs.len(), r, |sub| {
            let m: Vec<Vec<f64>> = sub.iter().map(|&i| reduced[i].clone()).collect();
            let b: Vec<f64> = sub.iter().map(|&i| hs[i].offset).collect();
            if let Some(y) = solve_square(&m, &b) {
                let x = lift(&y);
                if feasible(&x) {
                    push_unique(&mut out.vertices, x, 1e-9);
                }
            }
        });
        let rec_ok = |d: &[f64]| normals.iter().all(|n| dot(n, d) <= 1e-10);
        combinations(hs.len(), r - 1, |sub| {
            let rows: Vec<Vec<f64>> = sub.iter().map(|&i| reduced[i].clone()).collect();
            let ns = null_space(&rows, r);
            if ns.len() == 1 {
                for sign in [1.0, -1.0] {
                    let d: Vec<f64> = lift(&ns[0].iter().map(|x| sign * x).collect::<Vec<_>>());
                    if rec_ok(&d) {
                        push_unique(&mut out.rays, d, 1e-9);
                    }
                }
            }
        });
    }
    for l in lineality {
        let neg = l.iter().map(|x| -x).collect();
        out.rays.push(l);
        out.rays.push(neg);
    }
    out
}
