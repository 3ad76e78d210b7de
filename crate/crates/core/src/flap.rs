//! Fourier–Laplace transforms of sampled distributions and growth checks:
//! Paley–Wiener–Schwartz, Hörmander's exponential cone, support from growth,
//! Epstein-type bounds with a boundary-value probe, and the Cauchy
//! representation on a tube.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::regions::{cone_contains, reconstruct_from_support, support_function, Cone, HalfSpace, PolyRegion};
use crate::{Error, Result, C64};

/// Outcome of a growth-bound check `|F(ζ)| ≤ C (1+|ζ|)^N e^{H(Im ζ)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub check: String,
    pub n_declared: Option<f64>,
    pub n_est: f64,
    pub c: f64,
    /// Coordinates of the worst sample (meaning depends on the check).
    pub max_ratio_at: Vec<f64>,
    /// Sample radii or sizes that were probed.
    pub grid: Vec<f64>,
    /// Probes dropped because the support function was infinite there.
    pub skipped: usize,
    /// `C` on the doubled grid, when the check compares against one.
    pub c_doubled: Option<f64>,
    pub pass: bool,
}

/// `w · ∂^α δ_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub x: Vec<f64>,
    pub w: C64,
    pub deriv: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Const,
    /// `e^{⟨rate, x⟩}`.
    Exp(Vec<f64>),
    /// A density known only by name; it has no closed-form transform or tail rate.
    Opaque(String),
}

/// `w · density(x)` on the box `[lo, hi]`; bounds may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub w: C64,
    pub density: Density,
}

impl Cell {
    pub fn is_bounded(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledDistribution {
    pub dim: usize,
    pub atoms: Vec<Atom>,
    pub cells: Vec<Cell>,
    pub order: u32,
    pub hull: PolyRegion,
}

impl SampledDistribution {
    pub fn new(dim: usize, atoms: Vec<Atom>, cells: Vec<Cell>, order: u32, hull: PolyRegion) -> Result<Self> {
        let u = SampledDistribution { dim, atoms, cells, order, hull };
        u.validate()?;
        Ok(u)
    }

    pub fn point_mass(x: &[f64]) -> Self {
        SampledDistribution {
            dim: x.len(),
            atoms: vec![Atom { x: x.to_vec(), w: C64::new(1.0, 0.0), deriv: vec![0; x.len()] }],
            cells: Vec::new(),
            order: 0,
            hull: PolyRegion::point(x),
        }
    }

    /// Constant density 1 on `[lo, hi]` with hull `hull`.
    pub fn indicator(lo: &[f64], hi: &[f64], hull: PolyRegion) -> Self {
        SampledDistribution {
            dim: lo.len(),
            atoms: Vec::new(),
            cells: vec![Cell { lo: lo.to_vec(), hi: hi.to_vec(), w: C64::new(1.0, 0.0), density: Density::Const }],
            order: 0,
            hull,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if ![1, 2, 4].contains(&self.dim) {
            return Err(Error::InvalidParameter(alloc::format!("dimension must be 1, 2 or 4, got {}", self.dim)));
        }
        if self.hull.dim != self.dim {
            return Err(Error::InvalidParameter("hull dimension differs from the distribution".into()));
        }
        let mut max_order = 0;
        for (i, a) in self.atoms.iter().enumerate() {
            if a.x.len() != self.dim || a.deriv.len() != self.dim {
                return Err(Error::InvalidParameter(alloc::format!("atom {i}: wrong dimension")));
            }
            if !self.hull.contains(&a.x) {
                return Err(Error::InvalidParameter(alloc::format!("atom {i} lies outside the hull")));
            }
            max_order = max_order.max(a.deriv.iter().sum::<u32>());
        }
        for (i, c) in self.cells.iter().enumerate() {
            if c.lo.len() != self.dim || c.hi.len() != self.dim {
                return Err(Error::InvalidParameter(alloc::format!("cell {i}: wrong dimension")));
            }
            if c.lo.iter().zip(&c.hi).any(|(l, h)| !(l < h) || l.is_nan()) {
                return Err(Error::InvalidParameter(alloc::format!("cell {i}: need lo < hi")));
            }
            if let Density::Exp(r) = &c.density {
                if r.len() != self.dim {
                    return Err(Error::InvalidParameter(alloc::format!("cell {i}: rate has wrong dimension")));
                }
            }
            if !cell_in_hull(c, &self.hull)? {
                return Err(Error::InvalidParameter(alloc::format!("cell {i} lies outside the hull")));
            }
        }
        if self.order != max_order {
            return Err(Error::InvalidParameter(alloc::format!("declared order {} but representation has order {max_order}", self.order)));
        }
        Ok(())
    }

    pub fn is_compact(&self) -> bool {
        self.cells.iter().all(Cell::is_bounded)
    }
}

/// A box (possibly unbounded) lies in `K` iff every half-space of `K` is
/// satisfied by the box's maximizing corner.
fn cell_in_hull(c: &Cell, hull: &PolyRegion) -> Result<bool> {
    for h in &hull.halfspaces {
        let mut sup = 0.0;
        for j in 0..c.lo.len() {
            let n = h.normal[j];
            let v = if n > 0.0 {
                n * c.hi[j]
            } else if n < 0.0 {
                n * c.lo[j]
            } else {
                0.0
            };
            sup += v;
        }
        if !(sup <= h.offset + 1e-9 * (1.0 + h.offset.abs())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∫_a^b e^{s x} dx`, including infinite bounds when `Re s` allows.
fn exp_integral(s: C64, a: f64, b: f64) -> Result<C64> {
    if a.is_infinite() || b.is_infinite() {
        let upper = if b == f64::INFINITY {
            if !(s.re < 0.0) {
                return Err(Error::Divergent);
            }
            C64::new(0.0, 0.0)
        } else {
            (s * b).exp() / s
        };
        let lower = if a == f64::NEG_INFINITY {
            if !(s.re > 0.0) {
                return Err(Error::Divergent);
            }
            C64::new(0.0, 0.0)
        } else {
            (s * a).exp() / s
        };
        return Ok(upper - lower);
    }
    if s.norm() < 1e-4 {
        // Σ_{n≥1} s^{n-1} (bⁿ - aⁿ)/n!
        let mut sum = C64::new(0.0, 0.0);
        let mut sp = C64::new(1.0, 0.0);
        let (mut an, mut bn, mut fact) = (1.0, 1.0, 1.0);
        for n in 1..=6 {
            an *= a;
            bn *= b;
            fact *= n as f64;
            sum += sp * ((bn - an) / fact);
            sp *= s;
        }
        return Ok(sum);
    }
    Ok(((s * b).exp() - (s * a).exp()) / s)
}

/// `û(ζ) = u_x(e^{-i⟨x,ζ⟩})`.
pub fn fl_transform(u: &SampledDistribution, zeta: &[C64]) -> Result<C64> {
    if zeta.len() != u.dim {
        return Err(Error::InvalidParameter("ζ has the wrong dimension".into()));
    }
    let i = C64::new(0.0, 1.0);
    let mut total = C64::new(0.0, 0.0);
    for a in &u.atoms {
        let phase: C64 = a.x.iter().zip(zeta).map(|(x, z)| z * *x).sum();
        let mut mono = C64::new(1.0, 0.0);
        for (k, z) in a.deriv.iter().zip(zeta) {
            mono *= (i * z).powu(*k);
        }
        total += a.w * mono * (-i * phase).exp();
    }
    for c in &u.cells {
        let rate: Vec<f64> = match &c.density {
            Density::Const => vec![0.0; u.dim],
            Density::Exp(r) => r.clone(),
            Density::Opaque(name) => return Err(Error::UnsupportedDensity(name.clone())),
        };
        let mut prod = c.w;
        for j in 0..u.dim {
            prod *= exp_integral(C64::new(rate[j], 0.0) - i * zeta[j], c.lo[j], c.hi[j])?;
        }
        total += prod;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// `max_j |ζ_j|`.
    Max,
    Euclidean,
}

impl NormKind {
    pub fn eval(self, z: &[C64]) -> f64 {
        match self {
            NormKind::Max => z.iter().fold(0.0, |m, c| m.max(c.norm())),
            NormKind::Euclidean => z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        }
    }
}

/// Tube samples `ζ = ξ + i r η`: a product grid of `n_xi` real parts per
/// axis on `[-xi_max, xi_max]`, imaginary directions `η_k`, and radii
/// `0 ∪ geometric(r_min, r_max, n_r)` (or just `1` when `n_r = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct TubeGrid {
    pub dim: usize,
    pub xi_max: f64,
    pub n_xi: usize,
    pub directions: Vec<Vec<f64>>,
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub norm: NormKind,
}

impl TubeGrid {
    pub fn radii(&self) -> Vec<f64> {
        if self.n_r == 0 {
            return vec![1.0];
        }
        let mut r = vec![0.0];
        r.extend(geometric(self.r_min, self.r_max, self.n_r));
        r
    }

    pub fn xi_axis(&self) -> Vec<f64> {
        linspace(-self.xi_max, self.xi_max, self.n_xi)
    }

    /// Every real part in the product grid.
    pub fn xi_points(&self) -> Vec<Vec<f64>> {
        let axis = self.xi_axis();
        let mut pts = vec![Vec::new()];
        for _ in 0..self.dim {
            pts = pts.into_iter().flat_map(|p| axis.iter().map(move |x| { let mut q = p.clone(); q.push(*x); q })).collect();
        }
        pts
    }

    /// Twice the extent and twice the density in `ξ` and in `r`.
    pub fn doubled(&self) -> TubeGrid {
        TubeGrid { xi_max: 2.0 * self.xi_max, n_xi: 2 * self.n_xi + 1, r_max: 2.0 * self.r_max, n_r: 2 * self.n_r, ..self.clone() }
    }

    /// Doubles only the real parts (the imaginary set stays compact).
    pub fn doubled_xi(&self) -> TubeGrid {
        TubeGrid { xi_max: 2.0 * self.xi_max, n_xi: 2 * self.n_xi + 1, ..self.clone() }
    }

    /// Checks every probed imaginary part against `cone`.
    pub fn validate_in(&self, cone: &Cone) -> Result<()> {
        for d in &self.directions {
            for r in self.radii() {
                if r == 0.0 {
                    continue;
                }
                let eta: Vec<f64> = d.iter().map(|v| v * r).collect();
                if !cone_contains(cone, &eta) {
                    return Err(Error::InvalidParameter(alloc::format!("imaginary part {eta:?} is outside the cone")));
                }
            }
        }
        Ok(())
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect(),
    }
}

/// Scan of `ratio = |F(ζ)| e^{-H(Im ζ)}` against `(1+|ζ|)`. Returns
/// `(C, N_est, argmax, samples, skipped)` with `C` taken at order `n`
/// (or at `N_est` when `n` is `None`).
struct Scan {
    c: f64,
    n_est: f64,
    at: Vec<f64>,
    samples: usize,
    skipped: usize,
}

fn scan(grid: &TubeGrid, f: &dyn Fn(&[C64]) -> Result<C64>, h: &dyn Fn(&[f64]) -> Result<f64>, n: Option<f64>) -> Result<Scan> {
    let xs = grid.xi_points();
    let mut data: Vec<(f64, f64, Vec<C64>)> = Vec::new();
    let mut skipped = 0;
    for d in &grid.directions {
        for r in grid.radii() {
            let eta: Vec<f64> = d.iter().map(|v| v * r).collect();
            let hv = h(&eta)?;
            if !hv.is_finite() {
                skipped += xs.len();
                continue;
            }
            for x in &xs {
                let z: Vec<C64> = x.iter().zip(&eta).map(|(a, b)| C64::new(*a, *b)).collect();
                let v = f(&z)?.norm();
                // log domain keeps e^{-H} from underflowing against a large |F|
                let ratio = if v == 0.0 { 0.0 } else { (v.ln() - hv).exp() };
                let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
                data.push(((1.0 + grid.norm.eval(&z)).ln(), ratio, z));
            }
        }
    }
    let pts: Vec<(f64, f64)> = data.iter().filter(|d| d.1.is_finite()).map(|d| (d.0, d.1)).collect();
    let n_est = loglog_slope(&pts).max(0.0);
    let order = n.unwrap_or(n_est);
    let mut c: f64 = 0.0;
    let mut at = Vec::new();
    for (lr, ratio, z) in &data {
        let v = ratio * (-order * lr).exp();
        if v > c || at.is_empty() || v.is_nan() {
            c = if v.is_nan() { f64::INFINITY } else { c.max(v) };
            at = z.iter().flat_map(|w| [w.re, w.im]).collect();
        }
    }
    Ok(Scan { c, n_est, at, samples: data.len(), skipped })
}

/// Least-squares slope of `ln(max ratio)` against `ln(1+|ζ|)` over eight bins
/// of the abscissa.
pub(crate) fn loglog_slope(data: &[(f64, f64)]) -> f64 {
    let lo = data.iter().fold(f64::INFINITY, |m, d| m.min(d.0));
    let hi = data.iter().fold(f64::NEG_INFINITY, |m, d| m.max(d.0));
    if !(hi > lo) {
        return 0.0;
    }
    const BINS: usize = 8;
    let mut best = [(0.0f64, f64::NEG_INFINITY); BINS];
    for &(x, r) in data {
        if !(r > 0.0) {
            continue;
        }
        let b = (((x - lo) / (hi - lo)) * BINS as f64).min(BINS as f64 - 1.0) as usize;
        let y = r.ln();
        if y > best[b].1 {
            best[b] = (x, y);
        }
    }
    let pts: Vec<(f64, f64)> = best.iter().copied().filter(|p| p.1.is_finite()).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Relative change allowed in `C` under grid doubling.
pub const STABILITY_TOL: f64 = 0.2;

fn stable(c1: f64, c2: f64, tol: f64) -> bool {
    if !(c1.is_finite() && c2.is_finite()) {
        return false;
    }
    if c1 == 0.0 && c2 == 0.0 {
        return true;
    }
    (c2 / c1 - 1.0).abs() <= tol
}

/// `|û(ζ)| / ((1+|ζ|)^N e^{H_K(Im ζ)})` with the declared order and hull.
/// Passes when the worst ratio is finite and moves by at most 20% when the
/// grid is doubled in extent and density.
pub fn pws_check(u: &SampledDistribution, grid: &TubeGrid) -> Result<BoundReport> {
    pws_check_with(u, grid, STABILITY_TOL)
}

/// [`pws_check`] with a chosen stability tolerance.
pub fn pws_check_with(u: &SampledDistribution, grid: &TubeGrid, stability: f64) -> Result<BoundReport> {
    if !u.is_compact() {
        return Err(Error::InvalidParameter("Paley–Wiener–Schwartz check needs a compactly supported distribution".into()));
    }
    if grid.dim != u.dim {
        return Err(Error::InvalidParameter("grid dimension differs from the distribution".into()));
    }
    let f = |z: &[C64]| fl_transform(u, z);
    let h = |eta: &[f64]| support_function(&u.hull, eta);
    let n = Some(u.order as f64);
    let base = scan(grid, &f, &h, n)?;
    let fine = scan(&grid.doubled(), &f, &h, n)?;
    Ok(BoundReport {
        check: "pws".into(),
        n_declared: n,
        n_est: base.n_est,
        c: base.c,
        max_ratio_at: base.at,
        grid: vec![base.samples as f64, fine.samples as f64, grid.xi_max, grid.r_max],
        skipped: base.skipped,
        c_doubled: Some(fine.c),
        pass: stable(base.c, fine.c, stability),
    })
}

/// Largest `|û(i r η)| e^{-H_K(rη)}` along one imaginary ray, for
/// negative controls (a wrong hull makes this grow exponentially in `r`).
pub fn pws_ray_ratio(u: &SampledDistribution, hull: &PolyRegion, eta: &[f64], r: f64) -> Result<f64> {
    let z: Vec<C64> = eta.iter().map(|v| C64::new(0.0, v * r)).collect();
    let y: Vec<f64> = eta.iter().map(|v| v * r).collect();
    let v = fl_transform(u, &z)?.norm();
    Ok((v.ln() - support_function(hull, &y)?).exp())
}

/// `Γ_u = {η : e^{⟨x,η⟩}u tempered}` from the tail rates: every recession ray
/// `d` of an unbounded cell with rate `ρ` contributes `⟨d, η⟩ ≤ -⟨d, ρ⟩`.
pub fn hormander_cone_estimate(u: &SampledDistribution) -> Result<PolyRegion> {
    let mut hs: Vec<HalfSpace> = Vec::new();
    for c in &u.cells {
        if c.is_bounded() {
            continue;
        }
        let rate = match &c.density {
            Density::Const => vec![0.0; u.dim],
            Density::Exp(r) => r.clone(),
            Density::Opaque(name) => return Err(Error::UnsupportedDensity(name.clone())),
        };
        for j in 0..u.dim {
            for (bound, dir) in [(c.hi[j], 1.0), (c.lo[j], -1.0)] {
                if bound.is_infinite() {
                    let mut d = vec![0.0; u.dim];
                    d[j] = dir;
                    hs.push(HalfSpace::new(d, -dir * rate[j])?);
                }
            }
        }
    }
    if hs.is_empty() {
        return Ok(PolyRegion::full(u.dim));
    }
    PolyRegion::from_halfspaces(u.dim, hs)
}

/// Support-function estimate from growth along imaginary rays.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportEstimate {
    pub directions: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub region: PolyRegion,
}

/// `Ĥ(η_k)` = coefficient of `r` in a least-squares fit of
/// `ln|F(i r η_k)|` on `[r, ln r, 1]` over the upper half of the radii.
pub fn support_from_growth(f: &dyn Fn(&[C64]) -> C64, directions: &[Vec<f64>], radii: &[f64]) -> Result<SupportEstimate> {
    let dim = directions.first().map(|d| d.len()).ok_or_else(|| Error::InvalidParameter("no probe directions".into()))?;
    let mut sorted = radii.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    if sorted.len() < 3 || sorted[0] <= 0.0 {
        return Err(Error::InvalidParameter("need at least three positive radii".into()));
    }
    let top = &sorted[sorted.len() / 2..];
    let top = if top.len() < 3 { &sorted[sorted.len() - 3..] } else { top };
    let mut values = Vec::new();
    let mut any = false;
    for d in directions {
        let mut rows = Vec::new();
        for &r in top {
            let z: Vec<C64> = d.iter().map(|v| C64::new(0.0, v * r)).collect();
            let m = f(&z).norm();
            if m >= 1e-300 && m.is_finite() {
                any = true;
                rows.push(([r, r.ln(), 1.0], m.ln()));
            }
        }
        values.push(if rows.len() >= 3 { least_squares3(&rows)[0] } else { f64::NEG_INFINITY });
    }
    if !any {
        return Err(Error::ZeroFunction);
    }
    let samples: Vec<(Vec<f64>, f64)> = directions.iter().cloned().zip(values.iter().copied()).filter(|(_, h)| h.is_finite()).collect();
    let region = reconstruct_from_support(dim, &samples);
    Ok(SupportEstimate { directions: directions.to_vec(), values, region })
}

fn least_squares3(rows: &[([f64; 3], f64)]) -> [f64; 3] {
    let mut ata = vec![vec![0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (a, b) in rows {
        for i in 0..3 {
            atb[i] += a[i] * b;
            for j in 0..3 {
                ata[i][j] += a[i] * a[j];
            }
        }
    }
    match crate::regions::solve_square(&ata, &atb) {
        Some(x) => [x[0], x[1], x[2]],
        None => [f64::NAN; 3],
    }
}

/// `|f(ζ)| / (1+|ζ|)^N` on `ξ + iM`, with `N` declared or estimated; passes
/// when finite and stable (±20%) under doubling the real extent. `M` must lie
/// in `cone`.
pub fn epstein_bound_check(f: &dyn Fn(&[C64]) -> C64, cone: &Cone, grid: &TubeGrid, n_declared: Option<f64>) -> Result<BoundReport> {
    epstein_bound_check_with(f, cone, grid, n_declared, STABILITY_TOL)
}

/// [`epstein_bound_check`] with a chosen stability tolerance.
pub fn epstein_bound_check_with(f: &dyn Fn(&[C64]) -> C64, cone: &Cone, grid: &TubeGrid, n_declared: Option<f64>, stability: f64) -> Result<BoundReport> {
    grid.validate_in(cone)?;
    let g = |z: &[C64]| Ok(f(z));
    let h = |_: &[f64]| Ok(0.0);
    let base = scan(grid, &g, &h, n_declared)?;
    let fine = scan(&grid.doubled_xi(), &g, &h, n_declared)?;
    Ok(BoundReport {
        check: "epstein".into(),
        n_declared,
        n_est: base.n_est,
        c: base.c,
        max_ratio_at: base.at,
        grid: vec![base.samples as f64, fine.samples as f64, grid.xi_max],
        skipped: 0,
        c_doubled: Some(fine.c),
        pass: stable(base.c, fine.c, stability),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Gaussian,
    Sech,
}

impl TestFunction {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            TestFunction::Gaussian => (-x * x).exp(),
            TestFunction::Sech => {
                let e = (-x.abs()).exp();
                2.0 * e / (1.0 + e * e)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyProbe {
    /// Heights `η_k = η₀ 2^{-k}` along the ray.
    pub heights: Vec<f64>,
    /// `|I(η_{k+1}) - I(η_k)|` per test function; `+∞` when the integral is
    /// not stable under doubling its domain.
    pub increments: Vec<Vec<f64>>,
    pub pass: bool,
}

/// Boundary-value probe: `I(η) = ∫ f(ξ + iη d) φ(ξ) dξ` for `η` halving from
/// `eta0` along the unit ray `d`; passes when every increment is finite and
/// the increments do not increase. One- and two-dimensional tubes.
pub fn epstein_cauchy_probe(f: &dyn Fn(&[C64]) -> C64, direction: &[f64], eta0: f64, steps: usize, tests: &[TestFunction]) -> Result<CauchyProbe> {
    let dim = direction.len();
    if !(dim == 1 || dim == 2) {
        return Err(Error::InvalidParameter("boundary probe supports n = 1 or 2".into()));
    }
    let heights: Vec<f64> = (0..=steps).map(|k| eta0 * 0.5f64.powi(k as i32)).collect();
    let mut increments = Vec::new();
    for &t in tests {
        let mut vals: Vec<Option<C64>> = Vec::new();
        for &eta in &heights {
            let half_width = 40.0;
            // resolve the η-scale near real singularities, within a point budget
            let budget = if dim == 1 { 400_000.0 } else { 1200.0 };
            let h = (eta / 8.0).max(2.0 * half_width / budget).min(0.05);
            let a = integrate_ray(f, direction, eta, t, half_width, h);
            let b = integrate_ray(f, direction, eta, t, 2.0 * half_width, h);
            let ok = a.is_finite() && b.is_finite() && (a - b).norm() <= 1e-8 * (1.0 + a.norm());
            vals.push(if ok { Some(a) } else { None });
        }
        let inc: Vec<f64> = vals
            .windows(2)
            .map(|w| match (w[0], w[1]) {
                (Some(x), Some(y)) => (y - x).norm(),
                _ => f64::INFINITY,
            })
            .collect();
        increments.push(inc);
    }
    let pass = increments.iter().all(|inc| inc.iter().all(|v| v.is_finite()) && inc.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)));
    Ok(CauchyProbe { heights, increments, pass })
}

fn integrate_ray(f: &dyn Fn(&[C64]) -> C64, d: &[f64], eta: f64, t: TestFunction, half_width: f64, h: f64) -> C64 {
    let n = (2.0 * half_width / h).ceil() as usize;
    let xs: Vec<f64> = linspace(-half_width, half_width, n + 1);
    let w = |k: usize| if k == 0 || k == n { 0.5 * h } else { h };
    let mut sum = C64::new(0.0, 0.0);
    if d.len() == 1 {
        for (k, &x) in xs.iter().enumerate() {
            sum += f(&[C64::new(x, eta * d[0])]) * (t.eval(x) * w(k));
        }
    } else {
        for (k, &x) in xs.iter().enumerate() {
            for (l, &y) in xs.iter().enumerate() {
                let z = [C64::new(x, eta * d[0]), C64::new(y, eta * d[1])];
                sum += f(&z) * (t.eval(x) * t.eval(y) * w(k) * w(l));
            }
        }
    }
    sum
}

/// Result of the tube Cauchy representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyEstimate {
    pub value: C64,
    /// `|I_n - I_{n/2}|`.
    pub error_estimate: f64,
}

pub const CAUCHY_KERNEL_POWER: i32 = 2;

/// `f(ζ) = Π_j (ζ_j+i)^k / (2πi)^n · Σ_θ ± ∫ f(x+iθ) Π_j (x_j+iθ_j-ζ_j)^{-1}(x_j+iθ_j+i)^{-k} dx`
/// with `k = 2`, `+` on the lower line and `-` on the upper line per axis,
/// by the trapezoid rule in `x = tan(πt/2)` with `samples` nodes per axis.
pub fn cauchy_tube_reconstruct(f: &dyn Fn(&[C64]) -> C64, lower: &[f64], upper: &[f64], target: &[C64], samples: usize) -> Result<CauchyEstimate> {
    let full = cauchy_quadrature(f, lower, upper, target, samples)?;
    let half = cauchy_quadrature(f, lower, upper, target, samples / 2)?;
    let error_estimate = (full - half).norm();
    if !(error_estimate <= 1e-4) {
        return Err(Error::InsufficientSampling { estimate: error_estimate });
    }
    Ok(CauchyEstimate { value: full, error_estimate })
}

/// The quadrature behind [`cauchy_tube_reconstruct`] at a fixed node count,
/// without the self-estimate.
pub fn cauchy_quadrature(f: &dyn Fn(&[C64]) -> C64, lower: &[f64], upper: &[f64], target: &[C64], samples: usize) -> Result<C64> {
    let n = target.len();
    if !(n == 1 || n == 2) || lower.len() != n || upper.len() != n {
        return Err(Error::InvalidParameter("Cauchy reconstruction supports n = 1 or 2".into()));
    }
    for j in 0..n {
        if !(lower[j] < target[j].im && target[j].im < upper[j]) {
            return Err(Error::InvalidParameter("target must lie strictly between the boundary lines".into()));
        }
        if !(lower[j] > -1.0) {
            return Err(Error::InvalidParameter("the kernel pole at -i must lie below the strip".into()));
        }
    }
    if samples < 4 {
        return Err(Error::InvalidParameter("need at least 4 samples per axis".into()));
    }
    Ok(cauchy_sum(f, lower, upper, target, samples))
}

fn cauchy_sum(f: &dyn Fn(&[C64]) -> C64, lower: &[f64], upper: &[f64], target: &[C64], samples: usize) -> C64 {
    let n = target.len();
    let i = C64::new(0.0, 1.0);
    // interior nodes t_m = -1 + (2m+1)/M: midpoint placement avoids the endpoints
    let nodes: Vec<(f64, f64)> = (0..samples)
        .map(|m| {
            let t = -1.0 + (2 * m + 1) as f64 / samples as f64;
            let x = (PI * t / 2.0).tan();
            (x, (PI / 2.0) * (1.0 + x * x) * (2.0 / samples as f64))
        })
        .collect();
    let lines = |j: usize| [(lower[j], 1.0), (upper[j], -1.0)];
    let kernel = |j: usize, x: f64, th: f64| -> C64 {
        let w = C64::new(x, th);
        1.0 / ((w - target[j]) * (w + i).powi(CAUCHY_KERNEL_POWER))
    };
    let mut total = C64::new(0.0, 0.0);
    if n == 1 {
        for (th, sgn) in lines(0) {
            let mut s = C64::new(0.0, 0.0);
            for &(x, w) in &nodes {
                s += f(&[C64::new(x, th)]) * kernel(0, x, th) * w;
            }
            total += s * sgn;
        }
    } else {
        for (th0, s0) in lines(0) {
            for (th1, s1) in lines(1) {
                let k1: Vec<C64> = nodes.iter().map(|&(y, w)| kernel(1, y, th1) * w).collect();
                let mut s = C64::new(0.0, 0.0);
                for &(x, wx) in &nodes {
                    let kx = kernel(0, x, th0) * wx;
                    for (m, &(y, _)) in nodes.iter().enumerate() {
                        s += f(&[C64::new(x, th0), C64::new(y, th1)]) * kx * k1[m];
                    }
                }
                total += s * (s0 * s1);
            }
        }
    }
    let mut pre = C64::new(1.0, 0.0);
    for z in target {
        pre *= (z + i).powi(CAUCHY_KERNEL_POWER) / (2.0 * PI * i);
    }
    pre * total
}
