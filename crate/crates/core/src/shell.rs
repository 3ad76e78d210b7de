//! Discretized mass shell in rapidity × transverse-momentum coordinates,
//! sampled wave functions with the invariant inner product, and the closed
//! form analytic families used as analytic vectors.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::{ComplexFourVector, FourVector};
use crate::{Error, Result, C64};

/// Magnitude below which a sample at the grid edge counts as decayed.
pub const EDGE_DECAY: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransversePoint {
    pub q: [f64; 2],
    pub weight: f64,
}

/// Uniform rapidity grid `θ_j = θ₀ + jΔθ` fibred over a finite transverse
/// grid. A single transverse point `(0,0)` with weight 1 is the 1+1 mode.
#[derive(Debug, Clone, PartialEq)]
pub struct MassShellGrid {
    pub mass: f64,
    pub theta0: f64,
    pub dtheta: f64,
    pub n_theta: usize,
    pub transverse: Vec<TransversePoint>,
}

impl MassShellGrid {
    /// Rapidities `θ_min ..= θ_max` in `n_theta` points.
    pub fn new(mass: f64, theta_min: f64, theta_max: f64, n_theta: usize, transverse: Vec<TransversePoint>) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter("mass must be positive".into()));
        }
        if n_theta < 2 || !(theta_max > theta_min) {
            return Err(Error::InvalidParameter("rapidity grid needs n ≥ 2 and θ_max > θ_min".into()));
        }
        if transverse.is_empty() || transverse.iter().any(|t| !(t.weight > 0.0)) {
            return Err(Error::InvalidParameter("transverse grid needs positive weights".into()));
        }
        let dtheta = (theta_max - theta_min) / (n_theta - 1) as f64;
        Ok(MassShellGrid { mass, theta0: theta_min, dtheta, n_theta, transverse })
    }

    /// 1+1 mode on `[-half_width, half_width]`.
    pub fn rapidity(mass: f64, n_theta: usize, half_width: f64) -> Result<Self> {
        Self::new(mass, -half_width, half_width, n_theta, alloc::vec![TransversePoint { q: [0.0, 0.0], weight: 1.0 }])
    }

    /// 1024 points on `[-16, 16]`, 1+1 mode.
    pub fn default_1p1(mass: f64) -> Result<Self> {
        Self::rapidity(mass, 1024, 16.0)
    }

    /// 3+1 mode: square transverse grid `q_i ∈ [-extent, extent]`, `per_axis`
    /// points per axis, trapezoidal product weights. The grid is symmetric
    /// under `q → -q` and quarter turns.
    pub fn with_square_transverse(mass: f64, n_theta: usize, half_width: f64, per_axis: usize, extent: f64) -> Result<Self> {
        if per_axis < 2 || !(extent > 0.0) {
            return Err(Error::InvalidParameter("transverse grid needs ≥ 2 points per axis".into()));
        }
        let h = 2.0 * extent / (per_axis - 1) as f64;
        let w1 = |i: usize| if i == 0 || i == per_axis - 1 { 0.5 * h } else { h };
        let mut pts = Vec::with_capacity(per_axis * per_axis);
        for a in 0..per_axis {
            for b in 0..per_axis {
                pts.push(TransversePoint { q: [-extent + a as f64 * h, -extent + b as f64 * h], weight: w1(a) * w1(b) });
            }
        }
        Self::new(mass, -half_width, half_width, n_theta, pts)
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.theta0 + j as f64 * self.dtheta
    }

    pub fn theta_max(&self) -> f64 {
        self.theta(self.n_theta - 1)
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.transverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_1p1(&self) -> bool {
        self.transverse.len() == 1 && self.transverse[0].q == [0.0, 0.0]
    }

    /// `m⊥ = sqrt(m² + |q|²)`.
    pub fn m_perp(&self, q: [f64; 2]) -> f64 {
        (self.mass * self.mass + q[0] * q[0] + q[1] * q[1]).sqrt()
    }

    /// Index of a transverse point within `1e-9`.
    pub fn find_transverse(&self, q: [f64; 2]) -> Option<usize> {
        let scale = 1e-9 * (1.0 + q[0].abs() + q[1].abs());
        self.transverse.iter().position(|t| (t.q[0] - q[0]).abs() <= scale && (t.q[1] - q[1]).abs() <= scale)
    }

    /// Mode wave numbers `k_n = 2πn/(NΔθ)` in FFT order (negative half
    /// after the positive one).
    pub fn wave_numbers(&self) -> Vec<f64> {
        let n = self.n_theta;
        let period = n as f64 * self.dtheta;
        (0..n)
            .map(|i| {
                let s = if i < n.div_ceil(2) { i as f64 } else { i as f64 - n as f64 };
                2.0 * PI * s / period
            })
            .collect()
    }
}

/// `p = (m⊥ cosh θ_j, p¹, p², m⊥ sinh θ_j)`.
pub fn shell_point(grid: &MassShellGrid, j: usize, t: usize) -> Result<FourVector> {
    if j >= grid.n_theta || t >= grid.transverse.len() {
        return Err(Error::IndexOutOfRange(alloc::format!("({j}, {t})")));
    }
    let q = grid.transverse[t].q;
    let mp = grid.m_perp(q);
    let th = grid.theta(j);
    Ok(FourVector::new(mp * th.cosh(), q[0], q[1], mp * th.sinh()))
}

/// Shell point at complex rapidity.
pub fn complex_shell_point(mass: f64, z: C64, q: [f64; 2]) -> ComplexFourVector {
    let mp = (mass * mass + q[0] * q[0] + q[1] * q[1]).sqrt();
    let c = |x: f64| C64::new(x, 0.0);
    ComplexFourVector([z.cosh() * mp, c(q[0]), c(q[1]), z.sinh() * mp])
}

/// Complex samples on a grid, fibre-major: index `t * n_theta + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub grid: Arc<MassShellGrid>,
    pub samples: Vec<C64>,
}

impl WaveFunction {
    pub fn new(grid: Arc<MassShellGrid>, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(WaveFunction { grid, samples })
    }

    pub fn zeros(grid: Arc<MassShellGrid>) -> Self {
        let n = grid.len();
        WaveFunction { grid, samples: alloc::vec![C64::new(0.0, 0.0); n] }
    }

    /// Samples `f(θ_j, q_t)`.
    pub fn from_fn(grid: Arc<MassShellGrid>, f: impl Fn(f64, [f64; 2]) -> C64) -> Self {
        let mut samples = Vec::with_capacity(grid.len());
        for t in &grid.transverse {
            for j in 0..grid.n_theta {
                samples.push(f(grid.theta(j), t.q));
            }
        }
        WaveFunction { grid, samples }
    }

    pub fn at(&self, j: usize, t: usize) -> C64 {
        self.samples[t * self.grid.n_theta + j]
    }

    pub fn fibre(&self, t: usize) -> &[C64] {
        let n = self.grid.n_theta;
        &self.samples[t * n..(t + 1) * n]
    }

    pub fn same_grid(&self, other: &WaveFunction) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> WaveFunction {
        WaveFunction { grid: self.grid.clone(), samples: self.samples.iter().map(|z| f(*z)).collect() }
    }

    pub fn scale(&self, c: C64) -> WaveFunction {
        self.map(|z| z * c)
    }

    pub fn zip(&self, other: &WaveFunction, f: impl Fn(C64, C64) -> C64) -> Result<WaveFunction> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(WaveFunction { grid: self.grid.clone(), samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect() })
    }

    pub fn add(&self, other: &WaveFunction) -> Result<WaveFunction> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &WaveFunction) -> Result<WaveFunction> {
        self.zip(other, |a, b| a - b)
    }

    pub fn norm(&self) -> f64 {
        inner_product(self, self).map(|r| r.value.re.max(0.0).sqrt()).unwrap_or(0.0)
    }

    /// `‖self - other‖`.
    pub fn distance(&self, other: &WaveFunction) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &WaveFunction) -> f64 {
        self.samples.iter().zip(&other.samples).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Largest sample magnitude at the first and last rapidity of any fibre.
    pub fn edge_magnitude(&self) -> f64 {
        let n = self.grid.n_theta;
        (0..self.grid.transverse.len()).fold(0.0, |m, t| m.max(self.at(0, t).norm()).max(self.at(n - 1, t).norm()))
    }

    /// Fails with `BoundaryDecay` unless the samples vanish at the grid edge.
    pub fn validate_decay(&self) -> Result<()> {
        let edge = self.edge_magnitude();
        if edge < EDGE_DECAY {
            Ok(())
        } else {
            Err(Error::BoundaryDecay { edge })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Trapezoid,
}

impl QuadratureRule {
    pub fn id(self) -> &'static str {
        match self {
            QuadratureRule::Trapezoid => "trapezoid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProductReport {
    pub value: C64,
    pub rule: QuadratureRule,
    /// `|I_h - I_{2h}|` from the same samples at double spacing.
    pub error_estimate: f64,
}

/// `⟨φ, ψ⟩ = ∫ conj φ ψ dθ dp¹dp²`, antilinear in `φ`.
pub fn inner_product(phi: &WaveFunction, psi: &WaveFunction) -> Result<InnerProductReport> {
    if !phi.same_grid(psi) {
        return Err(Error::GridMismatch);
    }
    let g = &phi.grid;
    let n = g.n_theta;
    let mut fine = Vec::with_capacity(g.transverse.len());
    let mut coarse = Vec::with_capacity(g.transverse.len());
    let mut prod = alloc::vec![C64::new(0.0, 0.0); n];
    for (t, tp) in g.transverse.iter().enumerate() {
        let (a, b) = (phi.fibre(t), psi.fibre(t));
        for j in 0..n {
            prod[j] = a[j].conj() * b[j];
        }
        fine.push(trapezoid(&prod, g.dtheta) * tp.weight);
        let every_other: Vec<C64> = prod.iter().step_by(2).copied().collect();
        coarse.push(trapezoid(&every_other, 2.0 * g.dtheta) * tp.weight);
    }
    let value = pairwise_sum(&fine);
    let error_estimate = (value - pairwise_sum(&coarse)).norm();
    Ok(InnerProductReport { value, rule: QuadratureRule::Trapezoid, error_estimate })
}

fn trapezoid(f: &[C64], h: f64) -> C64 {
    if f.len() < 2 {
        return f.first().copied().unwrap_or_default() * h;
    }
    let inner = pairwise_sum(&f[1..f.len() - 1]);
    (inner + (f[0] + f[f.len() - 1]) * 0.5) * h
}

/// Pairwise (tree) summation with a fixed split, so results do not depend
/// on how callers partition work.
pub fn pairwise_sum(xs: &[C64]) -> C64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Closed-form analytic family in rapidity.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyTag {
    /// `exp(-(θ-c)²/(2w²))`, entire.
    Gaussian { center: f64, width: f64 },
    /// `sech(a(θ-c))`, poles at `c + i(π/2 + kπ)/a`.
    Sech { scale: f64, center: f64 },
    /// `Π_k 1/(θ - p_k)`, times `exp(-θ²/(2e²))` when an envelope `e` is set.
    Rational { poles: Vec<C64>, envelope: Option<f64> },
}

/// An analytic vector: a closed-form family times an optional Gaussian
/// transverse profile `exp(-|q|²/(2σ²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFamily {
    pub tag: FamilyTag,
    pub amplitude: C64,
    pub transverse_width: Option<f64>,
}

impl AnalyticFamily {
    pub fn gaussian(center: f64, width: f64) -> Self {
        AnalyticFamily { tag: FamilyTag::Gaussian { center, width }, amplitude: C64::new(1.0, 0.0), transverse_width: None }
    }

    pub fn sech(scale: f64) -> Self {
        AnalyticFamily { tag: FamilyTag::Sech { scale, center: 0.0 }, amplitude: C64::new(1.0, 0.0), transverse_width: None }
    }

    pub fn rational(poles: Vec<C64>, envelope: Option<f64>) -> Self {
        AnalyticFamily { tag: FamilyTag::Rational { poles, envelope }, amplitude: C64::new(1.0, 0.0), transverse_width: None }
    }

    pub fn with_amplitude(mut self, a: C64) -> Self {
        self.amplitude = a;
        self
    }

    pub fn with_transverse_width(mut self, sigma: f64) -> Self {
        self.transverse_width = Some(sigma);
        self
    }

    /// Closed-form value at complex rapidity `z` and transverse momentum `q`.
    pub fn eval(&self, z: C64, q: [f64; 2]) -> C64 {
        let core = match &self.tag {
            FamilyTag::Gaussian { center, width } => {
                let d = z - center;
                (-(d * d) / (2.0 * width * width)).exp()
            }
            FamilyTag::Sech { scale, center } => {
                // 2/(e^x + e^-x) evaluated with the large exponent factored out
                let x = (z - center) * scale;
                let s = if x.re >= 0.0 { x } else { -x };
                let e = (-s).exp();
                e * 2.0 / (C64::new(1.0, 0.0) + e * e)
            }
            FamilyTag::Rational { poles, envelope } => {
                let mut v = C64::new(1.0, 0.0);
                for p in poles {
                    v /= z - p;
                }
                if let Some(e) = envelope {
                    v *= (-(z * z) / (2.0 * e * e)).exp();
                }
                v
            }
        };
        let tr = match self.transverse_width {
            Some(s) => (-(q[0] * q[0] + q[1] * q[1]) / (2.0 * s * s)).exp(),
            None => 1.0,
        };
        core * self.amplitude * tr
    }

    /// Singularities nearest to the real axis, for the strip check.
    pub fn nearest_singularity(&self) -> Option<C64> {
        match &self.tag {
            FamilyTag::Gaussian { .. } => None,
            FamilyTag::Sech { scale, center } => Some(C64::new(*center, PI / (2.0 * scale.abs()))),
            FamilyTag::Rational { poles, .. } => poles.iter().copied().min_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap()),
        }
    }

    /// Checks that no singularity lies in the closed strip `|Im θ| ≤ π`.
    pub fn validate(&self) -> Result<()> {
        match &self.tag {
            FamilyTag::Gaussian { width, .. } if !(*width > 0.0) => {
                return Err(Error::InvalidParameter("gaussian width must be positive".into()))
            }
            FamilyTag::Sech { scale, .. } if !(*scale > 0.0) => {
                return Err(Error::InvalidParameter("sech scale must be positive".into()))
            }
            FamilyTag::Rational { envelope: Some(e), .. } if !(*e > 0.0) => {
                return Err(Error::InvalidParameter("envelope width must be positive".into()))
            }
            _ => {}
        }
        if let Some(s) = self.transverse_width {
            if !(s > 0.0) {
                return Err(Error::InvalidParameter("transverse width must be positive".into()));
            }
        }
        match self.nearest_singularity() {
            Some(p) if p.im.abs() <= PI => Err(Error::SingularityInStrip { re: p.re, im: p.im }),
            _ => Ok(()),
        }
    }

    /// Finite-difference Cauchy–Riemann residual `|∂_y f - i ∂_x f|` at `z`,
    /// relative to `max(1, |f(z)|)`.
    pub fn cauchy_riemann_residual(&self, z: C64, q: [f64; 2]) -> f64 {
        let h = 1e-5;
        let dx = (self.eval(z + h, q) - self.eval(z - h, q)) / (2.0 * h);
        let dy = (self.eval(z + C64::new(0.0, h), q) - self.eval(z - C64::new(0.0, h), q)) / (2.0 * h);
        (dy - C64::new(0.0, 1.0) * dx).norm() / self.eval(z, q).norm().max(1.0)
    }

    pub fn sample(&self, grid: Arc<MassShellGrid>) -> WaveFunction {
        WaveFunction::from_fn(grid, |th, q| self.eval(C64::new(th, 0.0), q))
    }
}

/// Validates the family and samples it on the real grid.
pub fn make_analytic(family: AnalyticFamily, grid: Arc<MassShellGrid>) -> Result<(AnalyticFamily, WaveFunction)> {
    family.validate()?;
    let w = family.sample(grid);
    Ok((family, w))
}
