//! The massive scalar representation on sampled wave functions:
//! `U(a,Λ)φ(p) = e^{i⟨p,a⟩} φ(Λ⁻¹p)`, the PCT operator `Θφ = φ̄`, the wedge
//! boost groups `U_L(t)` and the wedge involutions `j_L`.
//!
//! Homogeneous transforms are limited to the group generated by x³-boosts,
//! rotations about x³ and the rotation by π about x¹. In shell coordinates
//! these act by `θ ↦ σθ + t` and an orthogonal map of the transverse grid,
//! which is exact on the grid when `t ∈ ΔθZ` and the rotated transverse
//! points are grid points. Other rapidity shifts use band-limited
//! interpolation.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::analytic::ShellMap;
use crate::fft::{fft, ifft};
use crate::geometry::{conjugated_boost, minkowski_inner, rotation_z_pi, FourVector, LorentzTransform, PoincareElement};
use crate::shell::{shell_point, WaveFunction};
use crate::{Error, Result, C64};

/// Relative magnitude below which Fourier modes count as round-off.
pub const NOISE_FLOOR: f64 = 1e-15;

/// Damped-tail mass ratio above which a continuation leaves the domain.
pub const TAIL_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum RepKind {
    Translation(FourVector),
    Homogeneous(LorentzTransform),
    Pct,
    /// Operator product `ops[0] · ops[1] · …`; the last factor acts first.
    Composite(Vec<RepOperator>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepOperator {
    pub kind: RepKind,
    /// True when no resampling is needed on the grid it was built for.
    pub exact_on_grid: bool,
}

impl RepOperator {
    pub fn translation(a: FourVector) -> Self {
        RepOperator { kind: RepKind::Translation(a), exact_on_grid: true }
    }

    pub fn pct() -> Self {
        RepOperator { kind: RepKind::Pct, exact_on_grid: true }
    }

    pub fn homogeneous(l: LorentzTransform, grid: &crate::shell::MassShellGrid) -> Result<Self> {
        let m = ShellMap::from_lorentz(&l)?;
        let exact = shift_plan(grid, m.sigma, m.shift.re).1 && transverse_plan(grid, &m).is_ok();
        Ok(RepOperator { kind: RepKind::Homogeneous(l), exact_on_grid: exact })
    }

    /// `U(a, Λ) = T(a) d(Λ)`.
    pub fn poincare(l: &PoincareElement, grid: &crate::shell::MassShellGrid) -> Result<Self> {
        let h = Self::homogeneous(l.lambda, grid)?;
        let exact = h.exact_on_grid;
        Ok(RepOperator { kind: RepKind::Composite(vec![Self::translation(l.a), h]), exact_on_grid: exact })
    }

    pub fn is_antiunitary(&self) -> bool {
        match &self.kind {
            RepKind::Pct => true,
            RepKind::Composite(ops) => ops.iter().filter(|o| o.is_antiunitary()).count() % 2 == 1,
            _ => false,
        }
    }

    pub fn apply(&self, phi: &WaveFunction) -> Result<WaveFunction> {
        match &self.kind {
            RepKind::Translation(a) => Ok(translate(*a, phi)),
            RepKind::Homogeneous(l) => homogeneous(l, phi),
            RepKind::Pct => Ok(apply_pct(phi)),
            RepKind::Composite(ops) => {
                let mut out = phi.clone();
                for op in ops.iter().rev() {
                    out = op.apply(&out)?;
                }
                Ok(out)
            }
        }
    }
}

/// `U(L)φ(p) = e^{i⟨p,a⟩} φ(Λ⁻¹p)`.
pub fn apply_poincare(l: &PoincareElement, phi: &WaveFunction) -> Result<WaveFunction> {
    Ok(translate(l.a, &homogeneous(&l.lambda, phi)?))
}

/// `Θφ = φ̄` pointwise.
pub fn apply_pct(phi: &WaveFunction) -> WaveFunction {
    phi.map(|z| z.conj())
}

/// `U_L(t) = U((1 - IΛ(t)I⁻¹)a, IΛ(t)I⁻¹)`.
pub fn wedge_boost_group(l: &PoincareElement, t: f64, phi: &WaveFunction) -> Result<WaveFunction> {
    apply_poincare(&conjugated_boost(l, t), phi)
}

/// `j_L = U(L) d(Υ) Θ U(L)⁻¹`.
pub fn wedge_involution(l: &PoincareElement, phi: &WaveFunction) -> Result<WaveFunction> {
    let inner = apply_pct(&apply_poincare(&l.inverse(), phi)?);
    apply_poincare(l, &apply_poincare(&PoincareElement::homogeneous(rotation_z_pi()), &inner)?)
}

fn translate(a: FourVector, phi: &WaveFunction) -> WaveFunction {
    if a == FourVector::ZERO {
        return phi.clone();
    }
    let g = &phi.grid;
    let mut out = phi.clone();
    for t in 0..g.transverse.len() {
        for j in 0..g.n_theta {
            let p = shell_point(g, j, t).expect("index in range");
            let k = t * g.n_theta + j;
            out.samples[k] *= C64::from_polar(1.0, minkowski_inner(p, a));
        }
    }
    out
}

/// For each target fibre, the source fibre `O q`.
fn transverse_plan(grid: &crate::shell::MassShellGrid, m: &ShellMap) -> Result<Vec<usize>> {
    grid.transverse
        .iter()
        .map(|tp| {
            let (_, q) = m.apply(C64::new(0.0, 0.0), tp.q);
            grid.find_transverse(q).ok_or_else(|| Error::UnsupportedTransform(alloc::format!("transverse point {q:?} is off the grid")))
        })
        .collect()
}

/// Rapidity shift `s` applied after an optional reflection, and whether it
/// is an exact index shift.
fn shift_plan(grid: &crate::shell::MassShellGrid, sigma: f64, t: f64) -> (f64, bool) {
    let s = if sigma > 0.0 {
        t
    } else {
        // f(-θ + t) = f_R(θ + 2θ_c - t) with f_R the reversed fibre
        let centre = grid.theta0 + 0.5 * (grid.n_theta - 1) as f64 * grid.dtheta;
        2.0 * centre - t
    };
    let n = s / grid.dtheta;
    (s, (n - n.round()).abs() <= 1e-9)
}

fn homogeneous(l: &LorentzTransform, phi: &WaveFunction) -> Result<WaveFunction> {
    let m = ShellMap::from_lorentz(l)?;
    if m.is_identity() {
        return Ok(phi.clone());
    }
    let g = phi.grid.clone();
    let n = g.n_theta;
    let plan = transverse_plan(&g, &m)?;
    let (s, exact) = shift_plan(&g, m.sigma, m.shift.re);
    let mut out = WaveFunction::zeros(g.clone());
    let mut base = vec![C64::new(0.0, 0.0); n];
    for (tt, &src) in plan.iter().enumerate() {
        base.copy_from_slice(phi.fibre(src));
        if m.sigma < 0.0 {
            base.reverse();
        }
        let dst = &mut out.samples[tt * n..(tt + 1) * n];
        if exact {
            let k = (s / g.dtheta).round() as i64;
            for (j, d) in dst.iter_mut().enumerate() {
                let from = j as i64 + k;
                if (0..n as i64).contains(&from) {
                    *d = base[from as usize];
                }
            }
        } else {
            let (shifted, _) = shift_fibre(&base, g.dtheta, C64::new(s, 0.0), false);
            dst.copy_from_slice(&shifted);
        }
    }
    Ok(out)
}

/// Per-fibre diagnostics of a spectral continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDiagnostics {
    /// Damped mass on the outer quarter of the band over total damped mass.
    pub tail_ratio: f64,
    /// `ln(max|c| / |c_outer|) / |k_outer|` for the outermost mode above the
    /// noise floor; `+∞` when only the zero mode survives.
    pub decay_exponent: f64,
}

impl SpectralDiagnostics {
    fn merge(self, other: SpectralDiagnostics) -> SpectralDiagnostics {
        SpectralDiagnostics {
            tail_ratio: self.tail_ratio.max(other.tail_ratio),
            decay_exponent: self.decay_exponent.min(other.decay_exponent),
        }
    }
}

/// `f(θ) ↦ f(θ + τ)` on one periodized fibre via the DFT: mode `k` is
/// multiplied by `e^{ikλ}e^{-kϱ}` for `τ = λ + iϱ`. With `filter` set, modes
/// under the noise floor and the Nyquist mode are dropped before damping.
pub(crate) fn shift_fibre(f: &[C64], dtheta: f64, tau: C64, filter: bool) -> (Vec<C64>, SpectralDiagnostics) {
    let n = f.len();
    let mut c = f.to_vec();
    fft(&mut c);
    let period = n as f64 * dtheta;
    let k_of = |i: usize| {
        let s = if i < n.div_ceil(2) { i as f64 } else { i as f64 - n as f64 };
        2.0 * core::f64::consts::PI * s / period
    };
    let cmax = c.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let floor = NOISE_FLOOR * cmax;
    let mut outer: Option<(f64, f64)> = None; // (|k|, |c|)
    for (i, z) in c.iter().enumerate() {
        let a = z.norm();
        if a > floor && i != 0 {
            let k = k_of(i).abs();
            if outer.is_none_or(|(ko, _)| k > ko) {
                outer = Some((k, a));
            }
        }
    }
    let decay_exponent = match outer {
        Some((k, a)) if cmax > 0.0 => (cmax / a).ln() / k,
        _ => f64::INFINITY,
    };
    let mut total = 0.0;
    let mut tail = 0.0;
    for (i, z) in c.iter_mut().enumerate() {
        if filter && (z.norm() <= floor || (n % 2 == 0 && i == n / 2)) {
            *z = C64::new(0.0, 0.0);
            continue;
        }
        let k = k_of(i);
        *z *= (C64::new(0.0, k) * tau).exp();
        let w = z.norm_sqr();
        total += w;
        let idx = if i < n.div_ceil(2) { i } else { n - i };
        if 8 * idx >= 3 * n {
            tail += w;
        }
    }
    ifft(&mut c);
    let tail_ratio = if total > 0.0 { tail / total } else { 0.0 };
    (c, SpectralDiagnostics { tail_ratio, decay_exponent })
}

/// Spectral continuation `φ(θ + τ)` of every fibre. A nonzero imaginary part
/// enables the noise-floor filter and the domain test.
pub(crate) fn spectral_shift(phi: &WaveFunction, tau: C64) -> Result<(WaveFunction, SpectralDiagnostics)> {
    let g = phi.grid.clone();
    let n = g.n_theta;
    let complex = tau.im != 0.0;
    let mut out = WaveFunction::zeros(g.clone());
    let mut diag = SpectralDiagnostics { tail_ratio: 0.0, decay_exponent: f64::INFINITY };
    for t in 0..g.transverse.len() {
        let (shifted, d) = shift_fibre(phi.fibre(t), g.dtheta, tau, complex);
        out.samples[t * n..(t + 1) * n].copy_from_slice(&shifted);
        diag = diag.merge(d);
    }
    if complex && diag.tail_ratio > TAIL_THRESHOLD {
        return Err(Error::NotInDomain { tail_ratio: diag.tail_ratio });
    }
    Ok((out, diag))
}
