//! Continuation of the wedge boosts into the strip, the modular objects
//! `δ^{1/2}_{L,±} = U_L(±iπ)` and `s_{L,±} = j_L δ^{1/2}_{L,±}`, a computable
//! domain criterion, and a battery check of the Tomita relations.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::analytic::{AnalyticVector, ShellMap, Sign};
use crate::fft::{fft, ifft};
use crate::geometry::{minkowski_inner_mixed, FourVector, PoincareElement};
use crate::shell::{complex_shell_point, shell_point, AnalyticFamily, MassShellGrid, WaveFunction};
use crate::wigner::{apply_poincare, spectral_shift, wedge_boost_group, wedge_involution, SpectralDiagnostics};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Symbolic substitution into the closed form.
    ClosedForm,
    /// DFT in rapidity with the strip multiplier per mode.
    Spectral,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::ClosedForm => "closed_form",
            Backend::Spectral => "spectral",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Analytic(&'a AnalyticVector),
    Sampled(&'a WaveFunction),
}

impl Source<'_> {
    pub fn samples(&self) -> WaveFunction {
        match self {
            Source::Analytic(v) => v.sample(),
            Source::Sampled(w) => (*w).clone(),
        }
    }

    pub fn grid(&self) -> Arc<MassShellGrid> {
        match self {
            Source::Analytic(v) => v.grid.clone(),
            Source::Sampled(w) => w.grid.clone(),
        }
    }
}

/// `U_L(τ)φ` sampled at the real grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct StripContinuation {
    pub backend: Backend,
    pub tau: C64,
    pub values: WaveFunction,
    pub diagnostics: Option<SpectralDiagnostics>,
}

/// `U_L(τ)φ(p) = e^{i⟨p,a⟩} e^{-i⟨ζ,a⟩} φ(ζ)` with `ζ = IΛ(τ)⁻¹I⁻¹p`, for
/// `|Im τ| ≤ π`.
pub fn continue_boost(src: Source<'_>, frame: &PoincareElement, tau: C64, backend: Backend) -> Result<StripContinuation> {
    if !(tau.im.abs() <= PI + 1e-12) || !tau.re.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("|Im τ| must be ≤ π, got τ = {tau}")));
    }
    match backend {
        Backend::ClosedForm => {
            let Source::Analytic(v) = src else {
                return Err(Error::InvalidParameter("closed-form backend needs an analytic vector".into()));
            };
            let values = v.wedge_boost(frame, tau)?.sample();
            Ok(StripContinuation { backend, tau, values, diagnostics: None })
        }
        Backend::Spectral => {
            let phi = src.samples();
            if tau.im == 0.0 {
                let values = wedge_boost_group(frame, tau.re, &phi)?;
                return Ok(StripContinuation { backend, tau, values, diagnostics: None });
            }
            let (values, diag) = homogeneous_continuation(&phi, &frame.lambda, tau)?;
            phi.validate_decay()?;
            let values = apply_continued_phase(&values, frame, tau)?;
            Ok(StripContinuation { backend, tau, values, diagnostics: Some(diag) })
        }
    }
}

/// `φ(IΛ(τ)⁻¹I⁻¹p)` from samples: `d(I) [φ(· + τ)] ` after `d(I)⁻¹`.
fn homogeneous_continuation(
    phi: &WaveFunction,
    frame: &crate::geometry::LorentzTransform,
    tau: C64,
) -> Result<(WaveFunction, SpectralDiagnostics)> {
    let inner = apply_poincare(&PoincareElement::homogeneous(frame.inverse()), phi)?;
    let (shifted, diag) = spectral_shift(&inner, tau)?;
    Ok((apply_poincare(&PoincareElement::homogeneous(*frame), &shifted)?, diag))
}

fn apply_continued_phase(values: &WaveFunction, frame: &PoincareElement, tau: C64) -> Result<WaveFunction> {
    let a = frame.a;
    if a == FourVector::ZERO {
        return Ok(values.clone());
    }
    let g = values.grid.clone();
    let m = ShellMap::conjugated_boost(&frame.lambda, tau)?;
    let mut out = values.clone();
    for (t, tp) in g.transverse.iter().enumerate() {
        for j in 0..g.n_theta {
            let p = shell_point(&g, j, t)?;
            let (z, q) = m.apply(C64::new(g.theta(j), 0.0), tp.q);
            let zeta = complex_shell_point(g.mass, z, q);
            let arg = C64::new(crate::geometry::minkowski_inner(p, a), 0.0) - minkowski_inner_mixed(&zeta, a);
            out.samples[t * g.n_theta + j] *= (C64::new(0.0, 1.0) * arg).exp();
        }
    }
    Ok(out)
}

/// `δ^{1/2}_{L,±}φ = U_L(±iπ)φ`.
pub fn delta_half(frame: &PoincareElement, sign: Sign, src: Source<'_>, backend: Backend) -> Result<WaveFunction> {
    Ok(continue_boost(src, frame, C64::new(0.0, sign.value() * PI), backend)?.values)
}

/// `s_{L,±}φ = j_L δ^{1/2}_{L,±}φ`.
pub fn s_op(frame: &PoincareElement, sign: Sign, src: Source<'_>, backend: Backend) -> Result<WaveFunction> {
    wedge_involution(frame, &delta_half(frame, sign, src, backend)?)
}

/// Real-orthogonal projection onto `H_L = {φ : s_{L,±}φ = φ}`.
///
/// In Fourier modes of the standard wedge, `s_+` maps `c(q,k)` to
/// `e^{πk} conj c(-q,-k)`; pairing each mode with its partner gives the
/// bounded projector `c ↦ w₁c + w₂ conj c'` with `w₁ = E²/(1+E²)`,
/// `w₂ = E/(1+E²)`, `E = e^{±πk}`. Other frames are handled by conjugating
/// with `U(L)`.
pub fn real_orthogonal_projection(frame: &PoincareElement, sign: Sign, phi: &WaveFunction) -> Result<WaveFunction> {
    let chi = apply_poincare(&frame.inverse(), phi)?;
    let g = chi.grid.clone();
    let n = g.n_theta;
    let nt = g.transverse.len();
    let partner: Vec<usize> = g
        .transverse
        .iter()
        .map(|tp| g.find_transverse([-tp.q[0], -tp.q[1]]).ok_or_else(|| Error::UnsupportedTransform("transverse grid is not symmetric under q → -q".into())))
        .collect::<Result<_>>()?;
    let mut modes: Vec<Vec<C64>> = (0..nt)
        .map(|t| {
            let mut c = chi.fibre(t).to_vec();
            fft(&mut c);
            c
        })
        .collect();
    let k = g.wave_numbers();
    let s = sign.value();
    let mut out_modes = modes.clone();
    for t in 0..nt {
        for i in 0..n {
            if n % 2 == 0 && i == n / 2 {
                out_modes[t][i] = C64::new(0.0, 0.0);
                continue;
            }
            let x = PI * s * k[i];
            let w1 = 1.0 / (1.0 + (-2.0 * x).exp());
            let w2 = 1.0 / ((-x).exp() + x.exp());
            let mirror = (n - i) % n;
            out_modes[t][i] = modes[t][i] * w1 + modes[partner[t]][mirror].conj() * w2;
        }
    }
    for (t, c) in out_modes.iter_mut().enumerate() {
        ifft(c);
        modes[t] = core::mem::take(c);
    }
    let samples = modes.into_iter().flatten().collect();
    apply_poincare(frame, &WaveFunction::new(g, samples)?)
}

/// Distance from `φ` to `H_L`, i.e. `‖φ - E_Lφ‖`.
pub fn distance_to_real_subspace(frame: &PoincareElement, sign: Sign, phi: &WaveFunction) -> Result<f64> {
    phi.distance(&real_orthogonal_projection(frame, sign, phi)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub name: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularReport {
    pub wedge: PoincareElement,
    pub sign: Sign,
    pub relations: Vec<Relation>,
    /// Smallest spectral decay exponent over the battery.
    pub decay_exponent: f64,
}

impl ModularReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.relations.iter().find(|r| r.name == name).map(|r| r.residual)
    }

    pub fn max_residual(&self) -> f64 {
        self.relations.iter().fold(0.0, |m, r| m.max(r.residual))
    }
}

pub const REL_J_SQUARED: &str = "j^2 = 1";
pub const REL_S_SQUARED: &str = "s^2 = 1";
pub const REL_CONJUGATION: &str = "j delta^1/2 j = delta^-1/2";
pub const REL_FLOW: &str = "U(t) s U(-t) = s";
pub const REL_BACKENDS: &str = "closed_form = spectral";

/// Five gaussians of width ≥ 1, so that the spectral backend is accurate to
/// 1e-6 at `Im τ = ±π` and the samples vanish at the edge of `[-16, 16]`.
pub fn gaussian_battery(grid: Arc<MassShellGrid>) -> Vec<AnalyticVector> {
    [(0.0, 1.0, (1.0, 0.0)), (0.5, 1.0, (0.0, 1.0)), (-0.7, 1.2, (0.6, -0.8)), (0.3, 1.1, (-1.0, 0.5)), (-0.2, 1.3, (0.3, 0.3))]
        .iter()
        .map(|&(c, w, (re, im))| {
            let f = AnalyticFamily::gaussian(c, w).with_amplitude(C64::new(re, im));
            AnalyticVector::from_family(f, grid.clone())
        })
        .collect()
}

fn rel(a: &WaveFunction, b: &WaveFunction) -> f64 {
    let d = a.distance(b).unwrap_or(f64::INFINITY);
    let n = b.norm();
    if n > 0.0 {
        d / n
    } else {
        d
    }
}

/// Residuals of `j² = 1`, `s² = 1`, `jδ^{1/2}_± j = δ^{1/2}_∓`, flow
/// invariance of `s` under `U_L(t)`, and backend agreement for `δ^{1/2}`,
/// maximized over the battery. `j_frame` is normally `frame`; a different
/// frame gives a mismatched `s = j_{j_frame} δ^{1/2}_{frame}`.
pub fn tomita_check_with(frame: &PoincareElement, j_frame: &PoincareElement, sign: Sign, battery: &[AnalyticVector]) -> Result<ModularReport> {
    let mut worst = [0.0f64; 5];
    let mut decay = f64::INFINITY;
    for psi in battery {
        let base = psi.sample();
        let s = |v: &AnalyticVector| -> Result<AnalyticVector> { v.delta_half(frame, sign)?.wedge_involution(j_frame) };
        let jj = psi.wedge_involution(j_frame)?.wedge_involution(j_frame)?;
        worst[0] = worst[0].max(rel(&jj.sample(), &base));
        let ss = s(&s(psi)?)?;
        worst[1] = worst[1].max(rel(&ss.sample(), &base));
        let jdj = psi.wedge_involution(j_frame)?.delta_half(frame, sign)?.wedge_involution(j_frame)?;
        let d_other = psi.delta_half(frame, sign.flip())?;
        worst[2] = worst[2].max(rel(&jdj.sample(), &d_other.sample()));
        let t = 3.0 * psi.grid.dtheta;
        let flowed = s(&psi.wedge_boost(frame, C64::new(-t, 0.0))?)?.wedge_boost(frame, C64::new(t, 0.0))?;
        worst[3] = worst[3].max(rel(&flowed.sample(), &s(psi)?.sample()));
        let closed = psi.delta_half(frame, sign)?.sample();
        match continue_boost(Source::Analytic(psi), frame, C64::new(0.0, sign.value() * PI), Backend::Spectral) {
            Ok(c) => {
                worst[4] = worst[4].max(rel(&c.values, &closed));
                if let Some(d) = c.diagnostics {
                    decay = decay.min(d.decay_exponent);
                }
            }
            Err(Error::NotInDomain { .. }) | Err(Error::BoundaryDecay { .. }) => worst[4] = f64::INFINITY,
            Err(e) => return Err(e),
        }
    }
    let names = [REL_J_SQUARED, REL_S_SQUARED, REL_CONJUGATION, REL_FLOW, REL_BACKENDS];
    let relations = names.iter().zip(worst).map(|(n, r)| Relation { name: n.to_string(), residual: r }).collect();
    Ok(ModularReport { wedge: *frame, sign, relations, decay_exponent: decay })
}

pub fn tomita_check(frame: &PoincareElement, sign: Sign, battery: &[AnalyticVector]) -> Result<ModularReport> {
    tomita_check_with(frame, frame, sign, battery)
}
