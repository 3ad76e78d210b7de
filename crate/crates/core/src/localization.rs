//! Real subspaces `H_{K,±}` for polyhedral regions, approximated by finite
//! wedge families, plus the tube boundary values `u_{±,a}` and `r_+`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::analytic::{AnalyticVector, ShellMap, Sign};
use crate::flap::BoundReport;
use crate::geometry::{minkowski_inner, minkowski_inner_complex, minkowski_inner_mixed, rotation_x_pi, ComplexFourVector, FourVector, LorentzTransform, PoincareElement};
use crate::modular::{continue_boost, real_orthogonal_projection, Backend, Source};
use crate::regions::{intersect_regions, support_function, PolyRegion, Wedge};
use crate::shell::{complex_shell_point, shell_point, WaveFunction};
use crate::wigner::wedge_involution;
use crate::{Error, Result, C64};

/// Frames sharing one vertex `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexGroup {
    pub vertex: FourVector,
    pub members: Vec<usize>,
}

/// Finite family of wedges `W̄_L = L W̄` standing in for all wedges that
/// contain `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeFamily {
    pub frames: Vec<PoincareElement>,
    pub groups: Vec<VertexGroup>,
    pub region: PolyRegion,
}

impl WedgeFamily {
    /// Family with `K` taken as the intersection of its wedges.
    pub fn new(frames: Vec<PoincareElement>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::InvalidParameter("wedge family needs at least one frame".into()));
        }
        let wedges: Vec<PolyRegion> = frames.iter().map(|f| Wedge::from_frame(*f).region).collect();
        let region = intersect_regions(&wedges)?;
        let groups = group_by_vertex(&frames);
        Ok(WedgeFamily { frames, groups, region })
    }

    /// Family for a given `K`; every wedge must contain `K`.
    pub fn with_region(frames: Vec<PoincareElement>, region: PolyRegion) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::InvalidParameter("wedge family needs at least one frame".into()));
        }
        let groups = group_by_vertex(&frames);
        let fam = WedgeFamily { frames, groups, region };
        fam.validate()?;
        Ok(fam)
    }

    pub fn single(frame: PoincareElement) -> Result<Self> {
        Self::new(alloc::vec![frame])
    }

    /// Right wedge with edge at `x³ = -A` and the flipped wedge with edge at
    /// `x³ = A`; `K` is the diamond `|x⁰| + |x³| ≤ A` times the transverse plane.
    pub fn slab(half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidParameter("slab half width must be positive".into()));
        }
        Self::new(alloc::vec![
            PoincareElement::translation(FourVector::new(0.0, 0.0, 0.0, -half_width)),
            PoincareElement::new(FourVector::new(0.0, 0.0, 0.0, half_width), rotation_x_pi()),
        ])
    }

    /// Checks `K ⊂ W̄_L` for every frame, through the support function of `K`
    /// in each wedge's half-space normals (this covers `K`'s vertices and rays).
    pub fn validate(&self) -> Result<()> {
        if self.region.dim != 4 {
            return Err(Error::InvalidParameter("wedge family region must be four-dimensional".into()));
        }
        for (i, f) in self.frames.iter().enumerate() {
            let w = Wedge::from_frame(*f);
            for h in &w.region.halfspaces {
                let sup = support_function(&self.region, &h.normal)?;
                if !(sup <= h.offset + 1e-9 * (1.0 + h.offset.abs())) {
                    return Err(Error::InvalidParameter(alloc::format!("wedge {i} does not contain the region")));
                }
            }
        }
        Ok(())
    }
}

fn group_by_vertex(frames: &[PoincareElement]) -> Vec<VertexGroup> {
    let mut groups: Vec<VertexGroup> = Vec::new();
    for (i, f) in frames.iter().enumerate() {
        match groups.iter_mut().find(|g| (g.vertex - f.a).max_abs() <= 1e-12) {
            Some(g) => g.members.push(i),
            None => groups.push(VertexGroup { vertex: f.a, members: alloc::vec![i] }),
        }
    }
    groups
}

/// `(φ + s_{L,±}φ)/2` in closed form.
pub fn real_projector(frame: &PoincareElement, sign: Sign, phi: &AnalyticVector) -> Result<AnalyticVector> {
    Ok(phi.add(&phi.s_op(frame, sign)?)?.scale(C64::new(0.5, 0.0)))
}

/// `(φ + s_{L,±}φ)/2` from samples, with `s` through the spectral backend.
pub fn real_projector_sampled(frame: &PoincareElement, sign: Sign, phi: &WaveFunction) -> Result<WaveFunction> {
    let s = crate::modular::s_op(frame, sign, Source::Sampled(phi), Backend::Spectral)?;
    Ok(phi.add(&s)?.scale(C64::new(0.5, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalizeMethod {
    /// Conjugate gradients on the symmetrized product of projections.
    ConjugateGradient,
    /// Plain cyclic projections `P_n ⋯ P_1`.
    Cyclic,
}

impl LocalizeMethod {
    pub fn name(self) -> &'static str {
        match self {
            LocalizeMethod::ConjugateGradient => "cg",
            LocalizeMethod::Cyclic => "cyclic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationResult {
    pub family: Vec<PoincareElement>,
    pub sign: Sign,
    pub method: LocalizeMethod,
    pub tol: f64,
    pub iterations: usize,
    /// Best max-over-wedges residual after each iteration (nonincreasing).
    pub residual_history: Vec<f64>,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub projected: WaveFunction,
}

/// Residual of `x` for each wedge: `‖x - E_L x‖`.
fn wedge_residuals(family: &WedgeFamily, sign: Sign, x: &WaveFunction) -> Result<Vec<f64>> {
    family.frames.iter().map(|f| x.distance(&real_orthogonal_projection(f, sign, x)?)).collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(*x))
}

fn real_dot(a: &WaveFunction, b: &WaveFunction) -> f64 {
    a.samples.iter().zip(&b.samples).map(|(x, y)| (x.conj() * y).re).sum()
}

fn axpy(x: &WaveFunction, alpha: f64, y: &WaveFunction) -> WaveFunction {
    let mut out = x.clone();
    out.samples.iter_mut().zip(&y.samples).for_each(|(o, v)| *o += v * alpha);
    out
}

/// Projection of `φ` onto `∩ H_L` over the family. Residuals are the
/// distances `‖x - E_L x‖` (callers normalize `φ` when they want relative
/// numbers); the best iterate so far is kept, so the history never increases.
///
/// On a finite grid two real subspaces of half dimension generically meet
/// only in zero, so for several distinct wedges the iterate is a vector of
/// small residual whose norm slowly decreases, not a limit point.
pub fn localize(family: &WedgeFamily, sign: Sign, phi: &WaveFunction, tol: f64, max_iter: usize, method: LocalizeMethod) -> Result<LocalizationResult> {
    phi.validate_decay()?;
    let frames = &family.frames;
    let project = |k: usize, x: &WaveFunction| real_orthogonal_projection(&frames[k], sign, x);
    let sweep = |x: &WaveFunction| -> Result<WaveFunction> {
        let mut y = x.clone();
        for k in 0..frames.len() {
            y = project(k, &y)?;
        }
        Ok(y)
    };
    let x0 = project(0, phi)?;
    let mut best = x0.clone();
    let mut best_res = wedge_residuals(family, sign, &best)?;
    let mut history = Vec::new();
    let mut iterations = 0;
    let consider = |x: WaveFunction, best: &mut WaveFunction, best_res: &mut Vec<f64>, history: &mut Vec<f64>| -> Result<()> {
        let r = wedge_residuals(family, sign, &x)?;
        if max_of(&r) < max_of(best_res) {
            *best = x;
            *best_res = r;
        }
        history.push(max_of(best_res));
        Ok(())
    };
    if max_of(&best_res) <= tol || frames.len() == 1 {
        history.push(max_of(&best_res));
        return Ok(LocalizationResult {
            family: frames.clone(),
            sign,
            method,
            tol,
            iterations: 1,
            converged: max_of(&best_res) <= tol,
            residual_history: history,
            residuals: best_res,
            projected: best,
        });
    }
    match method {
        LocalizeMethod::Cyclic => {
            let mut x = x0;
            while iterations < max_iter {
                x = sweep(&x)?;
                iterations += 1;
                consider(x.clone(), &mut best, &mut best_res, &mut history)?;
                if max_of(&best_res) <= tol {
                    break;
                }
            }
        }
        LocalizeMethod::ConjugateGradient => {
            // T = P₁P₂⋯P_n⋯P₂P₁ is self-adjoint on range(P₁) with fixed space ∩H_L;
            // solve (I - T)z = (I - T)x₀ from z = 0, then x = x₀ - z.
            let sym = |x: &WaveFunction| -> Result<WaveFunction> {
                let mut y = x.clone();
                for k in 0..frames.len() {
                    y = project(k, &y)?;
                }
                for k in (0..frames.len() - 1).rev() {
                    y = project(k, &y)?;
                }
                Ok(y)
            };
            let a_op = |x: &WaveFunction| -> Result<WaveFunction> { x.sub(&sym(x)?) };
            let b = a_op(&x0)?;
            let mut z = WaveFunction::zeros(x0.grid.clone());
            let mut r = b.clone();
            let mut p = r.clone();
            let mut rr = real_dot(&r, &r);
            while iterations < max_iter && rr > 0.0 {
                let ap = a_op(&p)?;
                let pap = real_dot(&p, &ap);
                if !(pap > 0.0) {
                    break;
                }
                let alpha = rr / pap;
                z = axpy(&z, alpha, &p);
                r = axpy(&r, -alpha, &ap);
                let rn = real_dot(&r, &r);
                p = axpy(&r, rn / rr, &p);
                rr = rn;
                iterations += 1;
                consider(x0.sub(&z)?, &mut best, &mut best_res, &mut history)?;
                if max_of(&best_res) <= tol {
                    break;
                }
            }
        }
    }
    let converged = max_of(&best_res) <= tol;
    Ok(LocalizationResult {
        family: frames.clone(),
        sign,
        method,
        tol,
        iterations,
        residual_history: history,
        residuals: best_res,
        converged,
        projected: best,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub residuals: Vec<(PoincareElement, f64)>,
    pub member: bool,
}

/// Per-wedge distance `‖φ - E_Lφ‖` to `H_L`; member iff all are `≤ tol`.
pub fn membership_test(family: &WedgeFamily, sign: Sign, phi: &WaveFunction, tol: f64) -> Result<MembershipReport> {
    let r = wedge_residuals(family, sign, phi)?;
    let member = r.iter().all(|x| *x <= tol);
    Ok(MembershipReport { residuals: family.frames.iter().copied().zip(r).collect(), member })
}

/// One boundary value `u(ζ) = U_L(τ)φ(p)` with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubePoint {
    pub tau: C64,
    /// `(rapidity index, transverse index)` of `p`.
    pub index: (usize, usize),
    pub p: FourVector,
    pub zeta: ComplexFourVector,
    pub u: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeSample {
    pub vertex: FourVector,
    pub frame: LorentzTransform,
    pub points: Vec<TubePoint>,
}

impl TubeSample {
    /// Largest `|⟨ζ,ζ⟩ - m²| / max(m², |ζ|²)`; the scale absorbs the
    /// cancellation in `cosh² - sinh²` at large rapidity.
    pub fn shell_residual(&self, mass: f64) -> f64 {
        self.points.iter().fold(0.0, |m, s| {
            let scale = (mass * mass).max(s.zeta.max_modulus().powi(2));
            m.max((minkowski_inner_complex(&s.zeta, &s.zeta) - mass * mass).norm() / scale)
        })
    }
}

fn zeta_of(src: &Source<'_>, frame: &LorentzTransform, tau: C64, j: usize, t: usize) -> Result<(FourVector, ComplexFourVector)> {
    let g = src.grid();
    let m = ShellMap::conjugated_boost(frame, tau)?;
    let (z, q) = m.apply(C64::new(g.theta(j), 0.0), g.transverse[t].q);
    Ok((shell_point(&g, j, t)?, complex_shell_point(g.mass, z, q)))
}

fn check_index(src: &Source<'_>, (j, t): (usize, usize)) -> Result<()> {
    let g = src.grid();
    if j >= g.n_theta || t >= g.transverse.len() {
        return Err(Error::IndexOutOfRange(alloc::format!("({j}, {t})")));
    }
    Ok(())
}

/// Values of `U_L(τ)φ` at `(τ_k, p_j)` for `L = (vertex, frame)`. Analytic
/// sources use the closed form, sampled ones the spectral backend.
pub fn boundary_function(src: Source<'_>, vertex: FourVector, frame: &LorentzTransform, taus: &[C64], points: &[(usize, usize)]) -> Result<TubeSample> {
    let l = PoincareElement::new(vertex, *frame);
    let mut out = Vec::with_capacity(taus.len() * points.len());
    for &tau in taus {
        if !(tau.im.abs() <= PI + 1e-12) {
            return Err(Error::InvalidParameter(alloc::format!("|Im τ| must be ≤ π, got {tau}")));
        }
        let values = match src {
            Source::Analytic(v) => Err(v.wedge_boost(&l, tau)?),
            Source::Sampled(_) => Ok(continue_boost(src, &l, tau, Backend::Spectral)?.values),
        };
        for &idx in points {
            check_index(&src, idx)?;
            let (p, zeta) = zeta_of(&src, frame, tau, idx.0, idx.1)?;
            let u = match &values {
                Err(expr) => expr.eval_at(idx.0, idx.1, C64::new(0.0, 0.0)),
                Ok(w) => w.at(idx.0, idx.1),
            };
            out.push(TubePoint { tau, index: idx, p, zeta, u });
        }
    }
    Ok(TubeSample { vertex, frame: *frame, points: out })
}

/// `r_+(ζ) = φ(IΛ(τ)⁻¹I⁻¹p)`: the continuation without translation phases.
pub fn r_plus(src: Source<'_>, frame: &LorentzTransform, tau: C64, index: (usize, usize)) -> Result<C64> {
    check_index(&src, index)?;
    match src {
        Source::Analytic(v) => Ok(v.frame_boost(frame, tau)?.eval_at(index.0, index.1, C64::new(0.0, 0.0))),
        Source::Sampled(_) => Ok(continue_boost(src, &PoincareElement::homogeneous(*frame), tau, Backend::Spectral)?.values.at(index.0, index.1)),
    }
}

/// Largest `|u(ζ) - e^{i⟨p,a⟩}e^{-i⟨ζ,a⟩} r_+(ζ)| / max(|u(ζ)|, tiny)` over the sample.
pub fn factorization_residual(src: Source<'_>, sample: &TubeSample) -> Result<f64> {
    let a = sample.vertex;
    let mut worst: f64 = 0.0;
    for s in &sample.points {
        let r = r_plus(src, &sample.frame, s.tau, s.index)?;
        let arg = C64::new(minkowski_inner(s.p, a), 0.0) - minkowski_inner_mixed(&s.zeta, a);
        let rhs = (C64::new(0.0, 1.0) * arg).exp() * r;
        let scale = s.u.norm().max(rhs.norm()).max(1e-300);
        worst = worst.max((s.u - rhs).norm() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Compares the strip-edge value `u(-ξ) = U_L(±iπ)ψ(p)` with
/// `e^{i⟨p,a⟩} e^{i⟨ξ,a⟩} conj ψ(ξ)`, `ξ = IΥI⁻¹p`, at the given grid points.
/// Residuals are relative to `sup |ψ|`.
pub fn boundary_condition_check(src: Source<'_>, vertex: FourVector, frame: &LorentzTransform, sign: Sign, points: &[(usize, usize)]) -> Result<BoundaryReport> {
    let l = PoincareElement::new(vertex, *frame);
    let tau = C64::new(0.0, sign.value() * PI);
    let (edge, paired): (Vec<C64>, Vec<C64>) = match src {
        Source::Analytic(v) => {
            let e = v.delta_half(&l, sign)?;
            let j = v.wedge_involution(&l)?;
            points.iter().map(|&(a, b)| (e.eval_at(a, b, C64::new(0.0, 0.0)), j.eval_at(a, b, C64::new(0.0, 0.0)))).unzip()
        }
        Source::Sampled(w) => {
            let e = continue_boost(src, &l, tau, Backend::Spectral)?.values;
            let j = wedge_involution(&l, w)?;
            points.iter().map(|&(a, b)| (e.at(a, b), j.at(a, b))).unzip()
        }
    };
    for &idx in points {
        check_index(&src, idx)?;
    }
    let scale = src.samples().sup_norm();
    let residuals: Vec<f64> = edge
        .iter()
        .zip(&paired)
        .map(|(e, p)| {
            let d = (e - p).norm();
            if scale > 0.0 {
                d / scale
            } else {
                d
            }
        })
        .collect();
    let max_residual = max_of(&residuals);
    Ok(BoundaryReport { residuals, max_residual })
}

/// Probe set for [`growth_check_u`]: real parts `λ`, heights `Im τ / π` in
/// `(0, 1]` (the sign is applied by the check), a stride through the grid,
/// and the shift `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProbe {
    pub lambdas: Vec<f64>,
    pub heights: Vec<f64>,
    pub stride: usize,
    pub eta: FourVector,
    pub n_declared: Option<f64>,
}

impl GrowthProbe {
    pub fn uniform(n_lambda: usize, lambda_max: f64, n_height: usize, stride: usize) -> Self {
        let lambdas = (0..n_lambda).map(|i| if n_lambda == 1 { 0.0 } else { -lambda_max + 2.0 * lambda_max * i as f64 / (n_lambda - 1) as f64 }).collect();
        let heights = (1..=n_height).map(|k| k as f64 / n_height as f64).collect();
        GrowthProbe { lambdas, heights, stride: stride.max(1), eta: FourVector::ZERO, n_declared: None }
    }

    /// Twice as many probes in every direction.
    pub fn doubled(&self) -> Self {
        let n = self.lambdas.len();
        let (lo, hi) = (self.lambdas[0], self.lambdas[n - 1]);
        let lambdas = (0..2 * n - 1).map(|i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (2 * n - 2) as f64 }).collect();
        let nh = self.heights.len() * 2;
        let heights = (1..=nh).map(|k| k as f64 / nh as f64).collect();
        GrowthProbe { lambdas, heights, stride: (self.stride / 2).max(1), ..self.clone() }
    }
}

/// Worst ratio `|u(ζ)| / ((1+|ζ|)^N e^{H_K(Im ζ - η)})` with the Minkowski
/// support function of `K`. `N` is the declared order, or the log-log slope
/// of the binned maxima of `|u| e^{-H}` (clamped at 0).
pub fn growth_check_u(src: Source<'_>, vertex: FourVector, frame: &LorentzTransform, sign: Sign, region: &PolyRegion, probe: &GrowthProbe) -> Result<BoundReport> {
    let g = src.grid();
    let taus: Vec<C64> = probe
        .lambdas
        .iter()
        .flat_map(|&l| probe.heights.iter().map(move |&h| C64::new(l, sign.value() * PI * h)))
        .collect();
    let points: Vec<(usize, usize)> = (0..g.transverse.len()).flat_map(|t| (0..g.n_theta).step_by(probe.stride).map(move |j| (j, t))).collect();
    let sample = boundary_function(src, vertex, frame, &taus, &points)?;
    let mut skipped = 0;
    let mut data: Vec<(f64, f64, usize)> = Vec::new();
    for (k, s) in sample.points.iter().enumerate() {
        let y = s.zeta.im() - probe.eta;
        let h = support_function(region, &y.lowered().0)?;
        if !h.is_finite() {
            skipped += 1;
            continue;
        }
        let ratio = s.u.norm() * (-h).exp();
        data.push(((1.0 + s.zeta.max_modulus()).ln(), ratio, k));
    }
    let pairs: Vec<(f64, f64)> = data.iter().map(|d| (d.0, d.1)).collect();
    let n_est = crate::flap::loglog_slope(&pairs).max(0.0);
    let n = probe.n_declared.unwrap_or(n_est);
    let mut c: f64 = 0.0;
    let mut at = Vec::new();
    for &(lr, ratio, k) in &data {
        let v = ratio * (-n * lr).exp();
        if v > c || at.is_empty() {
            c = c.max(v);
            let s = &sample.points[k];
            at = alloc::vec![s.tau.re, s.tau.im, s.index.0 as f64, s.index.1 as f64];
        }
    }
    let radii = {
        let mut r: Vec<f64> = data.iter().map(|d| d.0.exp() - 1.0).collect();
        r.sort_by(|a, b| a.total_cmp(b));
        let lo = r.first().copied().unwrap_or(0.0);
        let hi = r.last().copied().unwrap_or(0.0);
        alloc::vec![lo, hi, data.len() as f64]
    };
    Ok(BoundReport {
        check: "growth_u".into(),
        n_declared: probe.n_declared,
        n_est,
        c,
        max_ratio_at: at,
        grid: radii,
        skipped,
        c_doubled: None,
        pass: c.is_finite() && !data.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shell::{AnalyticFamily, MassShellGrid};
    use alloc::sync::Arc;

    fn grid() -> Arc<MassShellGrid> {
        Arc::new(MassShellGrid::default_1p1(1.0).unwrap())
    }

    fn gauss(g: &Arc<MassShellGrid>, c: f64, w: f64) -> AnalyticVector {
        AnalyticVector::from_family(AnalyticFamily::gaussian(c, w), g.clone())
    }

    fn unit(w: WaveFunction) -> WaveFunction {
        let n = w.norm();
        w.scale(C64::new(1.0 / n, 0.0))
    }

    fn member(g: &Arc<MassShellGrid>) -> AnalyticVector {
        let v = gauss(g, 0.0, 1.0);
        v.add(&v.s_op(&PoincareElement::IDENTITY, Sign::Plus).unwrap()).unwrap()
    }

    #[test]
    fn slab_family_region_and_groups() {
        let f = WedgeFamily::slab(1.0).unwrap();
        assert_eq!(f.groups.len(), 2);
        assert!(f.region.contains(&[0.0, 5.0, -3.0, 0.0]));
        assert!(f.region.contains(&[0.5, 0.0, 0.0, 0.4]));
        assert!(!f.region.contains(&[0.0, 0.0, 0.0, 1.5]));
        assert!(f.validate().is_ok());
        let bad = WedgeFamily::with_region(alloc::vec![PoincareElement::IDENTITY], PolyRegion::point(&[0.0, 0.0, 0.0, -1.0]));
        assert!(bad.is_err());
        let ok = WedgeFamily::with_region(alloc::vec![PoincareElement::IDENTITY], PolyRegion::point(&[0.0, 0.0, 0.0, 1.0]));
        assert!(ok.is_ok());
    }

    #[test]
    fn real_projector_examples() {
        let g = grid();
        let w = PoincareElement::IDENTITY;
        let v = gauss(&g, 0.0, 1.0);
        let p = real_projector(&w, Sign::Plus, &v).unwrap();
        let sp = p.s_op(&w, Sign::Plus).unwrap();
        let rel = |a: &WaveFunction, b: &WaveFunction| a.distance(b).unwrap() / b.norm();
        assert!(rel(&sp.sample(), &p.sample()) <= 1e-8);
        let pp = real_projector(&w, Sign::Plus, &p).unwrap();
        assert!(rel(&pp.sample(), &p.sample()) <= 1e-10);
        let anti = v.sub(&v.s_op(&w, Sign::Plus).unwrap()).unwrap();
        assert!(real_projector(&w, Sign::Plus, &anti).unwrap().sample().norm() <= 1e-8 * anti.sample().norm());
        let sampled = real_projector_sampled(&w, Sign::Plus, &v.sample()).unwrap();
        assert!(rel(&sampled, &p.sample()) < 1e-6);
    }

    #[test]
    fn single_and_duplicate_families() {
        let g = grid();
        let phi = gauss(&g, 0.2, 1.0).sample();
        let w = PoincareElement::translation(FourVector::new(0.0, 0.0, 0.0, -0.5));
        let one = localize(&WedgeFamily::single(w).unwrap(), Sign::Plus, &phi, 1e-10, 10, LocalizeMethod::ConjugateGradient).unwrap();
        assert_eq!(one.iterations, 1);
        assert!(one.converged);
        let direct = real_orthogonal_projection(&w, Sign::Plus, &phi).unwrap();
        assert!(one.projected.max_abs_diff(&direct) == 0.0);
        let two = localize(&WedgeFamily::new(alloc::vec![w, w]).unwrap(), Sign::Plus, &phi, 1e-10, 10, LocalizeMethod::ConjugateGradient).unwrap();
        assert!(two.projected.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn slab_localization_converges() {
        let g = grid();
        let phi = unit(gauss(&g, 0.0, 1.0).sample());
        let fam = WedgeFamily::slab(4.0).unwrap();
        let r = localize(&fam, Sign::Plus, &phi, 1e-6, 200, LocalizeMethod::ConjugateGradient).unwrap();
        assert!(r.converged, "{:?}", r.residual_history.last());
        assert!(r.iterations <= 200);
        assert!(r.residual_history.windows(2).all(|w| w[1] <= w[0]));
        let m = membership_test(&fam, Sign::Plus, &r.projected, 1e-6).unwrap();
        assert!(m.member);
        assert!(r.projected.norm() > 10.0 * r.tol);
        // real-linear combinations with |λ| + |μ| ≤ 1 stay inside, i·φ does not
        let other = localize(&fam, Sign::Plus, &unit(gauss(&g, 0.3, 1.1).sample()), 1e-6, 200, LocalizeMethod::ConjugateGradient).unwrap();
        assert!(other.converged);
        let combo = r.projected.scale(C64::new(-0.6, 0.0)).add(&other.projected.scale(C64::new(0.4, 0.0))).unwrap();
        assert!(membership_test(&fam, Sign::Plus, &combo, 1e-6).unwrap().member);
        let rotated = r.projected.scale(C64::new(0.0, 1.0));
        assert!(!membership_test(&fam, Sign::Plus, &rotated, 1e-6).unwrap().member);
    }

    #[test]
    fn cyclic_is_monotone() {
        let g = grid();
        let phi = gauss(&g, 0.0, 1.0).sample();
        let fam = WedgeFamily::slab(4.0).unwrap();
        let r = localize(&fam, Sign::Plus, &phi, 1e-6, 20, LocalizeMethod::Cyclic).unwrap();
        assert!(r.residual_history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(r.method.name(), "cyclic");
    }

    #[test]
    fn membership_trivia() {
        let g = grid();
        let fam = WedgeFamily::single(PoincareElement::IDENTITY).unwrap();
        let zero = WaveFunction::zeros(g.clone());
        assert!(membership_test(&fam, Sign::Plus, &zero, 1e-12).unwrap().member);
        let m = unit(member(&g).sample());
        assert!(membership_test(&fam, Sign::Plus, &m, 1e-8).unwrap().member);
        assert!(!membership_test(&fam, Sign::Plus, &m.scale(C64::new(0.0, 1.0)), 1e-8).unwrap().member);
    }

    #[test]
    fn boundary_function_examples() {
        let g = grid();
        let psi = member(&g);
        let src = Source::Analytic(&psi);
        let a = FourVector::new(0.0, 0.0, 0.0, -1.0);
        let frame = LorentzTransform::IDENTITY;
        let pts: Vec<(usize, usize)> = (0..g.n_theta).step_by(37).map(|j| (j, 0)).collect();
        let real = boundary_function(src, a, &frame, &[C64::new(0.3, 0.0)], &pts).unwrap();
        let want = crate::wigner::wedge_boost_group(&PoincareElement::new(a, frame), 0.3, &psi.sample()).unwrap();
        let want_exact = psi.wedge_boost(&PoincareElement::new(a, frame), C64::new(0.3, 0.0)).unwrap();
        for s in &real.points {
            assert!((s.u - want_exact.eval_at(s.index.0, s.index.1, C64::new(0.0, 0.0))).norm() <= 1e-12 * want.sup_norm());
        }
        let taus: Vec<C64> = (0..5).map(|k| C64::new(0.2 * k as f64 - 0.4, PI * k as f64 / 4.0)).collect();
        let tube = boundary_function(src, a, &frame, &taus, &pts).unwrap();
        assert!(tube.shell_residual(g.mass) <= 1e-8);
        assert!(factorization_residual(src, &tube).unwrap() <= 1e-8);
        // |u| = e^{⟨Im ζ, a⟩} |r_+|, away from rapidities where e^{⟨Im ζ, a⟩} overflows
        for s in tube.points.iter().filter(|s| g.theta(s.index.0).abs() <= 4.0) {
            let r = r_plus(src, &frame, s.tau, s.index).unwrap();
            let lhs = s.u.norm();
            let rhs = minkowski_inner(s.zeta.im(), a).exp() * r.norm();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1e-300));
        }
        let at_origin = boundary_function(src, FourVector::ZERO, &frame, &taus, &pts).unwrap();
        for s in &at_origin.points {
            assert_eq!(s.u, r_plus(src, &frame, s.tau, s.index).unwrap());
        }
    }

    #[test]
    fn boundary_conditions_members_and_control() {
        let g = grid();
        let pts: Vec<(usize, usize)> = (0..g.n_theta).map(|j| (j, 0)).collect();
        for (c, w) in [(0.0, 1.0), (0.5, 1.0), (-0.7, 1.2)] {
            let v = gauss(&g, c, w);
            let psi = v.add(&v.s_op(&PoincareElement::IDENTITY, Sign::Plus).unwrap()).unwrap();
            let ok = boundary_condition_check(Source::Analytic(&psi), FourVector::ZERO, &LorentzTransform::IDENTITY, Sign::Plus, &pts).unwrap();
            assert!(ok.max_residual <= 1e-6, "{}", ok.max_residual);
            let ipsi = psi.scale(C64::new(0.0, 1.0));
            let bad = boundary_condition_check(Source::Analytic(&ipsi), FourVector::ZERO, &LorentzTransform::IDENTITY, Sign::Plus, &pts).unwrap();
            assert!(bad.max_residual > 1e-2);
        }
        let zero = AnalyticVector::zero(g.clone());
        let z = boundary_condition_check(Source::Analytic(&zero), FourVector::ZERO, &LorentzTransform::IDENTITY, Sign::Plus, &pts).unwrap();
        assert_eq!(z.max_residual, 0.0);
    }

    #[test]
    fn boundary_conditions_translated_flipped_frame() {
        let g = grid();
        let l = PoincareElement::new(FourVector::new(0.0, 0.0, 0.0, -0.5), rotation_x_pi());
        let v = gauss(&g, 0.1, 1.0);
        let psi = v.add(&v.s_op(&l, Sign::Plus).unwrap()).unwrap();
        let pts: Vec<(usize, usize)> = (0..g.n_theta).step_by(3).map(|j| (j, 0)).collect();
        let r = boundary_condition_check(Source::Analytic(&psi), l.a, &l.lambda, Sign::Plus, &pts).unwrap();
        assert!(r.max_residual <= 1e-6);
    }

    #[test]
    fn growth_point_region_and_zero() {
        let g = grid();
        let psi = member(&g);
        let a = FourVector::ZERO;
        let k = PolyRegion::point(&a.0);
        let probe = GrowthProbe::uniform(5, 2.0, 4, 16);
        let r = growth_check_u(Source::Analytic(&psi), a, &LorentzTransform::IDENTITY, Sign::Plus, &k, &probe).unwrap();
        assert!(r.pass && r.c.is_finite() && r.c > 0.0);
        // H = ⟨a, Im ζ⟩ = 0 here, so C bounds |r_+| on the sample
        let sup_r = psi.frame_boost(&LorentzTransform::IDENTITY, C64::new(0.0, PI)).unwrap().sample().sup_norm();
        assert!(r.c <= 1.01 * sup_r.max(psi.sample().sup_norm()) * 10.0);
        let zero = AnalyticVector::zero(g.clone());
        let z = growth_check_u(Source::Analytic(&zero), a, &LorentzTransform::IDENTITY, Sign::Plus, &k, &probe).unwrap();
        assert_eq!(z.c, 0.0);
    }

    #[test]
    fn growth_stable_under_doubling_on_slab() {
        let g = grid();
        let v = gauss(&g, 0.0, 1.0);
        let fam = WedgeFamily::slab(1.0).unwrap();
        let l = fam.frames[0];
        let psi = v.add(&v.s_op(&l, Sign::Plus).unwrap()).unwrap();
        let probe = GrowthProbe::uniform(5, 2.0, 4, 16);
        let r1 = growth_check_u(Source::Analytic(&psi), l.a, &l.lambda, Sign::Plus, &fam.region, &probe).unwrap();
        let r2 = growth_check_u(Source::Analytic(&psi), l.a, &l.lambda, Sign::Plus, &fam.region, &probe.doubled()).unwrap();
        assert!(r1.pass && r2.pass);
        assert!((r2.c / r1.c - 1.0).abs() <= 0.2, "{} {}", r1.c, r2.c);
    }
}
