//! Fixed, human-readable descriptions of what each mode checks.

use modloc_core::conventions;

use crate::config::Mode;
use crate::error::RunError;

fn body(mode: Mode) -> &'static str {
    match mode {
        Mode::Tomita => "\
Checks the modular objects of a wedge W_L, L = (a, Λ), on a battery of analytic vectors
(default: five gaussians of widths 1.0 to 1.3).
  delta^1/2 = U_L(i·sign·π), the boost continued to the edge of the strip
  j         = U(L) Θ U(Υ) U(L)⁻¹, PCT composed with the rotation Υ
  s         = j delta^1/2 (antilinear)
Relations, each a worst relative residual over the battery:
  j^2 = 1                      <= tol (default 1e-8)
  s^2 = 1                      <= tol
  j delta^1/2 j = delta^-1/2   <= tol
  U(t) s U(-t) = s             <= tol
  closed_form = spectral       <= backend_tol (default 1e-6)
Control: white noise (seeded) must be rejected by the spectral backend with NotInDomain.
References: Tomita-Takesaki theory; Bisognano-Wichmann; Brunetti-Guido-Longo modular localization.",
        Mode::Localize => "\
Projects a vector onto the real subspace H_K of a finite wedge family by alternating
projections (cg: conjugate gradients on the symmetric product; cyclic: plain sweeps).
Each wedge projector is the real-orthogonal projection onto {φ : s_L φ = φ}.
Checks (residuals are absolute, the input is normalized first by default):
  converged: max per-wedge residual ||x - E_L x|| <= tol (default 1e-6) within max_iter
  membership of the result in every wedge subspace
  result norm > 10·tol (the discrete intersection can be trivial)
  i·result is not a member
  optional: -0.6·x + 0.4·y of two localized vectors stays a member
Outputs: projected.csv (wave function), residual_history.csv.
References: von Neumann / Halperin alternating projections.",
        Mode::Boundary => "\
Boundary-value checks for a wedge member ψ = v + s v (or the given vector):
  u(ζ) = e^{i⟨ζ,a⟩} r_+(ζ), with ζ = Λ(τ) p on the complex mass shell
  boundary condition: δ^{1/2}ψ(p) = e^{i⟨p,a⟩} e^{i⟨ξ,a⟩} conj ψ(ξ), residual relative to sup|ψ| <= tol
  i·ψ control: residual > control_min (default 1e-2)
  factorization u = e^{i⟨ζ,a⟩} r_+ <= factorization_tol (default 1e-8)
  tube points lie on the complex mass shell <= 1e-8 (relative)
  growth: |u(ζ)| <= C (1+|ζ|)^N e^{H_K(Im ζ)} with finite C (Minkowski pairing)
Outputs: tube_sample.csv, boundary_residuals.csv.",
        Mode::Pws => "\
Paley-Wiener-Schwartz bound for a compactly supported distribution u with hull K:
  |û(ζ)| <= C (1 + |ζ|)^N e^{H_K(Im ζ)},  û(ζ) = u(e^{-i⟨x,ζ⟩})
N is the declared order. Pass iff the worst ratio C is finite and stable within tol
(default 20%) when the grid is doubled.
Optional ray probe: ratio along Im ζ = r·η against a chosen hull (plot data).
References: Paley-Wiener-Schwartz theorem; Hörmander, ALPDO I, Thm 7.3.1.",
        Mode::Hormander => "\
Estimates Γ_u = {η : e^{⟨x,η⟩} u tempered} from exponential density tags:
for every unbounded cell direction the net rate must be nonpositive. The result is a
polyhedral η-region computed from rate arithmetic (no sampling).
Optional check: expected [lo, hi] per axis via the support function, within tol (default 1e-9).
Opaque densities on unbounded cells are rejected (UnsupportedDensity).
References: Hörmander, ALPDO I, section 7.4.",
        Mode::Epstein => "\
Polynomial bound on a tube R^n + iM, M a compact set of directions in the cone Γ:
  |f(ζ)| <= C (1 + |ζ|)^N
Pass iff C is finite and stable under doubling of the ξ extent, N_est <= tol (default 0.1)
unless N is declared, and the boundary-convergence probe passes: for the test functions,
∫ f(ξ+iη)φ(ξ)dξ forms a Cauchy sequence as η halves along the probe ray.
References: Epstein's tube theorem; Streater-Wightman, ch. 2.",
        Mode::SupportEstimate => "\
Recovers the support function of supp u from the growth of û along imaginary rays:
  Ĥ(η) = slope of log|û(i r η)| against r (least squares over the top half of the radii)
and the convex region ∩{⟨η,x⟩ <= Ĥ(η)}.
Check: |Ĥ(η) - H_K(η)| <= tol·max(1, |H_K(η)|) for every probe direction (default tol 1%).
References: Paley-Wiener-Schwartz converse; Hörmander, ALPDO I, Thm 7.3.1.",
        Mode::Cauchy => "\
Reconstructs f(ζ) inside a tube strip from its values on the two boundary lines with the
Cauchy kernel Π_j (x_j + iθ_j - ζ_j)^{-1} (x_j + iθ_j + i)^{-2} (kernel power k = 2);
quadrature in t with x = tan(πt/2), midpoint nodes.
Checks: |reconstruction - f(ζ)| <= tol (default 1e-4) at every target; with halving on,
the error at least halves each time the node count doubles (until roundoff).
InsufficientSampling is raised when the halving self-estimate exceeds 1e-4.",
    }
}

/// The description printed by `modloc describe <mode>`.
pub fn describe(mode: &str) -> Result<String, RunError> {
    let m = Mode::parse(mode)?;
    let pairing = match m {
        Mode::Boundary => conventions::PAIRING_MINKOWSKI,
        _ => conventions::PAIRING_EUCLIDEAN,
    };
    Ok(format!(
        "modloc {}\n\n{}\n\nConventions:\n  boost sign: {}\n  light cone: {}\n  pairing for H: {}\n  tube norm: {}\n  metric diag(1,-1,-1,-1); inner products antilinear in the first argument\n",
        m.name(),
        body(m),
        conventions::BOOST_SIGN,
        conventions::LIGHT_CONE,
        pairing,
        conventions::NORM_MAX
    ))
}
