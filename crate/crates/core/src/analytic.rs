//! Closed-form expression algebra for analytic vectors.
//!
//! Every operator of the representation that the crate supports acts on a
//! function of the shell coordinates `(z, q)` (complex rapidity, transverse
//! momentum) by one of four moves: an argument map, a translation phase,
//! Schwarz-reflected conjugation, or a linear combination. Composing these
//! symbolically keeps modular identities exact up to rounding, with no
//! sampling or continuation error.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::{minkowski_inner_mixed, FourVector, LorentzTransform, PoincareElement};
use crate::shell::{complex_shell_point, AnalyticFamily, MassShellGrid, WaveFunction};
use crate::{Error, Result, C64};

/// `(z, q) ↦ (σz + t, Oq)` with `σ = ±1`, complex `t` and `O ∈ O(2)`.
///
/// For a homogeneous transform `Λ` the map of `Λ` sends the coordinates of
/// `p` to those of `Λ⁻¹p`, so that `d(Λ)ψ = ψ ∘ M_Λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellMap {
    pub sigma: f64,
    pub shift: C64,
    pub o: [[f64; 2]; 2],
}

impl ShellMap {
    pub const IDENTITY: ShellMap = ShellMap { sigma: 1.0, shift: C64::new(0.0, 0.0), o: [[1.0, 0.0], [0.0, 1.0]] };

    /// Map of the (complex) x³-boost `Λ(τ)`: `z ↦ z + τ`.
    pub fn boost(tau: C64) -> Self {
        ShellMap { shift: tau, ..Self::IDENTITY }
    }

    pub fn apply(&self, z: C64, q: [f64; 2]) -> (C64, [f64; 2]) {
        let o = &self.o;
        (z * self.sigma + self.shift, [o[0][0] * q[0] + o[0][1] * q[1], o[1][0] * q[0] + o[1][1] * q[1]])
    }

    /// Apply `self` first, then `next`.
    pub fn then(&self, next: &ShellMap) -> ShellMap {
        let a = &next.o;
        let b = &self.o;
        let o = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        ShellMap { sigma: next.sigma * self.sigma, shift: self.shift * next.sigma + next.shift, o }
    }

    pub fn is_identity(&self) -> bool {
        self.sigma == 1.0 && self.shift.norm() == 0.0 && self.o == Self::IDENTITY.o
    }

    /// Map of a homogeneous transform from the supported subgroup generated
    /// by x³-boosts, rotations about x³ and the rotation by π about x¹.
    pub fn from_lorentz(l: &LorentzTransform) -> Result<ShellMap> {
        let unsupported = || Error::UnsupportedTransform(alloc::format!("{:?}", l.m));
        if !l.is_lorentz() {
            return Err(unsupported());
        }
        let inv = l.inverse().m;
        let tol = 1e-10 * (1.0 + inv[0][0].abs());
        for (i, j) in [(0, 1), (0, 2), (3, 1), (3, 2), (1, 0), (2, 0), (1, 3), (2, 3)] {
            if inv[i][j].abs() > tol {
                return Err(unsupported());
            }
        }
        let (a, b, d) = (inv[0][0], inv[0][3], inv[3][3]);
        if a < 1.0 - 1e-12 {
            return Err(unsupported());
        }
        // (p⁰, p³) block: boost (σ = +1) or x³-reflected boost (σ = -1)
        let (sigma, shift) = if d > 0.0 { (1.0, b.asinh()) } else { (-1.0, (-b).asinh()) };
        let (ch, sh) = (shift.cosh(), shift.sinh());
        let expect = if sigma > 0.0 { [ch, sh, sh, ch] } else { [ch, -sh, sh, -ch] };
        let got = [a, b, inv[3][0], d];
        if expect.iter().zip(&got).any(|(x, y)| (x - y).abs() > tol) {
            return Err(unsupported());
        }
        let o = [[inv[1][1], inv[1][2]], [inv[2][1], inv[2][2]]];
        Ok(ShellMap { sigma, shift: C64::new(shift, 0.0), o })
    }

    /// Map of `IΛ(τ)I⁻¹`: apply the map of `I`, then the boost, then that
    /// of `I⁻¹`.
    pub fn conjugated_boost(frame: &LorentzTransform, tau: C64) -> Result<ShellMap> {
        let mi = Self::from_lorentz(frame)?;
        let minv = Self::from_lorentz(&frame.inverse())?;
        Ok(mi.then(&Self::boost(tau)).then(&minv))
    }
}

/// Node of the expression tree; see [`AnalyticVector`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Zero,
    Family(AnalyticFamily),
    /// `ψ(M(z, q))`.
    Map(ShellMap, Arc<Expr>),
    /// `e^{i⟨p(z,q), a⟩} ψ(z, q)` with the bilinear Minkowski pairing.
    Phase(FourVector, Arc<Expr>),
    /// `conj ψ(conj z, q)`, the continuation of pointwise conjugation.
    Conj(Arc<Expr>),
    Combo(Vec<(C64, Arc<Expr>)>),
}

impl Expr {
    pub fn eval(&self, mass: f64, z: C64, q: [f64; 2]) -> C64 {
        match self {
            Expr::Zero => C64::new(0.0, 0.0),
            Expr::Family(f) => f.eval(z, q),
            Expr::Map(m, e) => {
                let (z2, q2) = m.apply(z, q);
                e.eval(mass, z2, q2)
            }
            Expr::Phase(a, e) => {
                let p = complex_shell_point(mass, z, q);
                let arg = minkowski_inner_mixed(&p, *a);
                (C64::new(0.0, 1.0) * arg).exp() * e.eval(mass, z, q)
            }
            Expr::Conj(e) => e.eval(mass, z.conj(), q).conj(),
            Expr::Combo(terms) => terms.iter().map(|(c, e)| c * e.eval(mass, z, q)).sum(),
        }
    }
}

/// Closed-form wave function on a grid. Operators return new vectors and
/// share subtrees.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticVector {
    pub expr: Arc<Expr>,
    pub grid: Arc<MassShellGrid>,
}

impl AnalyticVector {
    pub fn from_family(family: AnalyticFamily, grid: Arc<MassShellGrid>) -> Self {
        AnalyticVector { expr: Arc::new(Expr::Family(family)), grid }
    }

    pub fn zero(grid: Arc<MassShellGrid>) -> Self {
        AnalyticVector { expr: Arc::new(Expr::Zero), grid }
    }

    fn wrap(&self, e: Expr) -> Self {
        AnalyticVector { expr: Arc::new(e), grid: self.grid.clone() }
    }

    pub fn eval(&self, z: C64, q: [f64; 2]) -> C64 {
        self.expr.eval(self.grid.mass, z, q)
    }

    /// Value at grid rapidity `j` shifted by `i·rho`, transverse index `t`.
    pub fn eval_at(&self, j: usize, t: usize, shift: C64) -> C64 {
        self.eval(C64::new(self.grid.theta(j), 0.0) + shift, self.grid.transverse[t].q)
    }

    /// Samples on the real grid.
    pub fn sample(&self) -> WaveFunction {
        let mass = self.grid.mass;
        WaveFunction::from_fn(self.grid.clone(), |th, q| self.expr.eval(mass, C64::new(th, 0.0), q))
    }

    pub fn map(&self, m: ShellMap) -> Self {
        if m.is_identity() {
            return self.clone();
        }
        // ψ∘M₂ then ∘M₁: evaluate M₁ first, then M₂
        if let Expr::Map(inner, e) = &*self.expr {
            return self.wrap(Expr::Map(m.then(inner), e.clone()));
        }
        self.wrap(Expr::Map(m, self.expr.clone()))
    }

    pub fn phase(&self, a: FourVector) -> Self {
        if a == FourVector::ZERO {
            return self.clone();
        }
        self.wrap(Expr::Phase(a, self.expr.clone()))
    }

    pub fn conj(&self) -> Self {
        if let Expr::Conj(e) = &*self.expr {
            return AnalyticVector { expr: e.clone(), grid: self.grid.clone() };
        }
        self.wrap(Expr::Conj(self.expr.clone()))
    }

    pub fn scale(&self, c: C64) -> Self {
        self.wrap(Expr::Combo(vec![(c, self.expr.clone())]))
    }

    pub fn combine(terms: &[(C64, &AnalyticVector)]) -> Result<Self> {
        let grid = terms.first().ok_or_else(|| Error::InvalidParameter("empty combination".into()))?.1.grid.clone();
        if terms.iter().any(|(_, v)| *v.grid != *grid) {
            return Err(Error::GridMismatch);
        }
        Ok(AnalyticVector { expr: Arc::new(Expr::Combo(terms.iter().map(|(c, v)| (*c, v.expr.clone())).collect())), grid })
    }

    pub fn add(&self, other: &AnalyticVector) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        Self::combine(&[(one, self), (one, other)])
    }

    pub fn sub(&self, other: &AnalyticVector) -> Result<Self> {
        Self::combine(&[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)])
    }

    // --- representation operators -------------------------------------

    /// `d(Λ)ψ = ψ(Λ⁻¹ ·)`.
    pub fn homogeneous(&self, l: &LorentzTransform) -> Result<Self> {
        Ok(self.map(ShellMap::from_lorentz(l)?))
    }

    /// `U(a, Λ)ψ = e^{i⟨p,a⟩} ψ(Λ⁻¹p)`.
    pub fn poincare(&self, l: &PoincareElement) -> Result<Self> {
        Ok(self.homogeneous(&l.lambda)?.phase(l.a))
    }

    /// `Θψ = conj ψ`.
    pub fn pct(&self) -> Self {
        self.conj()
    }

    /// `U_L(τ)` for `L = (a, I)` and complex `τ`: the argument moves to
    /// `IΛ(τ)⁻¹I⁻¹p` and the translation phase is continued along with it.
    pub fn wedge_boost(&self, frame: &PoincareElement, tau: C64) -> Result<Self> {
        let m = ShellMap::conjugated_boost(&frame.lambda, tau)?;
        Ok(self.phase(-frame.a).map(m).phase(frame.a))
    }

    /// Homogeneous part of [`Self::wedge_boost`]: argument move only.
    pub fn frame_boost(&self, frame: &LorentzTransform, tau: C64) -> Result<Self> {
        Ok(self.map(ShellMap::conjugated_boost(frame, tau)?))
    }

    /// `j_L = T(a) d(I) d(Υ) Θ d(I)⁻¹ T(a)⁻¹`.
    pub fn wedge_involution(&self, frame: &PoincareElement) -> Result<Self> {
        let i = &frame.lambda;
        let upsilon = crate::geometry::rotation_z_pi();
        let inner = self.phase(-frame.a).homogeneous(&i.inverse())?.pct();
        Ok(inner.homogeneous(&upsilon)?.homogeneous(i)?.phase(frame.a))
    }

    /// `δ^{1/2}_{L,±} = U_L(±iπ)`.
    pub fn delta_half(&self, frame: &PoincareElement, sign: Sign) -> Result<Self> {
        self.wedge_boost(frame, C64::new(0.0, sign.value() * PI))
    }

    /// `s_{L,±} = j_L δ^{1/2}_{L,±}`.
    pub fn s_op(&self, frame: &PoincareElement, sign: Sign) -> Result<Self> {
        self.delta_half(frame, sign)?.wedge_involution(frame)
    }
}

/// Which half of the strip the modular objects continue into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{boost3, rotation_x_pi, rotation_z, rotation_z_pi, LorentzTransform};
    use crate::shell::complex_shell_point;

    fn grid() -> Arc<MassShellGrid> {
        Arc::new(MassShellGrid::default_1p1(1.0).unwrap())
    }

    fn rel(a: &WaveFunction, b: &WaveFunction) -> f64 {
        a.distance(b).unwrap() / b.norm().max(1e-300)
    }

    #[test]
    fn maps_of_generators() {
        let m = ShellMap::from_lorentz(&boost3(0.7)).unwrap();
        assert_eq!(m.sigma, 1.0);
        assert!((m.shift - C64::new(0.7, 0.0)).norm() < 1e-14);
        let m = ShellMap::from_lorentz(&rotation_x_pi()).unwrap();
        assert_eq!((m.sigma, m.o), (-1.0, [[1.0, 0.0], [0.0, -1.0]]));
        let m = ShellMap::from_lorentz(&rotation_z_pi()).unwrap();
        assert_eq!(m.o, [[-1.0, 0.0], [0.0, -1.0]]);
        let x_boost = LorentzTransform::from_rows([
            [1.2f64.cosh(), -1.2f64.sinh(), 0.0, 0.0],
            [-1.2f64.sinh(), 1.2f64.cosh(), 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert!(matches!(ShellMap::from_lorentz(&x_boost), Err(Error::UnsupportedTransform(_))));
        let time_reversal = LorentzTransform::diag([-1.0, 1.0, 1.0, 1.0]);
        assert!(ShellMap::from_lorentz(&time_reversal).is_err());
    }

    #[test]
    fn maps_implement_inverse_action() {
        // coordinates of Λ⁻¹p agree with the map for a mixed element
        let l = rotation_x_pi().compose(&boost3(0.4)).compose(&rotation_z(0.9));
        let m = ShellMap::from_lorentz(&l).unwrap();
        let (z, q) = (C64::new(0.3, 0.0), [0.5, -1.1]);
        let p = complex_shell_point(2.0, z, q);
        let (z2, q2) = m.apply(z, q);
        let want = l.inverse().complexify().apply(&p);
        let got = complex_shell_point(2.0, z2, q2);
        for i in 0..4 {
            assert!((want.0[i] - got.0[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn map_composition_follows_products() {
        let (a, b) = (rotation_x_pi().compose(&boost3(0.3)), rotation_z(0.4).compose(&boost3(-1.1)));
        let mab = ShellMap::from_lorentz(&a.compose(&b)).unwrap();
        let composed = ShellMap::from_lorentz(&a).unwrap().then(&ShellMap::from_lorentz(&b).unwrap());
        assert!((mab.shift - composed.shift).norm() < 1e-12 && mab.sigma == composed.sigma);
        for i in 0..2 {
            for j in 0..2 {
                assert!((mab.o[i][j] - composed.o[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn delta_half_is_rapidity_substitution() {
        let g = grid();
        let f = AnalyticFamily::gaussian(0.0, 1.0);
        let v = AnalyticVector::from_family(f.clone(), g.clone());
        for sign in [Sign::Plus, Sign::Minus] {
            let d = v.delta_half(&PoincareElement::IDENTITY, sign).unwrap();
            for j in (0..g.n_theta).step_by(101) {
                let want = f.eval(C64::new(g.theta(j), sign.value() * PI), [0.0, 0.0]);
                assert!((d.eval_at(j, 0, C64::new(0.0, 0.0)) - want).norm() <= 1e-12 * want.norm().max(1.0));
            }
        }
        let back = v.delta_half(&PoincareElement::IDENTITY, Sign::Plus).unwrap().delta_half(&PoincareElement::IDENTITY, Sign::Minus).unwrap();
        assert!(rel(&back.sample(), &v.sample()) < 1e-8);
    }

    #[test]
    fn one_plus_one_involution_is_conjugation() {
        let g = grid();
        let v = AnalyticVector::from_family(AnalyticFamily::gaussian(0.5, 1.0).with_amplitude(C64::new(1.0, 2.0)), g);
        let j = v.wedge_involution(&PoincareElement::IDENTITY).unwrap().sample();
        let conj = v.sample().map(|z| z.conj());
        assert!(j.max_abs_diff(&conj) == 0.0);
    }

    #[test]
    fn standard_s_matches_reflection_formula() {
        // sφ(θ) = conj φ(θ + iπ) for the standard wedge in 1+1 mode
        let g = grid();
        let f = AnalyticFamily::gaussian(0.3, 1.1).with_amplitude(C64::new(0.2, 1.0));
        let v = AnalyticVector::from_family(f.clone(), g.clone());
        let s = v.s_op(&PoincareElement::IDENTITY, Sign::Plus).unwrap();
        for j in (0..g.n_theta).step_by(97) {
            let want = f.eval(C64::new(g.theta(j), PI), [0.0, 0.0]).conj();
            let got = s.eval_at(j, 0, C64::new(0.0, 0.0));
            assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn three_plus_one_identities() {
        let g = Arc::new(MassShellGrid::with_square_transverse(1.0, 257, 12.0, 5, 1.5).unwrap());
        let v = AnalyticVector::from_family(AnalyticFamily::gaussian(0.2, 1.0).with_transverse_width(0.8).with_amplitude(C64::new(1.0, 0.5)), g.clone());
        let frame = PoincareElement::new(FourVector::new(0.1, 0.3, -0.2, 0.5), rotation_x_pi().compose(&rotation_z(0.5)));
        let s = v.s_op(&frame, Sign::Plus).unwrap();
        let ss = s.s_op(&frame, Sign::Plus).unwrap();
        assert!(rel(&ss.sample(), &v.sample()) < 1e-10);
        let jj = v.wedge_involution(&frame).unwrap().wedge_involution(&frame).unwrap();
        assert!(rel(&jj.sample(), &v.sample()) < 1e-12);
    }
}
