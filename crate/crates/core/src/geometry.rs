//! Minkowski four-vectors, real and complex Lorentz matrices, and Poincaré
//! elements `L = (a, Λ)` acting as `x ↦ Λx + a`.

use core::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::ComplexFloat;

use crate::C64;

/// Tolerance for metric-invariance validation of Lorentz matrices.
pub const LORENTZ_TOL: f64 = 1e-12;

const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Real contravariant four-vector `(x⁰, x¹, x², x³)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([x0, x1, x2, x3])
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0
    }

    /// Lowers the index: `g x`.
    pub fn lowered(self) -> FourVector {
        FourVector(core::array::from_fn(|i| METRIC[i] * self.0[i]))
    }

    pub fn euclidean_dot(self, other: FourVector) -> f64 {
        (0..4).map(|i| self.0[i] * other.0[i]).sum()
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn complexify(self) -> ComplexFourVector {
        ComplexFourVector(self.0.map(|x| C64::new(x, 0.0)))
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(core::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(core::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|x| -x))
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector(self.0.map(|x| x * s))
    }
}

/// Complex four-vector `ζ = ξ + iη`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexFourVector(pub [C64; 4]);

impl ComplexFourVector {
    pub fn from_parts(re: FourVector, im: FourVector) -> Self {
        ComplexFourVector(core::array::from_fn(|i| C64::new(re.0[i], im.0[i])))
    }

    /// `ξ = Re ζ`.
    pub fn re(&self) -> FourVector {
        FourVector(self.0.map(|z| z.re))
    }

    /// `η = Im ζ`.
    pub fn im(&self) -> FourVector {
        FourVector(self.0.map(|z| z.im))
    }

    pub fn conj(&self) -> Self {
        ComplexFourVector(self.0.map(|z| z.conj()))
    }

    /// `max_j |ζ_j|`.
    pub fn max_modulus(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.abs()))
    }

    pub fn euclidean_modulus(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Neg for ComplexFourVector {
    type Output = ComplexFourVector;
    fn neg(self) -> Self {
        ComplexFourVector(self.0.map(|z| -z))
    }
}

/// `x⁰y⁰ - x¹y¹ - x²y² - x³y³`.
pub fn minkowski_inner(x: FourVector, y: FourVector) -> f64 {
    (0..4).map(|i| METRIC[i] * x.0[i] * y.0[i]).sum()
}

/// Bilinear (not sesquilinear) Minkowski pairing of complex vectors.
pub fn minkowski_inner_complex(x: &ComplexFourVector, y: &ComplexFourVector) -> C64 {
    (0..4).map(|i| x.0[i] * y.0[i] * METRIC[i]).sum()
}

/// Bilinear pairing of a complex vector with a real one.
pub fn minkowski_inner_mixed(z: &ComplexFourVector, a: FourVector) -> C64 {
    (0..4).map(|i| z.0[i] * (METRIC[i] * a.0[i])).sum()
}

type Mat<T> = [[T; 4]; 4];

fn mat_mul<T: Copy + Default + Add<Output = T> + Mul<Output = T>>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let mut out = [[T::default(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = T::default();
            for k in 0..4 {
                acc = acc + a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// `g Λᵀ g`, the inverse of any (real or complex) Lorentz matrix.
fn metric_transpose<T: Copy + Mul<f64, Output = T>>(m: &Mat<T>) -> Mat<T> {
    core::array::from_fn(|i| core::array::from_fn(|j| m[j][i] * (METRIC[i] * METRIC[j])))
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    // Laplace expansion along the first row via 3x3 minors
    let minor = |c: usize| -> f64 {
        let cols: [usize; 3] = match c {
            0 => [1, 2, 3],
            1 => [0, 2, 3],
            2 => [0, 1, 3],
            _ => [0, 1, 2],
        };
        let a = |r: usize, k: usize| m[r][cols[k]];
        a(1, 0) * (a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1)) - a(1, 1) * (a(2, 0) * a(3, 2) - a(2, 2) * a(3, 0))
            + a(1, 2) * (a(2, 0) * a(3, 1) - a(2, 1) * a(3, 0))
    };
    (0..4)
        .map(|c| {
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][c] * minor(c)
        })
        .sum()
}

/// Real 4×4 matrix acting on contravariant components. Construction does not
/// enforce the Lorentz condition; use [`LorentzTransform::is_lorentz`] and
/// [`LorentzTransform::is_proper_orthochronous`] to validate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTransform {
    pub m: [[f64; 4]; 4],
}

impl LorentzTransform {
    pub const IDENTITY: LorentzTransform = LorentzTransform {
        m: [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
    };

    pub fn from_rows(m: [[f64; 4]; 4]) -> Self {
        LorentzTransform { m }
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        LorentzTransform { m }
    }

    pub fn apply(&self, x: FourVector) -> FourVector {
        FourVector(core::array::from_fn(|i| (0..4).map(|j| self.m[i][j] * x.0[j]).sum()))
    }

    pub fn compose(&self, rhs: &LorentzTransform) -> LorentzTransform {
        LorentzTransform { m: mat_mul(&self.m, &rhs.m) }
    }

    /// Inverse computed as `g Λᵀ g`; valid for Lorentz matrices only.
    pub fn inverse(&self) -> LorentzTransform {
        LorentzTransform { m: metric_transpose(&self.m) }
    }

    pub fn transpose(&self) -> LorentzTransform {
        LorentzTransform { m: core::array::from_fn(|i| core::array::from_fn(|j| self.m[j][i])) }
    }

    pub fn det(&self) -> f64 {
        det4(&self.m)
    }

    /// Largest entry of `|ΛᵀgΛ - g|`, each entry scaled by
    /// `max(1, Σ_k |Λᵏᵢ Λᵏⱼ|)` so that large rapidities are judged by the
    /// rounding of the products rather than their magnitude.
    pub fn metric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let v: f64 = (0..4).map(|k| self.m[k][i] * METRIC[k] * self.m[k][j]).sum();
                let scale: f64 = (0..4).map(|k| (self.m[k][i] * self.m[k][j]).abs()).sum();
                let g = if i == j { METRIC[i] } else { 0.0 };
                worst = worst.max((v - g).abs() / scale.max(1.0));
            }
        }
        worst
    }

    pub fn is_lorentz(&self) -> bool {
        self.metric_defect() <= LORENTZ_TOL
    }

    /// `det Λ = +1` and `Λ⁰₀ ≥ 1`.
    pub fn is_proper_orthochronous(&self) -> bool {
        self.is_lorentz() && (self.det() - 1.0).abs() <= 1e-9 && self.m[0][0] >= 1.0 - 1e-12
    }

    pub fn complexify(&self) -> ComplexLorentzTransform {
        ComplexLorentzTransform { m: self.m.map(|row| row.map(|x| C64::new(x, 0.0))) }
    }

    pub fn max_abs_diff(&self, other: &LorentzTransform) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

/// Complex 4×4 matrix, e.g. the continued boost `Λ(τ)`, `τ ∈ ℂ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexLorentzTransform {
    pub m: [[C64; 4]; 4],
}

impl ComplexLorentzTransform {
    pub fn apply(&self, z: &ComplexFourVector) -> ComplexFourVector {
        ComplexFourVector(core::array::from_fn(|i| (0..4).map(|j| self.m[i][j] * z.0[j]).sum()))
    }

    pub fn compose(&self, rhs: &ComplexLorentzTransform) -> ComplexLorentzTransform {
        ComplexLorentzTransform { m: mat_mul(&self.m, &rhs.m) }
    }

    pub fn inverse(&self) -> ComplexLorentzTransform {
        ComplexLorentzTransform { m: metric_transpose(&self.m) }
    }

    pub fn conj(&self) -> ComplexLorentzTransform {
        ComplexLorentzTransform { m: self.m.map(|row| row.map(|z| z.conj())) }
    }

    /// Complex analogue of [`LorentzTransform::metric_defect`].
    pub fn metric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let v: C64 = (0..4).map(|k| self.m[k][i] * METRIC[k] * self.m[k][j]).sum();
                let scale: f64 = (0..4).map(|k| (self.m[k][i] * self.m[k][j]).abs()).sum();
                let g = if i == j { METRIC[i] } else { 0.0 };
                worst = worst.max((v - g).abs() / scale.max(1.0));
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &ComplexLorentzTransform) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

/// Active x³-boost with `Λ⁰₀ = Λ³₃ = cosh t` and `Λ⁰₃ = Λ³₀ = -sinh t`.
pub fn boost3(t: f64) -> LorentzTransform {
    let (c, s) = (t.cosh(), t.sinh());
    LorentzTransform::from_rows([[c, 0.0, 0.0, -s], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [-s, 0.0, 0.0, c]])
}

/// The same matrix pattern at complex rapidity.
pub fn boost3_complex(tau: C64) -> ComplexLorentzTransform {
    let (c, s) = (tau.cosh(), tau.sinh());
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    ComplexLorentzTransform {
        m: [[c, zero, zero, -s], [zero, one, zero, zero], [zero, zero, one, zero], [-s, zero, zero, c]],
    }
}

/// Rotation by `alpha` about the x³ axis.
pub fn rotation_z(alpha: f64) -> LorentzTransform {
    let (c, s) = (alpha.cos(), alpha.sin());
    LorentzTransform::from_rows([[1.0, 0.0, 0.0, 0.0], [0.0, c, -s, 0.0], [0.0, s, c, 0.0], [0.0, 0.0, 0.0, 1.0]])
}

/// `Υ = diag(1, -1, -1, 1)`, rotation by π about the x³ axis.
pub fn rotation_z_pi() -> LorentzTransform {
    LorentzTransform::diag([1.0, -1.0, -1.0, 1.0])
}

/// Rotation by π about the x¹ axis, `diag(1, 1, -1, -1)`. It maps the
/// standard wedge onto the opposite wedge `x³ < -|x⁰|` and conjugates
/// `Λ(t)` into `Λ(-t)`.
pub fn rotation_x_pi() -> LorentzTransform {
    LorentzTransform::diag([1.0, 1.0, -1.0, -1.0])
}

/// Poincaré element `(a, Λ)`: first `Λ`, then the translation by `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareElement {
    pub a: FourVector,
    pub lambda: LorentzTransform,
}

impl PoincareElement {
    pub const IDENTITY: PoincareElement = PoincareElement { a: FourVector::ZERO, lambda: LorentzTransform::IDENTITY };

    pub fn new(a: FourVector, lambda: LorentzTransform) -> Self {
        PoincareElement { a, lambda }
    }

    pub fn translation(a: FourVector) -> Self {
        PoincareElement { a, lambda: LorentzTransform::IDENTITY }
    }

    pub fn homogeneous(lambda: LorentzTransform) -> Self {
        PoincareElement { a: FourVector::ZERO, lambda }
    }

    pub fn apply(&self, x: FourVector) -> FourVector {
        self.lambda.apply(x) + self.a
    }

    /// `(a₁,Λ₁)∘(a₂,Λ₂) = (a₁ + Λ₁a₂, Λ₁Λ₂)`.
    pub fn compose(&self, rhs: &PoincareElement) -> PoincareElement {
        PoincareElement { a: self.a + self.lambda.apply(rhs.a), lambda: self.lambda.compose(&rhs.lambda) }
    }

    pub fn inverse(&self) -> PoincareElement {
        let inv = self.lambda.inverse();
        PoincareElement { a: -inv.apply(self.a), lambda: inv }
    }

    pub fn max_abs_diff(&self, other: &PoincareElement) -> f64 {
        (self.a - other.a).max_abs().max(self.lambda.max_abs_diff(&other.lambda))
    }
}

pub fn poincare_compose(l1: &PoincareElement, l2: &PoincareElement) -> PoincareElement {
    l1.compose(l2)
}

pub fn poincare_apply(l: &PoincareElement, x: FourVector) -> FourVector {
    l.apply(x)
}

/// Boost subgroup of the wedge `W_L`: `((1 - IΛ(t)I⁻¹)a, IΛ(t)I⁻¹)` for
/// `L = (a, I)`. It fixes the edge of `W_L` pointwise.
pub fn conjugated_boost(l: &PoincareElement, t: f64) -> PoincareElement {
    let inner = l.lambda.compose(&boost3(t)).compose(&l.lambda.inverse());
    let shift = l.a - inner.apply(l.a);
    PoincareElement { a: shift, lambda: inner }
}

/// `IΛ(τ)I⁻¹` for complex `τ`.
pub fn conjugated_boost_complex(frame: &LorentzTransform, tau: C64) -> ComplexLorentzTransform {
    let i = frame.complexify();
    i.compose(&boost3_complex(tau)).compose(&frame.inverse().complexify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn minkowski_examples() {
        assert_eq!(minkowski_inner(FourVector::new(1., 0., 0., 0.), FourVector::new(1., 0., 0., 0.)), 1.0);
        assert_eq!(minkowski_inner(FourVector::new(1., 0., 0., 1.), FourVector::new(1., 0., 0., 1.)), 0.0);
        assert_eq!(minkowski_inner(FourVector::new(2., 1., 1., 1.), FourVector::new(1., 1., 0., 0.)), 1.0);
    }

    #[test]
    fn boost_entries_and_identity() {
        assert_eq!(boost3(0.0), LorentzTransform::IDENTITY);
        let t = 0.83;
        let b = boost3(t);
        assert_eq!(b.m[0][0], t.cosh());
        assert_eq!(b.m[0][3], -t.sinh());
        assert_eq!(b.m[3][0], -t.sinh());
        assert_eq!(b.m[3][3], t.cosh());
        assert!(b.is_proper_orthochronous());
    }

    #[test]
    fn complex_boost_at_i_pi_is_minus_upsilon() {
        let b = boost3_complex(C64::new(0.0, PI));
        let minus_upsilon = LorentzTransform::diag([-1.0, 1.0, 1.0, -1.0]).complexify();
        assert!(b.max_abs_diff(&minus_upsilon) < 1e-12);
        assert!(b.inverse().max_abs_diff(&minus_upsilon) < 1e-12);
        let neg = rotation_z_pi().complexify();
        let neg = ComplexLorentzTransform { m: neg.m.map(|r| r.map(|z| -z)) };
        assert!(b.max_abs_diff(&neg) < 1e-12);
    }

    #[test]
    fn complex_boost_half_pi() {
        let b = boost3_complex(C64::new(0.0, PI / 2.0));
        assert!(b.m[0][0].abs() < 1e-15 && b.m[3][3].abs() < 1e-15);
        assert!((b.m[0][3] - C64::new(0.0, -1.0)).abs() < 1e-15);
        assert!((b.m[3][0] - C64::new(0.0, -1.0)).abs() < 1e-15);
        assert!(b.metric_defect() < 1e-12);
    }

    #[test]
    fn complex_boost_restricts_to_real_boost() {
        for &t in &[-2.0, -0.1, 0.0, 0.7, 3.3] {
            assert!(boost3_complex(C64::new(t, 0.0)).max_abs_diff(&boost3(t).complexify()) < 1e-15);
        }
    }

    #[test]
    fn upsilon_properties() {
        let u = rotation_z_pi();
        assert_eq!(u.compose(&u), LorentzTransform::IDENTITY);
        assert_eq!(u.apply(FourVector::new(1., 2., 3., 4.)), FourVector::new(1., -2., -3., 4.));
        assert_eq!(u.det(), 1.0);
        assert!(u.is_proper_orthochronous());
        assert!(rotation_x_pi().is_proper_orthochronous());
        // -Υ is a Lorentz matrix but not orthochronous
        let minus = LorentzTransform::diag([-1.0, 1.0, 1.0, -1.0]);
        assert!(minus.is_lorentz() && !minus.is_proper_orthochronous());
    }

    #[test]
    fn compose_examples() {
        let a = FourVector::new(1., 2., 3., 4.);
        let b = FourVector::new(-1., 0.5, 0., 2.);
        let ab = PoincareElement::translation(a).compose(&PoincareElement::translation(b));
        assert_eq!(ab, PoincareElement::translation(a + b));

        let l = boost3(0.4).compose(&rotation_z(1.1));
        let id = PoincareElement::homogeneous(l).compose(&PoincareElement::homogeneous(l.inverse()));
        assert!(id.max_abs_diff(&PoincareElement::IDENTITY) < 1e-14);

        let u = PoincareElement::new(a, rotation_z_pi());
        let uu = u.compose(&u);
        assert_eq!(uu.a, a + rotation_z_pi().apply(a));
        assert_eq!(uu.a, FourVector::new(2., 0., 0., 8.));
        assert_eq!(uu.lambda, LorentzTransform::IDENTITY);
    }

    #[test]
    fn conjugated_boost_examples() {
        let cb = conjugated_boost(&PoincareElement::IDENTITY, 0.9);
        assert!(cb.max_abs_diff(&PoincareElement::homogeneous(boost3(0.9))) < 1e-15);

        let l = PoincareElement::new(FourVector::new(0.3, -1.0, 2.0, 0.5), rotation_z(0.7).compose(&boost3(0.2)));
        assert!(conjugated_boost(&l, 0.0).max_abs_diff(&PoincareElement::IDENTITY) < 1e-14);

        let lhs = conjugated_boost(&l, 0.3).compose(&conjugated_boost(&l, 0.7));
        assert!(lhs.max_abs_diff(&conjugated_boost(&l, 1.0)) < 1e-12);

        // the transformed edge {x⁰ = x³ = 0} + a is fixed pointwise
        let edge = l.apply(FourVector::new(0.0, 1.5, -0.5, 0.0));
        let moved = conjugated_boost(&l, 1.7).apply(edge);
        assert!((moved - edge).max_abs() < 1e-12);
    }

    #[test]
    fn schwarz_reflection_of_complex_boost() {
        let tau = C64::new(0.4, 1.3);
        assert!(boost3_complex(tau.conj()).max_abs_diff(&boost3_complex(tau).conj()) < 1e-15);
    }

    proptest! {
        #[test]
        fn boosts_preserve_metric(t in -5.0f64..5.0) {
            prop_assert!(boost3(t).metric_defect() <= 1e-12);
        }

        #[test]
        fn boost_group_law(s in -3.0f64..3.0, t in -3.0f64..3.0) {
            let lhs = boost3(s).compose(&boost3(t));
            prop_assert!(lhs.max_abs_diff(&boost3(s + t)) <= 1e-12);
        }

        #[test]
        fn complex_boost_metric_invariance(re in -3.0f64..3.0, im in -PI..PI) {
            let b = boost3_complex(C64::new(re, im));
            prop_assert!(b.metric_defect() <= 1e-12);
        }

        #[test]
        fn compose_is_associative(
            a in proptest::array::uniform4(-3.0f64..3.0),
            b in proptest::array::uniform4(-3.0f64..3.0),
            c in proptest::array::uniform4(-3.0f64..3.0),
            t in proptest::array::uniform3(-1.5f64..1.5),
            r in proptest::array::uniform3(-3.0f64..3.0),
        ) {
            let l = |i: usize, v: [f64; 4]| PoincareElement::new(FourVector(v), boost3(t[i]).compose(&rotation_z(r[i])));
            let (l1, l2, l3) = (l(0, a), l(1, b), l(2, c));
            let lhs = l1.compose(&l2).compose(&l3);
            let rhs = l1.compose(&l2.compose(&l3));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            let x = FourVector::new(0.3, -1.2, 0.8, 2.0);
            let seq = l1.apply(l2.apply(l3.apply(x)));
            prop_assert!((lhs.apply(x) - seq).max_abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_close() {
        let l = PoincareElement::new(FourVector::new(1., 2., 3., 4.), boost3(0.5).compose(&rotation_x_pi()));
        assert!(l.compose(&l.inverse()).max_abs_diff(&PoincareElement::IDENTITY) < 1e-14);
        assert!(close(l.lambda.det(), 1.0, 1e-12));
    }
}
