use std::sync::Arc;

use modloc_core::geometry::*;
use modloc_core::shell::*;
use modloc_core::wigner::*;
use modloc_core::C64;
use proptest::prelude::*;

fn grid() -> Arc<MassShellGrid> {
    Arc::new(MassShellGrid::default_1p1(1.0).unwrap())
}

fn vector(g: &Arc<MassShellGrid>, c: f64, w: f64, amp: (f64, f64)) -> WaveFunction {
    AnalyticFamily::gaussian(c, w).with_amplitude(C64::new(amp.0, amp.1)).sample(g.clone())
}

fn on_grid(g: &MassShellGrid, k: i32, a: [f64; 4], flip: bool) -> PoincareElement {
    let l = boost3(k as f64 * g.dtheta);
    PoincareElement::new(FourVector(a), if flip { rotation_x_pi().compose(&l) } else { l })
}

#[test]
fn transverse_grid_rotation_by_quarter_turn_is_unitary() {
    let g = Arc::new(MassShellGrid::with_square_transverse(1.0, 128, 8.0, 5, 2.0).unwrap());
    let phi = AnalyticFamily::gaussian(0.3, 1.0).with_transverse_width(0.8).sample(g.clone());
    let out = apply_poincare(&PoincareElement::homogeneous(rotation_z(std::f64::consts::FRAC_PI_2)), &phi).unwrap();
    assert!((out.norm() - phi.norm()).abs() < 1e-12 * phi.norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitarity_on_grid(k in -20i32..20, a in proptest::array::uniform4(-2.0f64..2.0), flip: bool, c in -1.0f64..1.0) {
        let g = grid();
        let phi = vector(&g, c, 1.0, (1.0, 0.2));
        let psi = vector(&g, -c, 1.2, (0.3, -1.0));
        let l = on_grid(&g, k, a, flip);
        let (up, us) = (apply_poincare(&l, &phi).unwrap(), apply_poincare(&l, &psi).unwrap());
        let before = inner_product(&phi, &psi).unwrap().value;
        let after = inner_product(&up, &us).unwrap().value;
        prop_assert!((before - after).norm() <= 1e-10 * phi.norm() * psi.norm());
    }

    #[test]
    fn representation_law_on_grid(
        k1 in -10i32..10, k2 in -10i32..10,
        a1 in proptest::array::uniform4(-1.0f64..1.0), a2 in proptest::array::uniform4(-1.0f64..1.0),
        f1: bool, f2: bool,
    ) {
        let g = grid();
        let phi = vector(&g, 0.2, 1.0, (1.0, 0.5));
        let (l1, l2) = (on_grid(&g, k1, a1, f1), on_grid(&g, k2, a2, f2));
        let lhs = apply_poincare(&l1, &apply_poincare(&l2, &phi).unwrap()).unwrap();
        let rhs = apply_poincare(&l1.compose(&l2), &phi).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * phi.sup_norm());
    }

    #[test]
    fn translations_multiply_by_exact_phase(a in proptest::array::uniform4(-3.0f64..3.0)) {
        let g = grid();
        let phi = vector(&g, 0.0, 1.0, (1.0, 0.0));
        let out = apply_poincare(&PoincareElement::translation(FourVector(a)), &phi).unwrap();
        for j in (0..g.n_theta).step_by(7) {
            let p = shell_point(&g, j, 0).unwrap();
            let want = C64::from_polar(1.0, minkowski_inner(p, FourVector(a))) * phi.at(j, 0);
            prop_assert!((out.at(j, 0) - want).norm() <= 1e-10 * phi.sup_norm());
        }
    }

    #[test]
    fn pct_is_antiunitary(c in -1.0f64..1.0, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let g = grid();
        let phi = vector(&g, c, 1.0, (re, im));
        let psi = vector(&g, 0.5, 0.9, (0.4, 1.0));
        let lhs = inner_product(&apply_pct(&phi), &apply_pct(&psi)).unwrap().value;
        let rhs = inner_product(&phi, &psi).unwrap().value.conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}
