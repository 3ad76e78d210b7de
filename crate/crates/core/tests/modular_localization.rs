use std::f64::consts::PI;
use std::sync::Arc;

use modloc_core::analytic::*;
use modloc_core::geometry::*;
use modloc_core::localization::*;
use modloc_core::modular::*;
use modloc_core::shell::*;
use modloc_core::C64;
use proptest::prelude::*;

fn grid() -> Arc<MassShellGrid> {
    Arc::new(MassShellGrid::default_1p1(1.0).unwrap())
}

fn frame(a3: f64, a0: f64, t: f64, r: f64, flip: bool) -> PoincareElement {
    let l = rotation_z(r).compose(&boost3(t));
    let l = if flip { rotation_x_pi().compose(&l) } else { l };
    PoincareElement::new(FourVector::new(a0, 0.0, 0.0, a3), l)
}

fn sign(plus: bool) -> Sign {
    if plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn unit(w: WaveFunction) -> WaveFunction {
    let n = w.norm();
    w.scale(C64::new(1.0 / n, 0.0))
}

#[test]
fn spectral_backend_rejects_white_noise() {
    let g = grid();
    let mut w = WaveFunction::zeros(g.clone());
    let mut state = 0x2545_f491_4f6c_dd1du64;
    for s in w.samples.iter_mut() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        *s = C64::new((state % 1000) as f64 / 500.0 - 1.0, 0.0);
    }
    let r = delta_half(&PoincareElement::IDENTITY, Sign::Plus, Source::Sampled(&w), Backend::Spectral);
    assert!(matches!(r, Err(modloc_core::Error::NotInDomain { .. })), "{r:?}");
}

#[test]
fn slab_localization_keeps_real_combinations() {
    let g = grid();
    let fam = WedgeFamily::slab(4.0).unwrap();
    let x = localize(&fam, Sign::Plus, &unit(AnalyticFamily::gaussian(0.0, 1.0).sample(g.clone())), 1e-6, 200, LocalizeMethod::ConjugateGradient).unwrap();
    let y = localize(&fam, Sign::Plus, &unit(AnalyticFamily::gaussian(0.3, 1.1).sample(g.clone())), 1e-6, 200, LocalizeMethod::ConjugateGradient).unwrap();
    assert!(x.converged && y.converged);
    for (l, m) in [(0.5, 0.5), (-0.6, 0.4), (1.0, 0.0), (-0.2, -0.7)] {
        let c = x.projected.scale(C64::new(l, 0.0)).add(&y.projected.scale(C64::new(m, 0.0))).unwrap();
        assert!(membership_test(&fam, Sign::Plus, &c, 1e-6).unwrap().member);
    }
    assert!(!membership_test(&fam, Sign::Plus, &x.projected.scale(C64::new(0.0, 1.0)), 1e-6).unwrap().member);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tomita_relations_in_random_frames(
        a3 in -2.0f64..2.0, a0 in -1.0f64..1.0, t in -1.0f64..1.0, r in -PI..PI, flip: bool, plus: bool,
    ) {
        let g = grid();
        let battery = gaussian_battery(g);
        let rep = tomita_check(&frame(a3, a0, t, r, flip), sign(plus), &battery).unwrap();
        for rel in [REL_J_SQUARED, REL_S_SQUARED, REL_CONJUGATION, REL_FLOW] {
            let v = rep.residual(rel).unwrap();
            prop_assert!(v <= 1e-8, "{} = {}", rel, v);
        }
        prop_assert!(rep.residual(REL_BACKENDS).unwrap() <= 1e-6);
    }

    #[test]
    fn s_is_an_antilinear_involution(
        a3 in -2.0f64..2.0, flip: bool, c in -0.8f64..0.8, w in 1.0f64..1.4, re in -1.0f64..1.0, im in -1.0f64..1.0,
    ) {
        let g = grid();
        let l = frame(a3, 0.0, 0.0, 0.0, flip);
        let v = AnalyticVector::from_family(AnalyticFamily::gaussian(c, w).with_amplitude(C64::new(re, im)), g);
        let vs = v.sample();
        let twice = v.s_op(&l, Sign::Plus).unwrap().s_op(&l, Sign::Plus).unwrap().sample();
        prop_assert!(twice.distance(&vs).unwrap() <= 1e-8 * (1e-300 + vs.norm()));
        // s(i v) = -i s(v)
        let lhs = v.scale(C64::new(0.0, 1.0)).s_op(&l, Sign::Plus).unwrap().sample();
        let rhs = v.s_op(&l, Sign::Plus).unwrap().scale(C64::new(0.0, -1.0)).sample();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-10 * (1e-300 + rhs.norm()));
    }

    #[test]
    fn real_projection_is_idempotent_and_lands_in_the_subspace(
        a3 in -2.0f64..2.0, a0 in -1.0f64..1.0, k in -8i32..8, flip: bool, c in -0.8f64..0.8, plus: bool,
    ) {
        let g = grid();
        let phi = unit(AnalyticFamily::gaussian(c, 1.1).with_amplitude(C64::new(0.6, 0.8)).sample(g.clone()));
        // translations and the flip act without resampling
        let l = frame(a3, a0, 0.0, 0.0, flip);
        let p = real_orthogonal_projection(&l, sign(plus), &phi).unwrap();
        let pp = real_orthogonal_projection(&l, sign(plus), &p).unwrap();
        prop_assert!(pp.distance(&p).unwrap() <= 1e-10);
        prop_assert!(distance_to_real_subspace(&l, sign(plus), &p).unwrap() <= 1e-10);
        prop_assert!(p.norm() <= 1.0 + 1e-12);
        // a boost by whole grid steps drops the tail past the rapidity cutoff
        let lb = frame(a3, a0, k as f64 * g.dtheta, 0.0, flip);
        let pb = real_orthogonal_projection(&lb, sign(plus), &phi).unwrap();
        prop_assert!(distance_to_real_subspace(&lb, sign(plus), &pb).unwrap() <= 1e-4);
    }

    #[test]
    fn members_satisfy_the_boundary_condition(
        a3 in -1.5f64..1.5, flip: bool, c in -0.7f64..0.7, w in 1.0f64..1.3, plus: bool,
    ) {
        let g = grid();
        let l = frame(a3, 0.0, 0.0, 0.0, flip);
        let v = AnalyticVector::from_family(AnalyticFamily::gaussian(c, w), g.clone());
        let psi = v.add(&v.s_op(&l, sign(plus)).unwrap()).unwrap();
        let pts: Vec<(usize, usize)> = (0..g.n_theta).step_by(5).map(|j| (j, 0)).collect();
        let ok = boundary_condition_check(Source::Analytic(&psi), l.a, &l.lambda, sign(plus), &pts).unwrap();
        prop_assert!(ok.max_residual <= 1e-6, "{}", ok.max_residual);
        let ipsi = psi.scale(C64::new(0.0, 1.0));
        let bad = boundary_condition_check(Source::Analytic(&ipsi), l.a, &l.lambda, sign(plus), &pts).unwrap();
        prop_assert!(bad.max_residual > 1e-2);
    }
}
