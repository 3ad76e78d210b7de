use modloc_core::flap::*;
use modloc_core::regions::*;
use modloc_core::C64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn atoms_distribution(xs: &[(f64, f64, f64)]) -> SampledDistribution {
    let lo = xs.iter().fold(f64::INFINITY, |m, a| m.min(a.0));
    let hi = xs.iter().fold(f64::NEG_INFINITY, |m, a| m.max(a.0));
    SampledDistribution {
        dim: 1,
        atoms: xs.iter().map(|&(x, re, im)| Atom { x: vec![x], w: c(re, im), deriv: vec![0] }).collect(),
        cells: Vec::new(),
        order: 0,
        hull: PolyRegion::boxed(&[lo], &[hi]),
    }
}

fn grid1(directions: Vec<Vec<f64>>) -> TubeGrid {
    TubeGrid { dim: 1, xi_max: 10.0, n_xi: 41, directions, r_min: 0.5, r_max: 50.0, n_r: 12, norm: NormKind::Max }
}

#[test]
fn epstein_inverse_passes_and_chirp_fails() {
    let cone = Cone::orthant(1, true);
    let g = TubeGrid { dim: 1, xi_max: 20.0, n_xi: 81, directions: vec![vec![1.0]], r_min: 0.5, r_max: 2.0, n_r: 0, norm: NormKind::Max };
    let inverse = |z: &[C64]| 1.0 / (z[0] + c(0.0, 0.5));
    assert!(epstein_bound_check(&inverse, &cone, &g, None).unwrap().pass);
    let probe = epstein_cauchy_probe(&inverse, &[1.0], 1.0, 8, &[TestFunction::Gaussian, TestFunction::Sech]).unwrap();
    assert!(probe.pass);
    let chirp = |z: &[C64]| (c(0.0, 1.0) * z[0] * z[0]).exp();
    let r = epstein_bound_check(&chirp, &cone, &g, Some(0.0)).unwrap();
    assert!(!r.pass, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_is_linear(
        a in proptest::collection::vec((-2.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0), 1..5),
        b in proptest::collection::vec((-2.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0), 1..5),
        lam in (-2.0f64..2.0, -2.0f64..2.0), zr in -5.0f64..5.0, zi in -2.0f64..2.0,
    ) {
        let lam = c(lam.0, lam.1);
        let mut combined: Vec<(f64, f64, f64)> = a.clone();
        combined.extend(b.iter().map(|&(x, re, im)| { let w = lam * c(re, im); (x, w.re, w.im) }));
        let z = [c(zr, zi)];
        let lhs = fl_transform(&atoms_distribution(&combined), &z).unwrap();
        let rhs = fl_transform(&atoms_distribution(&a), &z).unwrap() + lam * fl_transform(&atoms_distribution(&b), &z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn real_distributions_are_conjugation_symmetric(
        lo in -3.0f64..0.0, w in 0.1f64..3.0, x in -3.0f64..3.0, zr in -5.0f64..5.0, zi in -2.0f64..2.0,
    ) {
        let mut u = SampledDistribution::indicator(&[lo], &[lo + w], PolyRegion::boxed(&[lo.min(x)], &[(lo + w).max(x)]));
        u.atoms.push(Atom { x: vec![x], w: c(0.7, 0.0), deriv: vec![0] });
        u.validate().unwrap();
        let z = c(zr, zi);
        let v = fl_transform(&u, &[z]).unwrap();
        let m = fl_transform(&u, &[-z.conj()]).unwrap();
        prop_assert!((m - v.conj()).norm() <= 1e-12 * (1.0 + v.norm()));
    }

    #[test]
    fn translation_multiplies_by_a_phase(x in -3.0f64..3.0, a in -2.0f64..2.0, zr in -5.0f64..5.0, zi in -2.0f64..2.0) {
        let z = [c(zr, zi)];
        let u = SampledDistribution::point_mass(&[x]);
        let ua = SampledDistribution::point_mass(&[x + a]);
        let want = (c(0.0, -a) * z[0]).exp() * fl_transform(&u, &z).unwrap();
        prop_assert!((fl_transform(&ua, &z).unwrap() - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn point_mass_bound_constant_is_one(x in -3.0f64..3.0) {
        let r = pws_check(&SampledDistribution::point_mass(&[x]), &grid1(vec![vec![1.0], vec![-1.0]])).unwrap();
        prop_assert!(r.pass);
        prop_assert!((r.c - 1.0).abs() <= 1e-12, "{}", r.c);
    }

    #[test]
    fn indicator_passes_with_its_hull(lo in -3.0f64..1.0, w in 0.2f64..3.0) {
        let u = SampledDistribution::indicator(&[lo], &[lo + w], PolyRegion::boxed(&[lo], &[lo + w]));
        let r = pws_check(&u, &grid1(vec![vec![1.0], vec![-1.0]])).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn support_is_recovered_from_growth(lo in -3.0f64..1.0, w in 0.2f64..3.0) {
        let hi = lo + w;
        let u = SampledDistribution::indicator(&[lo], &[hi], PolyRegion::boxed(&[lo], &[hi]));
        let f = |z: &[C64]| fl_transform(&u, z).unwrap();
        let est = support_from_growth(&f, &[vec![1.0], vec![-1.0]], &geometric(2.0, 50.0, 24)).unwrap();
        prop_assert!((est.values[0] - hi).abs() <= 0.01 * hi.abs().max(1.0), "{:?}", est.values);
        prop_assert!((est.values[1] + lo).abs() <= 0.01 * lo.abs().max(1.0), "{:?}", est.values);
    }

    #[test]
    fn cauchy_error_halves_with_doubled_sampling(tr in -3.0f64..3.0, ti in 0.2f64..1.8, shift in 0.5f64..3.0) {
        let f = |z: &[C64]| 1.0 / (z[0] + c(0.0, shift));
        let target = [c(tr, ti)];
        let exact = f(&target);
        let errs: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&n| (cauchy_quadrature(&f, &[0.0], &[2.0], &target, n).unwrap() - exact).norm())
            .collect();
        for w in errs.windows(2) {
            prop_assert!(w[1] <= 0.5 * w[0] || w[1] <= 1e-12, "{:?}", errs);
        }
        let est = cauchy_tube_reconstruct(&f, &[0.0], &[2.0], &target, 1024).unwrap();
        prop_assert!((est.value - exact).norm() <= 1e-4);
    }
}
