use std::f64::consts::PI;

use modloc_core::geometry::*;
use modloc_core::regions::*;
use modloc_core::C64;
use proptest::prelude::*;

fn lorentz(t: f64, r: f64, flip: bool) -> LorentzTransform {
    let l = rotation_z(r).compose(&boost3(t));
    if flip {
        rotation_x_pi().compose(&l)
    } else {
        l
    }
}

#[test]
fn minus_upsilon_at_i_pi() {
    let b = boost3_complex(C64::new(0.0, PI));
    let minus_upsilon = LorentzTransform::diag([-1.0, 1.0, 1.0, -1.0]).complexify();
    assert!(b.inverse().max_abs_diff(&minus_upsilon) < 1e-12);
    // and the conjugated version in a flipped, boosted frame
    let frame = lorentz(0.4, 0.0, true);
    let c = conjugated_boost_complex(&frame, C64::new(0.0, PI));
    let want = frame.complexify().compose(&minus_upsilon).compose(&frame.inverse().complexify());
    assert!(c.max_abs_diff(&want) < 1e-12);
}

#[test]
fn standard_wedge_membership() {
    let w = standard_wedge();
    assert!(w.contains(FourVector::new(0.0, 3.0, -1.0, 1.0)));
    assert!(w.contains(FourVector::new(0.5, 0.0, 0.0, 1.0)));
    assert!(!w.contains(FourVector::new(1.0, 0.0, 0.0, 0.5)));
    assert!(!w.contains(FourVector::new(0.0, 0.0, 0.0, -1.0)));
}

#[test]
fn slab_intersection_support() {
    let right = Wedge::from_frame(PoincareElement::translation(FourVector::new(0.0, 0.0, 0.0, -1.0)));
    let left = Wedge::from_frame(PoincareElement::new(FourVector::new(0.0, 0.0, 0.0, 1.0), rotation_x_pi()));
    let k = intersect_regions(&[right.region.clone(), left.region.clone()]).unwrap();
    assert!((support_function(&k, &[0.0, 0.0, 0.0, 1.0]).unwrap() - 1.0).abs() < 1e-9);
    assert!((support_function(&k, &[1.0, 0.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(support_function(&k, &[0.0, 1.0, 0.0, 0.0]).unwrap(), f64::INFINITY);
}

proptest! {
    #[test]
    fn composite_transforms_preserve_metric(t in -4.0f64..4.0, r in -PI..PI, flip: bool) {
        prop_assert!(lorentz(t, r, flip).metric_defect() <= 1e-12);
    }

    #[test]
    fn complex_boost_group_law(a in -2.0f64..2.0, b in -1.5f64..1.5, c in -2.0f64..2.0, d in -1.5f64..1.5) {
        let lhs = boost3_complex(C64::new(a, b)).compose(&boost3_complex(C64::new(c, d)));
        prop_assert!(lhs.max_abs_diff(&boost3_complex(C64::new(a + c, b + d))) <= 1e-12 * (1.0 + (a + c).abs().exp()));
    }

    #[test]
    fn minkowski_pairing_is_invariant(
        x in proptest::array::uniform4(-3.0f64..3.0),
        y in proptest::array::uniform4(-3.0f64..3.0),
        t in -3.0f64..3.0, r in -PI..PI, flip: bool,
    ) {
        let l = lorentz(t, r, flip);
        let (x, y) = (FourVector(x), FourVector(y));
        let before = minkowski_inner(x, y);
        let after = minkowski_inner(l.apply(x), l.apply(y));
        prop_assert!((before - after).abs() <= 1e-10 * (1.0 + (3.0 * t.abs()).exp()));
    }

    #[test]
    fn transformed_wedge_contains_transformed_points(
        x in proptest::array::uniform4(-3.0f64..3.0),
        a in proptest::array::uniform4(-2.0f64..2.0),
        t in -1.0f64..1.0, flip: bool,
    ) {
        let l = PoincareElement::new(FourVector(a), lorentz(t, 0.0, flip));
        let w = Wedge::from_frame(l);
        let x = FourVector(x);
        // skip points within rounding distance of the wedge boundary
        prop_assume!((x.0[3] - x.0[0].abs()).abs() > 1e-6);
        prop_assert_eq!(standard_wedge().contains(x), w.contains(l.apply(x)));
    }

    #[test]
    fn support_function_of_box_is_sum_of_extremes(xi in proptest::array::uniform4(-2.0f64..2.0)) {
        let b = PolyRegion::boxed(&[-1.0, -2.0, 0.0, -0.5], &[1.0, 1.0, 3.0, 0.5]);
        let lo = [-1.0, -2.0, 0.0, -0.5];
        let hi = [1.0, 1.0, 3.0, 0.5];
        let want: f64 = (0..4).map(|i| (xi[i] * lo[i]).max(xi[i] * hi[i])).sum();
        prop_assert!((support_function(&b, &xi).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn support_function_translates(xi in proptest::array::uniform4(-2.0f64..2.0), a in proptest::array::uniform4(-2.0f64..2.0)) {
        let b = PolyRegion::boxed(&[-1.0; 4], &[1.0; 4]);
        let moved = transform_region(&PoincareElement::translation(FourVector(a)), &b);
        let shift: f64 = (0..4).map(|i| xi[i] * a[i]).sum();
        let lhs = support_function(&moved, &xi).unwrap();
        let rhs = support_function(&b, &xi).unwrap() + shift;
        prop_assert!((lhs - rhs).abs() < 1e-8);
    }
}
