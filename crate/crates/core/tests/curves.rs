use std::f64::consts::{FRAC_PI_2, PI};

use kms_levels::curve::{eval_point, loop_points, loop_type, trace_curve, CurveMap};
use kms_levels::spectral::typed_spectrum;
use kms_levels::thresholds::{n_min, EigenType};
use kms_levels::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn min_dist(points: &[Complex64], z: Complex64) -> f64 {
    points.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
}

#[test]
fn borderline_n5_passes_through_cusps() {
    let curve = trace_curve(5, 5.0, EigenType::One, 2000).unwrap();
    for z in [c(0.0, 2.0), c(0.0, -2.0)] {
        assert!(min_dist(curve.points(), z) < 1e-2);
        assert!(curve.distance_to(z) < 1e-8, "{}", curve.distance_to(z));
    }
    let cusps = curve.cusps();
    assert_eq!(cusps.len(), 2);
    for cu in cusps {
        let s = eval_point(5, 5.0, EigenType::One, cu.u).unwrap();
        assert!((s.lambda - c(-5.0, 0.0)).norm() < 1e-3);
        assert!((s.lambda.norm() - 5.0).abs() < 1e-9);
    }
}

#[test]
fn borderline_n5_type2_cusps() {
    let cusps = trace_curve(5, 5.0, EigenType::Two, 2000).unwrap().cusps();
    assert_eq!(cusps.len(), 4);
    for cu in cusps {
        assert!((cu.rho.re.abs() - 1.247).abs() < 1e-3 && (cu.rho.im.abs() - 1.456).abs() < 1e-3, "{}", cu.rho);
        let spec = typed_spectrum(5, cu.rho).unwrap();
        let near = spec.type2.iter().filter(|l| (*l - c(-5.0, 0.0)).norm() < 1e-3).count();
        assert_eq!(near, 2, "{:?}", spec.type2);
    }
}

#[test]
fn cusp_counts() {
    assert_eq!(trace_curve(12, 12.0, EigenType::Two, 2000).unwrap().cusps().len(), 10);
    assert_eq!(trace_curve(8, 8.0, EigenType::Two, 2000).unwrap().cusps().len(), 6);
}

#[test]
fn loops_of_n11_match_borderline_cusps() {
    let cusps = trace_curve(11, 11.0, EigenType::Two, 2000).unwrap().cusps();
    let curve = trace_curve(11, 5.0, EigenType::Two, 2000).unwrap();
    let xs = curve.self_intersections();
    assert_eq!(xs.len(), cusps.len());
    // the on-axis pair is the loop-point pair
    let lp = loop_points(11, 5.0).unwrap();
    assert_eq!(lp.kind, EigenType::Two);
    for z in [lp.upper, lp.lower] {
        assert!(xs.iter().any(|x| (x.rho - z).norm() < 1e-9));
    }
}

#[test]
fn loop_type_by_residue() {
    assert_eq!(loop_type(5), EigenType::One);
    assert_eq!(loop_type(9), EigenType::One);
    assert_eq!(loop_type(3), EigenType::Two);
    assert_eq!(loop_type(11), EigenType::Two);
}

#[test]
fn jordan_examples() {
    assert!(trace_curve(5, 30.0, EigenType::One, 2000).unwrap().self_intersections().is_empty());
    let xs = trace_curve(5, 3.0, EigenType::One, 2000).unwrap().self_intersections();
    assert_eq!(xs.len(), 2);
    for x in xs {
        assert!((x.rho.re).abs() < 1e-9 && (x.rho.im.abs() - 2f64.sqrt()).abs() < 1e-9);
        assert!(x.u_pair.0 != x.u_pair.1);
    }
}

#[test]
fn real_axis_crossings_are_two() {
    for (n, level, k) in [(5, 30.0, 1), (5, 3.0, 1), (8, 1.85, 2), (6, 6.0, 2), (12, 200.0, 1)] {
        let curve = trace_curve(n, level, EigenType::from_index(k).unwrap(), 500).unwrap();
        assert_eq!(curve.real_axis_crossings(), 2, "({n},{level},{k})");
    }
}

#[test]
fn odd_n_imaginary_axis_values() {
    for n in [5usize, 7, 9, 13] {
        let level = 0.5 * (n_min(n).unwrap() + n as f64);
        let map = CurveMap::new(n, level, loop_type(n)).unwrap();
        let u0 = map.level.u0;
        for u in [FRAC_PI_2, -FRAC_PI_2, FRAC_PI_2 + u0, FRAC_PI_2 - u0, -FRAC_PI_2 + u0, -FRAC_PI_2 - u0] {
            let s = map.eval(u).unwrap();
            assert!(s.rho.re.abs() < 1e-9 * (1.0 + s.rho.norm()), "n={n} u={u}: {}", s.rho);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn points_are_on_the_level(n in 3usize..=12, t in 0.02f64..0.98, w in 0.0f64..1.0, k in 1u8..=2) {
        let nm = n_min(n).unwrap();
        // levels between just above N_min and 4n
        let level = nm + (4.0 * n as f64 - nm) * t * t;
        let kind = EigenType::from_index(k).unwrap();
        let map = CurveMap::new(n, level, kind).unwrap();
        let iv = map.range().intervals;
        let (lo, hi) = iv[(w * iv.len() as f64).min(iv.len() as f64 - 1.0) as usize];
        let u = lo + (hi - lo) * ((w * 7.3).fract());
        let s = map.eval(u).unwrap();
        prop_assert!((s.lambda.norm() - level).abs() < 1e-8 * level);
        let spec = typed_spectrum(n, s.rho).unwrap();
        let d = spec.of_type(kind).iter().map(|l| (l - s.lambda).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!(d < 1e-7 * level.max(1.0), "d = {d:e}");
        if !map.is_real_axis_parameter(u) {
            prop_assert_eq!(s.rho.im.signum(), -u.signum());
        }
    }

    #[test]
    fn seam_points_agree(n in 3usize..=12, t in 0.02f64..0.98, k in 1u8..=2) {
        let nm = n_min(n).unwrap();
        let level = nm + (n as f64 - nm) * t;
        let map = CurveMap::new(n, level, EigenType::from_index(k).unwrap()).unwrap();
        let u0 = map.level.u0;
        for u in [u0, PI - u0] {
            let a = map.eval(u).unwrap().rho;
            let b = map.eval(-u).unwrap().rho;
            prop_assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
            prop_assert_eq!(a.im, 0.0);
        }
    }
}

#[test]
fn symmetry_report_examples() {
    use kms_levels::curve::symmetry_report;
    let r = symmetry_report(5, 3.0, 2000).unwrap();
    let [a, b] = r.imaginary_axis.unwrap();
    assert!(a < 1e-7 && b < 1e-7, "{r:?}");
    let r = symmetry_report(4, 6.0, 2000).unwrap();
    assert!(r.type_mirror.unwrap() < 1e-7, "{r:?}");
    assert!(r.origin < 1e-7 && r.conjugation.iter().all(|&d| d < 1e-7));
    let r = symmetry_report(5, 30.0, 500).unwrap();
    assert_eq!(r.real_axis_crossings, [2, 2]);
}
