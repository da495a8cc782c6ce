use kms_levels::cubic::{critical_data, cubic_level_curve, count_cubic, j_cubic_by_winding};
use kms_levels::topology::winding_number;
use kms_levels::Complex64;

#[test]
fn lower_level_envelops_n0_curve() {
    let n0 = critical_data(0.1).unwrap().n0;
    let outer = cubic_level_curve(0.1, 0.5 * n0, 4000).unwrap();
    let inner = cubic_level_curve(0.1, n0, 500).unwrap();
    for p in inner.points() {
        assert_ne!(winding_number(outer.polyline(), *p).unwrap(), 0, "{p}");
    }
}

#[test]
fn far_component_has_two() {
    let n0 = critical_data(0.1).unwrap().n0;
    for f in [0.5, 1.0, 1.4] {
        let curve = cubic_level_curve(0.1, f * n0, 1000).unwrap();
        let z = Complex64::new(3.0, -4.0);
        assert_eq!(j_cubic_by_winding(&curve, z).unwrap(), 2);
        assert_eq!(count_cubic(z, 0.1, f * n0).unwrap(), 2);
    }
}

#[test]
fn closure_and_orientation_metadata() {
    let n0 = critical_data(0.1).unwrap().n0;
    let curve = cubic_level_curve(0.1, 1.4 * n0, 256).unwrap();
    let pts = curve.points();
    assert!((pts[0] - pts[pts.len() - 1]).norm() < 1e-10);
    assert_eq!(curve.polyline().orientation, curve.orientation.as_str());
}
