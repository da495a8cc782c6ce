//! A cubic model with the same cusp and loop structure as the KMS curves:
//!
//! `lambda (lambda - rho - alpha^2)^2 + pi^2 alpha^4 / 4 = 0`, `alpha > 0`,
//!
//! realized as `det(lambda I - M(rho)) = 0` for a 3x3 matrix `M`. Its level
//! curves come from solving the cubic for `rho` given `lambda = N e^{i theta}`,
//! and the number of roots of modulus above `N` is `wind + 2`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::geometry::{polyline_crossings, SegmentGrid};
use crate::spectral::{char_poly, CMatrix};
use crate::topology::{winding_number, OrientedPolyline};
use crate::{Error, Result};

/// Fewest samples `cubic_level_curve` accepts.
pub const MIN_CUBIC_SAMPLES: usize = 64;

/// Relative gap under which a root modulus counts as sitting on the level.
const TIE_TOL: f64 = 1e-9;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must be positive and finite, got {alpha}")))
    }
}

/// `pi^2 alpha^4 / 4`, the constant term.
fn q_of(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    0.25 * PI * PI * a2 * a2
}

/// Monic coefficients `[1, -2s, s^2, q]` with `s = rho + alpha^2`.
pub fn cubic_coefficients(rho: Complex64, alpha: f64) -> [Complex64; 4] {
    let s = rho + alpha * alpha;
    [
        Complex64::new(1.0, 0.0),
        -2.0 * s,
        s * s,
        Complex64::new(q_of(alpha), 0.0),
    ]
}

fn eval_monic(c: &[Complex64; 4], z: Complex64) -> (Complex64, Complex64) {
    let p = ((z + c[1]) * z + c[2]) * z + c[3];
    let dp = (3.0 * z + 2.0 * c[1]) * z + c[2];
    (p, dp)
}

/// The three roots by Cardano's formula, each Newton-polished while that
/// lowers its residual.
pub fn cubic_roots(rho: Complex64, alpha: f64) -> Result<[Complex64; 3]> {
    check_alpha(alpha)?;
    let c = cubic_coefficients(rho, alpha);
    let s = rho + alpha * alpha;
    // lambda = t + 2s/3 gives t^3 + p t + r with
    let p = -s * s / 3.0;
    let r = 2.0 * s * s * s / 27.0 + q_of(alpha);
    let disc = (0.25 * r * r + p * p * p / 27.0).sqrt();
    let w = if (-0.5 * r + disc).norm() >= (-0.5 * r - disc).norm() {
        -0.5 * r + disc
    } else {
        -0.5 * r - disc
    };
    let omega = Complex64::from_polar(1.0, TAU / 3.0);
    let base = w.cbrt();
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    for (m, root) in roots.iter_mut().enumerate() {
        let cm = base * omega.powu(m as u32);
        let t = if cm.norm() == 0.0 { cm } else { cm - p / (3.0 * cm) };
        *root = polish(&c, t + 2.0 * s / 3.0);
    }
    Ok(roots)
}

fn polish(c: &[Complex64; 4], mut z: Complex64) -> Complex64 {
    let (mut pz, _) = eval_monic(c, z);
    for _ in 0..4 {
        let (_, dp) = eval_monic(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - pz / dp;
        let (pn, _) = eval_monic(c, next);
        if pn.norm() < pz.norm() {
            z = next;
            pz = pn;
        } else {
            break;
        }
    }
    z
}

/// The critical points (double roots) of the cubic in `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCriticalData {
    pub alpha: f64,
    /// `rho_c(m)` for `m = -1, 0, 1`.
    pub rho_c: [Complex64; 3],
    /// The double roots `lambda_c(m)`.
    pub lambda_c: [Complex64; 3],
    /// `(pi alpha^2 / 4)^{2/3}`, the common modulus of the double roots.
    pub n0: f64,
}

pub fn critical_data(alpha: f64) -> Result<CubicCriticalData> {
    check_alpha(alpha)?;
    let n0 = (0.25 * PI * alpha * alpha).powf(2.0 / 3.0);
    let mut rho_c = [Complex64::new(0.0, 0.0); 3];
    let mut lambda_c = rho_c;
    for (idx, m) in [-1i32, 0, 1].into_iter().enumerate() {
        let w = Complex64::from_polar(1.0, TAU * m as f64 / 3.0);
        rho_c[idx] = -alpha * alpha - 3.0 * n0 * w;
        lambda_c[idx] = -n0 * w;
    }
    Ok(CubicCriticalData {
        alpha,
        rho_c,
        lambda_c,
        n0,
    })
}

/// `(N0, alpha)`-free shorthand for `critical_data(alpha).n0`.
pub fn n0(alpha: f64) -> Result<f64> {
    Ok(critical_data(alpha)?.n0)
}

/// Discriminant of the cubic in `lambda` at `rho`, and the same divided by
/// the sum of the moduli of its terms.
pub fn discriminant(rho: Complex64, alpha: f64) -> (Complex64, f64) {
    let [_, b, c, d] = cubic_coefficients(rho, alpha);
    let terms = [
        18.0 * b * c * d,
        -4.0 * b * b * b * d,
        b * b * c * c,
        -4.0 * c * c * c,
        -27.0 * d * d,
    ];
    let value: Complex64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.norm()).sum();
    let rel = if scale == 0.0 { 0.0 } else { value.norm() / scale };
    (value, rel)
}

/// Traversal direction of a cubic level curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicOrientation {
    ThetaIncreasing,
    ThetaDecreasing,
}

impl CubicOrientation {
    pub fn as_str(self) -> &'static str {
        match self {
            CubicOrientation::ThetaIncreasing => "increasing-theta",
            CubicOrientation::ThetaDecreasing => "decreasing-theta",
        }
    }
}

/// One point of a cubic level curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicSample {
    pub theta: f64,
    pub rho: Complex64,
    pub lambda: Complex64,
}

/// Closed level curve `|lambda| = N` of the cubic, oriented so that
/// `j = wind + 2`.
#[derive(Debug, Clone)]
pub struct CubicLevelCurve {
    pub alpha: f64,
    pub level: f64,
    /// Samples in traversal order, first repeated last.
    pub samples: Vec<CubicSample>,
    pub orientation: CubicOrientation,
    polyline: OrientedPolyline,
}

impl CubicLevelCurve {
    pub fn polyline(&self) -> &OrientedPolyline {
        &self.polyline
    }

    pub fn points(&self) -> &[Complex64] {
        self.polyline.points()
    }

    /// Polyline self-crossings (unrefined).
    pub fn self_crossings(&self) -> Vec<Complex64> {
        let pts = self.points();
        let grid = SegmentGrid::new(pts);
        let scale = 1.0 + self.polyline.diameter();
        let mut out: Vec<Complex64> = Vec::new();
        for (_, _, p, _, _) in polyline_crossings(pts, &grid, 2, 0.0) {
            if out.iter().all(|q| (q - p).norm() > 1e-9 * scale) {
                out.push(p);
            }
        }
        out
    }
}

/// `rho(theta) = lambda - alpha^2 + i (pi alpha^2 / 2) lambda^{-1/2}` for
/// `lambda = N e^{i theta}`, half angle continued over `[0, 4 pi)`.
pub fn cubic_rho_at(alpha: f64, level: f64, theta: f64) -> (Complex64, Complex64) {
    let lambda = Complex64::from_polar(level, theta);
    let inv_sqrt = Complex64::from_polar(level.powf(-0.5), -0.5 * theta);
    let c = 0.5 * PI * alpha * alpha;
    (lambda - alpha * alpha + Complex64::new(0.0, c) * inv_sqrt, lambda)
}

pub fn cubic_level_curve(alpha: f64, level: f64, samples: usize) -> Result<CubicLevelCurve> {
    check_alpha(alpha)?;
    if !(level > 0.0) || !level.is_finite() {
        return Err(Error::domain(format!("level N must be positive and finite, got {level}")));
    }
    if samples < MIN_CUBIC_SAMPLES {
        return Err(Error::domain(format!(
            "cubic curves need at least {MIN_CUBIC_SAMPLES} samples, got {samples}"
        )));
    }
    let crit = critical_data(alpha)?;
    let period = 2.0 * TAU;
    let mut thetas: Vec<f64> = (0..samples)
        .map(|i| period * i as f64 / samples as f64)
        .collect();
    for l in crit.lambda_c {
        let a = l.arg().rem_euclid(TAU);
        thetas.extend([a, a + TAU]);
    }
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    let mut pts: Vec<CubicSample> = thetas
        .iter()
        .map(|&theta| {
            let (rho, lambda) = cubic_rho_at(alpha, level, theta);
            CubicSample { theta, rho, lambda }
        })
        .collect();
    pts.push(pts[0]);

    let forward = OrientedPolyline::new(
        pts.iter().map(|s| s.rho).collect(),
        CubicOrientation::ThetaIncreasing.as_str(),
    )?;
    let orientation = calibrate(&forward, alpha, level)?;
    let (samples, polyline) = match orientation {
        CubicOrientation::ThetaIncreasing => (pts, forward),
        CubicOrientation::ThetaDecreasing => {
            pts.reverse();
            let mut poly = forward.reversed();
            poly.orientation = CubicOrientation::ThetaDecreasing.as_str().to_string();
            (pts, poly)
        }
    };
    Ok(CubicLevelCurve {
        alpha,
        level,
        samples,
        orientation,
        polyline,
    })
}

/// Pick the traversal for which `wind + 2` reproduces the brute-force count
/// at an anchor near `-alpha^2`.
fn calibrate(forward: &OrientedPolyline, alpha: f64, level: f64) -> Result<CubicOrientation> {
    let centre = Complex64::new(-alpha * alpha, 0.0);
    let offsets = [0.0, 0.3, -0.3, 0.55, -0.55, 0.8];
    for dx in offsets {
        for dy in [0.0, 0.3, -0.3] {
            let anchor = centre + level * Complex64::new(dx, dy);
            let (Ok(w), Ok(j)) = (winding_number(forward, anchor), count_cubic(anchor, alpha, level))
            else {
                continue;
            };
            let j = j as i64;
            if w == 0 {
                continue;
            }
            if w + 2 == j {
                return Ok(CubicOrientation::ThetaIncreasing);
            }
            if -w + 2 == j {
                return Ok(CubicOrientation::ThetaDecreasing);
            }
            return Err(Error::Contract(format!(
                "winding {w} about {anchor} matches neither orientation (count {j})"
            )));
        }
    }
    Err(Error::Contract(format!(
        "no usable orientation anchor for alpha = {alpha}, N = {level}"
    )))
}

/// `wind + 2`: roots of modulus above the level.
pub fn j_cubic_by_winding(curve: &CubicLevelCurve, rho: Complex64) -> Result<usize> {
    let j = winding_number(&curve.polyline, rho)? + 2;
    usize::try_from(j).map_err(|_| {
        Error::Contract(format!("negative count {j} at {rho} for the cubic curve"))
    })
}

/// Roots of modulus above `N`, counted directly.
pub fn count_cubic(rho: Complex64, alpha: f64, level: f64) -> Result<usize> {
    let roots = cubic_roots(rho, alpha)?;
    let mut count = 0;
    for r in roots {
        let m = r.norm();
        if (m - level).abs() <= TIE_TOL * level {
            return Err(Error::Ambiguous(format!(
                "root {r} has modulus {m} at the level {level}"
            )));
        }
        if m > level {
            count += 1;
        }
    }
    Ok(count)
}

/// The matrix `M(rho)` with `det(lambda I - M) = lambda (lambda - rho - alpha^2)^2 + pi^2 alpha^4 / 4`.
pub fn m_matrix(rho: Complex64, alpha: f64) -> CMatrix {
    let s = rho + alpha * alpha;
    let c = Complex64::new(0.5 * PI * alpha * alpha, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    CMatrix::from_row_slice(3, 3, &[s, zero, -c, one, s, one, one, c, zero])
}

/// Confirm the characteristic polynomial of `M(rho)` against the cubic,
/// coefficient by coefficient to `1e-10` relative.
pub fn m_matrix_check(rho: Complex64, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    let got = char_poly(&m_matrix(rho, alpha))?;
    let want = cubic_coefficients(rho, alpha);
    let scale = want.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for (i, (g, w)) in got.iter().zip(&want).enumerate() {
        let tol = 1e-10 * if w.norm() > 0.0 { w.norm() } else { scale };
        if (g - w).norm() > tol {
            return Err(Error::Contract(format!(
                "coefficient {i} of det(lambda I - M): {g} vs {w}"
            )));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::poly_roots;

    const A: f64 = 0.1;

    fn nearest(set: &[Complex64], z: Complex64) -> f64 {
        set.iter().map(|s| (s - z).norm()).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn roots_at_minus_alpha_squared() {
        let n0 = n0(A).unwrap();
        for r in cubic_roots(Complex64::new(-A * A, 0.0), A).unwrap() {
            assert!((r.norm() - 2f64.powf(2.0 / 3.0) * n0).abs() < 1e-10);
        }
    }

    #[test]
    fn double_roots_at_critical_points() {
        let cd = critical_data(A).unwrap();
        assert_eq!(cd.rho_c[1].im, 0.0);
        assert!((cd.rho_c[1].re - (-0.01 - 3.0 * cd.n0)).abs() < 1e-15);
        assert!((cd.rho_c[0] - cd.rho_c[2].conj()).norm() < 1e-15);
        for m in 0..3 {
            assert!(discriminant(cd.rho_c[m], A).1 < 1e-10);
            assert!((cd.lambda_c[m].norm() - cd.n0).abs() < 1e-15);
            let roots = cubic_roots(cd.rho_c[m], A).unwrap();
            let close = roots.iter().filter(|r| (*r - cd.lambda_c[m]).norm() < 1e-5).count();
            assert_eq!(close, 2, "m={m}: {roots:?}");
        }
    }

    #[test]
    fn asymptotic_roots() {
        let rho = Complex64::from_polar(1e6, 0.7);
        let roots = cubic_roots(rho, A).unwrap();
        assert_eq!(roots.iter().filter(|r| (*r - rho).norm() < 0.01 * rho.norm()).count(), 2);
        assert_eq!(roots.iter().filter(|r| r.norm() < 1e-3).count(), 1);
    }

    #[test]
    fn root_residuals() {
        for (re, im) in [(0.0, 0.0), (1.0, 1.0), (-3.0, 0.2), (1e3, -2e3), (-0.01, 0.0)] {
            let rho = Complex64::new(re, im);
            let c = cubic_coefficients(rho, A);
            for r in cubic_roots(rho, A).unwrap() {
                let (p, _) = eval_monic(&c, r);
                assert!(p.norm() < 1e-10 * (1.0 + rho.norm().powi(3)), "{rho}: {p}");
            }
        }
    }

    #[test]
    fn matrix_realization() {
        for rho in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(-0.3, 2.0)] {
            assert!(m_matrix_check(rho, A).unwrap());
            let ev = poly_roots(&char_poly(&m_matrix(rho, A)).unwrap()).unwrap();
            for r in cubic_roots(rho, A).unwrap() {
                assert!(nearest(&ev, r) < 1e-8, "{rho}: {r} vs {ev:?}");
            }
        }
    }

    #[test]
    fn level_curve_back_substitution() {
        let n0 = n0(A).unwrap();
        for f in [0.5, 1.0, 1.4, 3.0] {
            let level = f * n0;
            let c = cubic_level_curve(A, level, 512).unwrap();
            for s in &c.samples {
                let roots = cubic_roots(s.rho, A).unwrap();
                let gap = roots.iter().map(|r| (r.norm() - level).abs()).fold(f64::INFINITY, f64::min);
                assert!(gap < 1e-8 * level);
                let (p, _) = eval_monic(&cubic_coefficients(s.rho, A), s.lambda);
                assert!(p.norm() < 1e-10);
            }
            let (r0, _) = cubic_rho_at(A, level, 0.0);
            let (r1, _) = cubic_rho_at(A, level, 2.0 * TAU);
            assert!((r0 - r1).norm() < 1e-10);
        }
    }

    #[test]
    fn anchors_and_loops() {
        let cd = critical_data(A).unwrap();
        let minus = Complex64::new(-0.01, 0.0);
        for f in [0.5, 1.0, 1.4] {
            let c = cubic_level_curve(A, f * cd.n0, 1024).unwrap();
            assert_eq!(j_cubic_by_winding(&c, minus).unwrap(), 3);
            assert_eq!(j_cubic_by_winding(&c, Complex64::new(5.0, 5.0)).unwrap(), 2);
        }
        let c = cubic_level_curve(A, cd.n0, 1024).unwrap();
        for rc in cd.rho_c {
            let d = c.points().iter().map(|p| (p - rc).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-6);
        }
        let c = cubic_level_curve(A, 1.4 * cd.n0, 2048).unwrap();
        assert!(c.self_crossings().len() >= 3);
        for rc in cd.rho_c {
            assert_eq!(j_cubic_by_winding(&c, rc).unwrap(), 1);
            assert_eq!(count_cubic(rc, A, 1.4 * cd.n0).unwrap(), 1);
        }
    }
}
