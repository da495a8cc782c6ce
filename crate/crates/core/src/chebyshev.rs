//! Chebyshev polynomials `T_k` and `U_k` of real and complex argument.
//!
//! Everything is evaluated through the three-term recurrence
//! `P_{k+1} = 2 z P_k - P_{k-1}`; the trigonometric and hyperbolic closed
//! forms are used only as test oracles.

use num_complex::Complex64;

use crate::roots::{bisect, newton_polish};
use crate::{Error, Result};

/// Bracket width at which extremum bisection hands over to Newton.
const EXTREMUM_XTOL: f64 = 1e-13;
const EXTREMUM_NEWTON_STEPS: usize = 5;

/// First-kind Chebyshev polynomial `T_k(z)`.
pub fn cheb_t(k: usize, z: Complex64) -> Complex64 {
    recurrence(k, z, Complex64::new(1.0, 0.0), z)
}

/// Second-kind Chebyshev polynomial `U_k(z)`.
pub fn cheb_u(k: usize, z: Complex64) -> Complex64 {
    recurrence(k, z, Complex64::new(1.0, 0.0), 2.0 * z)
}

fn recurrence(k: usize, z: Complex64, p0: Complex64, p1: Complex64) -> Complex64 {
    if k == 0 {
        return p0;
    }
    let two_z = 2.0 * z;
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..k {
        let next = two_z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_k(x)` for real `x`.
pub fn t_real(k: usize, x: f64) -> f64 {
    real_recurrence(k, x, 1.0, x)
}

/// `U_k(x)` for real `x`.
pub fn u_real(k: usize, x: f64) -> f64 {
    real_recurrence(k, x, 1.0, 2.0 * x)
}

fn real_recurrence(k: usize, x: f64, p0: f64, p1: f64) -> f64 {
    if k == 0 {
        return p0;
    }
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..k {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(U_k(x), U'_k(x), U''_k(x))` by differentiating the recurrence, which
/// stays regular at `|x| = 1`.
fn u_with_derivatives(k: usize, x: f64) -> (f64, f64, f64) {
    // U_0 = 1, U_1 = 2x
    let (mut p_prev, mut p) = (1.0, 2.0 * x);
    let (mut d_prev, mut d) = (0.0, 2.0);
    let (mut s_prev, mut s) = (0.0, 0.0);
    if k == 0 {
        return (1.0, 0.0, 0.0);
    }
    for _ in 1..k {
        let p_next = 2.0 * x * p - p_prev;
        let d_next = 2.0 * p + 2.0 * x * d - d_prev;
        let s_next = 4.0 * d + 2.0 * x * s - s_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        s_prev = s;
        s = s_next;
    }
    (p, d, s)
}

/// Derivative `U'_k(x)`.
pub fn cheb_u_prime(k: usize, x: f64) -> f64 {
    u_with_derivatives(k, x).1
}

/// Second derivative `U''_k(x)`.
pub fn cheb_u_second(k: usize, x: f64) -> f64 {
    u_with_derivatives(k, x).2
}

/// Zeros of `U_k`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebZeros {
    pub k: usize,
    pub zeros: Vec<f64>,
}

/// Zeros of `U'_k`, ascending; each lies strictly between two consecutive
/// zeros of `U_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebExtrema {
    pub k: usize,
    pub extrema: Vec<f64>,
}

/// `alpha_{k,m} = cos((k + 1 - m) pi / (k + 1))`, `m = 1..=k`.
pub fn u_zeros(k: usize) -> Result<ChebZeros> {
    if k < 2 {
        return Err(Error::domain(format!("u_zeros needs degree k >= 2, got {k}")));
    }
    let kp1 = (k + 1) as f64;
    let zeros = (1..=k)
        .map(|m| (((k + 1 - m) as f64) * std::f64::consts::PI / kp1).cos())
        .collect();
    Ok(ChebZeros { k, zeros })
}

/// Roots of `U'_k`, one per gap between consecutive zeros of `U_k`.
pub fn u_extrema(k: usize) -> Result<ChebExtrema> {
    let zeros = u_zeros(k)?.zeros;
    let mut extrema = Vec::with_capacity(k - 1);
    for w in zeros.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let x = bisect(|x| cheb_u_prime(k, x), lo, hi, EXTREMUM_XTOL)?;
        let x = newton_polish(
            |x| cheb_u_prime(k, x),
            |x| cheb_u_second(k, x),
            x,
            lo,
            hi,
            EXTREMUM_NEWTON_STEPS,
        );
        extrema.push(x);
    }
    // The middle extremum of an even-degree U_k is exactly 0 by symmetry.
    if k % 2 == 0 {
        extrema[k / 2 - 1] = 0.0;
    }
    Ok(ChebExtrema { k, extrema })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn t_examples() {
        assert_eq!(cheb_t(0, c(3.0, -7.0)), c(1.0, 0.0));
        assert!((cheb_t(2, c(0.5, 0.0)) - c(-0.5, 0.0)).norm() < 1e-15);
        let oracle = (4.0 * 1.3f64.acosh()).cosh();
        assert!((cheb_t(4, c(1.3, 0.0)).re - oracle).abs() < 1e-12 * oracle);
    }

    #[test]
    fn u_examples() {
        assert_eq!(cheb_u(4, c(1.0, 0.0)), c(5.0, 0.0));
        assert_eq!(cheb_u(4, c(-1.0, 0.0)), c(5.0, 0.0));
        // U'_4 = 64x^3 - 24x vanishes at x^2 = 3/8.
        let x = (3.0f64 / 8.0).sqrt();
        assert!((cheb_u(4, c(x, 0.0)).re + 1.25).abs() < 1e-14);
    }

    #[test]
    fn u_prime_examples() {
        assert_eq!(cheb_u_prime(4, 0.0), 0.0);
        assert!(cheb_u_prime(4, (3.0f64 / 8.0).sqrt()).abs() < 1e-13);
        let h = 1e-6;
        let fd = (u_real(3, 1.0 + h) - u_real(3, 1.0 - h)) / (2.0 * h);
        let d = cheb_u_prime(3, 1.0);
        assert!(d.is_finite());
        assert!((d - fd).abs() < 1e-6 * fd.abs());
        // closed form away from |x| = 1
        let x: f64 = 0.3;
        let identity = (5.0 * t_real(5, x) - x * u_real(4, x)) / (x * x - 1.0);
        assert!((cheb_u_prime(4, x) - identity).abs() < 1e-12);
    }

    #[test]
    fn zeros_examples() {
        assert_eq!(u_zeros(1), Err(Error::Domain("u_zeros needs degree k >= 2, got 1".into())));
        let z2 = u_zeros(2).unwrap().zeros;
        assert!((z2[0] + 0.5).abs() < 1e-15 && (z2[1] - 0.5).abs() < 1e-15);
        let z4 = u_zeros(4).unwrap().zeros;
        let expected = [4.0, 3.0, 2.0, 1.0].map(|m: f64| (m * PI / 5.0).cos());
        for (a, b) in z4.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        for k in 2..=20 {
            let z = u_zeros(k).unwrap().zeros;
            for (m, x) in z.iter().enumerate() {
                assert!(u_real(k, *x).abs() < 1e-12, "k={k} x={x}");
                assert!((x + z[k - 1 - m]).abs() < 1e-14);
                assert!(x.abs() < 1.0);
            }
            assert!(z.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn extrema_examples() {
        assert!(u_extrema(1).is_err());
        assert_eq!(u_extrema(2).unwrap().extrema, vec![0.0]);
        let e4 = u_extrema(4).unwrap().extrema;
        let r = (3.0f64 / 8.0).sqrt();
        for (a, b) in e4.iter().zip([-r, 0.0, r]) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn extrema_interlace_and_balance() {
        for k in 2..=20 {
            let z = u_zeros(k).unwrap().zeros;
            let e = u_extrema(k).unwrap().extrema;
            assert_eq!(e.len(), k - 1);
            for m in 0..k - 1 {
                assert!(z[m] < e[m] && e[m] < z[m + 1], "k={k} m={m}");
            }
            if k >= 3 {
                let first = u_real(k, e[0]).abs();
                let last = u_real(k, e[k - 2]).abs();
                assert!((first - last).abs() < 1e-12 * first.max(1.0));
            }
        }
    }

    proptest! {
        #[test]
        fn bounded_on_unit_interval(k in 0usize..=20, x in -1.0f64..=1.0) {
            prop_assert!(t_real(k, x).abs() <= 1.0 + 1e-12);
            prop_assert!(u_real(k, x).abs() <= (k + 1) as f64 + 1e-10);
        }

        #[test]
        fn increasing_beyond_one(k in 1usize..=20, a in 1.0f64..3.0, d in 1e-6f64..2.0) {
            let (x1, x2) = (a, a + d);
            prop_assert!(1.0 - 1e-12 <= t_real(k, x1));
            prop_assert!(t_real(k, x1) < t_real(k, x2));
            prop_assert!((k + 1) as f64 - 1e-9 <= u_real(k, x1));
            prop_assert!(u_real(k, x1) < u_real(k, x2));
        }

        #[test]
        fn u_is_weighted_t_sum(k in 0usize..=20, r in 0.0f64..=2.0, phi in -PI..PI) {
            let z = Complex64::from_polar(r, phi);
            let sum: Complex64 = (0..=k).map(|m| z.powu(m as u32) * cheb_t(k - m, z)).sum();
            let u = cheb_u(k, z);
            prop_assert!((u - sum).norm() <= 1e-10 * u.norm().max(1.0));
        }

        #[test]
        fn u_t_identity(k in 1usize..=20, re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let z = c(re, im);
            let lhs = cheb_u(k, z);
            let rhs = z * cheb_u(k - 1, z) + cheb_t(k, z);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }

        #[test]
        fn sine_ratio_bound(k in 1usize..=20, u in -10.0f64..10.0) {
            prop_assume!(u.sin().abs() > 1e-9);
            prop_assert!(((k as f64) * u).sin().abs() / u.sin().abs() <= k as f64 + 1e-9);
        }

        #[test]
        fn hyperbolic_form(k in 0usize..=12, v in 0.01f64..3.0) {
            let expected = (((k + 1) as f64) * v).sinh() / v.sinh();
            prop_assert!((u_real(k, v.cosh()) - expected).abs() <= 1e-10 * expected);
        }
    }
}
