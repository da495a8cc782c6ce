//! Scalar threshold quantities of the level-curve problem and the
//! transcendental solve `sinh^2(n v) - N^2 sinh^2(v) = g(u)` for `v`.
//!
//! Every root here is found by bisection inside a bracket where the function
//! is known to be monotone, then sharpened by a few Newton steps.

use std::f64::consts::PI;

use crate::chebyshev::{cheb_u_prime, cheb_u_second, u_real};
use crate::roots::{bisect, grow_bracket, newton_polish};
use crate::{Error, Result};

/// Largest `v` a bracket may grow to before `sinh` overflow is declared.
pub const V_CAP: f64 = 50.0;

/// Inward shrink of the `N_min` search bracket.
const NMIN_SHRINK: f64 = 1e-12;

/// Slack allowed when testing whether `u` lies in the admissible range.
const RANGE_SLACK: f64 = 1e-12;

/// Numerical tolerances of the threshold solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute bisection width in parameter space.
    pub root: f64,
    /// Residual bound for `|h(v) - g(u)|`, relative to `max(1, N^2)`.
    pub residual: f64,
    /// Newton steps after bisection.
    pub newton_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: 1e-13,
            residual: 1e-9,
            newton_steps: 3,
        }
    }
}

/// Eigenvalue type. Type-1 eigenvalues have skew-symmetric eigenvectors,
/// type-2 symmetric ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenType {
    One,
    Two,
}

impl EigenType {
    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(EigenType::One),
            2 => Ok(EigenType::Two),
            _ => Err(Error::domain(format!("eigenvalue type must be 1 or 2, got {k}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            EigenType::One => 1,
            EigenType::Two => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            EigenType::One => EigenType::Two,
            EigenType::Two => EigenType::One,
        }
    }
}

/// Matrix dimension, level and eigenvalue type of one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub n: usize,
    pub level: f64,
    pub kind: EigenType,
}

impl ProblemParams {
    pub fn new(n: usize, level: f64, kind: EigenType) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("matrix dimension n must be >= 3, got {n}")));
        }
        if !(level > 0.0) || !level.is_finite() {
            return Err(Error::domain(format!("level N must be positive and finite, got {level}")));
        }
        Ok(ProblemParams { n, level, kind })
    }
}

/// Which parametrization regime a level falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// `N > n`: `u` ranges over all of `[-pi, pi]`.
    CaseOne,
    /// `N_min(n) < N <= n`: `u` is restricted to `u0 <= |u| <= pi - u0`.
    CaseTwo,
}

pub fn case_tag(n: usize, level: f64) -> CaseTag {
    if level > n as f64 {
        CaseTag::CaseOne
    } else {
        CaseTag::CaseTwo
    }
}

/// `g(u) = N^2 sin^2 u - sin^2(n u)`.
pub fn g_eval(n: usize, level: f64, u: f64) -> f64 {
    let s = u.sin();
    let sn = (n as f64 * u).sin();
    level * level * s * s - sn * sn
}

/// `h(v) = sinh^2(n v) - N^2 sinh^2 v`.
pub fn h_eval(n: usize, level: f64, v: f64) -> f64 {
    let s = v.sinh();
    let sn = (n as f64 * v).sinh();
    sn * sn - level * level * s * s
}

/// `h'(v) = n sinh(2 n v) - N^2 sinh(2 v)`.
pub fn h_prime(n: usize, level: f64, v: f64) -> f64 {
    let nf = n as f64;
    nf * (2.0 * nf * v).sinh() - level * level * (2.0 * v).sinh()
}

/// Root of `U'_{n-1}` in `(cos(2 pi / n), cos(pi / n))`.
pub fn x0_prime(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!("N_min needs n >= 3, got {n}")));
    }
    let k = n - 1;
    let nf = n as f64;
    let lo = (2.0 * PI / nf).cos() + NMIN_SHRINK;
    let hi = (PI / nf).cos() - NMIN_SHRINK;
    let x = bisect(|x| cheb_u_prime(k, x), lo, hi, Tolerances::default().root)?;
    Ok(newton_polish(
        |x| cheb_u_prime(k, x),
        |x| cheb_u_second(k, x),
        x,
        lo,
        hi,
        5,
    ))
}

/// Smallest level for which the level curve parametrization is valid:
/// `N_min(n) = |U_{n-1}(x0'(n))|`.
pub fn n_min(n: usize) -> Result<f64> {
    let x = x0_prime(n)?;
    Ok(u_real(n - 1, x).abs())
}

fn check_case_two(n: usize, level: f64, nmin: f64) -> Result<()> {
    if level <= nmin {
        return Err(Error::domain(format!(
            "level N = {level} must exceed N_min({n}) = {nmin}"
        )));
    }
    if level > n as f64 {
        return Err(Error::domain(format!("level N = {level} must not exceed n = {n}")));
    }
    Ok(())
}

/// Positive solution of `|U_{n-1}(x)| = N`, for `N_min(n) < N <= n`.
pub fn x0(n: usize, level: f64) -> Result<f64> {
    let nmin = n_min(n)?;
    check_case_two(n, level, nmin)?;
    if level == n as f64 {
        return Ok(1.0);
    }
    let k = n - 1;
    let lo = (PI / n as f64).cos();
    // U_{n-1} increases strictly from 0 to n on this interval.
    let x = bisect(|x| u_real(k, x) - level, lo, 1.0, Tolerances::default().root)?;
    Ok(newton_polish(
        |x| u_real(k, x) - level,
        |x| cheb_u_prime(k, x),
        x,
        lo,
        1.0,
        3,
    ))
}

/// `u0(n, N) = arccos(x0(n, N))`, zero at `N = n`.
pub fn u0(n: usize, level: f64) -> Result<f64> {
    let x = x0(n, level)?;
    Ok(polish_u0(n, level, x.acos()))
}

/// `arccos` loses digits near `x = 1`; polish in `u` on
/// `sin(n u) - N sin(u)`, which has the same root in `(0, pi / n]`.
fn polish_u0(n: usize, level: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    newton_polish(
        |u| (nf * u).sin() - level * u.sin(),
        |u| nf * (nf * u).cos() - level * u.cos(),
        u,
        0.0,
        PI / nf,
        3,
    )
}

/// Unique positive root of `sinh(n v) / sinh(v) = N` for `N > n`.
pub fn v0(n: usize, level: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("v0 needs n >= 2, got {n}")));
    }
    if !(level > n as f64) {
        return Err(Error::domain(format!("v0 needs N > n = {n}, got N = {level}")));
    }
    let k = n - 1;
    // sinh(n v) / sinh(v) = U_{n-1}(cosh v), regular at v = 0.
    let f = |v: f64| u_real(k, v.cosh()) - level;
    let df = |v: f64| cheb_u_prime(k, v.cosh()) * v.sinh();
    let hi = grow_bracket(f, 0.0, V_CAP)?;
    let v = bisect(f, 0.0, hi, Tolerances::default().root)?;
    Ok(newton_polish(f, df, v, 0.0, hi, 3))
}

/// Unique nonnegative root of `cosh(n v) = N cosh(v)` for odd `n`, `1 <= N < n`.
pub fn v_im(n: usize, level: f64) -> Result<f64> {
    if n % 2 == 0 {
        return Err(Error::domain(format!("v_im needs odd n, got {n}")));
    }
    if !(level >= 1.0) {
        return Err(Error::domain(format!("v_im needs N >= 1, got N = {level}")));
    }
    if !(level < n as f64) {
        return Err(Error::domain(format!("v_im needs N < n = {n}, got N = {level}")));
    }
    if level == 1.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let f = |v: f64| (nf * v).cosh() - level * v.cosh();
    let df = |v: f64| nf * (nf * v).sinh() - level * v.sinh();
    let hi = grow_bracket(f, 0.0, V_CAP)?;
    let v = bisect(f, 0.0, hi, Tolerances::default().root)?;
    Ok(newton_polish(f, df, v, 0.0, hi, 3))
}

/// Per-level cache of the thresholds needed to solve for `v(n, N, u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    pub level: f64,
    pub case: CaseTag,
    pub n_min: f64,
    /// `u0(n, N)` in case two, 0 in case one.
    pub u0: f64,
    /// `v0(n, N)` in case one, 0 in case two.
    pub v0: f64,
    pub tol: Tolerances,
}

impl Level {
    pub fn new(n: usize, level: f64) -> Result<Self> {
        Self::with_tolerances(n, level, Tolerances::default())
    }

    pub fn with_tolerances(n: usize, level: f64, tol: Tolerances) -> Result<Self> {
        ProblemParams::new(n, level, EigenType::One)?;
        let nmin = n_min(n)?;
        if level <= nmin {
            return Err(Error::domain(format!(
                "level N = {level} must exceed N_min({n}) = {nmin}"
            )));
        }
        let case = case_tag(n, level);
        let (u0v, v0v) = match case {
            CaseTag::CaseOne => (0.0, v0(n, level)?),
            CaseTag::CaseTwo => (u0(n, level)?, 0.0),
        };
        Ok(Level {
            n,
            level,
            case,
            n_min: nmin,
            u0: u0v,
            v0: v0v,
            tol,
        })
    }

    /// Whether `u` belongs to the admissible parameter range.
    pub fn contains(&self, u: f64) -> bool {
        let a = u.abs();
        match self.case {
            CaseTag::CaseOne => a <= PI + RANGE_SLACK,
            CaseTag::CaseTwo => {
                a >= self.u0 - RANGE_SLACK && a <= PI - self.u0 + RANGE_SLACK
            }
        }
    }

    /// Root `v(n, N, u)` of `h(v) = g(u)`; even in `u`.
    pub fn solve_v(&self, u: f64) -> Result<f64> {
        if !u.is_finite() || !self.contains(u) {
            return Err(Error::domain(format!(
                "u = {u} outside the parameter range of (n, N) = ({}, {})",
                self.n, self.level
            )));
        }
        let (n, level) = (self.n, self.level);
        let g = g_eval(n, level, u.abs());
        let lower = match self.case {
            CaseTag::CaseOne => self.v0,
            CaseTag::CaseTwo => 0.0,
        };
        if g <= 0.0 {
            // Real-axis parameters; clamps a slightly negative g at the
            // range boundary onto the exact root.
            return Ok(lower);
        }
        let f = |v: f64| h_eval(n, level, v) - g;
        let hi = grow_bracket(f, lower, V_CAP)?;
        let v = bisect(f, lower, hi, self.tol.root)?;
        let v = newton_polish(
            f,
            |v| h_prime(n, level, v),
            v,
            lower,
            hi,
            self.tol.newton_steps,
        );
        let residual = f(v).abs();
        if residual > self.tol.residual * (level * level).max(1.0) {
            return Err(Error::Convergence(format!(
                "v(n={n}, N={level}, u={u}) residual {residual:e}"
            )));
        }
        Ok(v)
    }
}

/// `v(n, N, u)`; builds the per-level cache on every call.
pub fn solve_v(n: usize, level: f64, u: f64) -> Result<f64> {
    Level::new(n, level)?.solve_v(u)
}
