//! The parametrized level curves `L(n, N, k)`.
//!
//! For `u` in the admissible range and `v = v(n, N, u)`, put `mu = u + i v`.
//! Then `rho = f(u)` with
//!
//! * type 1: `f = sin((n+1) mu / 2) / sin((n-1) mu / 2)`, `b = -sin(n mu) / sin(mu)`
//! * type 2: `f = cos((n+1) mu / 2) / cos((n-1) mu / 2)`, `b = +sin(n mu) / sin(mu)`
//!
//! and `K_n(rho)` has the type-k eigenvalue `b(u)` of modulus `N`. Curves
//! are traversed by decreasing `u`, which crosses the positive real axis
//! from the lower to the upper half plane.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::chebyshev::cheb_u;
use crate::geometry::{polyline_crossings, SegmentGrid};
use crate::thresholds::{CaseTag, EigenType, Level, ProblemParams, Tolerances};
use crate::{Error, Result};

/// Traversal convention written into serialized curves.
pub const ORIENTATION: &str = "decreasing-u";

/// Default number of grid points per parameter interval.
pub const DEFAULT_SAMPLES: usize = 2000;

/// Fewest samples per interval `trace_curve` accepts.
pub const MIN_SAMPLES: usize = 16;

/// Denominators below this are treated as vanishing.
const DEN_EPS: f64 = 1e-13;

/// `|b(u) + n|` below this flags a cusp on the borderline curve.
pub const CUSP_TOL: f64 = 1e-3;

/// Admissible parameter set: one interval in case one, two in case two.
#[derive(Debug, Clone, PartialEq)]
pub struct URange {
    pub case: CaseTag,
    pub intervals: Vec<(f64, f64)>,
}

pub fn u_range(n: usize, level: f64) -> Result<URange> {
    Ok(range_of(&Level::new(n, level)?))
}

fn range_of(level: &Level) -> URange {
    let intervals = match level.case {
        CaseTag::CaseOne => vec![(-PI, PI)],
        CaseTag::CaseTwo => vec![(-PI + level.u0, -level.u0), (level.u0, PI - level.u0)],
    };
    URange {
        case: level.case,
        intervals,
    }
}

/// One point of a level curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub u: f64,
    pub v: f64,
    pub rho: Complex64,
    pub lambda: Complex64,
}

/// `cosh(x) e^{-x}` and `sinh(x) e^{-x}` for `x >= 0`.
fn scaled_ch_sh(x: f64) -> (f64, f64) {
    let e = (-2.0 * x).exp();
    (0.5 * (1.0 + e), -0.5 * (-2.0 * x).exp_m1())
}

/// The maps `f` and `b` for fixed `(n, N, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveMap {
    pub params: ProblemParams,
    pub level: Level,
}

impl CurveMap {
    pub fn new(n: usize, level: f64, kind: EigenType) -> Result<Self> {
        Self::with_tolerances(n, level, kind, Tolerances::default())
    }

    pub fn with_tolerances(n: usize, level: f64, kind: EigenType, tol: Tolerances) -> Result<Self> {
        let params = ProblemParams::new(n, level, kind)?;
        let level = Level::with_tolerances(n, level, tol)?;
        Ok(CurveMap { params, level })
    }

    pub fn range(&self) -> URange {
        range_of(&self.level)
    }

    /// The four parameters mapped onto the real axis (two in each sign).
    pub fn real_axis_parameters(&self) -> [f64; 4] {
        match self.level.case {
            CaseTag::CaseOne => [PI, 0.0, -0.0, -PI],
            CaseTag::CaseTwo => {
                let u0 = self.level.u0;
                [PI - u0, u0, -u0, -PI + u0]
            }
        }
    }

    pub fn is_real_axis_parameter(&self, u: f64) -> bool {
        let a = u.abs();
        match self.level.case {
            CaseTag::CaseOne => a == 0.0 || a == PI,
            CaseTag::CaseTwo => a == self.level.u0 || a == PI - self.level.u0,
        }
    }

    /// `+-pi/2` and, below `N = n`, `+-pi/2 +- u0`: for odd `n` these map
    /// onto the imaginary axis.
    pub fn imaginary_axis_parameters(&self) -> Vec<f64> {
        let mut out = vec![FRAC_PI_2, -FRAC_PI_2];
        let u0 = self.level.u0;
        if self.level.case == CaseTag::CaseTwo && u0 > 0.0 {
            out.extend([FRAC_PI_2 + u0, FRAC_PI_2 - u0, -FRAC_PI_2 + u0, -FRAC_PI_2 - u0]);
        }
        out
    }

    /// `(f(u), b(u))`, or `Ok(None)` when the denominator of `f` vanishes
    /// away from a removable point.
    fn eval_inner(&self, u: f64) -> Result<Option<CurveSample>> {
        let real_axis = self.is_real_axis_parameter(u);
        let v = if real_axis {
            match self.level.case {
                CaseTag::CaseOne => self.level.v0,
                CaseTag::CaseTwo => 0.0,
            }
        } else {
            self.level.solve_v(u)?
        };
        let n = self.params.n as f64;
        let a = 0.5 * (n + 1.0);
        let b = 0.5 * (n - 1.0);
        let x = u.abs();
        let (cha, sha) = scaled_ch_sh(a * v);
        let (chb, shb) = scaled_ch_sh(b * v);
        let (num, den) = match self.params.kind {
            EigenType::One => (
                Complex64::new((a * x).sin() * cha, (a * x).cos() * sha),
                Complex64::new((b * x).sin() * chb, (b * x).cos() * shb),
            ),
            EigenType::Two => (
                Complex64::new((a * x).cos() * cha, -(a * x).sin() * sha),
                Complex64::new((b * x).cos() * chb, -(b * x).sin() * shb),
            ),
        };
        let mut rho = if den.norm() >= DEN_EPS {
            v.exp() * num / den
        } else if v == 0.0 && num.norm() < DEN_EPS {
            // 0/0 on the real axis at N = n; l'Hopital in mu.
            let r = match self.params.kind {
                EigenType::One => a * (a * x).cos() / (b * (b * x).cos()),
                EigenType::Two => a * (a * x).sin() / (b * (b * x).sin()),
            };
            Complex64::new(r, 0.0)
        } else {
            return Ok(None);
        };
        let cos_mu = Complex64::new(x.cos() * v.cosh(), -x.sin() * v.sinh());
        let mut lambda = cheb_u(self.params.n - 1, cos_mu);
        if self.params.kind == EigenType::One {
            lambda = -lambda;
        }
        if u < 0.0 {
            rho = rho.conj();
            lambda = lambda.conj();
        }
        if real_axis {
            rho.im = 0.0;
            lambda.im = 0.0;
        }
        if !rho.is_finite() || !lambda.is_finite() {
            return Err(Error::Overflow(format!(
                "f or b overflows at u = {u} (v = {v}) for n = {}",
                self.params.n
            )));
        }
        Ok(Some(CurveSample { u, v, rho, lambda }))
    }

    /// Evaluate `f(u)` and `b(u)`.
    pub fn eval(&self, u: f64) -> Result<CurveSample> {
        self.eval_inner(u)?.ok_or_else(|| {
            Error::Convergence(format!("denominator of f vanishes at u = {u}"))
        })
    }

    /// Trace the closed curve with `samples` grid points per interval.
    pub fn trace(&self, samples: usize) -> Result<LevelCurve> {
        if samples < MIN_SAMPLES {
            return Err(Error::domain(format!(
                "samples per interval must be >= {MIN_SAMPLES}, got {samples}"
            )));
        }
        let mut mandated: Vec<f64> = self.real_axis_parameters().to_vec();
        if self.params.n % 2 == 1 {
            mandated.extend(self.imaginary_axis_parameters());
        }
        let range = self.range();
        // descending traversal: the u > 0 interval first in case two
        let intervals: Vec<(f64, f64)> = range.intervals.iter().rev().copied().collect();
        let mut out: Vec<CurveSample> = Vec::new();
        let mut perturbed = Vec::new();
        for (idx, &(lo, hi)) in intervals.iter().enumerate() {
            let step = (hi - lo) / (samples - 1) as f64;
            let mut grid: Vec<f64> = (0..samples)
                .map(|j| if j + 1 == samples { lo } else { hi - step * j as f64 })
                .collect();
            grid.extend(mandated.iter().copied().filter(|&m| m > lo && m < hi));
            grid.sort_by(|x, y| y.total_cmp(x));
            grid.dedup_by(|x, y| *x == *y);
            if idx == 1 {
                // f(-u0) = f(u0) already closes the upper interval
                grid.remove(0);
            }
            let mid = 0.5 * (lo + hi);
            for u in grid {
                match self.eval_inner(u)? {
                    Some(s) => out.push(s),
                    None => {
                        let shifted = u + 0.1 * step * (mid - u).signum();
                        let s = self.eval(shifted)?;
                        perturbed.push((u, shifted));
                        out.push(s);
                    }
                }
            }
        }
        Ok(LevelCurve::new(*self, out, perturbed))
    }
}

/// `f(u)` and `b(u)` for `(n, N, k)`.
pub fn eval_point(n: usize, level: f64, kind: EigenType, u: f64) -> Result<CurveSample> {
    CurveMap::new(n, level, kind)?.eval(u)
}

/// Trace `L(n, N, k)` with `samples` grid points per parameter interval.
pub fn trace_curve(n: usize, level: f64, kind: EigenType, samples: usize) -> Result<LevelCurve> {
    CurveMap::new(n, level, kind)?.trace(samples)
}

/// Half plane holding a self-intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfIntersection {
    pub rho: Complex64,
    pub u_pair: (f64, f64),
    pub half_plane: HalfPlane,
}

/// A cusp of a borderline (`N = n`) curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cusp {
    pub u: f64,
    pub rho: Complex64,
    /// `|b(u) + n|` at the refined parameter.
    pub gap: f64,
}

/// A traced closed curve, first sample repeated last. Immutable.
#[derive(Debug, Clone)]
pub struct LevelCurve {
    pub params: ProblemParams,
    pub map: CurveMap,
    pub samples: Vec<CurveSample>,
    /// Grid parameters moved off a vanishing denominator, `(from, to)`.
    pub perturbed: Vec<(f64, f64)>,
    points: Vec<Complex64>,
    grid: SegmentGrid,
}

impl LevelCurve {
    fn new(map: CurveMap, samples: Vec<CurveSample>, perturbed: Vec<(f64, f64)>) -> Self {
        let points: Vec<Complex64> = samples.iter().map(|s| s.rho).collect();
        let grid = SegmentGrid::new(&points);
        LevelCurve {
            params: map.params,
            map,
            samples,
            perturbed,
            points,
            grid,
        }
    }

    pub fn orientation(&self) -> &'static str {
        ORIENTATION
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_closed(&self) -> bool {
        self.points.first() == self.points.last()
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = crate::geometry::bounding_box(&self.points);
        (hi - lo).norm()
    }

    /// Parameter endpoints of segment `i`; the seam segment that jumps from
    /// `u0` to `-u0 - h` is given the continuous start `-u0`.
    pub fn segment_params(&self, i: usize) -> (f64, f64) {
        let a = self.samples[i].u;
        let b = self.samples[i + 1].u;
        if a * b < 0.0 {
            (-a, b)
        } else {
            (a, b)
        }
    }

    /// Number of sign changes of `Im rho` around the closed curve.
    pub fn real_axis_crossings(&self) -> usize {
        let signs: Vec<f64> = self
            .points
            .iter()
            .take(self.points.len() - 1)
            .filter(|p| p.im != 0.0)
            .map(|p| p.im.signum())
            .collect();
        if signs.is_empty() {
            return 0;
        }
        (0..signs.len())
            .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
            .count()
    }

    fn distance_on_segment(&self, i: usize, p: Complex64) -> f64 {
        let (ua, ub) = self.segment_params(i);
        let d = |u: f64| {
            self.map
                .eval(u)
                .map(|s| (s.rho - p).norm())
                .unwrap_or(f64::INFINITY)
        };
        let (_, fx) = golden_min(d, ua.min(ub), ua.max(ub), 1e-14);
        fx.min(d(ua)).min(d(ub))
    }

    /// Distance from `p` to the true curve near its closest polyline
    /// segment; the polyline distance is refined along the parameter when
    /// it exceeds `1e-12`.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        let Some((d, i)) = self.grid.nearest_segment(&self.points, p) else {
            return f64::INFINITY;
        };
        if d <= 1e-12 * (1.0 + p.norm()) {
            return d;
        }
        let s = self.segment_count();
        let mut best = d;
        for j in [i + s - 1, i, i + 1] {
            best = best.min(self.distance_on_segment(j % s, p));
        }
        best
    }

    /// All transverse self-crossings, refined on the true curve.
    pub fn self_intersections(&self) -> Vec<SelfIntersection> {
        let pts = &self.points;
        let scale = 1.0 + self.diameter();
        let raw = polyline_crossings(pts, &self.grid, 2, 1e-9);
        let mut found: Vec<SelfIntersection> = Vec::new();
        let mut seen: Vec<Complex64> = Vec::new();
        for (i, j, p, t, u) in raw {
            if seen.iter().any(|q| (q - p).norm() < 1e-9 * scale) {
                continue;
            }
            seen.push(p);
            if !self.transversal(i, j) {
                continue;
            }
            let (ia, ib) = self.segment_params(i);
            let (ja, jb) = self.segment_params(j);
            let start = (ia + t * (ib - ia), ja + u * (jb - ja));
            let (rho, ua, ub) = self.refine_crossing(start, p, (i, j));
            let half_plane = if rho.im >= 0.0 {
                HalfPlane::Upper
            } else {
                HalfPlane::Lower
            };
            if found.iter().any(|x| (x.rho - rho).norm() < 1e-7 * scale) {
                continue;
            }
            found.push(SelfIntersection {
                rho,
                u_pair: (ua, ub),
                half_plane,
            });
        }
        found
    }

    /// Whether the branches through segments `i` and `j` actually cross,
    /// judged on chords one vertex wider on each side.
    fn transversal(&self, i: usize, j: usize) -> bool {
        let s = self.segment_count();
        let v = |k: isize| self.points[k.rem_euclid(s as isize) as usize];
        let (i, j) = (i as isize, j as isize);
        let (a0, a1) = (v(i - 1), v(i + 2));
        let (b0, b1) = (v(j - 1), v(j + 2));
        let side = |p: Complex64, q: Complex64, r: Complex64| {
            let d = q - p;
            let w = r - p;
            (d.re * w.im - d.im * w.re).signum()
        };
        side(b0, b1, a0) * side(b0, b1, a1) < 0.0 && side(a0, a1, b0) * side(a0, a1, b1) < 0.0
    }

    /// Newton on `f(ua) = f(ub)` from the polyline estimate.
    fn refine_crossing(
        &self,
        start: (f64, f64),
        fallback: Complex64,
        segs: (usize, usize),
    ) -> (Complex64, f64, f64) {
        let exact = |k: usize| self.samples[k].rho;
        // crossings through coinciding grid points are already exact
        for a in [segs.0, segs.0 + 1] {
            for b in [segs.1, segs.1 + 1] {
                if exact(a) == exact(b) {
                    return (exact(a), self.samples[a].u, self.samples[b].u);
                }
            }
        }
        let f = |u: f64| self.map.eval(u).map(|s| s.rho).ok();
        let df = |u: f64| {
            let h = 1e-6;
            Some((f(u + h)? - f(u - h)?) / (2.0 * h))
        };
        let (mut ua, mut ub) = start;
        for _ in 0..40 {
            let (Some(fa), Some(fb)) = (f(ua), f(ub)) else { break };
            let r = fa - fb;
            if r.norm() < 1e-12 * (1.0 + fa.norm()) {
                return (0.5 * (fa + fb), ua, ub);
            }
            let (Some(da), Some(db)) = (df(ua), df(ub)) else { break };
            // [da, -db] (dua, dub)^T = -r, as a real 2x2 system
            let det = da.re * (-db.im) - (-db.re) * da.im;
            if det == 0.0 {
                break;
            }
            let dua = (-r.re * (-db.im) - (-db.re) * -r.im) / det;
            let dub = (da.re * -r.im - da.im * -r.re) / det;
            ua += dua;
            ub += dub;
            if (ua - start.0).abs() > 0.5 || (ub - start.1).abs() > 0.5 {
                break;
            }
        }
        (fallback, start.0, start.1)
    }

    /// Cusps of a borderline curve (`N = n`): local minima of `|b(u) + n|`
    /// below [`CUSP_TOL`]. Empty for other levels.
    pub fn cusps(&self) -> Vec<Cusp> {
        let n = self.params.n as f64;
        if self.params.level != n {
            return Vec::new();
        }
        let gap = |s: &CurveSample| (s.lambda + n).norm();
        let m = self.samples.len() - 1;
        let mut out: Vec<Cusp> = Vec::new();
        for i in 0..m {
            let prev = (i + m - 1) % m;
            let next = i + 1;
            let si = &self.samples[i];
            if self.map.is_real_axis_parameter(si.u) {
                continue;
            }
            let g = gap(si);
            if !(g <= gap(&self.samples[prev]) && g <= gap(&self.samples[next])) {
                continue;
            }
            let mut lo = self.samples[next].u;
            let mut hi = self.samples[prev].u;
            if lo * si.u < 0.0 || hi * si.u < 0.0 {
                // next to the seam; refine on the grid point's side only
                lo = if lo * si.u < 0.0 { si.u } else { lo };
                hi = if hi * si.u < 0.0 { si.u } else { hi };
            }
            let obj = |u: f64| {
                self.map
                    .eval(u)
                    .map(|s| gap(&s))
                    .unwrap_or(f64::INFINITY)
            };
            let (u, gu) = golden_min(obj, lo.min(hi), lo.max(hi), 1e-14);
            if gu < CUSP_TOL && out.iter().all(|c| (c.u - u).abs() > 1e-9) {
                if let Ok(s) = self.map.eval(u) {
                    out.push(Cusp { u, rho: s.rho, gap: gu });
                }
            }
        }
        out
    }
}

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

pub fn self_intersections(curve: &LevelCurve) -> Vec<SelfIntersection> {
    curve.self_intersections()
}

/// The on-axis self-intersection pair of an odd-`n` curve below `N = n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopPoints {
    pub kind: EigenType,
    pub upper: Complex64,
    pub lower: Complex64,
    /// `|f(-pi/2 - u0) - f(-pi/2 + u0)|`.
    pub pair_gap: f64,
}

/// Eigenvalue type whose curve self-intersects on the imaginary axis:
/// 1 for `n = 1 mod 4`, 2 for `n = 3 mod 4`.
pub fn loop_type(n: usize) -> EigenType {
    if n % 4 == 1 {
        EigenType::One
    } else {
        EigenType::Two
    }
}

pub fn loop_points(n: usize, level: f64) -> Result<LoopPoints> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::domain(format!("loop points need odd n >= 3, got {n}")));
    }
    let kind = loop_type(n);
    let map = CurveMap::new(n, level, kind)?;
    if map.level.case != CaseTag::CaseTwo || level >= n as f64 {
        return Err(Error::domain(format!(
            "loop points need N_min({n}) < N < {n}, got N = {level}"
        )));
    }
    let u0 = map.level.u0;
    let up1 = map.eval(-FRAC_PI_2 - u0)?.rho;
    let up2 = map.eval(-FRAC_PI_2 + u0)?.rho;
    let lo1 = map.eval(FRAC_PI_2 - u0)?.rho;
    let lo2 = map.eval(FRAC_PI_2 + u0)?.rho;
    let pair_gap = (up1 - up2).norm().max((lo1 - lo2).norm());
    let scale = 1.0 + up1.norm();
    if pair_gap > 1e-9 * scale {
        return Err(Error::Contract(format!(
            "loop parameters disagree by {pair_gap:e} at (n, N) = ({n}, {level})"
        )));
    }
    Ok(LoopPoints {
        kind,
        upper: up1,
        lower: lo1,
        pair_gap,
    })
}

/// Per-property maximum deviations of the curve symmetries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub n: usize,
    pub level: f64,
    /// Real-axis crossings of the type-1 and type-2 curves.
    pub real_axis_crossings: [usize; 2],
    /// `max dist(conj rho, L_k)` over samples of `L_k`.
    pub conjugation: [f64; 2],
    /// `max dist(-rho, L_1 u L_2)` over samples of the union.
    pub origin: f64,
    /// Odd `n`: `max dist(-conj rho, L_k)` over samples of `L_k`.
    pub imaginary_axis: Option<[f64; 2]>,
    /// Even `n`: `max dist(-conj rho, L_other)` over both curves.
    pub type_mirror: Option<f64>,
}

impl SymmetryReport {
    /// Largest deviation over every property checked.
    pub fn max_deviation(&self) -> f64 {
        let mut m = self.conjugation[0].max(self.conjugation[1]).max(self.origin);
        if let Some(a) = self.imaginary_axis {
            m = m.max(a[0]).max(a[1]);
        }
        if let Some(t) = self.type_mirror {
            m = m.max(t);
        }
        m
    }
}

/// Check the curve symmetries on curves traced with `samples` per interval.
pub fn symmetry_report(n: usize, level: f64, samples: usize) -> Result<SymmetryReport> {
    let c1 = trace_curve(n, level, EigenType::One, samples)?;
    let c2 = trace_curve(n, level, EigenType::Two, samples)?;
    let curves = [&c1, &c2];
    let worst = |from: &LevelCurve, to: &[&LevelCurve], g: &dyn Fn(Complex64) -> Complex64| {
        from.points()
            .iter()
            .map(|&p| {
                to.iter()
                    .map(|c| c.distance_to(g(p)))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    let conj = |p: Complex64| p.conj();
    let neg = |p: Complex64| -p;
    let mirror = |p: Complex64| -p.conj();
    let conjugation = [worst(&c1, &[&c1], &conj), worst(&c2, &[&c2], &conj)];
    let origin = worst(&c1, &curves, &neg).max(worst(&c2, &curves, &neg));
    let (imaginary_axis, type_mirror) = if n % 2 == 1 {
        (
            Some([worst(&c1, &[&c1], &mirror), worst(&c2, &[&c2], &mirror)]),
            None,
        )
    } else {
        (
            None,
            Some(worst(&c1, &[&c2], &mirror).max(worst(&c2, &[&c1], &mirror))),
        )
    };
    Ok(SymmetryReport {
        n,
        level,
        real_axis_crossings: [c1.real_axis_crossings(), c2.real_axis_crossings()],
        conjugation,
        origin,
        imaginary_axis,
        type_mirror,
    })
}
