//! Winding numbers of closed polylines and the eigenvalue counts derived
//! from them.

use num_complex::Complex64;

use crate::curve::LevelCurve;
use crate::geometry::{bounding_box, polyline_distance};
use crate::{Error, Result};

/// Default guard distance, relative to the curve diameter.
pub const GUARD_REL: f64 = 1e-7;

/// Largest accepted distance of the angle sum from an integer (in turns).
pub const MAX_RESIDUAL: f64 = 0.01;

/// A closed polyline, first point repeated last.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPolyline {
    points: Vec<Complex64>,
    /// Producer's traversal convention, e.g. `decreasing-u`.
    pub orientation: String,
}

impl OrientedPolyline {
    pub fn new(points: Vec<Complex64>, orientation: impl Into<String>) -> Result<Self> {
        if points.first() != points.last() {
            return Err(Error::Contract("polyline is not closed".into()));
        }
        let mut distinct = points.clone();
        distinct.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        distinct.dedup();
        if distinct.len() < 4 {
            return Err(Error::Contract(format!(
                "polyline needs at least 4 distinct points, got {}",
                distinct.len()
            )));
        }
        Ok(OrientedPolyline {
            points,
            orientation: orientation.into(),
        })
    }

    pub fn from_curve(curve: &LevelCurve) -> Self {
        OrientedPolyline {
            points: curve.points().to_vec(),
            orientation: curve.orientation().to_string(),
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        OrientedPolyline {
            points,
            orientation: format!("reversed {}", self.orientation),
        }
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = bounding_box(&self.points);
        (hi - lo).norm()
    }

    pub fn default_guard(&self) -> f64 {
        GUARD_REL * self.diameter()
    }
}

/// Winding number of `curve` about `point` with the default guard.
pub fn winding_number(curve: &OrientedPolyline, point: Complex64) -> Result<i64> {
    winding_number_guarded(curve, point, curve.default_guard())
}

/// Winding number by summing the turning angles of `p_i - point`.
pub fn winding_number_guarded(curve: &OrientedPolyline, point: Complex64, guard: f64) -> Result<i64> {
    let (d, _) = polyline_distance(&curve.points, point);
    if !(d > guard) {
        return Err(Error::Guard(format!(
            "point {point} is {d:e} from the curve (guard {guard:e})"
        )));
    }
    let total: f64 = curve
        .points
        .windows(2)
        .map(|w| ((w[1] - point) / (w[0] - point)).arg())
        .sum();
    let turns = total / std::f64::consts::TAU;
    let wind = turns.round();
    let residual = (turns - wind).abs();
    if residual >= MAX_RESIDUAL {
        return Err(Error::Sampling(format!(
            "angle sum is {turns} turns about {point}"
        )));
    }
    Ok(wind as i64)
}

/// `1 - wind` for a curve in the decreasing-u orientation: the number of
/// type-k eigenvalues of modulus above the level.
pub fn j_by_winding(curve: &LevelCurve, rho: Complex64) -> Result<usize> {
    j_from_polyline(&OrientedPolyline::from_curve(curve), rho)
}

pub fn j_from_polyline(poly: &OrientedPolyline, rho: Complex64) -> Result<usize> {
    let j = 1 - winding_number(poly, rho)?;
    usize::try_from(j).map_err(|_| {
        Error::Contract(format!(
            "negative count {j} at {rho}: curve orientation ({}) is not the expected one",
            poly.orientation
        ))
    })
}
