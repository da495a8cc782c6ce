//! Planar helpers on complex-plane polylines: segment crossings, distances
//! and a uniform grid for pruning segment-pair tests.

use std::collections::HashMap;

use num_complex::Complex64;

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Transverse crossing of segments `a0-a1` and `b0-b1`.
///
/// Returns the crossing point and the fractional positions along each
/// segment. Touching at endpoints and collinear overlap are not crossings.
pub fn segment_crossing(
    a0: Complex64,
    a1: Complex64,
    b0: Complex64,
    b1: Complex64,
) -> Option<(Complex64, f64, f64)> {
    let da = a1 - a0;
    let db = b1 - b0;
    let denom = cross(da, db);
    if denom == 0.0 {
        return None;
    }
    let w = b0 - a0;
    let t = cross(w, db) / denom;
    let s = cross(w, da) / denom;
    if t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0 {
        Some((a0 + da * t, t, s))
    } else {
        None
    }
}

/// Distance from `p` to segment `a-b` and the fractional position of the
/// closest point.
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> (f64, f64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a).re * d.re + (p - a).im * d.im) / len2
    }
    .clamp(0.0, 1.0);
    ((a + d * t - p).norm(), t)
}

/// Minimum distance from `p` to an open polyline, with the closest segment.
pub fn polyline_distance(points: &[Complex64], p: Complex64) -> (f64, usize) {
    points
        .windows(2)
        .enumerate()
        .map(|(i, w)| (point_segment_distance(p, w[0], w[1]).0, i))
        .fold((f64::INFINITY, 0), |acc, x| if x.0 < acc.0 { x } else { acc })
}

/// Axis-aligned bounding box `(min, max)` of a point set.
pub fn bounding_box(points: &[Complex64]) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.re = lo.re.min(p.re);
        lo.im = lo.im.min(p.im);
        hi.re = hi.re.max(p.re);
        hi.im = hi.im.max(p.im);
    }
    (lo, hi)
}

/// Transverse crossing allowing the crossing point up to `tol` past either
/// segment end, so crossings through shared grid points are not lost.
pub fn tolerant_crossing(
    a0: Complex64,
    a1: Complex64,
    b0: Complex64,
    b1: Complex64,
    tol: f64,
) -> Option<(Complex64, f64, f64)> {
    if let Some(hit) = segment_crossing(a0, a1, b0, b1) {
        return Some(hit);
    }
    let da = a1 - a0;
    let db = b1 - b0;
    let denom = da.re * db.im - da.im * db.re;
    if denom == 0.0 {
        return None;
    }
    let w = b0 - a0;
    let t = (w.re * db.im - w.im * db.re) / denom;
    let s = (w.re * da.im - w.im * da.re) / denom;
    let inside = |x: f64| x >= -tol && x <= 1.0 + tol;
    (inside(t) && inside(s)).then(|| (a0 + da * t, t.clamp(0.0, 1.0), s.clamp(0.0, 1.0)))
}

/// Crossings between segments of a closed polyline more than `window`
/// segments apart (cyclically), as `(i, j, point, t_i, t_j)` with `i < j`.
pub fn polyline_crossings(
    points: &[Complex64],
    grid: &SegmentGrid,
    window: usize,
    tol: f64,
) -> Vec<(usize, usize, Complex64, f64, f64)> {
    let s = points.len() - 1;
    let mut out = Vec::new();
    for (i, j) in grid.candidate_pairs() {
        let d = j - i;
        if d.min(s - d) <= window {
            continue;
        }
        if let Some((p, t, u)) = tolerant_crossing(points[i], points[i + 1], points[j], points[j + 1], tol) {
            out.push((i, j, p, t, u));
        }
    }
    out
}

/// Uniform spatial hash of the segments of a polyline.
#[derive(Debug, Clone)]
pub struct SegmentGrid {
    origin: Complex64,
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl SegmentGrid {
    /// Index segments `points[i]-points[i+1]`.
    pub fn new(points: &[Complex64]) -> Self {
        let (lo, hi) = bounding_box(points);
        let segs = points.len().saturating_sub(1).max(1);
        let total: f64 = points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        let diag = (hi - lo).norm();
        // a few segment lengths per cell
        let mut cell = 4.0 * total / segs as f64;
        if !(cell > 0.0) || !cell.is_finite() {
            cell = diag.max(1.0);
        }
        let mut grid = SegmentGrid {
            origin: lo,
            cell,
            cells: HashMap::new(),
        };
        for (i, w) in points.windows(2).enumerate() {
            let (a, b) = grid.cell_range(w[0], w[1]);
            for cx in a.0..=b.0 {
                for cy in a.1..=b.1 {
                    grid.cells.entry((cx, cy)).or_default().push(i);
                }
            }
        }
        grid
    }

    fn cell_of(&self, p: Complex64) -> (i64, i64) {
        (
            ((p.re - self.origin.re) / self.cell).floor() as i64,
            ((p.im - self.origin.im) / self.cell).floor() as i64,
        )
    }

    fn cell_range(&self, a: Complex64, b: Complex64) -> ((i64, i64), (i64, i64)) {
        let ca = self.cell_of(a);
        let cb = self.cell_of(b);
        ((ca.0.min(cb.0), ca.1.min(cb.1)), (ca.0.max(cb.0), ca.1.max(cb.1)))
    }

    /// Every unordered pair of segments sharing a cell, each reported once.
    pub fn candidate_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for list in self.cells.values() {
            for (x, &i) in list.iter().enumerate() {
                for &j in &list[x + 1..] {
                    pairs.push((i.min(j), i.max(j)));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Segments within `radius` cells-worth of `p`, searched ring by ring
    /// until the nearest is certain; falls back to `None` when the grid
    /// holds nothing nearby.
    pub fn nearest_segment(&self, points: &[Complex64], p: Complex64) -> Option<(f64, usize)> {
        let c = self.cell_of(p);
        let mut best: Option<(f64, usize)> = None;
        let max_ring = 64;
        for ring in 0..=max_ring {
            for cx in c.0 - ring..=c.0 + ring {
                for cy in c.1 - ring..=c.1 + ring {
                    if (cx - c.0).abs() != ring && (cy - c.1).abs() != ring {
                        continue;
                    }
                    if let Some(list) = self.cells.get(&(cx, cy)) {
                        for &i in list {
                            let d = point_segment_distance(p, points[i], points[i + 1]).0;
                            if best.is_none_or(|(bd, _)| d < bd) {
                                best = Some((d, i));
                            }
                        }
                    }
                }
            }
            if let Some((d, _)) = best {
                // everything outside this ring is at least `ring * cell` away
                if d <= ring as f64 * self.cell {
                    return best;
                }
            }
        }
        best
    }
}
