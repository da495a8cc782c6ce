//! Cross-module check suites behind `kms-levels verify`.
//!
//! `Quick` runs in a couple of seconds on small matrices and coarse grids;
//! `Full` covers every anchor, the oracle sweeps at full size, and can write
//! the reference datasets to a directory.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chebyshev::{cheb_t, cheb_u, t_real, u_extrema, u_real, u_zeros};
use crate::cubic::{
    count_cubic, critical_data, cubic_level_curve, cubic_roots, discriminant, j_cubic_by_winding,
    m_matrix_check,
};
use crate::curve::{loop_points, trace_curve, LevelCurve};
use crate::io::{cubic_csv, curve_csv};
use crate::spectral::{count_exceeding, typed_spectrum};
use crate::thresholds::{n_min, EigenType};
use crate::topology::{j_from_polyline, OrientedPolyline};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub suite: Suite,
    /// Count with reversed curves; a correct build must then fail the
    /// j-agreement check.
    pub reverse_orientation: bool,
    /// Where `Full` writes its datasets.
    pub dataset_dir: Option<PathBuf>,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn new(suite: Suite) -> Self {
        VerifyOptions {
            suite,
            reverse_orientation: false,
            dataset_dir: None,
            seed: 20240611,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

fn fmt_list(zs: &[Complex64]) -> String {
    let items: Vec<String> = zs.iter().map(|z| format!("{:.6}", z)).collect();
    format!("[{}]", items.join(", "))
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

pub fn run(opts: &VerifyOptions) -> Report {
    let full = opts.suite == Suite::Full;
    let mut checks = vec![
        check("thresholds", thresholds(full)),
        check("double-eigenvalue", double_eigenvalue()),
        check("loop-points", loop_anchor(full)),
        check("curve-oracle", curve_oracle(full)),
        check("j-agreement", j_agreement(full, opts.reverse_orientation, opts.seed)),
        check("jordan-sweep", jordan_sweep(full)),
        check("cubic", cubic(full, opts.seed)),
        check("chebyshev", chebyshev(full, opts.seed)),
    ];
    if full {
        checks.push(check("large-level-circle", large_level()));
    }
    if let (true, Some(dir)) = (full, &opts.dataset_dir) {
        checks.push(check("datasets", write_datasets(dir)));
    }
    Report {
        suite: opts.suite,
        checks,
    }
}

/// Configurations of the curve/oracle and counting sweeps.
pub const ORACLE_CONFIGS: [(usize, f64, u8); 5] =
    [(5, 3.0, 1), (5, 30.0, 1), (8, 1.85, 2), (11, 5.0, 2), (12, 20.0, 2)];

fn configs(full: bool) -> &'static [(usize, f64, u8)] {
    if full {
        &ORACLE_CONFIGS
    } else {
        &[(5, 3.0, 1), (8, 1.85, 2)]
    }
}

fn thresholds(full: bool) -> Result<(bool, String)> {
    let n3 = n_min(3)?;
    let n5 = n_min(5)?;
    let n8 = n_min(8)?;
    let mut ok = (n3 - 1.0).abs() < 1e-10 && (n5 - 1.25).abs() < 1e-10 && (n8 - 1.833).abs() < 5e-4;
    let mut detail = format!("N_min(3) = {n3}, N_min(5) = {n5}, N_min(8) = {n8}");
    if full {
        let ratio = n_min(200)? / 200.0;
        ok &= (ratio - 0.21).abs() <= 0.005;
        detail += &format!(", N_min(200)/200 = {ratio:.6} (band 0.21 +- 0.005)");
    }
    Ok((ok, detail))
}

/// The two explicit type-1 eigenvalues of `K_5(rho)`.
pub fn explicit_type1_n5(rho: Complex64) -> [Complex64; 2] {
    let r2 = rho * rho;
    let base = 2.0 - r2 - r2 * r2;
    let disc = rho * (r2 - 1.0) * (r2 + 4.0).sqrt();
    [0.5 * (base + disc), 0.5 * (base - disc)]
}

fn double_eigenvalue() -> Result<(bool, String)> {
    let rho = Complex64::new(0.0, 2.0);
    let spec = typed_spectrum(5, rho)?;
    let minus5 = Complex64::new(-5.0, 0.0);
    let worst = spec.type1.iter().map(|l| (l - minus5).norm()).fold(0.0, f64::max);
    let explicit = explicit_type1_n5(rho);
    let worst_explicit = explicit.iter().map(|l| (l - minus5).norm()).fold(0.0, f64::max);
    Ok((
        spec.type1.len() == 2 && worst < 1e-6 && worst_explicit < 1e-6,
        format!("type-1 spectrum at 2i {}, explicit {}", fmt_list(&spec.type1), fmt_list(&explicit)),
    ))
}

fn loop_anchor(full: bool) -> Result<(bool, String)> {
    let lp = loop_points(5, 3.0)?;
    let target = Complex64::new(0.0, 2f64.sqrt());
    let mut ok = (lp.upper - target).norm() < 1e-6 && (lp.lower - target.conj()).norm() < 1e-6;
    let spec = typed_spectrum(5, target)?;
    let want = [Complex64::new(0.0, 3.0), Complex64::new(0.0, -3.0)];
    ok &= want
        .iter()
        .all(|w| spec.type1.iter().any(|l| (l - w).norm() < 1e-6));
    let mut detail = format!("upper {:.6}, type-1 at i*sqrt2 {}", lp.upper, fmt_list(&spec.type1));
    if full {
        let shrink = loop_points(5, 4.999)?;
        let d = (shrink.upper - Complex64::new(0.0, 2.0)).norm();
        ok &= d < 0.05;
        detail += &format!(", N = 4.999 upper at {:.3e} from 2i", d);
    }
    Ok((ok, detail))
}

/// Largest relative level gap of the oracle over the samples of a curve.
pub fn oracle_gap(curve: &LevelCurve) -> Result<f64> {
    let p = curve.params;
    let mut worst: f64 = 0.0;
    for s in &curve.samples {
        worst = worst.max(typed_spectrum(p.n, s.rho)?.level_gap(p.kind, p.level));
    }
    Ok(worst)
}

fn curve_oracle(full: bool) -> Result<(bool, String)> {
    let samples = if full { 64 } else { 32 };
    let mut ok = true;
    let mut parts = Vec::new();
    for &(n, level, k) in configs(full) {
        let c = trace_curve(n, level, EigenType::from_index(k)?, samples)?;
        let g = oracle_gap(&c)?;
        ok &= g < 1e-6;
        parts.push(format!("({n},{level},{k}) {g:.1e}"));
    }
    Ok((ok, parts.join("; ")))
}

/// `count` points off the curve where both the winding count and the
/// brute-force count are defined; a quarter are seeded next to the
/// self-intersections so that small loop components are hit.
pub fn probe_points(curve: &LevelCurve, count: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let p = curve.params;
    let poly = OrientedPolyline::from_curve(curve);
    let half = 0.7 * curve.diameter();
    let crossings = curve.self_intersections();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let seeded = !crossings.is_empty() && out.len() % 4 == 3;
        let z = if seeded {
            let x = crossings[rng.gen_range(0..crossings.len())].rho;
            let r = half * 10f64.powf(rng.gen_range(-3.5..-1.5));
            x + Complex64::from_polar(r, rng.gen_range(-PI..PI))
        } else {
            Complex64::new(rng.gen_range(-half..half), rng.gen_range(-half..half))
        };
        if j_from_polyline(&poly, z).is_err() && j_from_polyline(&poly.reversed(), z).is_err() {
            continue;
        }
        if count_exceeding(p.n, z, p.level, p.kind).is_err() {
            continue;
        }
        // keep clear of the chord error of the polyline
        if curve.distance_to(z) < 1e-6 * curve.diameter() {
            continue;
        }
        out.push(z);
    }
    out
}

fn j_agreement(full: bool, reverse: bool, seed: u64) -> Result<(bool, String)> {
    let (samples, points) = if full { (2000, 200) } else { (600, 60) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    let mut parts = Vec::new();
    for &(n, level, k) in configs(full) {
        let kind = EigenType::from_index(k)?;
        let c = trace_curve(n, level, kind, samples)?;
        let mut poly = OrientedPolyline::from_curve(&c);
        if reverse {
            poly = poly.reversed();
        }
        let mut seen = [0usize; 4];
        let mut bad = 0;
        let probes = probe_points(&c, points, &mut rng);
        for &z in &probes {
            let want = count_exceeding(n, z, level, kind)?;
            match j_from_polyline(&poly, z) {
                Ok(j) if j == want => seen[j.min(3)] += 1,
                _ => bad += 1,
            }
        }
        ok &= bad == 0 && probes.len() == points;
        if full && (n, k) == (8, 2) {
            ok &= seen.iter().all(|&s| s > 0);
        }
        parts.push(format!("({n},{level},{k}) {bad} mismatches, j histogram {seen:?}"));
    }
    Ok((ok, parts.join("; ")))
}

fn large_level() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, level, k) in [(5, 30.0, 1), (12, 200.0, 2)] {
        let c = trace_curve(n, level, EigenType::from_index(k)?, 2000)?;
        let r = level.powf(1.0 / (n as f64 - 1.0));
        let dev = c
            .points()
            .iter()
            .map(|p| (p.norm() - r).abs() / r)
            .fold(0.0, f64::max);
        ok &= dev < 0.05;
        parts.push(format!("({n},{level},{k}) max deviation {dev:.4}"));
    }
    Ok((ok, parts.join("; ")))
}

/// Outcome of the Jordan sweep for one `(n, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanRow {
    pub n: usize,
    pub kind: EigenType,
    /// Self-intersections at `N = n, 2n, 10n`.
    pub above: [usize; 3],
    /// The sampled level below `n` and its self-intersection count.
    pub below: (f64, usize),
}

impl JordanRow {
    pub fn consistent(&self) -> bool {
        self.above == [0, 0, 0] && self.below.1 >= 2
    }
}

pub fn jordan_row(n: usize, kind: EigenType, samples: usize) -> Result<JordanRow> {
    let nf = n as f64;
    let mut above = [0; 3];
    for (slot, level) in above.iter_mut().zip([nf, 2.0 * nf, 10.0 * nf]) {
        *slot = trace_curve(n, level, kind, samples)?.self_intersections().len();
    }
    let nm = n_min(n)?;
    let level = nm + 0.5 * (nf - nm);
    let below = trace_curve(n, level, kind, samples)?.self_intersections().len();
    Ok(JordanRow {
        n,
        kind,
        above,
        below: (level, below),
    })
}

fn jordan_sweep(full: bool) -> Result<(bool, String)> {
    let (top, samples) = if full { (12, 1000) } else { (6, 300) };
    let mut ok = true;
    let mut flags = Vec::new();
    for n in 3..=top {
        for kind in [EigenType::One, EigenType::Two] {
            let row = jordan_row(n, kind, samples)?;
            if !row.consistent() {
                // a conjecture flag unless the curve itself is wrong there
                let c = trace_curve(n, row.below.0, kind, 32)?;
                let g = oracle_gap(&c)?;
                ok &= g < 1e-6;
                flags.push(format!(
                    "n={n} k={} above {:?} below(N={:.3}) {} (oracle gap {g:.1e})",
                    kind.index(),
                    row.above,
                    row.below.0,
                    row.below.1
                ));
            }
        }
    }
    let detail = if flags.is_empty() {
        format!("n = 3..{top}: simple at N >= n, self-intersecting below")
    } else {
        format!("conjecture flags: {}", flags.join("; "))
    };
    Ok((ok, detail))
}

fn cubic(full: bool, seed: u64) -> Result<(bool, String)> {
    let alpha = 0.1;
    let cd = critical_data(alpha)?;
    let mut ok = cd.rho_c.iter().all(|&r| discriminant(r, alpha).1 < 1e-10);
    let mag = 2f64.powf(2.0 / 3.0) * cd.n0;
    ok &= cubic_roots(Complex64::new(-alpha * alpha, 0.0), alpha)?
        .iter()
        .all(|r| (r.norm() - mag).abs() < 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let points = if full { 200 } else { 50 };
    let mut mismatches = 0;
    for f in [0.5, 1.0, 1.4] {
        let level = f * cd.n0;
        let curve = cubic_level_curve(alpha, level, if full { 4000 } else { 1000 })?;
        ok &= j_cubic_by_winding(&curve, Complex64::new(-0.01, 0.0))? == 3;
        let mut got = 0;
        while got < points {
            let z = Complex64::new(-alpha * alpha, 0.0)
                + Complex64::from_polar(10.0 * cd.n0 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
            let (Ok(j), Ok(c)) = (j_cubic_by_winding(&curve, z), count_cubic(z, alpha, level)) else {
                continue;
            };
            got += 1;
            if j != c {
                mismatches += 1;
            }
        }
    }
    ok &= mismatches == 0;
    for _ in 0..20 {
        let rho = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        ok &= m_matrix_check(rho, alpha).unwrap_or(false);
    }
    Ok((ok, format!("N0 = {:.6e}, {mismatches} winding mismatches", cd.n0)))
}

fn chebyshev(full: bool, seed: u64) -> Result<(bool, String)> {
    let trials = if full { 10_000 } else { 1000 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc4eb);
    let mut failures = 0usize;
    for _ in 0..trials {
        let k = rng.gen_range(0..=20usize);
        let x = rng.gen_range(-1.0..=1.0);
        if u_real(k, x).abs() > k as f64 + 1.0 + 1e-9 || t_real(k, x).abs() > 1.0 + 1e-12 {
            failures += 1;
        }
        if k >= 1 {
            let a = rng.gen_range(1.0..3.0);
            let b = a + rng.gen_range(1e-6..2.0);
            if !(t_real(k, a) < t_real(k, b) && u_real(k, a) < u_real(k, b)) {
                failures += 1;
            }
            let z = Complex64::from_polar(rng.gen_range(0.0..=2.0), rng.gen_range(-PI..PI));
            let sum: Complex64 = (0..=k).map(|m| z.powu(m as u32) * cheb_t(k - m, z)).sum();
            let u = cheb_u(k, z);
            if (sum - u).norm() > 1e-10 * (1.0 + u.norm()) {
                failures += 1;
            }
            let rec = z * cheb_u(k - 1, z) + cheb_t(k, z);
            if (rec - u).norm() > 1e-12 * (1.0 + u.norm()) {
                failures += 1;
            }
            let t = rng.gen_range(-10.0..10.0f64);
            if t.sin() != 0.0 && ((k as f64 * t).sin() / t.sin()).abs() > k as f64 + 1e-9 {
                failures += 1;
            }
        }
    }
    for k in 2..=20 {
        let z = u_zeros(k)?.zeros;
        let e = u_extrema(k)?.extrema;
        if !(0..k - 1).all(|m| z[m] < e[m] && e[m] < z[m + 1]) {
            failures += 1;
        }
        if (u_real(k, e[0]).abs() - u_real(k, e[k - 2]).abs()).abs() > 1e-12 * u_real(k, e[0]).abs() {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{trials} random trials, {failures} failures")))
}

fn write_datasets(dir: &PathBuf) -> Result<(bool, String)> {
    let write = |name: &str, text: String| -> std::result::Result<(), String> {
        std::fs::write(dir.join(name), text).map_err(|e| format!("{name}: {e}"))
    };
    let mut written = Vec::new();
    let mut errors = Vec::new();
    if let Err(e) = std::fs::create_dir_all(dir) {
        return Ok((false, format!("{}: {e}", dir.display())));
    }
    let kms: [(&str, usize, f64, u8); 12] = [
        ("borderline_n5_k1", 5, 5.0, 1),
        ("borderline_n5_k2", 5, 5.0, 2),
        ("level_n5_N3_k1", 5, 3.0, 1),
        ("level_n5_N30_k1", 5, 30.0, 1),
        ("level_n12_N12_k2", 12, 12.0, 2),
        ("level_n12_N20_k2", 12, 20.0, 2),
        ("level_n12_N30_k2", 12, 30.0, 2),
        ("level_n12_N70_k2", 12, 70.0, 2),
        ("level_n12_N200_k2", 12, 200.0, 2),
        ("level_n11_N5_k2", 11, 5.0, 2),
        ("level_n11_N2.8_k2", 11, 2.8, 2),
        ("level_n8_N1.85_k2", 8, 1.85, 2),
    ];
    for (name, n, level, k) in kms {
        let c = trace_curve(n, level, EigenType::from_index(k)?, 2000)?;
        match write(&format!("{name}.csv"), curve_csv(&c)) {
            Ok(()) => written.push(name.to_string()),
            Err(e) => errors.push(e),
        }
    }
    let n0 = critical_data(0.1)?.n0;
    for (tag, f) in [("0.5", 0.5), ("1", 1.0), ("1.4", 1.4)] {
        let c = cubic_level_curve(0.1, f * n0, 4000)?;
        let name = format!("cubic_alpha0.1_N{tag}N0");
        match write(&format!("{name}.csv"), cubic_csv(&c)) {
            Ok(()) => written.push(name),
            Err(e) => errors.push(e),
        }
    }
    Ok((
        errors.is_empty(),
        if errors.is_empty() {
            format!("{} files in {}", written.len(), dir.display())
        } else {
            errors.join("; ")
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let r = run(&VerifyOptions::new(Suite::Quick));
        assert!(r.passed(), "{:#?}", r.checks);
    }

    #[test]
    fn reversed_orientation_is_caught() {
        let mut opts = VerifyOptions::new(Suite::Quick);
        opts.reverse_orientation = true;
        let r = run(&opts);
        assert_eq!(r.failures(), vec!["j-agreement"]);
    }
}
