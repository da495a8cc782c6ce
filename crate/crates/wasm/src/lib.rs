//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every exported function returns a JSON string. The plain Rust functions
//! behind them are public so they can be tested off the browser.

use kms_levels::cubic::{count_cubic, critical_data, cubic_level_curve, j_cubic_by_winding};
use kms_levels::curve::CurveMap;
use kms_levels::io::{cubic_svg, curve_svg};
use kms_levels::spectral::count_exceeding;
use kms_levels::thresholds::EigenType;
use kms_levels::topology::j_by_winding;
use kms_levels::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper bound on samples accepted from the page.
pub const MAX_SAMPLES: usize = 20_000;

#[derive(Debug, Serialize)]
pub struct CurveView {
    pub svg: String,
    pub samples: usize,
    pub real_axis_crossings: usize,
    pub self_intersections: Vec<[f64; 2]>,
    pub cusps: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize)]
pub struct CountView {
    pub j_by_winding: usize,
    pub count_exceeding: usize,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct CubicView {
    pub svg: String,
    pub n0: f64,
    pub level: f64,
    pub orientation: String,
    pub count: Option<usize>,
    pub j_by_winding: Option<usize>,
}

fn check_samples(samples: usize) -> Result<(), String> {
    if samples > MAX_SAMPLES {
        return Err(format!("at most {MAX_SAMPLES} samples, got {samples}"));
    }
    Ok(())
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn curve_view(n: usize, level: f64, kind: u8, samples: usize) -> Result<CurveView, String> {
    check_samples(samples)?;
    let kind = EigenType::from_index(kind).map_err(|e| e.to_string())?;
    let curve = CurveMap::new(n, level, kind)
        .and_then(|m| m.trace(samples))
        .map_err(|e| e.to_string())?;
    let cusps = if level == n as f64 {
        curve.cusps().iter().map(|c| pair(c.rho)).collect()
    } else {
        Vec::new()
    };
    Ok(CurveView {
        svg: curve_svg(&curve),
        samples: curve.samples.len(),
        real_axis_crossings: curve.real_axis_crossings(),
        self_intersections: curve.self_intersections().iter().map(|x| pair(x.rho)).collect(),
        cusps,
    })
}

pub fn count_view(n: usize, level: f64, kind: u8, re: f64, im: f64, samples: usize) -> Result<CountView, String> {
    check_samples(samples)?;
    let kind = EigenType::from_index(kind).map_err(|e| e.to_string())?;
    let rho = Complex64::new(re, im);
    let run = || -> kms_levels::Result<CountView> {
        let curve = CurveMap::new(n, level, kind)?.trace(samples)?;
        let j = j_by_winding(&curve, rho)?;
        let c = count_exceeding(n, rho, level, kind)?;
        Ok(CountView {
            j_by_winding: j,
            count_exceeding: c,
            agree: j == c,
        })
    };
    run().map_err(|e| e.to_string())
}

/// `level` is in units of `N0(alpha)`.
pub fn cubic_view(alpha: f64, level: f64, samples: usize, probe: Option<(f64, f64)>) -> Result<CubicView, String> {
    check_samples(samples)?;
    let run = || -> kms_levels::Result<CubicView> {
        let n0 = critical_data(alpha)?.n0;
        let curve = cubic_level_curve(alpha, level * n0, samples)?;
        let (count, j) = match probe {
            Some((re, im)) => {
                let rho = Complex64::new(re, im);
                (
                    Some(count_cubic(rho, alpha, curve.level)?),
                    Some(j_cubic_by_winding(&curve, rho)?),
                )
            }
            None => (None, None),
        };
        Ok(CubicView {
            svg: cubic_svg(&curve),
            n0,
            level: curve.level,
            orientation: curve.orientation.as_str().to_string(),
            count,
            j_by_winding: j,
        })
    };
    run().map_err(|e| e.to_string())
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn trace_curve(n: usize, level: f64, kind: u8, samples: usize) -> Result<String, JsValue> {
    to_js(curve_view(n, level, kind, samples))
}

#[wasm_bindgen]
pub fn count_at(n: usize, level: f64, kind: u8, re: f64, im: f64, samples: usize) -> Result<String, JsValue> {
    to_js(count_view(n, level, kind, re, im, samples))
}

/// Pass `NaN` for `re` to skip the probe point.
#[wasm_bindgen]
pub fn cubic_curve(alpha: f64, level: f64, samples: usize, re: f64, im: f64) -> Result<String, JsValue> {
    let probe = (!re.is_nan()).then_some((re, im));
    to_js(cubic_view(alpha, level, samples, probe))
}
