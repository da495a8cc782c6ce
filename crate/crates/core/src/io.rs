//! CSV and SVG serialization of traced curves.
//!
//! CSV files carry `#`-prefixed `key=value` metadata lines, one header row
//! and one row per sample in traversal order. Every number is written with
//! 17 significant digits, so parsing returns the exact doubles.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cubic::CubicLevelCurve;
use crate::curve::{CurveSample, LevelCurve};
use crate::geometry::bounding_box;
use crate::{Error, Result};

pub const CURVE_COLUMNS: [&str; 7] = [
    "u",
    "v",
    "re_rho",
    "im_rho",
    "re_lambda",
    "im_lambda",
    "abs_lambda",
];

pub const CUBIC_COLUMNS: [&str; 6] = [
    "theta",
    "re_rho",
    "im_rho",
    "re_lambda",
    "im_lambda",
    "abs_lambda",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_table(meta: &[(String, String)], columns: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = String::new();
    if !meta.is_empty() {
        let line: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "# {}", line.join(" "));
    }
    let _ = writeln!(out, "{}", columns.join(","));
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(num).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// CSV text of a KMS level curve.
pub fn curve_csv(curve: &LevelCurve) -> String {
    let p = curve.params;
    let meta = vec![
        ("n".to_string(), p.n.to_string()),
        ("N".to_string(), p.level.to_string()),
        ("k".to_string(), p.kind.index().to_string()),
        ("orientation".to_string(), curve.orientation().to_string()),
    ];
    let rows = curve.samples.iter().map(|s| {
        vec![
            s.u,
            s.v,
            s.rho.re,
            s.rho.im,
            s.lambda.re,
            s.lambda.im,
            s.lambda.norm(),
        ]
    });
    write_table(&meta, &CURVE_COLUMNS, rows)
}

/// CSV text of a cubic level curve.
pub fn cubic_csv(curve: &CubicLevelCurve) -> String {
    let meta = vec![
        ("alpha".to_string(), curve.alpha.to_string()),
        ("N".to_string(), curve.level.to_string()),
        ("orientation".to_string(), curve.orientation.as_str().to_string()),
    ];
    let rows = curve.samples.iter().map(|s| {
        vec![
            s.theta,
            s.rho.re,
            s.rho.im,
            s.lambda.re,
            s.lambda.im,
            s.lambda.norm(),
        ]
    });
    write_table(&meta, &CUBIC_COLUMNS, rows)
}

/// A parsed CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Rows of a KMS curve file as samples.
    pub fn curve_samples(&self) -> Result<Vec<CurveSample>> {
        if self.columns != CURVE_COLUMNS {
            return Err(Error::Format(format!(
                "expected columns {}, got {}",
                CURVE_COLUMNS.join(","),
                self.columns.join(",")
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|r| CurveSample {
                u: r[0],
                v: r[1],
                rho: Complex64::new(r[2], r[3]),
                lambda: Complex64::new(r[4], r[5]),
            })
            .collect())
    }
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut meta = Vec::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for item in rest.split_whitespace() {
                if let Some((k, v)) = item.split_once('=') {
                    meta.push((k.to_string(), v.to_string()));
                }
            }
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        match &columns {
            None => columns = Some(cells.iter().map(|c| c.to_string()).collect()),
            Some(cols) => {
                if cells.len() != cols.len() {
                    return Err(Error::Format(format!(
                        "line {}: {} fields, expected {}",
                        lineno + 1,
                        cells.len(),
                        cols.len()
                    )));
                }
                let row = cells
                    .iter()
                    .map(|c| {
                        c.parse::<f64>().map_err(|e| {
                            Error::Format(format!("line {}: {c:?}: {e}", lineno + 1))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                rows.push(row);
            }
        }
    }
    let columns = columns.ok_or_else(|| Error::Format("missing header row".into()))?;
    Ok(CsvTable {
        meta,
        columns,
        rows,
    })
}

/// Parse `a+bi` style complex numbers: `1.5`, `-2i`, `i`, `0.3 - 1e-2i`,
/// `1+i`. Whitespace is ignored.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Format(format!("cannot parse {text:?} as a complex number a+bi"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Marker drawn as a circle on an SVG plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marker {
    SelfIntersection(Complex64),
    Cusp(Complex64),
}

/// SVG units per unit of `rho`: one unit is 0.01.
const SVG_SCALE: f64 = 100.0;

/// Standalone SVG of a closed curve with axes and markers.
pub fn svg_plot(points: &[Complex64], markers: &[Marker], title: &str) -> String {
    let (lo, hi) = bounding_box(points);
    let span = (hi - lo).re.max((hi - lo).im).max(1e-3);
    let pad = 0.08 * span;
    let (x0, x1) = ((lo.re - pad) * SVG_SCALE, (hi.re + pad) * SVG_SCALE);
    let (y0, y1) = (-(hi.im + pad) * SVG_SCALE, -(lo.im - pad) * SVG_SCALE);
    let stroke = span * SVG_SCALE / 400.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}" width="640" height="{:.0}">"#,
        x0,
        y0,
        x1 - x0,
        y1 - y0,
        640.0 * (y1 - y0) / (x1 - x0)
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        r##"<g stroke="#999" stroke-width="{:.4}">"##,
        stroke * 0.6
    );
    if y0 <= 0.0 && y1 >= 0.0 {
        let _ = writeln!(out, r#"<line x1="{x0:.3}" y1="0" x2="{x1:.3}" y2="0"/>"#);
    }
    if x0 <= 0.0 && x1 >= 0.0 {
        let _ = writeln!(out, r#"<line x1="0" y1="{y0:.3}" x2="0" y2="{y1:.3}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = write!(
            d,
            "{}{:.3} {:.3}",
            if i == 0 { "M" } else { " L" },
            p.re * SVG_SCALE,
            -p.im * SVG_SCALE
        );
    }
    let _ = writeln!(
        out,
        r##"<path d="{d}" fill="none" stroke="#1f4e9c" stroke-width="{stroke:.4}"/>"##
    );
    for m in markers {
        let (p, color) = match m {
            Marker::SelfIntersection(p) => (p, "#c0392b"),
            Marker::Cusp(p) => (p, "#27ae60"),
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.4}" fill="none" stroke="{color}" stroke-width="{:.4}"/>"#,
            p.re * SVG_SCALE,
            -p.im * SVG_SCALE,
            stroke * 4.0,
            stroke
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG of a KMS curve with its self-intersections and cusps marked.
pub fn curve_svg(curve: &LevelCurve) -> String {
    let mut markers: Vec<Marker> = curve
        .self_intersections()
        .into_iter()
        .map(|x| Marker::SelfIntersection(x.rho))
        .collect();
    markers.extend(curve.cusps().into_iter().map(|c| Marker::Cusp(c.rho)));
    let p = curve.params;
    svg_plot(
        curve.points(),
        &markers,
        &format!("n={} N={} k={}", p.n, p.level, p.kind.index()),
    )
}

pub fn cubic_svg(curve: &CubicLevelCurve) -> String {
    let markers: Vec<Marker> = curve
        .self_crossings()
        .into_iter()
        .map(Marker::SelfIntersection)
        .collect();
    svg_plot(
        curve.points(),
        &markers,
        &format!("cubic alpha={} N={}", curve.alpha, curve.level),
    )
}
