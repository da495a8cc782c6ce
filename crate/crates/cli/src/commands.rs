use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use kms_levels::cubic::{count_cubic, critical_data, cubic_level_curve, cubic_roots, j_cubic_by_winding};
use kms_levels::curve::CurveMap;
use kms_levels::io::{cubic_csv, cubic_svg, curve_csv, curve_svg};
use kms_levels::spectral::{count_exceeding, typed_spectrum};
use kms_levels::thresholds::{case_tag, n_min, u0, v0, v_im, x0, CaseTag};
use kms_levels::topology::j_by_winding;
use kms_levels::verify::{run, Suite, VerifyOptions};
use kms_levels::{Complex64, Error};

use crate::config::{parse_rho, CubicArgs, CurveArgs, Format, LevelArgs, OutputArgs, RunConfig, SuiteArg};
use crate::CliError;

type CmdResult = Result<ExitCode, CliError>;

fn fmt_c(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Summary lines go to stdout when the data goes to a file, else stderr.
fn summary(output: &OutputArgs, line: &str) {
    if output.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

pub fn thresholds(n: usize, level: Option<f64>) -> CmdResult {
    if n < 3 {
        return Err(CliError::validation(format!("--n must be >= 3, got {n}")));
    }
    let nm = n_min(n)?;
    println!("N_min({n}) = {nm}");
    let Some(level) = level else {
        return Ok(ExitCode::SUCCESS);
    };
    if level <= nm {
        return Err(CliError::validation(format!("N = {level} must exceed N_min({n}) = {nm}")));
    }
    match case_tag(n, level) {
        CaseTag::CaseOne => {
            println!("case 1 (N > n): u ranges over [-pi, pi]");
            println!("v0 = {}", v0(n, level)?);
        }
        CaseTag::CaseTwo => {
            println!("case 2 (N_min < N <= n): u0 <= |u| <= pi - u0");
            println!("x0 = {}", x0(n, level)?);
            println!("u0 = {}", u0(n, level)?);
        }
    }
    if n % 2 == 1 && level >= 1.0 && level < n as f64 {
        println!("v_im = {}", v_im(n, level)?);
    }
    Ok(ExitCode::SUCCESS)
}

pub fn curve(args: &CurveArgs) -> CmdResult {
    let cfg = RunConfig::from_args(&args.level, args.samples)?;
    let map = CurveMap::with_tolerances(cfg.n, cfg.level, cfg.kind, cfg.tol)?;
    let curve = map.trace(cfg.samples)?;
    let text = match args.output.format {
        Format::Csv => curve_csv(&curve),
        Format::Svg => curve_svg(&curve),
    };
    emit(&args.output, &text)?;
    let xs = curve.self_intersections();
    let mut line = format!(
        "n={} N={} k={}: {} samples, {} real-axis crossings, {} self-intersections",
        cfg.n,
        cfg.level,
        cfg.kind.index(),
        curve.samples.len(),
        curve.real_axis_crossings(),
        xs.len()
    );
    if cfg.level == cfg.n as f64 {
        line += &format!(", {} cusps", curve.cusps().len());
    }
    if !curve.perturbed.is_empty() {
        line += &format!(", {} grid points perturbed", curve.perturbed.len());
    }
    summary(&args.output, &line);
    Ok(ExitCode::SUCCESS)
}

pub fn spectrum(n: usize, rho: &str) -> CmdResult {
    let rho = parse_rho(rho)?;
    let mut spec = typed_spectrum(n, rho)?;
    for vals in [&mut spec.type1, &mut spec.type2] {
        vals.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    }
    println!("K_{n}({}):", fmt_c(rho));
    for (name, vals) in [("type 1", &spec.type1), ("type 2", &spec.type2)] {
        println!("{name}:");
        for l in vals.iter() {
            println!("  {}  |lambda| = {:.12}", fmt_c(*l), l.norm());
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn count(args: &LevelArgs, rho: &str, samples: usize) -> CmdResult {
    let cfg = RunConfig::from_args(args, samples)?;
    let rho = parse_rho(rho)?;
    let map = CurveMap::with_tolerances(cfg.n, cfg.level, cfg.kind, cfg.tol)?;
    let curve = map.trace(cfg.samples)?;
    let attempt = |z: Complex64| -> Result<(usize, usize), Error> {
        Ok((
            j_by_winding(&curve, z)?,
            count_exceeding(cfg.n, z, cfg.level, cfg.kind)?,
        ))
    };
    let (z, (j, c)) = match attempt(rho) {
        Ok(v) => (rho, v),
        Err(e @ (Error::Guard(_) | Error::Ambiguous(_))) => {
            println!("note: {e}");
            let step = 1e-4 * curve.diameter().max(1.0);
            let z = rho + Complex64::new(step, step);
            println!("perturbed rho to {}", fmt_c(z));
            (z, attempt(z)?)
        }
        Err(e) => return Err(e.into()),
    };
    println!("rho = {}", fmt_c(z));
    println!("j_by_winding = {j}");
    println!("count_exceeding = {c}");
    if j == c {
        println!("agree: yes");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("agree: no");
        Err(CliError::Numerical(format!("winding count {j} differs from direct count {c}")))
    }
}

pub fn cubic(args: &CubicArgs) -> CmdResult {
    let cd = critical_data(args.alpha)?;
    println!("alpha = {}, N0 = {}", args.alpha, cd.n0);
    for (m, (r, l)) in [-1, 0, 1].iter().zip(cd.rho_c.iter().zip(&cd.lambda_c)) {
        println!("rho_c({m}) = {}  lambda_c = {}", fmt_c(*r), fmt_c(*l));
    }
    let level = args.level.map(|l| if args.n0_units { l * cd.n0 } else { l });
    let curve = match level {
        Some(l) => Some(cubic_level_curve(args.alpha, l, args.samples)?),
        None => None,
    };
    if let Some(text) = &args.rho {
        let rho = parse_rho(text)?;
        for r in cubic_roots(rho, args.alpha)? {
            println!("root {}  |lambda| = {:.12}", fmt_c(r), r.norm());
        }
        if let (Some(l), Some(c)) = (level, &curve) {
            let j = j_cubic_by_winding(c, rho)?;
            let direct = count_cubic(rho, args.alpha, l)?;
            println!("j_by_winding = {j}");
            println!("count = {direct}");
            if j != direct {
                return Err(CliError::Numerical(format!("winding count {j} differs from direct count {direct}")));
            }
        }
    }
    if let Some(c) = &curve {
        if args.output.out.is_some() || args.rho.is_none() {
            let text = match args.output.format {
                Format::Csv => cubic_csv(c),
                Format::Svg => cubic_svg(c),
            };
            emit(&args.output, &text)?;
            summary(
                &args.output,
                &format!(
                    "cubic N={}: {} samples, orientation {}, {} self-crossings",
                    c.level,
                    c.samples.len(),
                    c.orientation.as_str(),
                    c.self_crossings().len()
                ),
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(suite: SuiteArg, out: Option<PathBuf>, reverse_orientation: bool) -> CmdResult {
    let mut opts = VerifyOptions::new(match suite {
        SuiteArg::Quick => Suite::Quick,
        SuiteArg::Full => Suite::Full,
    });
    opts.reverse_orientation = reverse_orientation;
    opts.dataset_dir = out;
    let report = run(&opts);
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    if report.passed() {
        println!("all {} checks passed", report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("failed: {}", report.failures().join(", "));
        Ok(ExitCode::from(1))
    }
}
