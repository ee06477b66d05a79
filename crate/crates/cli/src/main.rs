use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quatcurve::export::{apparatus_csv, apparatus_rows, involute_csv, spatial_csv};
use quatcurve::verify::DEFAULT_TOL;
use quatcurve::{
    associated_spatial_curve, build_curve, frenet_apparatus, involute_curve, run_verify, spatial_frame,
    CurveDefinition, CurveSpec, InvoluteParams, Suite, Vec3, VerifyOptions,
};

const TOL_ENV: &str = "QUATCURVE_TOL";

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Curve(#[from] quatcurve::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Parser)]
#[command(name = "quatcurve", version, about = "Frenet apparatus, involutes and associated spatial curves of quaternionic curves in R^4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the Frenet apparatus of a curve.
    Frenet(GridArgs),
    /// Sample the apparatus of the involute `x + (c - s) x'`.
    Involute {
        #[command(flatten)]
        grid: GridArgs,
        /// Involute constant.
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        /// Tolerance for the default-tolerance checks (overrides QUATCURVE_TOL).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = quatcurve::verify::DEFAULT_GRID)]
        n: usize,
        /// Format written to stdout.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_eta_fault: bool,
    },
    /// Integrate the spatial curve associated with a curve.
    Associate {
        #[command(flatten)]
        grid: GridArgs,
        /// Starting point of the spatial curve.
        #[arg(long, default_value = "0,0,0", value_parser = parse_anchor, allow_hyphen_values = true)]
        anchor: Vec3,
        /// Append the spatial frame t, n, b.
        #[arg(long)]
        frames: bool,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Built-in curve name or path to a curve JSON file.
    #[arg(long)]
    curve: String,
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long, default_value_t = quatcurve::verify::DEFAULT_GRID)]
    n: usize,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| format!("expected one of {}", Suite::NAMES.join(", ")))
}

fn parse_anchor(s: &str) -> Result<Vec3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(Vec3::new(x, y, z)),
        _ => Err("expected three finite numbers x,y,z".into()),
    }
}

fn load_curve(arg: &str) -> Result<CurveDefinition, CliError> {
    let spec = match CurveSpec::builtin(arg) {
        Some(spec) => spec,
        None => {
            let text = std::fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.into(), source })?;
            CurveSpec::from_json(&text)?
        }
    };
    Ok(build_curve(&spec)?)
}

impl GridArgs {
    fn bounds(&self, curve: &CurveDefinition) -> Result<(f64, f64), CliError> {
        let d = curve.domain();
        let (from, to) = (self.from.unwrap_or(d.min), self.to.unwrap_or(d.max));
        if !(from.is_finite() && to.is_finite()) || from > to {
            return Err(CliError::Usage(format!("invalid range [{from}, {to}]")));
        }
        if from < d.min || to > d.max {
            return Err(CliError::Usage(format!(
                "range [{from}, {to}] leaves the curve domain [{}, {}]",
                d.min, d.max
            )));
        }
        Ok((from, to))
    }
}

fn tolerance(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{TOL_ENV}={v:?} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("tolerance must be positive, got {tol}")))
    }
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    fn io(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io { path: path.display().to_string(), source }
    }
    match out {
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io(Path::new("<stdout>"))),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(path))?;
            tmp.write_all(text.as_bytes()).map_err(io(path))?;
            tmp.persist(path).map_err(|e| io(path)(e.error))?;
            Ok(())
        }
    }
}

fn warn_skipped(failed: &[(f64, quatcurve::Error)]) {
    for (s, e) in failed {
        eprintln!("warning: skipped s = {s}: {e}");
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Frenet(grid) => {
            let curve = load_curve(&grid.curve)?;
            let (from, to) = grid.bounds(&curve)?;
            let (rows, failed) = apparatus_rows(&curve, &quatcurve::curve::uniform_grid(from, to, grid.n));
            warn_skipped(&failed);
            emit(grid.out.as_deref(), &apparatus_csv(&rows))?;
        }
        Command::Involute { grid, c } => {
            let curve = load_curve(&grid.curve)?;
            let (from, to) = grid.bounds(&curve)?;
            let params = InvoluteParams::for_domain(c, curve.domain())?;
            let phi = involute_curve(&curve, params)?;
            let all = quatcurve::curve::uniform_grid(from, to, grid.n);
            let kept = phi.domain().grid_between(from, to, grid.n);
            if kept.len() < all.len() {
                eprintln!(
                    "warning: excluded {} points with |s - {c}| < {}",
                    all.len() - kept.len(),
                    params.exclusion_tol
                );
            }
            let (rows, failed) = apparatus_rows(&phi, &kept);
            warn_skipped(&failed);
            emit(grid.out.as_deref(), &involute_csv(&rows, params, &curve)?)?;
        }
        Command::Verify { suite, tol, n, format, out, inject_eta_fault } => {
            let options =
                VerifyOptions { tol: tolerance(tol)?, grid_points: n, inject_eta_fault, ..VerifyOptions::default() };
            let report = run_verify(suite, &options)?;
            let json = report.to_json() + "\n";
            if let Some(path) = out.as_deref() {
                emit(Some(path), &json)?;
            }
            match format {
                Format::Text => emit(None, &report.to_text())?,
                Format::Json => emit(None, &json)?,
            }
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Associate { grid, anchor, frames } => {
            let curve = load_curve(&grid.curve)?;
            let (from, to) = grid.bounds(&curve)?;
            let g = quatcurve::curve::uniform_grid(from, to, grid.n);
            let points = associated_spatial_curve(&curve, &g, anchor)?;
            let spatial = if frames {
                Some(g.iter().map(|&s| spatial_frame(&frenet_apparatus(&curve, s)?)).collect::<Result<Vec<_>, _>>()?)
            } else {
                None
            };
            emit(grid.out.as_deref(), &spatial_csv(&g, &points, spatial.as_deref()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
