//! Command-line front end.
//!
//! ```text
//! gaussent measure [FILE | -] | --squeezed-r R | --params s,d,g,λ
//! gaussent scan    --fixed-a A --b-range LO,HI --g-range LO,HI [--resolution N] [--out-dir DIR]
//! gaussent scan3d  --s-range LO,HI --d-range LO,HI --g-range LO,HI [--resolution N] [--out-dir DIR]
//! gaussent bounds  [--samples N] [--seed S] [--s-max M] [--mode MODE] [--strict] [--out-dir DIR]
//! ```
//!
//! Exit status: 0 success, 1 internal failure, 2 unphysical input,
//! 3 bound violation in strict mode, 64 usage or parse error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, SamplerConfig, SamplingMode};
use crate::error::Error;
use crate::extremal::{self, ExtremalParams, Regime, Scan};
use crate::gaussian_em::GemOptions;
use crate::negativity::LogBase;
use crate::report::{self, MeasureOptions, StateInput};
use crate::symplectic::make_two_mode_squeezed;
use crate::DEFAULT_TOL;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNPHYSICAL: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable holding the default seed of `bounds`.
pub const SEED_ENV: &str = "GAUSSENT_SEED";

#[derive(Debug, Parser)]
#[command(name = "gaussent", version, about = "Entanglement of two-mode Gaussian states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full entanglement report of one state, as JSON.
    Measure(MeasureArgs),
    /// GMEMS/GLEMS ordering over the (b, g) plane at fixed a.
    Scan(ScanArgs),
    /// GMEMS/GLEMS ordering over an (s, d, g) box.
    Scan3d(Scan3dArgs),
    /// Random-state experiment against the bound curves.
    Bounds(BoundsArgs),
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(format!("expected finite LO ≤ HI, got {s:?}"));
    }
    Ok((lo, hi))
}

fn parse_params(s: &str) -> Result<[f64; 4], String> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected s,d,g,lambda (4 numbers), got {}", v.len()))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LogBaseArg {
    #[value(name = "2")]
    Two,
    E,
}

#[derive(Debug, Args)]
struct GemArgs {
    /// Seed points of the θ minimiser over one period.
    #[arg(long, default_value_t = 720)]
    grid: usize,
    /// Golden-section stopping width in θ.
    #[arg(long, default_value_t = 1e-12)]
    tol_theta: f64,
    /// States with ν̃₋ ≥ 1 − tol have m_opt = 1.
    #[arg(long, default_value_t = 1e-8)]
    tol_gem_separable: f64,
}

impl GemArgs {
    fn options(&self, log_base: LogBase) -> GemOptions {
        GemOptions {
            grid: self.grid,
            theta_tol: self.tol_theta,
            separable_tol: self.tol_gem_separable,
            log_base,
            symmetric_closed_form: true,
        }
    }
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// JSON file with {"cm": …}, {"standard_form": …} or {"params": …}; `-` reads stdin.
    input: Option<PathBuf>,
    /// Two-mode squeezed vacuum with squeezing r.
    #[arg(long, allow_hyphen_values = true)]
    squeezed_r: Option<f64>,
    /// Extremal-family parameters s,d,g,lambda.
    #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
    params: Option<[f64; 4]>,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "2")]
    log_base: LogBaseArg,
    /// Slack on the physicality inequalities.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol_physical: f64,
    /// PPT tolerance: ν̃₋ ≥ 1 − tol counts as separable.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol_separable: f64,
    #[command(flatten)]
    gem: GemArgs,
}

#[derive(Debug, Args)]
struct OutDir {
    /// Directory receiving the CSV files (created if missing).
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    fixed_a: f64,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    b_range: (f64, f64),
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    g_range: (f64, f64),
    /// Grid points per axis.
    #[arg(long, default_value_t = 200)]
    resolution: usize,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
struct Scan3dArgs {
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    s_range: (f64, f64),
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    d_range: (f64, f64),
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    g_range: (f64, f64),
    /// Grid points per axis.
    #[arg(long, default_value_t = 40)]
    resolution: usize,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    ExtremalParams,
    RawStandardForm,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 50_000)]
    samples: usize,
    /// Defaults to $GAUSSENT_SEED, then 0.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20.0)]
    s_max: f64,
    #[arg(long, value_enum, default_value = "extremal-params")]
    mode: ModeArg,
    /// Exit with status 3 if ν̃_opt ≤ ν̃₋(σ) is violated by any sample.
    #[arg(long)]
    strict: bool,
    /// Points on each analytic bound curve.
    #[arg(long, default_value_t = 200)]
    curve_resolution: usize,
    /// Largest log-negativity on the Gaussian-EoF bound curves.
    #[arg(long, default_value_t = 4.0)]
    curve_max_log_neg: f64,
    #[command(flatten)]
    gem: GemArgs,
    #[command(flatten)]
    out: OutDir,
}

/// Error with the exit status it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Malformed(_) => EXIT_USAGE,
            Error::Domain(_) => EXIT_UNPHYSICAL,
            Error::NotApplicable(_) | Error::Numerical(_) => EXIT_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure { code: EXIT_FAILURE, message: format!("{}: {e}", path.display()) }
}

/// Runs the CLI on real standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Runs the CLI with the given streams and returns the exit status.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Measure(a) => cmd_measure(&a, stdin, stdout),
        Command::Scan(a) => cmd_scan(&a, stdout, stderr),
        Command::Scan3d(a) => cmd_scan3d(&a, stdout, stderr),
        Command::Bounds(a) => cmd_bounds(&a, stdout, stderr),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "gaussent: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        stdin.read_to_string(&mut text).map_err(|e| io_failure(path, e))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })?;
    }
    Ok(text)
}

fn print_json<T: Serialize>(stdout: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = report::to_json_string(value)?;
    writeln!(stdout, "{text}").map_err(|e| io_failure(Path::new("<stdout>"), e))
}

fn cmd_measure(a: &MeasureArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let input = if let Some(path) = &a.source.input {
        StateInput::from_json(&read_input(path, stdin)?)?
    } else if let Some(r) = a.source.squeezed_r {
        StateInput::Cm(*make_two_mode_squeezed(r)?.entries())
    } else if let Some([s, d, g, lambda]) = a.source.params {
        StateInput::Params(ExtremalParams { s, d, g, lambda })
    } else {
        unreachable!("clap enforces one input source")
    };
    let log_base = match a.log_base {
        LogBaseArg::Two => LogBase::Two,
        LogBaseArg::E => LogBase::E,
    };
    let opts = MeasureOptions {
        physical_tol: a.tol_physical,
        separable_tol: a.tol_separable,
        gem: a.gem.options(log_base),
    };
    print_json(stdout, &report::measure(&input, &opts)?)?;
    Ok(EXIT_OK)
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| io_failure(&path, e))?;
    Ok((path, BufWriter::new(file)))
}

#[derive(Serialize)]
struct ScanSummary {
    cells: usize,
    ordering_preserved: usize,
    ordering_inverted: usize,
    coexistence: usize,
    both_separable: usize,
    unphysical: usize,
    boundary_points: usize,
    scan_csv: String,
    boundary_csv: String,
}

fn write_scan(scan: &Scan, dir: &Path, stem: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    if scan.count(Regime::Unphysical) == scan.cells.len() {
        let _ = writeln!(stderr, "gaussent: warning: no physical cell in the scanned window");
    }
    let (scan_path, w) = create(dir, &format!("{stem}.csv"))?;
    extremal::write_scan_csv(w, &scan.cells)?;
    let (boundary_path, w) = create(dir, &format!("{stem}_boundary.csv"))?;
    extremal::write_boundary_csv(w, &scan.boundary)?;
    print_json(
        stdout,
        &ScanSummary {
            cells: scan.cells.len(),
            ordering_preserved: scan.count(Regime::OrderingPreserved),
            ordering_inverted: scan.count(Regime::OrderingInverted),
            coexistence: scan.count(Regime::Coexistence),
            both_separable: scan.count(Regime::BothSeparable),
            unphysical: scan.count(Regime::Unphysical),
            boundary_points: scan.boundary.len(),
            scan_csv: scan_path.display().to_string(),
            boundary_csv: boundary_path.display().to_string(),
        },
    )?;
    Ok(EXIT_OK)
}

fn check_resolution(n: usize) -> Result<(), Failure> {
    if n < 2 {
        return Err(Failure { code: EXIT_USAGE, message: format!("resolution must be at least 2, got {n}") });
    }
    Ok(())
}

fn cmd_scan(a: &ScanArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    check_resolution(a.resolution)?;
    let scan = extremal::scan_slice(a.fixed_a, a.b_range, a.g_range, a.resolution)?;
    write_scan(&scan, &a.out.out_dir, "scan", stdout, stderr)
}

fn cmd_scan3d(a: &Scan3dArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    check_resolution(a.resolution)?;
    let scan = extremal::scan_volume(a.s_range, a.d_range, a.g_range, a.resolution)?;
    write_scan(&scan, &a.out.out_dir, "scan3d", stdout, stderr)
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    #[serde(flatten)]
    summary: &'a bounds::ExperimentSummary,
    experiment_csv: String,
    nu_curve_csv: String,
    geof_curve_csv: String,
}

fn cmd_bounds(a: &BoundsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let mode = match a.mode {
        ModeArg::ExtremalParams => SamplingMode::ExtremalParams,
        ModeArg::RawStandardForm => SamplingMode::RawStandardForm,
    };
    let cfg = SamplerConfig { seed: a.seed, count: a.samples, s_max: a.s_max, mode };
    cfg.validate().map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?;
    let exp = bounds::bound_experiment(&cfg, &a.gem.options(LogBase::Two))?;
    let summary = exp.summary();
    for f in &summary.failures {
        let _ = writeln!(stderr, "gaussent: sample {}: {}", f.index, f.message);
    }

    let dir = &a.out.out_dir;
    let (experiment_path, w) = create(dir, "bounds.csv")?;
    bounds::write_experiment_csv(w, &exp.records)?;
    let (nu_path, w) = create(dir, "nu_curve.csv")?;
    bounds::write_nu_curve_csv(w, a.curve_resolution)?;
    let (geof_path, w) = create(dir, "geof_curve.csv")?;
    bounds::write_geof_curve_csv(w, a.curve_max_log_neg, a.curve_resolution)?;

    print_json(
        stdout,
        &BoundsOutput {
            summary: &summary,
            experiment_csv: experiment_path.display().to_string(),
            nu_curve_csv: nu_path.display().to_string(),
            geof_curve_csv: geof_path.display().to_string(),
        },
    )?;
    Ok(if a.strict && summary.violations_42 > 0 { EXIT_VIOLATION } else { EXIT_OK })
}
