use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use tridyn::barycentric::{sample_curve, CurveName, CurveSeries};
use tridyn::dynamics::{
    classify_fixed_point, iterate, AngleMap, ExteriorAngleMap, LimitId, MapId, Orbit,
    QuadrangleMap, SystemMap, DEFAULT_MAX_ITERS,
};
use tridyn::maps::invert_g;
use tridyn::quadrangle::ICQuadrangle;
use tridyn::sampling::DEFAULT_SEED;
use tridyn::{AngleTriple, ExteriorTriple, InteriorTriple};

use crate::csv_io::{emit_curves, emit_orbit, OrbitTable};
use crate::svg::emit_svg;
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

/// Angle sums this far from the expected value are rescaled with a warning
/// instead of rejected, so that inputs copied with four decimals work.
pub const INPUT_RESCALE_WINDOW: f64 = 1e-3;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tridyn::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "tridyn",
    version,
    about = "Edge/angle swap dynamics on triangles and bicentric quadrangles"
)]
pub struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate f or g from a triangle.
    Iterate(IterateArgs),
    /// Bicentric quadrangle commands.
    Quad {
        #[command(subcommand)]
        command: QuadCommand,
    },
    /// Stability of the symmetric fixed point, as JSON.
    FixedPoint {
        #[arg(long, value_enum)]
        map: MapChoice,
    },
    /// Sample GG or a boundary curve.
    Curve(CurveArgs),
    /// Preimage of a triangle under g.
    Invert(InvertArgs),
    /// Run the numerical verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum QuadCommand {
    /// Iterate h from the obtuse pair (alpha, beta).
    Iterate(QuadIterateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapChoice {
    F,
    G,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangleMap {
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Show angles in degrees (table format only).
    #[arg(long)]
    degrees: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IterateArgs {
    #[arg(long, value_enum)]
    map: TriangleMap,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Vec<f64>,
    /// Angles are exterior angles summing to 2π, in input and output.
    #[arg(long)]
    exterior: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct QuadIterateArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveChoice {
    Gg,
    U,
    W,
    X,
    Z,
}

impl From<CurveChoice> for CurveName {
    fn from(c: CurveChoice) -> Self {
        match c {
            CurveChoice::Gg => CurveName::Gg,
            CurveChoice::U => CurveName::UFirst,
            CurveChoice::W => CurveName::WFirst,
            CurveChoice::X => CurveName::XFirst,
            CurveChoice::Z => CurveName::ZFirst,
        }
    }
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// One or more curves, comma separated; all share the t-range.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    name: Vec<CurveChoice>,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Output file; a `.svg` extension selects a plot, anything else CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add the dashed line value = t to a plot.
    #[arg(long)]
    diagonal: bool,
}

#[derive(Debug, Args)]
struct InvertArgs {
    #[arg(long, value_enum)]
    map: InvertMap,
    /// Exterior angles of the target.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InvertMap {
    G,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Runs one command with the process's standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// `argv[0]` is the program name.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if informational {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_INVALID;
        }
    };
    match dispatch(config.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Iterate(a) => run_iterate(a, out, err),
        Command::Quad {
            command: QuadCommand::Iterate(a),
        } => run_quad(a, out, err),
        Command::FixedPoint { map } => run_fixed_point(map, out),
        Command::Curve(a) => run_curve(a, out),
        Command::Invert(a) => run_invert(a, out, err),
        Command::Verify(a) => run_verify(a, out),
    }
}

fn triple(values: &[f64], sum: f64, err: &mut dyn Write) -> CliResult<[f64; 3]> {
    let [a, b, c] = <[f64; 3]>::try_from(values)
        .map_err(|_| CliError::Usage(format!("--angles needs 3 values, got {}", values.len())))?;
    if ![a, b, c].iter().all(|x| x.is_finite() && *x > 0.0) {
        return Err(CliError::Usage("angles must be positive and finite".into()));
    }
    let total = a + b + c;
    let off = (total - sum).abs();
    if off > INPUT_RESCALE_WINDOW {
        return Err(CliError::Usage(format!(
            "angles sum to {total}, expected {sum}"
        )));
    }
    if off > tridyn::geometry::RENORMALIZE_TOLERANCE {
        writeln!(err, "note: angles sum to {total}; rescaled to {sum}")?;
        let k = sum / total;
        return Ok([a * k, b * k, c * k]);
    }
    Ok([a, b, c])
}

fn positive_tol(tol: Option<f64>, default: f64) -> CliResult<f64> {
    let tol = tol.unwrap_or(default);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

#[derive(Serialize)]
struct StateRow<'a> {
    iter: usize,
    values: &'a [f64],
}

#[derive(Serialize)]
struct OrbitJson<'a> {
    map: MapId,
    columns: &'a [String],
    start: &'a [f64],
    states: Vec<StateRow<'a>>,
    converged: bool,
    limit: LimitId,
    iterations_used: usize,
    halted: Option<String>,
}

/// Rows for the iterates only; the start is the command's own input and
/// appears in JSON under `start`.
fn orbit_table<S>(
    orbit: &Orbit<S>,
    columns: &[&str],
    coords: impl Fn(&S) -> Vec<f64>,
) -> (Vec<f64>, OrbitTable) {
    let rows = orbit
        .states
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, s)| (i, coords(s)))
        .collect();
    let table = OrbitTable {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    };
    (coords(&orbit.states[0]), table)
}

fn render_table(table: &OrbitTable, degrees: bool) -> String {
    let mut s = format!("{:>6}", "iter");
    for c in &table.columns {
        s.push_str(&format!(" {c:>18}"));
    }
    s.push('\n');
    for (i, values) in &table.rows {
        s.push_str(&format!("{i:>6}"));
        for v in values {
            let v = if degrees { v.to_degrees() } else { *v };
            s.push_str(&format!(" {v:>18.10}"));
        }
        s.push('\n');
    }
    s
}

fn write_output(path: Option<&Path>, content: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => out.write_all(content.as_bytes())?,
    }
    Ok(())
}

fn emit_orbit_report<S>(
    orbit: &Orbit<S>,
    columns: &[&str],
    coords: impl Fn(&S) -> Vec<f64>,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let (start, table) = orbit_table(orbit, columns, coords);
    if let Some(e) = &orbit.halted {
        writeln!(
            err,
            "note: orbit stopped after {} steps: {e}",
            orbit.iterations_used
        )?;
    }
    let text = match output.format {
        Format::Csv => emit_orbit(&table),
        Format::Table => render_table(&table, output.degrees),
        Format::Json => {
            let json = OrbitJson {
                map: orbit.map_id,
                columns: &table.columns,
                start: &start,
                states: table
                    .rows
                    .iter()
                    .map(|(iter, v)| StateRow {
                        iter: *iter,
                        values: v,
                    })
                    .collect(),
                converged: orbit.converged,
                limit: orbit.limit,
                iterations_used: orbit.iterations_used,
                halted: orbit.halted.as_ref().map(ToString::to_string),
            };
            serde_json::to_string_pretty(&json)? + "\n"
        }
    };
    write_output(output.out.as_deref(), &text, out)
}

fn run_iterate(a: IterateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let sum = if a.exterior {
        2.0 * std::f64::consts::PI
    } else {
        std::f64::consts::PI
    };
    let angles = triple(&a.angles, sum, err)?;
    let columns = ["a", "b", "c"];
    let exterior = a.exterior;
    match a.map {
        TriangleMap::F => {
            let start = if exterior {
                ExteriorTriple::new(angles)?.to_interior()
            } else {
                InteriorTriple::new(angles)?
            };
            let tol = positive_tol(a.tol, AngleMap.default_tol())?;
            let orbit = iterate(&AngleMap, start, a.max_iters, tol)?;
            let coords = |s: &InteriorTriple| {
                if exterior {
                    s.to_exterior().angles().to_vec()
                } else {
                    s.angles().to_vec()
                }
            };
            emit_orbit_report(&orbit, &columns, coords, &a.output, out, err)?;
        }
        TriangleMap::G => {
            let start = if exterior {
                ExteriorTriple::new(angles)?
            } else {
                InteriorTriple::new(angles)?.to_exterior()
            };
            let tol = positive_tol(a.tol, ExteriorAngleMap.default_tol())?;
            let orbit = iterate(&ExteriorAngleMap, start, a.max_iters, tol)?;
            let coords = |s: &ExteriorTriple| {
                if exterior {
                    s.angles().to_vec()
                } else {
                    s.interior_angles().to_vec()
                }
            };
            emit_orbit_report(&orbit, &columns, coords, &a.output, out, err)?;
        }
    }
    Ok(EXIT_OK)
}

fn run_quad(a: QuadIterateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let start = ICQuadrangle::new(a.alpha, a.beta)?;
    let tol = positive_tol(a.tol, QuadrangleMap.default_tol())?;
    let orbit = iterate(&QuadrangleMap, start, a.max_iters, tol)?;
    let coords = |q: &ICQuadrangle| vec![q.alpha(), q.beta()];
    emit_orbit_report(&orbit, &["alpha", "beta"], coords, &a.output, out, err)?;
    Ok(EXIT_OK)
}

fn stability_json<M: SystemMap>(map: &M) -> CliResult<String> {
    let report = classify_fixed_point(map, &map.fixed_point())?;
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

fn run_fixed_point(map: MapChoice, out: &mut dyn Write) -> CliResult<i32> {
    let text = match map {
        MapChoice::F => stability_json(&AngleMap)?,
        MapChoice::G => stability_json(&ExteriorAngleMap)?,
        MapChoice::H => stability_json(&QuadrangleMap)?,
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn run_curve(a: CurveArgs, out: &mut dyn Write) -> CliResult<i32> {
    let series = a
        .name
        .iter()
        .map(|&c| sample_curve(c.into(), a.from, a.to, a.samples))
        .collect::<tridyn::Result<Vec<CurveSeries>>>()?;
    let is_svg = a
        .out
        .as_deref()
        .and_then(Path::extension)
        .is_some_and(|e| e.eq_ignore_ascii_case("svg"));
    if is_svg {
        emit_svg(&series, a.diagonal, a.out.as_deref().unwrap())?;
    } else {
        write_output(a.out.as_deref(), &emit_curves(&series), out)?;
    }
    Ok(EXIT_OK)
}

fn run_invert(a: InvertArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let InvertMap::G = a.map;
    let target = ExteriorTriple::new(triple(&a.angles, 2.0 * std::f64::consts::PI, err)?)?;
    let pre = invert_g(&target, a.tol, a.max_steps)?;
    let table = OrbitTable {
        columns: vec!["a".into(), "b".into(), "c".into()],
        rows: vec![(0, pre.angles().to_vec())],
    };
    let text = match a.output.format {
        Format::Csv => emit_orbit(&table),
        Format::Table => render_table(&table, a.output.degrees),
        Format::Json => {
            #[derive(Serialize)]
            struct Preimage<'a> {
                target: [f64; 3],
                preimage: &'a [f64],
            }
            let json = Preimage {
                target: target.angles(),
                preimage: &table.rows[0].1,
            };
            serde_json::to_string_pretty(&json)? + "\n"
        }
    };
    write_output(a.output.out.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let checks = verify::run(a.suite, a.samples, a.seed);
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(
        out,
        "{} checks, {failed} failed (samples {}, seed {})",
        checks.len(),
        a.samples,
        a.seed
    )?;
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
