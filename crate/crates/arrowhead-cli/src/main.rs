//! Command-line interface for the arrowhead curve toolkit.
//!
//! Every subcommand writes a deterministic text artifact (CSV, SVG, or a
//! flat report) to stdout or — atomically — to `--output`.  Exit codes:
//! `0` success, `1` usage or I/O problems, `2` library (domain/numeric)
//! errors.  The environment variable `ARROWHEAD_DEPTH_LIMIT` overrides the
//! default refinement-depth guard.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::exit;

use arrowhead::export::{
    counting_csv, decimate_csv, energy_csv, fmt_float, laplacian_csv, render_svg, spectrum_csv,
    vertices_csv,
};
use arrowhead::{
    build_level_with_limit, build_report, counting_function, decimate_down, decimate_up,
    dirichlet_eigenfunction, dirichlet_spectrum_exact, dirichlet_spectrum_numeric,
    harmonic_extension, normalized_energy_sequence, pointwise_laplacian, Boundary,
    ConductanceScheme, MeasureModel, ReportSummary, ReportValue, ScalingMode, Spectrum,
    VertexFunction, DEFAULT_DEPTH_LIMIT,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "arrowhead-cli",
    version,
    about = "Graphs, energies, Laplacians, spectra, and eigenvalue counting on the arrowhead curve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Raw,
    Geometric,
    Renormalized,
}

impl SchemeArg {
    fn scheme(self) -> ConductanceScheme {
        match self {
            SchemeArg::Raw => ConductanceScheme::raw(),
            SchemeArg::Geometric => ConductanceScheme::geometric(),
            SchemeArg::Renormalized => ConductanceScheme::renormalized(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    LevelOne,
    Endpoints,
}

impl BoundaryArg {
    fn boundary(self) -> Boundary {
        match self {
            BoundaryArg::LevelOne => Boundary::LevelOne,
            BoundaryArg::Endpoints => Boundary::Endpoints,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Numeric,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingArg {
    Geometric,
    Arclength,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    /// `s (1 − s)` in the arc coordinate.
    Parabola,
    /// `sin(π s)` in the arc coordinate.
    Sine,
    /// `s` itself.
    Ramp,
}

fn parse_boundary(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected four comma-separated values, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad boundary value {part:?}: {e}"))?;
    }
    Ok(out)
}

fn parse_eigen(s: &str) -> Result<(usize, usize), String> {
    let (seg, mode) = s
        .split_once(',')
        .ok_or_else(|| "expected `segment,mode`".to_string())?;
    let segment = seg
        .trim()
        .parse()
        .map_err(|e| format!("bad segment {seg:?}: {e}"))?;
    let k = mode
        .trim()
        .parse()
        .map_err(|e| format!("bad mode {mode:?}: {e}"))?;
    Ok((segment, k))
}

#[derive(Subcommand)]
enum Command {
    /// Vertex table of one refinement level (CSV).
    Build {
        #[arg(long)]
        level: u32,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// SVG drawing of the curve, optionally colored by a vertex function.
    Render {
        #[arg(long)]
        level: u32,
        /// Color by the harmonic extension of four level-1 values `a,b,c,d`.
        #[arg(long, value_parser = parse_boundary, conflicts_with = "eigen")]
        harmonic: Option<[f64; 4]>,
        /// Color by the Dirichlet eigenfunction `segment,mode`.
        #[arg(long, value_parser = parse_eigen)]
        eigen: Option<(usize, usize)>,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// Energies of nested harmonic extensions of boundary data (CSV).
    Energy {
        #[arg(long, default_value_t = 5)]
        max_level: u32,
        #[arg(long, value_enum, default_value_t = SchemeArg::Renormalized)]
        scheme: SchemeArg,
        /// Values at the four level-1 vertices.
        #[arg(long, value_parser = parse_boundary,
              default_value = "0,0.3333333333333333,0.6666666666666666,1")]
        boundary: [f64; 4],
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// Harmonic extension of boundary data to one level (CSV).
    Harmonic {
        #[arg(long)]
        level: u32,
        #[arg(long, value_parser = parse_boundary)]
        boundary: [f64; 4],
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// Pointwise normalized Laplacian of a sample function (CSV).
    Laplacian {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = FunctionArg::Parabola)]
        function: FunctionArg,
        #[arg(long, value_enum, default_value_t = SchemeArg::Renormalized)]
        scheme: SchemeArg,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// Dirichlet spectrum of one level (CSV).
    Spectrum {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = BoundaryArg::LevelOne)]
        boundary: BoundaryArg,
        #[arg(long, value_enum, default_value_t = RouteArg::Numeric, alias = "method")]
        route: RouteArg,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// Spectral-decimation images of one eigenvalue.
    Decimate {
        #[arg(long, alias = "up")]
        lambda: f64,
        /// Map one level down (single image) instead of up (three children).
        #[arg(long, conflicts_with = "output")]
        down: bool,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// Renormalized eigenvalue-counting grid (CSV).
    Counting {
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, value_enum, default_value_t = ScalingArg::Geometric)]
        scaling: ScalingArg,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
    /// Full deterministic self-check report.
    Report {
        #[arg(long, default_value_t = 7)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
    },
}

enum AppError {
    Io(std::io::Error),
    Lib(arrowhead::Error),
    ReportAborted,
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

impl From<arrowhead::Error> for AppError {
    fn from(e: arrowhead::Error) -> Self {
        AppError::Lib(e)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(AppError::Io(e)) => {
            eprintln!("arrowhead-cli: i/o error: {e}");
            exit(1);
        }
        Err(AppError::Lib(e)) => {
            eprintln!("arrowhead-cli: {e}");
            exit(2);
        }
        Err(AppError::ReportAborted) => exit(2),
    }
}

/// Depth guard: the library default unless overridden by the environment.
fn depth_limit() -> Result<u32, AppError> {
    match std::env::var("ARROWHEAD_DEPTH_LIMIT") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            AppError::Io(std::io::Error::new(
                std::io::ErrorKind::InvalidInput,
                format!("invalid ARROWHEAD_DEPTH_LIMIT value {raw:?}"),
            ))
        }),
        Err(_) => Ok(DEFAULT_DEPTH_LIMIT),
    }
}

fn check_depth(level: u32) -> Result<(), AppError> {
    let limit = depth_limit()?;
    if level > limit {
        return Err(AppError::Lib(arrowhead::Error::DepthLimitExceeded {
            requested: level,
            limit,
        }));
    }
    Ok(())
}

/// Writes through a temporary sibling and renames, so a crash never leaves
/// a half-written artifact at the destination.
fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "missing file name"))?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)
}

fn emit(output: Option<&Path>, content: &str) -> Result<(), AppError> {
    match output {
        Some(path) => write_atomic(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn spectrum_for(level: u32, boundary: Boundary, route: RouteArg) -> arrowhead::Result<Spectrum> {
    match route {
        RouteArg::Numeric => dirichlet_spectrum_numeric(level, boundary),
        RouteArg::Exact => dirichlet_spectrum_exact(level, boundary),
    }
}

fn report_json(summary: &ReportSummary) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = summary
        .entries()
        .iter()
        .map(|e| {
            let value = match &e.value {
                ReportValue::Float(x) => serde_json::json!(x),
                ReportValue::Int(n) => serde_json::json!(n),
                ReportValue::Text(s) => serde_json::json!(s),
            };
            serde_json::json!({
                "key": e.key,
                "value": value,
                "status": e.status.label(),
                "tol": e.tol,
            })
        })
        .collect();
    serde_json::json!({
        "depth": summary.depth(),
        "aborted": summary.aborted(),
        "entries": entries,
    })
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Build { level, output } => {
            let graph = build_level_with_limit(level, depth_limit()?)?;
            emit(output.as_deref(), &vertices_csv(&graph))
        }
        Command::Render {
            level,
            harmonic,
            eigen,
            output,
        } => {
            let graph = build_level_with_limit(level, depth_limit()?)?;
            let overlay = match (harmonic, eigen) {
                (Some(b), _) => {
                    let coarse = VertexFunction::new(1, b.to_vec())?;
                    Some(harmonic_extension(&coarse, level)?)
                }
                (None, Some((segment, k))) => Some(dirichlet_eigenfunction(level, segment, k)?.1),
                (None, None) => None,
            };
            emit(output.as_deref(), &render_svg(&graph, overlay.as_ref())?)
        }
        Command::Energy {
            max_level,
            scheme,
            boundary,
            output,
        } => {
            check_depth(max_level)?;
            let report = normalized_energy_sequence(boundary, max_level, scheme.scheme())?;
            emit(output.as_deref(), &energy_csv(&report))
        }
        Command::Harmonic {
            level,
            boundary,
            output,
        } => {
            check_depth(level)?;
            let coarse = VertexFunction::new(1, boundary.to_vec())?;
            let fine = harmonic_extension(&coarse, level)?;
            let mut csv = String::from("chain_index,arc_coordinate,value\n");
            let denom = 3f64.powi(level as i32);
            for (i, v) in fine.values().iter().enumerate() {
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    i + 1,
                    fmt_float(i as f64 / denom),
                    fmt_float(*v)
                );
            }
            emit(output.as_deref(), &csv)
        }
        Command::Laplacian {
            level,
            function,
            scheme,
            output,
        } => {
            check_depth(level)?;
            let u = match function {
                FunctionArg::Parabola => VertexFunction::from_arc_fn(level, |s| s * (1.0 - s)),
                FunctionArg::Sine => {
                    VertexFunction::from_arc_fn(level, |s| (std::f64::consts::PI * s).sin())
                }
                FunctionArg::Ramp => VertexFunction::from_arc_fn(level, |s| s),
            };
            let field = pointwise_laplacian(&u, scheme.scheme(), &MeasureModel::default())?;
            emit(output.as_deref(), &laplacian_csv(&field))
        }
        Command::Spectrum {
            level,
            boundary,
            route,
            output,
        } => {
            check_depth(level)?;
            let s = spectrum_for(level, boundary.boundary(), route)?;
            emit(output.as_deref(), &spectrum_csv(&s))
        }
        Command::Decimate {
            lambda,
            down,
            output,
        } => {
            if down {
                let image = decimate_down(lambda);
                emit(None, &format!("{image:.11e}\n"))
            } else {
                let branches = decimate_up(lambda)?;
                match output {
                    Some(path) => emit(Some(&path), &decimate_csv(&branches)),
                    None => {
                        let mut text = String::new();
                        for child in branches.children {
                            let _ = writeln!(text, "{child:.11e}");
                        }
                        emit(None, &text)
                    }
                }
            }
        }
        Command::Counting {
            max_level,
            scaling,
            output,
        } => {
            check_depth(max_level)?;
            let spectra: Vec<Spectrum> = (2..=max_level)
                .map(|m| dirichlet_spectrum_exact(m, Boundary::LevelOne))
                .collect::<arrowhead::Result<_>>()?;
            let mode = match scaling {
                ScalingArg::Geometric => ScalingMode::Geometric,
                ScalingArg::Arclength => ScalingMode::Arclength,
            };
            let series = counting_function(&spectra, mode)?;
            emit(output.as_deref(), &counting_csv(&series))
        }
        Command::Report {
            depth,
            format,
            output,
        } => {
            check_depth(depth)?;
            let summary = build_report(depth)?;
            let content = match format {
                FormatArg::Text => summary.render_text(),
                FormatArg::Json => {
                    let mut s = serde_json::to_string_pretty(&report_json(&summary))
                        .map_err(|e| AppError::Io(e.into()))?;
                    s.push('\n');
                    s
                }
            };
            emit(output.as_deref(), &content)?;
            if summary.aborted().is_some() {
                return Err(AppError::ReportAborted);
            }
            Ok(())
        }
    }
}
