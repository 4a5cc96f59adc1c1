//! Command-line front end: `halfdisk <exp|plan|shoot|svg>`.
//!
//! Every command renders its output into a byte buffer so that the same code
//! path serves the binary and the tests. Output is a pure function of the
//! arguments.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::expmap::{exp_map_with, sample_trajectory, Sample, Trajectory};
use crate::planner::{feasible_plan, optimal_trajectory, solve_bvp, ShootingConfig};
use crate::pmp::{Branch, Covector, SEPARATRIX_TOL};
use crate::se2::{relative_target, Pose};

/// Column order of trajectory CSV files.
pub const CSV_HEADER: [&str; 9] = ["t", "x", "y", "theta", "u1", "u2", "h1", "h2", "h3"];

/// Failure of a command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{message}")]
    NoConvergence { message: String, best_residual: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => 2,
            CliError::Io(_) => 3,
            CliError::NoConvergence { .. } => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence {
                best_residual,
                fallback,
            } => {
                let mut message =
                    format!("shooting did not converge, best residual {best_residual:e}");
                if let Some(plan) = fallback {
                    let _ = write!(
                        message,
                        "; feasible plan alpha={} l={} beta={} T={}",
                        plan.alpha, plan.l, plan.beta, plan.total_time
                    );
                }
                CliError::NoConvergence {
                    message,
                    best_residual,
                }
            }
            other => CliError::BadInput(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Parser)]
#[command(
    name = "halfdisk",
    version,
    about = "Time-optimal paths for a car that drives forward or turns in place"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the extremal with initial covector `h0` over `[0, T]`.
    Exp(ExpArgs),
    /// Three-phase turn/drive/turn plan between two poses.
    Plan(PlanArgs),
    /// Solve the boundary-value problem by multi-start shooting.
    Shoot(ShootArgs),
    /// Render a trajectory CSV as an SVG plot.
    Svg(SvgArgs),
}

#[derive(Debug, Args)]
pub struct ExpArgs {
    #[arg(long, value_name = "h1,h2,h3", value_parser = parse_triple, allow_hyphen_values = true)]
    pub h0: [f64; 3],
    #[arg(long = "T", value_name = "real")]
    pub total_time: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Project `h0` onto `H = 1` instead of rejecting it.
    #[arg(long)]
    pub renormalize: bool,
    #[arg(long, default_value_t = SEPARATRIX_TOL)]
    pub separatrix_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, value_name = "x,y,theta", value_parser = parse_pose, allow_hyphen_values = true, default_value = "0,0,0")]
    pub q0: Pose,
    #[arg(long, value_name = "x,y,theta", value_parser = parse_pose, allow_hyphen_values = true)]
    pub q1: Pose,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShootArgs {
    #[arg(long, value_name = "x,y,theta", value_parser = parse_pose, allow_hyphen_values = true, default_value = "0,0,0")]
    pub q0: Pose,
    #[arg(long, value_name = "x,y,theta", value_parser = parse_pose, allow_hyphen_values = true)]
    pub q1: Pose,
    #[arg(long, value_name = "a,b,c", value_parser = parse_grid, default_value = "32,32,32")]
    pub grid: [usize; 3],
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = SEPARATRIX_TOL)]
    pub separatrix_tol: f64,
    /// Emit the full trajectory of the best solution instead of the list.
    #[arg(long)]
    pub best: bool,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SvgArgs {
    /// Trajectory CSV produced by `exp` or `shoot --best`.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated settings shared by the commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub separatrix_tol: f64,
    pub grid: [usize; 3],
    pub samples: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn new(
        tol: f64,
        separatrix_tol: f64,
        grid: [usize; 3],
        samples: usize,
        format: Format,
    ) -> Result<Self, CliError> {
        if !(tol > 0.0 && separatrix_tol > 0.0) {
            return Err(CliError::BadInput("tolerances must be positive".into()));
        }
        if samples < 2 {
            return Err(CliError::BadInput(format!(
                "sample count {samples} must be >= 2"
            )));
        }
        Ok(Self {
            tol,
            separatrix_tol,
            grid,
            samples,
            format,
        })
    }

    fn shooting(&self) -> ShootingConfig {
        let mut cfg = ShootingConfig::default()
            .with_grid(self.grid[0], self.grid[1], self.grid[2])
            .with_tol(self.tol);
        cfg.separatrix_tol = self.separatrix_tol;
        cfg
    }
}

fn parse_numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got {}",
            v.len()
        ));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v = parse_numbers(s, 3)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_pose(s: &str) -> Result<Pose, String> {
    let v = parse_numbers(s, 3)?;
    Ok(Pose::new(v[0], v[1], v[2]))
}

fn parse_grid(s: &str) -> Result<[usize; 3], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c] => Ok([*a, *b, *c]),
        _ => Err(format!("expected 3 grid counts, got {}", v.len())),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory samples as CSV with the fixed column order.
pub fn samples_to_csv(samples: &[Sample]) -> Result<Vec<u8>, CliError> {
    let rows: Vec<[f64; 9]> = samples
        .iter()
        .map(|s| {
            [
                s.t,
                s.pose.x,
                s.pose.y,
                s.pose.theta,
                s.control.u1,
                s.control.u2,
                s.covector.h1,
                s.covector.h2,
                s.covector.h3,
            ]
        })
        .collect();
    rows_to_csv(&rows)
}

/// Write raw nine-column rows as CSV.
pub fn rows_to_csv(rows: &[[f64; 9]]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.iter().map(|&v| num(v))).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Parse a trajectory CSV back into nine-column rows.
pub fn read_csv(data: &[u8]) -> Result<Vec<[f64; 9]>, CliError> {
    let mut r = csv::Reader::from_reader(data);
    let header = r
        .headers()
        .map_err(|e| CliError::BadInput(format!("malformed CSV: {e}")))?
        .clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::BadInput(format!(
            "CSV header must be {}",
            CSV_HEADER.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::BadInput(format!("malformed CSV: {e}")))?;
        let mut row = [0.0; 9];
        for (i, field) in rec.iter().enumerate() {
            row[i] = field
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    CliError::BadInput(format!("row {}: bad number '{field}'", line + 1))
                })?;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::BadInput("CSV contains no samples".into()));
    }
    Ok(rows)
}

#[derive(Serialize)]
struct SegmentReport {
    kind: Branch,
    start_time: f64,
    duration: f64,
}

#[derive(Serialize)]
struct TrajectoryReport<'a> {
    #[serde(rename = "T")]
    total_time: f64,
    h0: Covector,
    start: Pose,
    end: Pose,
    segments: Vec<SegmentReport>,
    samples: &'a [Sample],
}

fn render_trajectory(
    traj: &Trajectory,
    samples: usize,
    format: Format,
) -> Result<Vec<u8>, CliError> {
    let samples = sample_trajectory(traj, samples)?;
    match format {
        Format::Csv => samples_to_csv(&samples),
        Format::Svg => {
            let rows: Vec<[f64; 9]> = samples
                .iter()
                .map(|s| {
                    [
                        s.t,
                        s.pose.x,
                        s.pose.y,
                        s.pose.theta,
                        s.control.u1,
                        s.control.u2,
                        s.covector.h1,
                        s.covector.h2,
                        s.covector.h3,
                    ]
                })
                .collect();
            Ok(render_svg(&rows).into_bytes())
        }
        Format::Json => {
            let report = TrajectoryReport {
                total_time: traj.total_time,
                h0: traj.start_covector,
                start: traj.start_pose,
                end: traj.end_pose,
                segments: traj
                    .segments
                    .iter()
                    .map(|s| SegmentReport {
                        kind: s.kind,
                        start_time: s.start_time,
                        duration: s.duration,
                    })
                    .collect(),
                samples: &samples,
            };
            json_bytes(&report)
        }
    }
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// `exp`: sample the extremal from the identity.
pub fn cmd_exp(args: &ExpArgs) -> Result<Vec<u8>, CliError> {
    let cfg = RunConfig::new(
        1e-6,
        args.separatrix_tol,
        [32; 3],
        args.samples,
        args.format,
    )?;
    if !(args.total_time >= 0.0 && args.total_time.is_finite()) {
        return Err(CliError::BadInput(format!(
            "T = {} must be finite and >= 0",
            args.total_time
        )));
    }
    let raw = Covector::new(args.h0[0], args.h0[1], args.h0[2]);
    let h0 = if args.renormalize {
        raw.renormalized()?
    } else {
        raw
    };
    h0.check_level()?;
    let traj = exp_map_with(&h0, args.total_time, Pose::identity(), cfg.separatrix_tol)?;
    render_trajectory(&traj, cfg.samples, cfg.format)
}

/// `plan`: the feasible turn/drive/turn plan as JSON.
pub fn cmd_plan(args: &PlanArgs) -> Result<Vec<u8>, CliError> {
    json_bytes(&feasible_plan(&args.q0, &args.q1))
}

#[derive(Serialize)]
struct SolutionRow {
    psi: f64,
    h3: f64,
    #[serde(rename = "T")]
    total_time: f64,
    residual: f64,
}

/// `shoot`: all converged extremals, or with `--best` the full optimal trajectory.
pub fn cmd_shoot(args: &ShootArgs) -> Result<Vec<u8>, CliError> {
    let cfg = RunConfig::new(
        args.tol,
        args.separatrix_tol,
        args.grid,
        args.samples,
        args.format,
    )?;
    let shooting = cfg.shooting();
    if args.best {
        let traj = optimal_trajectory(&args.q0, &args.q1, &shooting)?;
        return render_trajectory(&traj, cfg.samples, cfg.format);
    }
    let target = relative_target(&args.q0, &args.q1);
    let rows: Vec<SolutionRow> = solve_bvp(&target, &shooting)?
        .into_iter()
        .map(|s| SolutionRow {
            psi: s.start.psi,
            h3: s.start.h3,
            total_time: s.total_time,
            residual: s.residual,
        })
        .collect();
    match cfg.format {
        Format::Json => json_bytes(&rows),
        Format::Csv => {
            let mut out = String::from("psi,h3,T,residual\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    num(r.psi),
                    num(r.h3),
                    num(r.total_time),
                    num(r.residual)
                );
            }
            Ok(out.into_bytes())
        }
        Format::Svg => Err(CliError::BadInput("svg output needs --best".into())),
    }
}

/// `svg`: render a trajectory CSV file.
pub fn cmd_svg(args: &SvgArgs) -> Result<Vec<u8>, CliError> {
    let data = std::fs::read(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let rows = read_csv(&data)?;
    Ok(render_svg(&rows).into_bytes())
}

/// Heading of the sampled trajectory at time `t`, interpolated along the
/// shorter arc between neighbouring samples.
fn interpolate(rows: &[[f64; 9]], t: f64) -> (f64, f64, f64) {
    let i = rows.partition_point(|r| r[0] <= t).clamp(1, rows.len() - 1);
    let (a, b) = (&rows[i - 1], &rows[i]);
    let span = b[0] - a[0];
    let w = if span > 0.0 {
        ((t - a[0]) / span).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let dtheta = crate::se2::wrap(b[3] - a[3]);
    (
        a[1] + w * (b[1] - a[1]),
        a[2] + w * (b[2] - a[2]),
        a[3] + w * dtheta,
    )
}

/// SVG 1.1 plot of the planar projection with heading ticks every half unit of time.
pub fn render_svg(rows: &[[f64; 9]]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for r in rows {
        x0 = x0.min(r[1]);
        x1 = x1.max(r[1]);
        y0 = y0.min(-r[2]);
        y1 = y1.max(-r[2]);
    }
    let extent = (x1 - x0).max(y1 - y0);
    let extent = if extent > 1e-9 { extent } else { 1.0 };
    let tick = 0.06 * extent;
    // Ticks may poke out of the path's bounding box.
    x0 -= tick;
    x1 += tick;
    y0 -= tick;
    y1 += tick;
    let margin = 0.05 * (x1 - x0).max(y1 - y0);
    let (vx, vy) = (x0 - margin, y0 - margin);
    let (vw, vh) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = 0.004 * vw.max(vh);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx:.6} {vy:.6} {vw:.6} {vh:.6}" width="800" height="{:.0}">"#,
        800.0 * vh / vw
    );
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.6},{:.6}", r[1], -r[2]))
        .collect();
    let _ = writeln!(
        svg,
        r#"  <polyline fill="none" stroke="black" stroke-width="{stroke:.6}" points="{}"/>"#,
        points.join(" ")
    );
    let _ = writeln!(svg, r#"  <g stroke="gray" stroke-width="{stroke:.6}">"#);
    let t_end = rows[rows.len() - 1][0];
    let mut k = 0usize;
    loop {
        let t = 0.5 * k as f64;
        if t > t_end + 1e-12 {
            break;
        }
        let (x, y, th) = interpolate(rows, t);
        let _ = writeln!(
            svg,
            r#"    <line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
            x,
            -y,
            x + tick * th.cos(),
            -(y + tick * th.sin())
        );
        k += 1;
    }
    let _ = writeln!(svg, "  </g>");
    let _ = writeln!(svg, "</svg>");
    svg
}

/// Run a parsed command; returns the bytes for stdout, or writes them to `--out`.
pub fn execute(cli: &Cli) -> Result<Vec<u8>, CliError> {
    let (bytes, out) = match &cli.command {
        Command::Exp(a) => (cmd_exp(a)?, a.out.as_ref()),
        Command::Plan(a) => (cmd_plan(a)?, a.out.as_ref()),
        Command::Shoot(a) => (cmd_shoot(a)?, a.out.as_ref()),
        Command::Svg(a) => (cmd_svg(a)?, a.out.as_ref()),
    };
    match out {
        Some(path) => {
            std::fs::write(path, &bytes)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(Vec::new())
        }
        None => Ok(bytes),
    }
}

/// Parse `args`, run the command and report; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use std::io::Write;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(bytes) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(&bytes)
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return 3;
            }
            0
        }
        Err(e) => {
            eprintln!("halfdisk: {e}");
            e.exit_code()
        }
    }
}
