//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kapitza_core::monodromy::closed_form;
use kapitza_core::numeric::simulate_linear;
use kapitza_core::stability::{contour_from_values, default_tol, Grid};
use kapitza_core::{
    boundary_rectangular, boundary_triangular, cell_trace, classify, monodromy_numeric,
    monodromy_product, simulate_nonlinear, BoundaryCurve, BoundaryKind, DiagramGrid,
    IntegratorConfig, Resolution, StabilityParams, State, Waveform, Window, PERIOD,
};
use rayon::prelude::*;

use crate::config::{OutputFormat, ResolutionSpec, RunConfig, WaveSpec, WindowPreset};
use crate::error::{CliError, CliResult};
use crate::format::{self, num};
use crate::svg;
use crate::verify::{self, Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "kapitza",
    version,
    about = "Floquet stability of a pendulum on an oscillating pivot"
)]
pub struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the monodromy trace at one parameter point.
    Trace(TraceArgs),
    /// Classify one parameter point as stable, unstable or boundary.
    Classify(ClassifyArgs),
    /// Emit Tr = ±2 boundary curves as CSV.
    Boundary(BoundaryArgs),
    /// Rasterise a stability diagram to CSV and optionally SVG.
    Diagram(DiagramArgs),
    /// Render a diagram CSV (plus optional boundary CSV) as SVG.
    RenderSvg(RenderArgs),
    /// Run the built-in consistency suites.
    Verify(VerifyArgs),
    /// Integrate a trajectory and print it as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Product,
    Closed,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Plus2,
    Minus2,
    Both,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// triangular, rect:<n> or cosine
    #[arg(long)]
    pub waveform: Option<WaveSpec>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
}

#[derive(Debug, Args, Default)]
pub struct IntegratorArgs {
    /// RK4 steps per period.
    #[arg(long)]
    pub steps: Option<u32>,
    /// Replace impulses by rectangular pulses of this width.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
}

#[derive(Debug, Args, Default)]
pub struct WindowArgs {
    #[arg(long, value_enum)]
    pub window: Option<WindowPreset>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_max: Option<f64>,
    /// Grid nodes as NxM (α × β).
    #[arg(long)]
    pub resolution: Option<ResolutionSpec>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub waveform: Option<WaveSpec>,
    #[arg(long, value_enum, default_value = "both")]
    pub kind: KindArg,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Samples per closed-form branch (triangular).
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    /// Accuracy of refined contour points (rectangular).
    #[arg(long, default_value_t = 1e-10)]
    pub refine_tol: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[arg(long)]
    pub waveform: Option<WaveSpec>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Also write an SVG rendering here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Diagram CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Boundary CSV to overlay.
    #[arg(long)]
    pub boundaries: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "stability diagram")]
    pub title: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run; defaults to every suite except rect-neg2-search.
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    /// Harmonic count for rect-neg2-search.
    #[arg(long, default_value_t = 100)]
    pub n: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub omega0: f64,
    /// Duration in pivot periods.
    #[arg(long, default_value_t = 20.0)]
    pub periods: f64,
    /// Integrate the linearised equation.
    #[arg(long)]
    pub linear: bool,
    /// Keep every k-th sample.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and maps the outcome
/// to an exit code: 0 success, 1 computation or verification failure, 2 usage.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(cli: Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Trace(a) => cmd_trace(&a, &config),
        Command::Classify(a) => cmd_classify(&a, &config),
        Command::Boundary(a) => cmd_boundary(&a, &config),
        Command::Diagram(a) => cmd_diagram(&a, &config),
        Command::RenderSvg(a) => cmd_render(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Simulate(a) => cmd_simulate(&a, &config),
    }
}

fn waveform(flag: Option<WaveSpec>, config: &RunConfig) -> CliResult<Waveform> {
    match flag {
        Some(w) => Ok(w.0),
        None => config
            .waveform()?
            .map(|w| w.0)
            .ok_or_else(|| CliError::Usage("--waveform is required".into())),
    }
}

fn integrator(flags: &IntegratorArgs, config: &RunConfig) -> CliResult<IntegratorConfig> {
    let mut cfg = config.integrator();
    if let Some(n) = flags.steps {
        cfg.steps_per_period = n;
    }
    if flags.epsilon.is_some() {
        cfg.mollify_epsilon = flags.epsilon;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn grid(flags: &WindowArgs, config: &RunConfig, default_res: Resolution) -> CliResult<Grid> {
    let mut w = match flags.window {
        Some(p) => p.window(),
        None => config.window().unwrap_or(Window::GLOBAL),
    };
    w.alpha_min = flags.alpha_min.unwrap_or(w.alpha_min);
    w.alpha_max = flags.alpha_max.unwrap_or(w.alpha_max);
    w.beta_min = flags.beta_min.unwrap_or(w.beta_min);
    w.beta_max = flags.beta_max.unwrap_or(w.beta_max);
    let r = flags
        .resolution
        .map(|r| r.0)
        .or(config.resolution())
        .unwrap_or(default_res);
    Ok(Grid::new(w, r)?)
}

fn point(a: &PointArgs) -> CliResult<StabilityParams> {
    let p = StabilityParams::new(a.alpha, a.beta);
    p.validate()?;
    Ok(p)
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish(mut out: Box<dyn Write>, path: Option<&Path>) -> CliResult<()> {
    out.flush()
        .map_err(|e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e))
}

fn trace_value(
    w: Waveform,
    p: StabilityParams,
    method: MethodArg,
    cfg: &IntegratorConfig,
) -> CliResult<f64> {
    let r = match method {
        MethodArg::Product => monodromy_product(w, p)?,
        MethodArg::Closed => closed_form(w, p)?,
        MethodArg::Numeric => monodromy_numeric(w, p, cfg).map_err(CliError::Compute)?,
    };
    if r.trace.is_finite() {
        Ok(r.trace)
    } else {
        Err(CliError::Compute(kapitza_core::Error::Overflow {
            t: PERIOD,
        }))
    }
}

fn default_method(w: Waveform) -> MethodArg {
    if w.is_impulsive() {
        MethodArg::Closed
    } else {
        MethodArg::Numeric
    }
}

fn cmd_trace(a: &TraceArgs, config: &RunConfig) -> CliResult<()> {
    let w = waveform(a.point.waveform, config)?;
    let p = point(&a.point)?;
    let cfg = integrator(&a.integrator, config)?;
    let t = trace_value(w, p, a.method.unwrap_or(default_method(w)), &cfg)?;
    println!("{}", num(t));
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs, config: &RunConfig) -> CliResult<()> {
    let w = waveform(a.point.waveform, config)?;
    let p = point(&a.point)?;
    let cfg = integrator(&a.integrator, config)?;
    let tol = a.tol.or(config.tol).unwrap_or(default_tol(w));
    let t = trace_value(w, p, default_method(w), &cfg)?;
    let c = classify(t, tol);
    let word = match c.kind {
        kapitza_core::Stability::Stable => "stable",
        kapitza_core::Stability::Unstable => "unstable",
        kapitza_core::Stability::Boundary => "boundary",
    };
    println!("{word} {}", num(t));
    Ok(())
}

fn kinds(k: KindArg) -> Vec<BoundaryKind> {
    match k {
        KindArg::Plus2 => vec![BoundaryKind::TracePlus2],
        KindArg::Minus2 => vec![BoundaryKind::TraceMinus2],
        KindArg::Both => vec![BoundaryKind::TracePlus2, BoundaryKind::TraceMinus2],
    }
}

/// Boundary curves of `w` over `grid`. Triangular curves are closed-form,
/// rectangular ones contoured from the closed-form trace, cosine ones
/// contoured from the node `traces` when given.
pub fn boundaries(
    w: Waveform,
    kinds: &[BoundaryKind],
    grid: &Grid,
    samples: usize,
    refine_tol: f64,
    traces: Option<&[f64]>,
) -> CliResult<Vec<BoundaryCurve>> {
    let mut out = Vec::new();
    let win = grid.window;
    for &kind in kinds {
        match w {
            Waveform::Triangular => {
                let beta_max = win.beta_max.abs().max(win.beta_min.abs());
                out.extend(
                    boundary_triangular(kind, (win.alpha_min, win.alpha_max), beta_max, samples)?
                        .into_iter()
                        .map(|mut c| {
                            c.points
                                .retain(|&(_, b)| b >= win.beta_min && b <= win.beta_max);
                            c
                        })
                        .filter(|c| c.points.len() >= 2),
                );
            }
            Waveform::RectangularApprox(n) => {
                out.extend(boundary_rectangular(
                    n,
                    kind,
                    win,
                    grid.resolution,
                    refine_tol,
                )?);
            }
            Waveform::Cosine => {
                let Some(traces) = traces else {
                    return Err(CliError::Usage(
                        "boundary curves for the cosine wave come from `diagram --svg`".into(),
                    ));
                };
                let alphas: Vec<f64> = (0..grid.resolution.n_alpha)
                    .map(|i| grid.alpha_at(i))
                    .collect();
                let betas: Vec<f64> = (0..grid.resolution.n_beta)
                    .map(|j| grid.beta_at(j))
                    .collect();
                let values: Vec<f64> = traces.iter().map(|t| t - kind.level()).collect();
                let nothing = |_: f64, _: f64| f64::NAN;
                out.extend(
                    contour_from_values(&nothing, &alphas, &betas, &values, None)
                        .into_iter()
                        .filter(|l| l.len() >= 2)
                        .map(|points| BoundaryCurve {
                            kind,
                            points,
                            closed_form: false,
                        }),
                );
            }
        }
    }
    Ok(out)
}

fn cmd_boundary(a: &BoundaryArgs, config: &RunConfig) -> CliResult<()> {
    let w = waveform(a.waveform, config)?;
    let g = grid(&a.window, config, Resolution::new(200, 200))?;
    if a.samples < 2 || a.refine_tol.is_nan() || a.refine_tol <= 0.0 {
        return Err(CliError::Usage(
            "--samples must be >= 2 and --refine-tol positive".into(),
        ));
    }
    let curves = boundaries(w, &kinds(a.kind), &g, a.samples, a.refine_tol, None)?;
    let path = a.output.as_deref().or(config.output.as_deref());
    let mut out = open_output(path)?;
    format::write_boundary_csv(&mut out, &curves)?;
    finish(out, path)
}

/// Diagram with cells evaluated in parallel; the result is identical to the
/// sequential one.
pub fn diagram_parallel(
    w: Waveform,
    grid: Grid,
    tol: f64,
    cfg: &IntegratorConfig,
) -> CliResult<(DiagramGrid, Vec<f64>)> {
    w.validate()?;
    cfg.validate()?;
    let traces = grid
        .points()
        .into_par_iter()
        .map(|p| cell_trace(w, p, cfg))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(CliError::Compute)?;
    Ok((DiagramGrid::from_traces(grid, &traces, tol)?, traces))
}

fn cmd_diagram(a: &DiagramArgs, config: &RunConfig) -> CliResult<()> {
    let w = waveform(a.waveform, config)?;
    let g = grid(&a.window, config, Resolution::new(200, 200))?;
    let tol = a.tol.or(config.tol).unwrap_or(default_tol(w));
    let cfg = integrator(&a.integrator, config)?;
    let (diag, traces) = diagram_parallel(w, g, tol, &cfg)?;

    let mut csv = Vec::new();
    format::write_diagram_csv(&mut csv, &diag, tol)?;
    let render = || -> CliResult<String> {
        let rows = format::read_diagram_csv(csv.as_slice())?;
        let curves = boundaries(w, &kinds(KindArg::Both), &g, 400, 1e-10, Some(&traces))?;
        let title = WaveSpec(w).to_string();
        svg::render(&rows, &curves, &title).ok_or_else(|| CliError::Usage("empty diagram".into()))
    };

    let path = a.output.as_deref().or(config.output.as_deref());
    let fmt = a.format.or(config.format).unwrap_or(OutputFormat::Csv);
    let mut out = open_output(path)?;
    let body = match fmt {
        OutputFormat::Csv => csv.clone(),
        OutputFormat::Svg => render()?.into_bytes(),
    };
    out.write_all(&body)
        .map_err(|e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e))?;
    finish(out, path)?;
    if let Some(svg_path) = &a.svg {
        std::fs::write(svg_path, render()?).map_err(|e| CliError::io(svg_path, e))?;
    }
    Ok(())
}

fn cmd_render(a: &RenderArgs) -> CliResult<()> {
    let file = File::open(&a.input).map_err(|e| CliError::io(&a.input, e))?;
    let rows = format::read_diagram_csv(file)?;
    let curves = match &a.boundaries {
        Some(p) => format::read_boundary_csv(File::open(p).map_err(|e| CliError::io(p, e))?)?,
        None => Vec::new(),
    };
    let body = svg::render(&rows, &curves, &a.title).ok_or_else(|| {
        CliError::Usage(format!(
            "{}: not a complete rectangular grid",
            a.input.display()
        ))
    })?;
    let path = a.output.as_deref();
    let mut out = open_output(path)?;
    out.write_all(body.as_bytes())
        .map_err(|e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e))?;
    finish(out, path)
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<()> {
    let suites = if a.suite.is_empty() {
        Suite::DEFAULT.to_vec()
    } else {
        a.suite.clone()
    };
    let mut opts = VerifyOptions {
        perturb: a.perturb,
        n: a.n,
        ..Default::default()
    };
    if let Some(s) = a.seed {
        opts.seed = s;
    }
    let checks: Vec<_> = suites.iter().flat_map(|&s| verify::run(s, &opts)).collect();
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {} failed", checks.len(), failed);
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(CliError::Verify(format!(
            "{} / {}: {}",
            c.suite, c.name, c.detail
        ))),
        None => Ok(()),
    }
}

fn cmd_simulate(a: &SimulateArgs, config: &RunConfig) -> CliResult<()> {
    let w = waveform(a.point.waveform, config)?;
    let p = point(&a.point)?;
    let cfg = integrator(&a.integrator, config)?;
    if !(a.periods > 0.0 && a.periods.is_finite()) || !a.theta0.is_finite() || !a.omega0.is_finite()
    {
        return Err(CliError::Usage(
            "--periods must be positive and the initial state finite".into(),
        ));
    }
    let y0 = State::new(a.theta0, a.omega0);
    let t_end = a.periods * PERIOD;
    let traj = if a.linear {
        simulate_linear(w, p, y0, t_end, &cfg)
    } else {
        simulate_nonlinear(w, p, y0, t_end, &cfg)
    }
    .map_err(CliError::from)?;
    let path = a.output.as_deref().or(config.output.as_deref());
    let mut out = open_output(path)?;
    format::write_trajectory_csv(&mut out, &traj, a.every)?;
    finish(out, path)
}
