//! Command-line experiment runner.

pub mod config;
pub mod output;
pub mod plot;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::bounds::{divergence_lower_bound, p2_contrast, s_m_witness, scalar_bound_harness, SCALAR_BOUND};
use crate::error::{Error, Result};
use crate::gaussian::RngStream;
use crate::ousolver::KernelScale;
use crate::specfun::QuadratureSpec;
use crate::spectrum::Spectrum;
use crate::testfn::{make_smooth_step, Profile};

use config::{load_config, Grid, List, Resolver};
use output::{ls_slope, Format, Report, DIVERGE_HEADER, P2_HEADER, SCALAR_HEADER, VERIFY_HEADER, WITNESS_HEADER};
use verify::Level;

#[derive(Debug, Parser)]
#[command(name = "oulab", version, about = "Ornstein-Uhlenbeck gradient bounds laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random stream [default: 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `key = value` file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv or human [default: csv]
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Relative quadrature tolerance [default: 1e-10]
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance [default: 1e-12]
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the cross-validation suites
    Verify {
        /// lemmas, gradient, pde or all [default: all]
        #[arg(long)]
        level: Option<Level>,
    },
    /// Tabulate the divergence lower bound against m
    Diverge {
        /// quadratic:c0=<c>, explicit:file=<path>[,c0=<c>] [default: quadratic:c0=1]
        #[arg(long)]
        spectrum: Option<Spectrum>,
        /// Upper time limit [default: 1]
        #[arg(long)]
        delta: Option<f64>,
        /// Comma-separated dimensions [default: 2,4,...,4096]
        #[arg(long)]
        m: Option<List<usize>>,
        /// derived or paper_si1 [default: derived]
        #[arg(long)]
        kernel_scale: Option<KernelScale>,
        /// Include the factor e^{-t} in the time integral [default: false]
        #[arg(long)]
        time_weighted: Option<bool>,
    },
    /// Check the dimension-free bound for constant spectra
    ScalarBound {
        /// Comma-separated eigenvalues [default: 0.25,1,4,16]
        #[arg(long)]
        lambda: Option<List<f64>>,
        /// Comma-separated profiles [default: one,tanh,sin,step:n=1,sign]
        #[arg(long)]
        f: Option<List<Profile>>,
        /// Comma-separated dimensions [default: 1,2,4]
        #[arg(long)]
        m: Option<List<usize>>,
        /// Evaluation points s·e_1 as lo:hi:n [default: -5:5:201]
        #[arg(long)]
        grid: Option<Grid>,
    },
    /// Evaluate the extremal functional at smoothed sign profiles
    Witness {
        /// Comma-separated smoothing indices; may be empty [default: 1,4,16,64,256]
        #[arg(long)]
        n: Option<List<u32>>,
        /// Dimension [default: 8]
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        spectrum: Option<Spectrum>,
        /// [default: paper_si1]
        #[arg(long)]
        kernel_scale: Option<KernelScale>,
    },
    /// Invariant-measure L2 ratio of the weighted gradient, next to D_m
    P2Contrast {
        #[arg(long)]
        spectrum: Option<Spectrum>,
        /// [default: 2,4,8,16]
        #[arg(long)]
        m: Option<List<usize>>,
        /// [default: sign]
        #[arg(long)]
        profile: Option<Profile>,
        /// Monte-Carlo sample count per dimension [default: 2000]
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        kernel_scale: Option<KernelScale>,
    },
    /// Write a matplotlib script for a CSV produced by this tool
    Plot {
        /// CSV input
        input: PathBuf,
    },
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    CheckFailed = 1,
    ConfigError = 2,
}

struct Common {
    resolver: Resolver,
    seed: u64,
    format: Format,
    spec: QuadratureSpec,
    out: Option<PathBuf>,
}

fn common(global: &GlobalArgs) -> Result<Common> {
    let file = match &global.config {
        Some(p) => load_config(p)?,
        None => Default::default(),
    };
    let mut resolver = Resolver::new(file);
    let seed = resolver.get("seed", global.seed, 42u64)?;
    let format = resolver.get("format", global.format, Format::Csv)?;
    let rel = resolver.get("rel_tol", global.rel_tol, 1e-10)?;
    let abs = resolver.get("abs_tol", global.abs_tol, 1e-12)?;
    let out = resolver.get_opt::<String>("out", global.out.as_ref().map(|p| p.display().to_string()))?;
    resolver.echo.retain(|(k, _)| k != "out");
    let spec = QuadratureSpec::with_tolerances(rel, abs);
    spec.validate()?;
    Ok(Common {
        resolver,
        seed,
        format,
        spec,
        out: out.map(PathBuf::from),
    })
}

fn default_dims() -> List<usize> {
    List((1..=12).map(|j| 1usize << j).collect())
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Parse(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run_verify(c: &mut Common, level: Option<Level>) -> Result<(Report, Status)> {
    let level = c.resolver.get("level", level, Level::All)?;
    let checks = verify::run(level, c.seed, &c.spec)?;
    let mut report = Report::new("verify", c.resolver.echo.clone(), VERIFY_HEADER);
    let mut ok = true;
    for ch in &checks {
        ok &= ch.pass;
        report.push(vec![ch.name.clone().into(), ch.value.into(), ch.reference.into(), ch.tolerance.into(), ch.pass.into()]);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    report.footer.push(format!("{} checks, {} failed", checks.len(), failed));
    Ok((report, if ok { Status::Ok } else { Status::CheckFailed }))
}

fn run_diverge(
    c: &mut Common,
    spectrum: Option<Spectrum>,
    delta: Option<f64>,
    m: Option<List<usize>>,
    kernel_scale: Option<KernelScale>,
    time_weighted: Option<bool>,
) -> Result<(Report, Status)> {
    let r = &mut c.resolver;
    let spectrum = r.get("spectrum", spectrum, Spectrum::quadratic(1.0)?)?;
    let delta = r.get("delta", delta, 1.0)?;
    let dims = r.get("m", m, default_dims())?;
    let scale = r.get("kernel_scale", kernel_scale, KernelScale::Derived)?;
    let tw = r.get("time_weighted", time_weighted, false)?;
    spectrum.require_increasing("diverge")?;
    if dims.0.is_empty() {
        return Err(Error::Domain("the m list is empty".into()));
    }
    let rows = dims
        .0
        .par_iter()
        .map(|&m| divergence_lower_bound(&spectrum, m, delta, tw, scale, &c.spec))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("diverge", r.echo.clone(), DIVERGE_HEADER);
    let mut ok = true;
    for row in &rows {
        ok &= row.chain_holds(1e-9) || row.chain_bound.is_nan();
        report.push(vec![
            row.m.into(),
            row.delta.into(),
            row.d_m.into(),
            row.sqq_bound.into(),
            row.chain_bound.into(),
            row.sqrt_harmonic.into(),
            row.kernel_scale.to_string().into(),
            row.time_weighted.into(),
        ]);
    }
    if rows.len() >= 2 {
        let x: Vec<f64> = rows.iter().map(|r| (r.m as f64).ln()).collect();
        let d: Vec<f64> = rows.iter().map(|r| r.d_m).collect();
        let ch: Vec<f64> = rows.iter().map(|r| r.chain_bound).collect();
        report.footer.push(format!(
            "slope_D_m_vs_ln_m = {}, slope_chain_bound_vs_ln_m = {}",
            output::fmt_float(ls_slope(&x, &d)),
            output::fmt_float(ls_slope(&x, &ch))
        ));
    }
    let unconverged: Vec<String> = rows.iter().filter(|r| !r.converged).map(|r| r.m.to_string()).collect();
    if !unconverged.is_empty() {
        report.footer.push(format!("quadrature not converged for m = {}", unconverged.join(",")));
    }
    report.footer.push(format!("inequality chain {}", if ok { "holds on every row" } else { "VIOLATED" }));
    Ok((report, if ok { Status::Ok } else { Status::CheckFailed }))
}

fn run_scalar(
    c: &mut Common,
    lambda: Option<List<f64>>,
    f: Option<List<Profile>>,
    m: Option<List<usize>>,
    grid: Option<Grid>,
) -> Result<(Report, Status)> {
    let r = &mut c.resolver;
    let lambdas = r.get("lambda", lambda, List(vec![0.25, 1.0, 4.0, 16.0]))?;
    let suite = r.get(
        "f",
        f,
        List(vec![Profile::Constant(1.0), Profile::Tanh, Profile::Sin, make_smooth_step(1)?, Profile::Sign]),
    )?;
    let dims = r.get("m", m, List(vec![1, 2, 4]))?;
    let grid = r.get("grid", grid, Grid { lo: -5.0, hi: 5.0, n: 201 })?;
    if suite.0.is_empty() {
        return Err(Error::Domain("the function suite (--f) is empty".into()));
    }
    if lambdas.0.is_empty() || dims.0.is_empty() {
        return Err(Error::Domain("--lambda and --m need at least one value".into()));
    }
    let rows = scalar_bound_harness(&lambdas.0, &suite.0, &dims.0, &grid.points(), &c.spec)?;
    let mut report = Report::new("scalar-bound", r.echo.clone(), SCALAR_HEADER);
    let mut ok = true;
    for row in &rows {
        ok &= row.pass;
        report.push(vec![
            row.lambda.into(),
            row.f_name.clone().into(),
            row.m.into(),
            row.sup_value.into(),
            row.bound.into(),
            row.pass.into(),
        ]);
    }
    report.footer.push(format!(
        "{} rows, {} failing",
        rows.len(),
        rows.iter().filter(|r| !r.pass).count()
    ));
    let largest = rows.iter().map(|r| r.sup_value).fold(0.0, f64::max);
    report.footer.push(format!(
        "largest sup = {}, bound pi/sqrt(2) = {}, sharper constant sqrt(pi) = {}",
        output::fmt_float(largest),
        output::fmt_float(SCALAR_BOUND),
        output::fmt_float(std::f64::consts::PI.sqrt())
    ));
    Ok((report, if ok { Status::Ok } else { Status::CheckFailed }))
}

fn run_witness(
    c: &mut Common,
    n: Option<List<u32>>,
    m: Option<usize>,
    delta: Option<f64>,
    spectrum: Option<Spectrum>,
    kernel_scale: Option<KernelScale>,
) -> Result<(Report, Status)> {
    let r = &mut c.resolver;
    let ns = r.get("n", n, List(vec![1, 4, 16, 64, 256]))?;
    let m = r.get("m", m, 8usize)?;
    let delta = r.get("delta", delta, 1.0)?;
    let spectrum = r.get("spectrum", spectrum, Spectrum::quadratic(1.0)?)?;
    let scale = r.get("kernel_scale", kernel_scale, KernelScale::PaperSi1)?;
    if m < 2 {
        return Err(Error::Domain(format!(
            "witness needs m >= 2 (the polar reduction is defined from m = 2), got {m}"
        )));
    }
    let profiles: Vec<(u32, Profile)> = std::iter::once(Ok((0, Profile::Sign)))
        .chain(ns.0.iter().map(|&n| Ok((n, make_smooth_step(n)?))))
        .collect::<Result<_>>()?;
    let values = profiles
        .par_iter()
        .map(|(_, p)| s_m_witness(p, &spectrum, m, delta, scale, &c.spec))
        .collect::<Result<Vec<f64>>>()?;
    let limit = values[0];
    let mut report = Report::new("witness", r.echo.clone(), WITNESS_HEADER);
    for ((n, _), v) in profiles.iter().zip(&values) {
        report.push(vec![(*n).into(), m.into(), delta.into(), (*v).into(), limit.into()]);
    }
    let monotone = values[1..].windows(2).all(|w| w[1] >= w[0]);
    report.footer.push(format!("nondecreasing in n: {monotone}"));
    Ok((report, Status::Ok))
}

#[allow(clippy::too_many_arguments)]
fn run_p2(
    c: &mut Common,
    spectrum: Option<Spectrum>,
    m: Option<List<usize>>,
    profile: Option<Profile>,
    samples: Option<usize>,
    delta: Option<f64>,
    kernel_scale: Option<KernelScale>,
) -> Result<(Report, Status)> {
    let r = &mut c.resolver;
    let spectrum = r.get("spectrum", spectrum, Spectrum::quadratic(1.0)?)?;
    let dims = r.get("m", m, List(vec![2, 4, 8, 16]))?;
    let profile = r.get("profile", profile, Profile::Sign)?;
    let samples = r.get("samples", samples, 2000usize)?;
    let delta = r.get("delta", delta, 1.0)?;
    let scale = r.get("kernel_scale", kernel_scale, KernelScale::Derived)?;
    if !profile.is_odd() || profile.sup_bound() > 1.0 {
        return Err(Error::Domain(format!("p2-contrast needs an odd profile bounded by 1, got {profile}")));
    }
    let rows = p2_contrast(&spectrum, &dims.0, &profile, samples, RngStream::new(c.seed, 0), delta, scale, &c.spec)?;
    let mut report = Report::new("p2-contrast", r.echo.clone(), P2_HEADER);
    for row in &rows {
        report.push(vec![row.m.into(), row.ratio.into(), row.std_error.into(), row.d_m.into()]);
    }
    let finite: Vec<f64> = rows.iter().map(|r| r.ratio).filter(|r| r.is_finite() && *r > 0.0).collect();
    if !finite.is_empty() {
        let hi = finite.iter().copied().fold(f64::MIN, f64::max);
        let lo = finite.iter().copied().fold(f64::MAX, f64::min);
        report.footer.push(format!("ratio max/min = {}", output::fmt_float(hi / lo)));
    }
    Ok((report, Status::Ok))
}

/// Runs a parsed command line; errors are configuration or usage errors.
pub fn execute(cli: Cli) -> Result<Status> {
    if let Command::Plot { input } = &cli.command {
        let mut c = common(&cli.global)?;
        let csv = std::fs::read_to_string(input)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", input.display())))?;
        let script = plot::plot_script(&csv)?;
        emit(&script, &c.out.take())?;
        return Ok(Status::Ok);
    }
    let mut c = common(&cli.global)?;
    let (report, status) = match cli.command {
        Command::Verify { level } => run_verify(&mut c, level)?,
        Command::Diverge {
            spectrum,
            delta,
            m,
            kernel_scale,
            time_weighted,
        } => run_diverge(&mut c, spectrum, delta, m, kernel_scale, time_weighted)?,
        Command::ScalarBound { lambda, f, m, grid } => run_scalar(&mut c, lambda, f, m, grid)?,
        Command::Witness {
            n,
            m,
            delta,
            spectrum,
            kernel_scale,
        } => run_witness(&mut c, n, m, delta, spectrum, kernel_scale)?,
        Command::P2Contrast {
            spectrum,
            m,
            profile,
            samples,
            delta,
            kernel_scale,
        } => run_p2(&mut c, spectrum, m, profile, samples, delta, kernel_scale)?,
        Command::Plot { .. } => unreachable!("handled above"),
    };
    emit(&report.render(c.format), &c.out)?;
    Ok(status)
}

/// Parses `args`, runs, and maps every outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::ConfigError as i32 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(s) => s as i32,
        Err(e) => {
            eprintln!("error: {e}");
            Status::ConfigError as i32
        }
    }
}
