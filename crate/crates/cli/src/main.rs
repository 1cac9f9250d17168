//! Batch front-end for the vibron-core analysis: parameter sweeps, Husimi
//! cross-section grids, variational curves, zero tables and criticality
//! reports, persisted as CSV or JSON.

mod config;
mod records;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use vibron_core::cp2quad::{self, build_grid, QuadratureGrid};
use vibron_core::husimi::{cross_section, GridSpec, HusimiField, SectionAxis};
use vibron_core::spectra::ground_state;
use vibron_core::variational::{cat_equilibrium, criticality_scan, cs_equilibrium};
use vibron_core::zeros::zero_lines;

use config::{resolve, ConfigFile};
use records::{fmt_float, CriticalReport, RenyiEntry, SweepRecord, ZeroRow, ZeroTable};

#[derive(Parser)]
#[command(
    name = "vibron",
    version,
    about = "Phase-space analysis of the 2D U(3) vibron model ground state"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep xi for each N and source, writing moments and entropies
    Sweep(SweepArgs),
    /// Sample a Husimi cross section on a position or momentum grid
    HusimiGrid(HusimiGridArgs),
    /// Equilibrium radius and energy curves of the variational ansatzes
    Variational(VariationalArgs),
    /// Zero-line table of the cat Husimi distribution
    Zeros(ZerosArgs),
    /// Locate the critical point from the condensate energy curve
    Critical(CriticalArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Output file path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: VIBRON_THREADS, then all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Flat key-value config file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Boson numbers, comma separated
    #[arg(long = "N", value_name = "LIST")]
    n_list: Option<String>,
    #[arg(long)]
    xi_min: Option<f64>,
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long)]
    xi_step: Option<f64>,
    /// Renyi-Wehrl orders, comma separated
    #[arg(long)]
    nu: Option<String>,
    /// Sources to evaluate: exact, cs, cat (comma separated)
    #[arg(long)]
    source: Option<String>,
    /// Quadrature refinement tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Integration path: reduced (symmetry-aware, default) or general
    #[arg(long)]
    integrator: Option<String>,
    /// Output format: csv or json (default: from the file extension)
    #[arg(long)]
    format: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct HusimiGridArgs {
    /// Field kind: exact, cs or cat
    #[arg(long)]
    kind: Option<String>,
    #[arg(long = "N", value_name = "N")]
    n_total: Option<u32>,
    #[arg(long)]
    xi: Option<f64>,
    /// Section: position or momentum
    #[arg(long)]
    axis: Option<String>,
    /// Coordinate range as min:max
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long)]
    step: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VariationalArgs {
    /// Boson numbers, comma separated; `inf` marks the closed-form limit
    #[arg(long = "N", value_name = "LIST")]
    n_list: Option<String>,
    #[arg(long)]
    xi_min: Option<f64>,
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long)]
    xi_step: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long = "N", value_name = "N")]
    n_total: Option<u32>,
    #[arg(long)]
    xi: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long)]
    xi_min: Option<f64>,
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long)]
    xi_step: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Failure with the process exit code it maps to: 2 for invalid arguments
/// or I/O problems, 3 for numerical non-convergence.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn args(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<vibron_core::Error> for Failure {
    fn from(e: vibron_core::Error) -> Self {
        let code = match e {
            vibron_core::Error::QuadratureNotConverged { .. }
            | vibron_core::Error::EigensolverFailed { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure::args(message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::HusimiGrid(args) => cmd_husimi_grid(args),
        Command::Variational(args) => cmd_variational(args),
        Command::Zeros(args) => cmd_zeros(args),
        Command::Critical(args) => cmd_critical(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile, Failure> {
    match path {
        Some(p) => ConfigFile::load(p).map_err(Failure::args),
        None => Ok(ConfigFile::default()),
    }
}

fn parse_f64(raw: &str) -> Result<f64, String> {
    raw.trim()
        .parse()
        .map_err(|_| format!("not a number: {raw:?}"))
}

fn parse_usize(raw: &str) -> Result<usize, String> {
    raw.trim()
        .parse()
        .map_err(|_| format!("not an integer: {raw:?}"))
}

fn parse_u32(raw: &str) -> Result<u32, String> {
    raw.trim()
        .parse()
        .map_err(|_| format!("not an integer: {raw:?}"))
}

fn parse_u32_list(raw: &str) -> Result<Vec<u32>, String> {
    raw.split(',').map(parse_u32).collect()
}

fn parse_f64_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',').map(parse_f64).collect()
}

fn parse_string(raw: &str) -> Result<String, String> {
    Ok(raw.trim().to_string())
}

/// Inclusive uniform grid, tolerant of a final rounding slop.
fn xi_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(0.0..=1.0).contains(&min) || !(0.0..=1.0).contains(&max) || max < min {
        return Err(Failure::args(format!(
            "xi range [{min}, {max}] must lie inside [0, 1]"
        )));
    }
    if step <= 0.0 {
        return Err(Failure::args(format!(
            "xi step must be positive, got {step}"
        )));
    }
    let count = ((max - min) / step + 1.0 + 1e-9).floor() as usize;
    Ok((0..count).map(|k| min + k as f64 * step).collect())
}

fn resolve_threads(flag: Option<usize>, cfg: &ConfigFile) -> Result<usize, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    if let Some(raw) = cfg.get("threads") {
        return parse_usize(raw).map_err(Failure::args);
    }
    match std::env::var("VIBRON_THREADS") {
        Ok(raw) => parse_usize(&raw).map_err(|e| Failure::args(format!("VIBRON_THREADS: {e}"))),
        Err(_) => Ok(0), // rayon default
    }
}

fn build_pool(threads: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::args(format!("thread pool: {e}")))
}

fn resolve_out(common: &CommonArgs, cfg: &ConfigFile) -> Result<PathBuf, Failure> {
    match (&common.out, cfg.get("out")) {
        (Some(p), _) => Ok(p.clone()),
        (None, Some(raw)) => Ok(PathBuf::from(raw)),
        (None, None) => Err(Failure::args("missing --out")),
    }
}

fn write_output(path: &PathBuf, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content)
        .map_err(|e| Failure::args(format!("cannot write {}: {e}", path.display())))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Source {
    Exact,
    Cs,
    Cat,
}

impl Source {
    fn name(self) -> &'static str {
        match self {
            Source::Exact => "exact",
            Source::Cs => "cs",
            Source::Cat => "cat",
        }
    }

    fn parse(raw: &str) -> Result<Self, String> {
        match raw.trim() {
            "exact" => Ok(Source::Exact),
            "cs" => Ok(Source::Cs),
            "cat" => Ok(Source::Cat),
            other => Err(format!(
                "unknown source {other:?} (expected exact, cs or cat)"
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Integrator {
    Reduced,
    General,
}

impl Integrator {
    fn parse(raw: &str) -> Result<Self, String> {
        match raw.trim() {
            "reduced" => Ok(Integrator::Reduced),
            "general" => Ok(Integrator::General),
            other => Err(format!(
                "unknown integrator {other:?} (expected reduced or general)"
            )),
        }
    }

    fn moment(
        self,
        field: &HusimiField,
        nu: f64,
        grid: &QuadratureGrid,
    ) -> vibron_core::Result<f64> {
        match self {
            Integrator::Reduced => Ok(cp2quad::moment_reduced(field, nu, grid)?.value),
            Integrator::General => Ok(cp2quad::moment(field, nu, grid)?.value),
        }
    }

    fn wehrl(self, field: &HusimiField, grid: &QuadratureGrid) -> vibron_core::Result<f64> {
        match self {
            Integrator::Reduced => cp2quad::wehrl_reduced(field, grid),
            Integrator::General => cp2quad::wehrl(field, grid),
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.common.config)?;
    let n_list = resolve(args.n_list, cfg.get("N"), parse_string, "4,8,16".into())?;
    let n_list = parse_u32_list(&n_list)?;
    let xi_min = resolve(args.xi_min, cfg.get("xi-min"), parse_f64, 0.0)?;
    let xi_max = resolve(args.xi_max, cfg.get("xi-max"), parse_f64, 1.0)?;
    let xi_step = resolve(args.xi_step, cfg.get("xi-step"), parse_f64, 0.01)?;
    let nu_raw = resolve(args.nu, cfg.get("nu"), parse_string, "2".into())?;
    let nu_list = parse_f64_list(&nu_raw)?;
    let source_raw = resolve(
        args.source,
        cfg.get("source"),
        parse_string,
        "exact,cat".into(),
    )?;
    let tol = resolve(args.tol, cfg.get("tol"), parse_f64, 1e-9)?;
    let integrator_raw = resolve(
        args.integrator,
        cfg.get("integrator"),
        parse_string,
        "reduced".into(),
    )?;
    let integrator = Integrator::parse(&integrator_raw)?;
    let format_raw = resolve(args.format, cfg.get("format"), parse_string, String::new())?;
    let out = resolve_out(&args.common, &cfg)?;
    let threads = resolve_threads(args.common.threads, &cfg)?;

    let mut sources: Vec<Source> = source_raw
        .split(',')
        .map(Source::parse)
        .collect::<Result<_, _>>()?;
    sources.sort();
    sources.dedup();
    for &n in &n_list {
        if n < 2 {
            return Err(Failure::args(format!("N must be at least 2, got {n}")));
        }
    }
    for &nu in &nu_list {
        if nu <= 0.0 || nu == 1.0 {
            return Err(Failure::args(format!(
                "Renyi order must be positive and != 1, got {nu}"
            )));
        }
    }
    let grid = xi_grid(xi_min, xi_max, xi_step)?;
    let json = match format_raw.as_str() {
        "" => out.extension().is_some_and(|e| e == "json"),
        "json" => true,
        "csv" => false,
        other => return Err(Failure::args(format!("unknown format {other:?}"))),
    };

    // canonical cell order: N, then xi, then source
    let mut cells = Vec::new();
    for &n in &n_list {
        for &xi in &grid {
            for &source in &sources {
                cells.push((n, xi, source));
            }
        }
    }

    let pool = build_pool(threads)?;
    let records: Vec<SweepRecord> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, xi, source)| compute_sweep_record(n, xi, source, &nu_list, tol, integrator))
            .collect::<Result<_, _>>()
    })?;

    let content = if json {
        records::sweep_json(&records)?
    } else {
        records::sweep_csv(&records)
    };
    write_output(&out, &content)?;
    println!("wrote {} records -> {}", records.len(), out.display());
    Ok(())
}

fn compute_sweep_record(
    n_total: u32,
    xi: f64,
    source: Source,
    nu_list: &[f64],
    tol: f64,
    integrator: Integrator,
) -> Result<SweepRecord, Failure> {
    let nu_cap = nu_list.iter().cloned().fold(2.0, f64::max);
    let grid = build_grid(n_total, nu_cap, tol)?;
    let (field, radius, energy) = match source {
        Source::Exact => {
            let gs = ground_state(n_total, xi)?;
            let energy = gs.energy_per_particle();
            (HusimiField::exact(&gs), None, energy)
        }
        Source::Cs => {
            let (radius, energy) = cs_equilibrium(xi)?;
            (HusimiField::cs(n_total, radius), Some(radius), energy)
        }
        Source::Cat => {
            let (radius, energy) = cat_equilibrium(n_total, xi)?;
            (HusimiField::cat(n_total, radius), Some(radius), energy)
        }
    };
    let ipr = integrator.moment(&field, 2.0, &grid)?;
    let wehrl = integrator.wehrl(&field, &grid)?;
    let renyi = nu_list
        .iter()
        .map(|&nu| {
            let m = if nu == 2.0 {
                ipr
            } else {
                integrator.moment(&field, nu, &grid)?
            };
            Ok(RenyiEntry {
                nu,
                value: m.ln() / (1.0 - nu),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(SweepRecord {
        n_total,
        xi,
        source: source.name().to_string(),
        ipr,
        wehrl,
        renyi,
        radius,
        energy_per_particle: energy,
    })
}

fn cmd_husimi_grid(args: HusimiGridArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.common.config)?;
    let kind_raw = resolve(args.kind, cfg.get("kind"), parse_string, "exact".into())?;
    let source = Source::parse(&kind_raw)?;
    let n_total = resolve(args.n_total, cfg.get("N"), parse_u32, 8)?;
    let xi = resolve(args.xi, cfg.get("xi"), parse_f64, 0.0)?;
    let axis_raw = resolve(args.axis, cfg.get("axis"), parse_string, "momentum".into())?;
    let axis = match axis_raw.trim() {
        "position" => SectionAxis::Position,
        "momentum" => SectionAxis::Momentum,
        other => return Err(Failure::args(format!("unknown axis {other:?}"))),
    };
    let range_raw = resolve(args.range, cfg.get("range"), parse_string, "-2:2".into())?;
    let (lo, hi) = range_raw
        .split_once(':')
        .ok_or_else(|| Failure::args(format!("range must be min:max, got {range_raw:?}")))?;
    let min = parse_f64(lo)?;
    let max = parse_f64(hi)?;
    let step = resolve(args.step, cfg.get("step"), parse_f64, 0.05)?;
    let out = resolve_out(&args.common, &cfg)?;
    let threads = resolve_threads(args.common.threads, &cfg)?;

    let field = match source {
        Source::Exact => HusimiField::exact(&ground_state(n_total, xi)?),
        Source::Cs => HusimiField::cs(n_total, cs_equilibrium(xi)?.0),
        Source::Cat => HusimiField::cat(n_total, cat_equilibrium(n_total, xi)?.0),
    };
    let spec = GridSpec::new(min, max, step)?;
    let pool = build_pool(threads)?;
    let section = pool.install(|| cross_section(&field, axis, &spec))?;
    let content = records::section_csv(&section);
    write_output(&out, &content)?;
    println!(
        "wrote {0}x{0} section -> {1}",
        section.coords.len(),
        out.display()
    );
    Ok(())
}

fn cmd_variational(args: VariationalArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.common.config)?;
    let n_raw = resolve(args.n_list, cfg.get("N"), parse_string, "8,60,inf".into())?;
    let n_list: Vec<Option<u32>> = n_raw
        .split(',')
        .map(|tok| match tok.trim() {
            "inf" => Ok(None),
            other => parse_u32(other).map(Some),
        })
        .collect::<Result<_, String>>()?;
    let xi_min = resolve(args.xi_min, cfg.get("xi-min"), parse_f64, 0.0)?;
    let xi_max = resolve(args.xi_max, cfg.get("xi-max"), parse_f64, 1.0)?;
    let xi_step = resolve(args.xi_step, cfg.get("xi-step"), parse_f64, 0.01)?;
    let out = resolve_out(&args.common, &cfg)?;
    let threads = resolve_threads(args.common.threads, &cfg)?;
    let grid = xi_grid(xi_min, xi_max, xi_step)?;

    let mut cells = Vec::new();
    for &n in &n_list {
        for &xi in &grid {
            cells.push((n, xi));
        }
    }
    let pool = build_pool(threads)?;
    let rows: Vec<(Option<u32>, f64, f64, f64)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, xi)| {
                let (radius, energy) = match n {
                    None => cs_equilibrium(xi)?,
                    Some(n) => cat_equilibrium(n, xi)?,
                };
                Ok::<_, vibron_core::Error>((n, xi, radius, energy))
            })
            .collect::<Result<_, _>>()
    })?;

    let mut content = String::from("N,xi,radius,energy\n");
    for (n, xi, radius, energy) in rows {
        let n_str = n.map_or("inf".to_string(), |v| v.to_string());
        content.push_str(&format!(
            "{n_str},{},{},{}\n",
            fmt_float(xi),
            fmt_float(radius),
            fmt_float(energy)
        ));
    }
    write_output(&out, &content)?;
    println!("wrote variational curves -> {}", out.display());
    Ok(())
}

fn cmd_zeros(args: ZerosArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.common.config)?;
    let n_total = resolve(args.n_total, cfg.get("N"), parse_u32, 8)?;
    let xi = resolve(args.xi, cfg.get("xi"), parse_f64, 0.5)?;
    let out = resolve_out(&args.common, &cfg)?;

    let (radius, _) = cat_equilibrium(n_total, xi)?;
    let lines = zero_lines(n_total, radius);
    let table = ZeroTable {
        n_total,
        xi,
        radius,
        lines: lines
            .iter()
            .map(|l| ZeroRow {
                index: l.index,
                offset: l.offset,
            })
            .collect(),
    };
    let content = serde_json::to_string_pretty(&table)
        .map_err(|e| Failure::args(format!("json: {e}")))?
        + "\n";
    write_output(&out, &content)?;
    println!(
        "wrote {} zero lines -> {}",
        table.lines.len(),
        out.display()
    );
    Ok(())
}

fn cmd_critical(args: CriticalArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.common.config)?;
    let xi_min = resolve(args.xi_min, cfg.get("xi-min"), parse_f64, 0.001)?;
    let xi_max = resolve(args.xi_max, cfg.get("xi-max"), parse_f64, 0.999)?;
    let xi_step = resolve(args.xi_step, cfg.get("xi-step"), parse_f64, 0.001)?;
    let out = resolve_out(&args.common, &cfg)?;
    let grid = xi_grid(xi_min, xi_max, xi_step)?;
    let (xi_c, jump) = criticality_scan(&grid)?;
    let report = CriticalReport {
        xi_min,
        xi_max,
        xi_step,
        xi_c,
        second_derivative_jump: jump,
    };
    let content = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::args(format!("json: {e}")))?
        + "\n";
    write_output(&out, &content)?;
    println!(
        "critical point {xi_c:.4}, jump {jump:.4} -> {}",
        out.display()
    );
    Ok(())
}
