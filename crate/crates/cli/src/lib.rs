//! Command-line front end for `decayrate`: rate sweeps, figure data, model
//! comparison runs and a self-validation suite, all emitting CSV.

// `!(x > 0.0)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod figure;
pub mod sweep;
pub mod table;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use config::SweepConfig;
pub use error::CliError;

use config::Target;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DECAYRATE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "decayrate", version, about = "Spontaneous decay rates near mirrors and in planar cavities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single partially transparent mirror: closed form and quadrature.
    Mirror,
    /// Two-mirror cavity: quadrature, bounce series, second-order limit.
    Cavity,
    /// Subwavelength cavity limits against quadrature.
    Subwavelength,
    /// Optical cavity asymptote against quadrature and series.
    Optical,
    /// Jaynes-Cummings vs single-rate vs quantum-jump populations.
    Lindblad,
    /// Curve data for one figure.
    Figure {
        /// mirror_dielectric, mirror_plasmonic, subwl_dielectric_vs_r,
        /// subwl_dielectric_vs_d, subwl_plasmonic_vs_r, subwl_plasmonic_vs_d
        id: String,
    },
    /// Run the self-checks; exit 1 if any fails.
    Validate,
}

impl Command {
    pub fn target(&self) -> Target {
        match self {
            Command::Mirror => Target::Mirror,
            Command::Cavity => Target::Cavity,
            Command::Subwavelength => Target::Subwavelength,
            Command::Optical => Target::Optical,
            Command::Lindblad => Target::Lindblad,
            Command::Figure { .. } => Target::Figure,
            Command::Validate => Target::Validate,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// key = value config file; flags override its entries
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Real reflection rate
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r: Option<String>,
    /// Distance as k0 d
    #[arg(long, global = true, conflicts_with = "d_over_lambda")]
    pub k0d: Option<String>,
    /// Distance as d / lambda0
    #[arg(long, global = true)]
    pub d_over_lambda: Option<String>,
    /// start:stop:count[:log]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub grid: Option<String>,
    /// Swept parameter: k0d, d-over-lambda or r
    #[arg(long, global = true)]
    pub axis: Option<String>,
    /// closed, quadrature, series, limit or all
    #[arg(long, global = true)]
    pub method: Option<String>,
    #[arg(long, global = true)]
    pub tol: Option<String>,
    #[arg(long, global = true)]
    pub n_traj: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Output file (figure: output directory)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub quick: bool,
    /// Print the effective configuration and exit
    #[arg(long, global = true)]
    pub dump_config: bool,
    /// Atom-cavity coupling
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g: Option<String>,
    #[arg(long, global = true)]
    pub kappa: Option<String>,
    #[arg(long, global = true)]
    pub gamma: Option<String>,
    /// Rate of the single-rate model (default gamma + 4 g^2 / kappa)
    #[arg(long, global = true)]
    pub gamma_cav: Option<String>,
    #[arg(long, global = true)]
    pub dt: Option<String>,
    #[arg(long, global = true)]
    pub n_fock: Option<String>,
    #[arg(long, global = true, hide = true, allow_negative_numbers = true)]
    pub perturb_kernel: Option<String>,
}

/// Defaults, then the config file, then command-line flags.
pub fn build_config(cmd: &Command, opts: &Opts) -> Result<SweepConfig, CliError> {
    let mut cfg = SweepConfig::new(cmd.target());
    if let Some(path) = &opts.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.apply_text(&text)?;
    }
    cfg.target = cmd.target();
    if let Command::Figure { id } = cmd {
        cfg.figure = Some(id.parse()?);
    }
    let flags: [(&str, &Option<String>); 15] = [
        ("r", &opts.r),
        ("k0d", &opts.k0d),
        ("d_over_lambda", &opts.d_over_lambda),
        ("grid", &opts.grid),
        ("axis", &opts.axis),
        ("method", &opts.method),
        ("tol", &opts.tol),
        ("n_traj", &opts.n_traj),
        ("seed", &opts.seed),
        ("g", &opts.g),
        ("kappa", &opts.kappa),
        ("gamma", &opts.gamma),
        ("gamma_cav", &opts.gamma_cav),
        ("dt", &opts.dt),
        ("n_fock", &opts.n_fock),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(v) = &opts.perturb_kernel {
        cfg.set("perturb_kernel", v)?;
    }
    if let Some(out) = &opts.out {
        cfg.out = Some(out.clone());
    }
    if opts.quick {
        cfg.quick = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn default_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

pub fn output_path(cfg: &SweepConfig) -> PathBuf {
    match (&cfg.out, cfg.target, cfg.figure) {
        (Some(p), _, _) => p.clone(),
        (None, Target::Figure, Some(id)) => default_dir().join(id.as_str()),
        (None, t, _) => default_dir().join(format!("{t}.csv")),
    }
}

fn report_failures(err: &mut dyn Write, failures: &[String]) -> i32 {
    if failures.is_empty() {
        return 0;
    }
    let _ = writeln!(err, "{} cell(s) failed; marked NaN in the output:", failures.len());
    for f in failures.iter().take(10) {
        let _ = writeln!(err, "  {f}");
    }
    3
}

/// Runs a parsed configuration; returns the process exit code.
pub fn execute(cfg: &SweepConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cfg.target {
        Target::Validate => {
            let started = Instant::now();
            let report = validate::run(&validate::ValidateOptions {
                quick: cfg.quick,
                tol: cfg.tol,
                n_traj: cfg.n_traj,
                seed: cfg.seed,
                perturb_kernel: cfg.perturb_kernel,
            });
            for c in &report.checks {
                let _ = writeln!(out, "{c}");
            }
            for line in &report.info {
                let _ = writeln!(out, "INFO  {line}");
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(
                out,
                "{} of {} checks passed in {:.1} s",
                report.checks.len() - failed,
                report.checks.len(),
                started.elapsed().as_secs_f64()
            );
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Target::Figure => {
            let id = cfg.figure.expect("validated");
            let dir = output_path(cfg);
            let (paths, failures) = figure::write_figure(id, &dir, cfg.tol)?;
            let _ = writeln!(out, "wrote {} files to {}", paths.len(), dir.display());
            Ok(report_failures(err, &failures))
        }
        Target::Lindblad | Target::Mirror | Target::Cavity | Target::Subwavelength | Target::Optical => {
            let table = if cfg.target == Target::Lindblad { sweep::lindblad(cfg)? } else { sweep::rate_sweep(cfg)? };
            let path = output_path(cfg);
            table.write_file(&path)?;
            if table.rows.len() <= 12 {
                let _ = writeln!(out, "{}", table.render());
            }
            let _ = writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display());
            Ok(report_failures(err, &table.failures))
        }
    }
}

/// Full command-line flow for an already parsed [`Cli`].
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = build_config(&cli.command, &cli.opts).and_then(|cfg| {
        if cli.opts.dump_config {
            let _ = write!(out, "{}", cfg.dump());
            return Ok(0);
        }
        execute(&cfg, out, err)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
