use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{Complex, DMatrix};
use pairsim::entanglement::conjugation_matrix;
use pairsim::verify::{run_with, Level};
use pairsim_cli::config::{parse_level_pairs, parse_methods, Settings};
use pairsim_cli::{plot, report, scan, Result};

const DEFAULT_OMEGA: usize = 16;

#[derive(Parser)]
#[command(name = "pairsim", version, about = "Entanglement in the ground state of the reduced BCS pairing model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the coupling and write CSV tables and SVG plots.
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Skip the SVG plots.
        #[arg(long)]
        no_plots: bool,
        /// Evaluate grid points one at a time.
        #[arg(long)]
        serial: bool,
    },
    /// Print every measure at a single coupling.
    Point {
        #[command(flatten)]
        model: ModelArgs,
        /// Coupling G in units of eps.
        #[arg(long, env = "PAIRSIM_G")]
        g: f64,
    },
    /// Strong-coupling limits beside the exact values.
    Limits {
        #[arg(long, env = "PAIRSIM_OMEGA", default_value_t = DEFAULT_OMEGA)]
        omega: usize,
        /// Exact comparison at G = strength * omega * eps.
        #[arg(long, default_value_t = 100.0)]
        strength: f64,
        /// Print only the closed forms.
        #[arg(long)]
        analytic_only: bool,
    },
    /// Run the acceptance checks; exits nonzero on any failure.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast, env = "PAIRSIM_LEVEL")]
        level: LevelArg,
        /// Replace the conjugation matrix by the identity (mutation check).
        #[arg(long, hide = true)]
        corrupt_conjugation: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Args)]
struct ModelArgs {
    /// Optional key = value file; flags and environment variables win.
    #[arg(long, env = "PAIRSIM_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "PAIRSIM_OMEGA")]
    omega: Option<usize>,
    #[arg(long, env = "PAIRSIM_PAIRS")]
    pairs: Option<usize>,
    #[arg(long, env = "PAIRSIM_EPS")]
    eps: Option<f64>,
    /// Level pairs as k:k'[,k:k'].
    #[arg(long, env = "PAIRSIM_PAIRS_OF_LEVELS")]
    pairs_of_levels: Option<String>,
    /// Subset of exact,bcs,pbcs.
    #[arg(long, env = "PAIRSIM_METHODS")]
    methods: Option<String>,
}

#[derive(Args)]
struct GridArgs {
    /// Lowest coupling, in units of eps.
    #[arg(long, env = "PAIRSIM_G_MIN")]
    g_min: Option<f64>,
    /// Highest coupling, in units of eps.
    #[arg(long, env = "PAIRSIM_G_MAX")]
    g_max: Option<f64>,
    #[arg(long, env = "PAIRSIM_G_POINTS")]
    g_points: Option<usize>,
    /// Logarithmic spacing (a grid from 0 keeps G = 0 and starts the logs at 0.02).
    #[arg(long, env = "PAIRSIM_G_LOG", num_args = 0..=1, default_missing_value = "true")]
    g_log: Option<bool>,
    /// Output directory.
    #[arg(long, env = "PAIRSIM_OUT")]
    out: Option<PathBuf>,
}

impl ModelArgs {
    fn settings(&self) -> Result<Settings> {
        let given = Settings {
            omega: self.omega,
            pairs: self.pairs,
            eps: self.eps,
            level_pairs: self.pairs_of_levels.as_deref().map(parse_level_pairs).transpose()?,
            methods: self.methods.as_deref().map(parse_methods).transpose()?,
            ..Settings::default()
        };
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(given.or(file))
    }
}

impl GridArgs {
    fn settings(&self) -> Settings {
        Settings {
            g_min: self.g_min,
            g_max: self.g_max,
            g_points: self.g_points,
            g_log: self.g_log,
            out: self.out.clone(),
            ..Settings::default()
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Scan { model, grid, no_plots, serial } => {
            let cfg = grid.settings().or(model.settings()?).resolve(DEFAULT_OMEGA)?;
            let result = scan::compute(&cfg, !serial)?;
            let mut written = scan::write_csv(&result, &cfg.out)?;
            if !no_plots {
                written.extend(plot::write_plots(&result, &cfg.out)?);
            }
            for p in written {
                println!("{}", p.display());
            }
        }
        Command::Point { model, g } => {
            let cfg = model.settings()?.resolve(DEFAULT_OMEGA)?;
            print!("{}", report::point_report(&cfg, g)?);
        }
        Command::Limits { omega, strength, analytic_only } => {
            print!("{}", report::limits_report(omega, (!analytic_only).then_some(strength))?);
        }
        Command::Verify { level, corrupt_conjugation } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let conj = if corrupt_conjugation { DMatrix::<Complex<f64>>::identity(8, 8) } else { conjugation_matrix() };
            let reports = run_with(level, &conj);
            print!("{}", report::verify_report(&reports, level));
            return Ok(reports.iter().all(|r| r.passed()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
