//! `ragame`: compute success curves, cut-off sweeps and equilibria of the
//! random access game from JSON configs.
//!
//! Exit codes: 0 ok, 1 verification found no equilibrium, 2 parse or I/O
//! error, 3 invalid input, 4 numeric failure.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use manifest::RunManifest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ragame::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } => 2,
            CliError::Invalid(_) => 3,
            CliError::Model(e) if e.is_numeric() => 4,
            CliError::Model(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ragame", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Success probability g(d) of one node on a grid, as `d,g` CSV.
    SuccessCurve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 0)]
        node: usize,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Symmetric uniform-disk cut-offs over an (n, c) grid, as `n,c,d` CSV.
    CutoffSweep {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,10")]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.5,1,2,5,10")]
        c_grid: Vec<f64>,
        #[arg(long, default_value_t = 12.0)]
        radius: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve for the threshold equilibrium and write the JSON report.
    Equilibrium {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check whether a profile is an equilibrium; exits 1 when it is not.
    Verify {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo estimates of g(d), or of expected utility with
    /// `--utility`, as `d,estimate,std_error` CSV.
    Simulate {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 0)]
        node: usize,
        /// Single distance; without it the whole grid is estimated.
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        utility: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn manifest(cli: &Cli) -> RunManifest {
    let mut m;
    match &cli.command {
        Command::SuccessCurve {
            game,
            profile,
            grid,
            out,
            ..
        } => {
            m = RunManifest::new("success-curve");
            m.config = Some(game.config.clone());
            m.profile = Some(profile.clone());
            m.grid = Some(*grid);
            m.out = out.out.clone();
        }
        Command::CutoffSweep { out, .. } => {
            m = RunManifest::new("cutoff-sweep");
            m.out = out.out.clone();
        }
        Command::Equilibrium { game, tol, out } => {
            m = RunManifest::new("equilibrium");
            m.config = Some(game.config.clone());
            m.tol = *tol;
            m.out = out.out.clone();
        }
        Command::Verify {
            game,
            profile,
            tol,
            out,
        } => {
            m = RunManifest::new("verify");
            m.config = Some(game.config.clone());
            m.profile = Some(profile.clone());
            m.tol = *tol;
            m.out = out.out.clone();
        }
        Command::Simulate {
            game,
            profile,
            d,
            grid,
            seed,
            out,
            ..
        } => {
            m = RunManifest::new("simulate");
            m.config = Some(game.config.clone());
            m.profile = Some(profile.clone());
            m.seed = Some(*seed);
            m.grid = d.is_none().then_some(*grid);
            m.out = out.out.clone();
        }
    }
    m
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let m = manifest(&cli);
    m.validate()?;
    log::info!("{}", serde_json::to_string(&m).unwrap_or_default());

    let (body, ok) = match cli.command {
        Command::SuccessCurve { node, grid, .. } => {
            (commands::success_curve(&m, node, grid)?, true)
        }
        Command::CutoffSweep {
            n_list,
            c_grid,
            radius,
            ..
        } => (commands::cutoff_sweep(&n_list, &c_grid, radius)?, true),
        Command::Equilibrium { .. } => (commands::equilibrium(&m)?, true),
        Command::Verify { .. } => commands::verify(&m)?,
        Command::Simulate {
            node,
            d,
            grid,
            samples,
            seed,
            utility,
            ..
        } => (
            commands::simulate(&m, node, d, grid, samples, seed, utility)?,
            true,
        ),
    };
    commands::emit(m.out.as_deref(), &body)?;
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
