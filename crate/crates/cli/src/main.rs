//! `ermcurve`: expected ERM generalisation curves as CSV, with a JSON run
//! manifest written alongside every result.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ermcurve::pac::PacVariant;
use ermcurve::{HypothesisCount, RiskDistribution};

use grid::{MGrid, RealGrid};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "ERMCURVE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "ermcurve",
    version,
    about = "Expected ERM generalisation curves from a distribution of risks"
)]
struct Cli {
    #[command(flatten)]
    io: IoArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Write the CSV or report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Manifest path. Defaults to `<out>.manifest.json`, or stderr without --out.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads (default: $ERMCURVE_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// ⟨R_ERM⟩ against m for ρ(r) = Beta(a, b).
    BetaRiskCurve {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Hypothesis count, a number >= 1 or `inf`.
        #[arg(long = "H", default_value = "inf")]
        h: HypothesisCount,
        #[arg(long, default_value = "log:1:100000:51", value_parser = grid::parse_m_grid)]
        m: MGrid,
    },
    /// Squared-loss regression curve for the gamma-precision model.
    GammaPrecisionCurve {
        #[arg(long)]
        a: f64,
        #[arg(long = "H", default_value = "inf")]
        h: HypothesisCount,
        #[arg(long, default_value = "log:1:10000:41", value_parser = grid::parse_m_grid)]
        m: MGrid,
    },
    /// Density ρ(r) of a risk model on a grid of risks.
    Rho {
        /// Model descriptor: beta:a=..,b=.. | boolean:n=.. | perceptron:p=.. | uperceptron:p=..,delta=..
        #[arg(long)]
        dist: RiskDistribution,
        #[arg(long, default_value = "lin:0.0005:0.9995:1000", value_parser = grid::parse_real_grid)]
        r: RealGrid,
        /// Print ln ρ(r) instead of ρ(r).
        #[arg(long)]
        log: bool,
    },
    /// Realisable perceptron curve.
    PerceptronCurve {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = "log:1:10000:41", value_parser = grid::parse_m_grid)]
        m: MGrid,
        #[arg(long, value_enum, default_value_t = PerceptronVariant::Annealed)]
        variant: PerceptronVariant,
        /// Hypothesis count for the annealed and beta-approx variants.
        #[arg(long = "H", default_value = "inf")]
        h: HypothesisCount,
    },
    /// Large-p limit of the perceptron curve against α = m/p.
    LimitCurve {
        #[arg(long, default_value = "log:0.1:1000:41", value_parser = grid::parse_real_grid)]
        alpha: RealGrid,
    },
    /// Sample size m* guaranteeing P(R_ERM >= ε) <= δ under a β-Risk prior.
    PacBound {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = BoundChoice::LemmaProof)]
        variant: BoundChoice,
        /// Also report the classical finite-class bound for this many hypotheses.
        #[arg(long = "H")]
        h: Option<f64>,
    },
    /// Monte Carlo Gibbs learning against the annealed and corrected predictions.
    McValidate(McArgs),
    /// Power-law exponent of ρ(r) near r = 0.
    FitAttunement {
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        dist: Option<RiskDistribution>,
        /// File of risk samples, separated by whitespace or commas; `#` starts a comment.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Fit window `lo,hi`.
        #[arg(long, default_value = "0.0001,0.01", value_parser = grid::parse_real_grid)]
        window: RealGrid,
        #[arg(long, default_value_t = ermcurve::pac::DEFAULT_FIT_POINTS)]
        points: usize,
    },
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, default_value_t = 15)]
    p: usize,
    #[arg(long, default_value = "15,30,60", value_parser = grid::parse_m_grid)]
    m: MGrid,
    #[arg(long, default_value_t = 200)]
    datasets: usize,
    #[arg(long, default_value_t = 20)]
    hypotheses: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerChoice::HitAndRun)]
    sampler: SamplerChoice,
    /// Hit-and-run burn-in steps (default 200p).
    #[arg(long)]
    burn_in: Option<usize>,
    /// Hit-and-run steps between kept hypotheses (default 10p).
    #[arg(long)]
    thin: Option<usize>,
    /// Rejection budget per hypothesis.
    #[arg(long, default_value_t = 1_000_000)]
    max_tries: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PerceptronVariant {
    Annealed,
    BetaApprox,
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundChoice {
    MainText,
    LemmaStatement,
    LemmaProof,
    All,
}

impl BoundChoice {
    fn variants(self) -> Vec<PacVariant> {
        match self {
            BoundChoice::MainText => vec![PacVariant::MainText],
            BoundChoice::LemmaStatement => vec![PacVariant::LemmaStatement],
            BoundChoice::LemmaProof => vec![PacVariant::LemmaProof],
            BoundChoice::All => PacVariant::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplerChoice {
    Rejection,
    HitAndRun,
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, commands::CliError> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            commands::CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))
        }),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), commands::CliError> {
    let threads = thread_count(cli.io.threads)?;
    if let Some(n) = threads {
        if n == 0 {
            return Err(commands::CliError::Usage(
                "thread count must be positive".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| commands::CliError::Usage(e.to_string()))?;
    }

    let start = Instant::now();
    let result = commands::execute(&cli.command)?;
    let manifest = output::RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command_line: std::env::args().collect(),
        subcommand: result.subcommand.to_string(),
        parameters: result.parameters,
        seed: result.seed,
        threads: rayon::current_num_threads(),
        duration_seconds: start.elapsed().as_secs_f64(),
        warnings: result.warnings,
        diagnostics: result.diagnostics,
    };

    match &cli.io.out {
        Some(path) => std::fs::write(path, &result.body)?,
        None => print!("{}", result.body),
    }
    let manifest_path = cli.io.manifest.clone().or_else(|| {
        cli.io.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    match manifest_path {
        Some(path) => std::fs::write(path, manifest.to_json())?,
        None => eprint!("{}", manifest.to_json()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
