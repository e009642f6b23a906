use clap::{Parser, Subcommand, ValueEnum};
use fourier_jumps::solver::RootSelection;
use fourier_jumps::PlanKind;
use fourier_jumps_cli::commands::{cmd_adversarial, cmd_bench, cmd_bounds, cmd_recover, cmd_synth, RecoverArgs};
use fourier_jumps_cli::{CliError, Precision};
use std::path::PathBuf;
use std::process::ExitCode;

/// Jump recovery and Gibbs-free reconstruction from Fourier coefficients.
///
/// Exit codes: 0 ok, 2 model or contract violation, 3 numerical failure,
/// 4 I/O or malformed JSON.
#[derive(Parser, Debug)]
#[command(name = "fourier-jumps", version)]
struct Cli {
    /// `double` or `extended:<digits>`.
    #[arg(long, global = true)]
    precision: Option<Precision>,
    /// Seed for benchmark perturbations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (directory for `adversarial`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Plan {
    Decimated,
    Consecutive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Selection {
    Closest,
    Average,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the spectrum of a model file for |k| <= M.
    Synth {
        #[arg(long)]
        model: PathBuf,
        /// Catalog smooth part: zero, sin, expsin or poly-blend.
        #[arg(long)]
        smooth: Option<String>,
        #[arg(short = 'M', long = "max-index")]
        m: usize,
    },
    /// Recover jumps and the corrected spectrum from a spectrum file.
    Recover {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(short = 'd', long)]
        order: usize,
        #[arg(short = 'K', long)]
        jumps: usize,
        /// JSON with keys J, A, B, R.
        #[arg(long)]
        bounds: PathBuf,
        #[arg(long, value_enum, default_value = "decimated")]
        plan: Plan,
        #[arg(long)]
        half_order: Option<usize>,
        /// Comma-separated prior locations, replacing detection.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        priors: Option<Vec<f64>>,
        #[arg(long)]
        trust_priors: bool,
        /// Newton steps of the corrected localization (K >= 2).
        #[arg(long)]
        refinement_steps: Option<usize>,
        #[arg(long, value_enum, default_value = "closest")]
        root_selection: Selection,
    },
    /// Run a convergence sweep.
    ///
    /// CSV columns: method, M, err_xi, err_a_0..err_a_d, err_sup,
    /// ratio_logerr_logM, note. Footer lines `# slope ...` hold the
    /// least-squares log-log slopes per method.
    Bench {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Emit two spectra that agree on |k| <= M but differ in jump location.
    Adversarial {
        #[arg(long)]
        model: PathBuf,
        #[arg(short = 'M', long = "max-index")]
        m: usize,
        #[arg(long)]
        bounds: PathBuf,
    },
    /// Evaluate perturbation bounds from a JSON query (object or array).
    Bounds {
        #[arg(long)]
        query: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Synth { model, smooth, m } => cmd_synth(&model, smooth.as_deref(), m, out),
        Command::Recover {
            spectrum,
            order,
            jumps,
            bounds,
            plan,
            half_order,
            priors,
            trust_priors,
            refinement_steps,
            root_selection,
        } => {
            let args = RecoverArgs {
                spectrum,
                d: order,
                k: jumps,
                bounds,
                plan: match plan {
                    Plan::Decimated => PlanKind::Decimated,
                    Plan::Consecutive => PlanKind::Consecutive,
                },
                half_order,
                priors,
                trust_priors,
                refinement_steps,
                root_selection: match root_selection {
                    Selection::Closest => RootSelection::ClosestToCircle,
                    Selection::Average => RootSelection::AngleAverage,
                },
            };
            cmd_recover(&args, cli.precision.unwrap_or_default(), out)
        }
        Command::Bench { spec } => cmd_bench(&spec, cli.seed, cli.precision, out),
        Command::Adversarial { model, m, bounds } => {
            let dir = out.ok_or_else(|| CliError::Usage("adversarial needs --out <dir>".into()))?;
            cmd_adversarial(&model, m, &bounds, dir).map(|_| ())
        }
        Command::Bounds { query } => cmd_bounds(&query, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
