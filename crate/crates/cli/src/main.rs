use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use textile_cli::commands::{self, Options, Outcome};
use textile_cli::error::{exit, CliError};
use textile_cli::report::render_text;

/// Textile systems from commuting matrices: structural checks, tiles,
/// transitivity witnesses and Cuntz-Krieger K-groups.
///
/// Exit status: 0 ok, 1 a required check failed, 2 usage, 3 io, 4 parse,
/// 5 AB != BA, 6 invalid specification, 7 invalid input.
#[derive(Debug, Parser)]
#[command(name = "textile", version)]
struct Cli {
    /// Aligned plain text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Include Ω_κ, A_κ, B_κ and H_κ in system reports.
    #[arg(long, global = true)]
    emit_matrices: bool,
    /// Staircase length bound for transitivity searches (default 2|Ω_κ|).
    #[arg(long, global = true, value_name = "K")]
    max_steps: Option<usize>,
    /// Seed for the random part of the corpus.
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the system and run every check; also reports K-groups.
    Check {
        /// System description (JSON); standard input when absent or `-`.
        input: Option<PathBuf>,
    },
    /// K_0 and K_1, cross-checked through I - H_κᵀ.
    Kgroups { input: Option<PathBuf> },
    /// List Ω_κ and the tiles.
    Tiles { input: Option<PathBuf> },
    /// A staircase from one tile to another, strictly right and below.
    Witness {
        /// Tile number (as listed by `tiles`) or `top,right,left,bottom` edge ids.
        from: String,
        to: String,
        input: Option<PathBuf>,
    },
    /// Closed-form K-groups of the exchange system on [N], [M], N <= M,
    /// compared with Smith normal form.
    Closedform { n: u64, m: u64 },
    /// Closed form against Smith normal form for all 2 <= N <= NMAX, N <= M <= MMAX.
    Sweep { nmax: u64, mmax: u64 },
    /// Checks over the built-in corpus plus COUNT seeded random circulant pairs.
    Corpus {
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = Options { emit_matrices: cli.emit_matrices, max_steps: cli.max_steps, seed: cli.seed };
    match &cli.command {
        Command::Check { input } => commands::check(input.as_deref(), &opts),
        Command::Kgroups { input } => commands::kgroups(input.as_deref(), &opts),
        Command::Tiles { input } => commands::tiles(input.as_deref(), &opts),
        Command::Witness { from, to, input } => commands::witness(input.as_deref(), from, to, &opts),
        Command::Closedform { n, m } => commands::closedform(*n, *m),
        Command::Sweep { nmax, mmax } => commands::sweep(*nmax, *mmax),
        Command::Corpus { count } => commands::corpus(*count, &opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match run(&cli) {
        Ok(Outcome { report, ok }) => {
            let text = if cli.pretty {
                render_text(&report)
            } else {
                serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
            };
            if std::io::stdout().write_all(text.as_bytes()).is_err() {
                return ExitCode::from(exit::IO);
            }
            ExitCode::from(if ok { exit::OK } else { exit::CHECK_FAILED })
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
