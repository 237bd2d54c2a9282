use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use witnesskit_cli::{analyze, bell, catalog, parse_criteria, read_input, witness, CliError, CliResult, Method, Report, RunOptions};

/// Entanglement criteria, witnesses and Bell operators for density matrices.
#[derive(Parser)]
#[command(name = "witnesskit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Search {
    /// Seed for every randomised search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restarts per search.
    #[arg(long, default_value_t = 20)]
    restarts: usize,
}

impl Search {
    fn options(&self) -> RunOptions {
        RunOptions { seed: self.seed, restarts: self.restarts }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the separability criteria on one cut or on every cut.
    Analyze {
        /// State file path or `catalog:NAME[:k=v,...]`.
        input: String,
        /// Cut such as `A|BC`; all cuts when omitted (k >= 3).
        #[arg(long)]
        cut: Option<String>,
        /// Comma separated: ppt,reduction,entropy,majorization,rank,range.
        #[arg(long)]
        criteria: Option<String>,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a witness for the input state.
    Witness {
        input: String,
        /// pure, lowdim or indecomposable.
        #[arg(long)]
        method: String,
        #[arg(long)]
        cut: Option<String>,
        /// Matrix file used as the decomposable seed (indecomposable only).
        #[arg(long)]
        seed_witness: Option<String>,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximise the Bell-Klyshko operator over measurement directions.
    Bell {
        input: String,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the state file of a catalog entry.
    Catalog {
        name: String,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(CliError::Io { path: PathBuf::from("<stdout>"), source: e })
            }
            _ => Ok(()),
        },
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("WITNESSKIT_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("WITNESSKIT_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Analyze { input, cut, criteria, search, out } => {
            let file = read_input(&input)?;
            let which = criteria.as_deref().map(parse_criteria).transpose()?;
            let body = analyze(&file, cut.as_deref(), which.as_deref(), &search.options())?;
            emit(&Report::new(body).to_pretty(), out.as_ref())
        }
        Command::Witness { input, method, cut, seed_witness, search, out } => {
            let file = read_input(&input)?;
            let method: Method = method.parse()?;
            let seed = seed_witness.as_deref().map(read_input).transpose()?;
            let body = witness(&file, method, cut.as_deref(), seed.as_ref(), &search.options())?;
            emit(&Report::new(body).to_pretty(), out.as_ref())
        }
        Command::Bell { input, search, out } => {
            let file = read_input(&input)?;
            let body = bell(&file, &search.options())?;
            emit(&Report::new(body).to_pretty(), out.as_ref())
        }
        Command::Catalog { name, n, d, lambda, p, theta, sign, out } => {
            let params: BTreeMap<String, f64> = [("n", n), ("d", d), ("lambda", lambda), ("p", p), ("theta", theta), ("sign", sign)]
                .into_iter()
                .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
                .collect();
            let file = catalog(&name, &params)?;
            emit(&file.to_pretty(), out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("witnesskit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
