mod commands;
mod error;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stategame::info::WynerSearch;
use stategame::rate_value::{default_card_u, BoundSearch};
use stategame::sim::{Adversary, EncoderRule, Engine, MatchConfig, DEFAULT_MAX_SYMBOLS};

use commands::SchemeSource;
use error::CliError;
use files::{GameFile, JointFile, SchemeFile};

/// Values of zero-sum Bayesian games with a rate-limited helper.
#[derive(Parser)]
#[command(name = "stategame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value and optimal strategies under fixed information structures.
    Value {
        game: PathBuf,
        /// none, state, or signal:<state>:<signal>,...
        #[arg(long, default_value = "none")]
        a_info: String,
        #[arg(long, default_value = "none")]
        b_info: String,
        #[command(flatten)]
        out: Out,
    },
    /// Achievable payoff of a scheme at one rate.
    Bound {
        game: PathBuf,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        b_knows_state: bool,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Rate-payoff curve as CSV `rate,payoff,alpha`.
    Sweep {
        game: PathBuf,
        /// r1:r2:step
        #[arg(long)]
        rates: String,
        #[arg(long)]
        b_knows_state: bool,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Monte Carlo block-coding match; per-iteration CSV.
    Simulate {
        game: PathBuf,
        scheme: PathBuf,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// oblivious, decoder or decoder_with_state
        #[arg(long, default_value = "decoder")]
        adversary: String,
        #[arg(long)]
        b_knows_state: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// likelihood, uniform or first
        #[arg(long, default_value = "likelihood")]
        encoder: String,
        /// auto, explicit or ensemble
        #[arg(long, default_value = "auto")]
        engine: String,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_SYMBOLS)]
        max_symbols: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Search for the common information of a pair `(S, A)`.
    CommonInfo {
        /// JSON file with key p_sa (rows S, columns A).
        #[arg(long, conflicts_with_all = ["game", "scheme"])]
        joint: Option<PathBuf>,
        /// Game whose prior, with --scheme, induces the pair.
        #[arg(long, requires = "scheme")]
        game: Option<PathBuf>,
        #[arg(long, requires = "game")]
        scheme: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        card_u: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = WynerSearch::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = WynerSearch::default().iterations)]
        iterations: usize,
        #[arg(long, default_value_t = WynerSearch::default().inner_iterations)]
        inner_iterations: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Prints a built-in game or scheme as JSON.
    Catalog {
        /// erasure, simple-mixed, hamming or erasure-optimal (a scheme)
        name: String,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct SchemeArgs {
    /// Scheme file (single or layered).
    #[arg(long, conflicts_with = "optimize", required_unless_present = "optimize")]
    scheme: Option<PathBuf>,
    /// Search for a scheme instead of reading one.
    #[arg(long)]
    optimize: bool,
    /// Auxiliary alphabet size for the search (default |S||A| + 2).
    #[arg(long)]
    card_u: Option<usize>,
    /// Search a layered scheme with this second-layer alphabet size.
    #[arg(long)]
    card_u2: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = BoundSearch::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = BoundSearch::default().iterations)]
    iterations: usize,
}

#[derive(Args)]
struct Out {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Out {
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn scheme_source(args: &SchemeArgs, game: &stategame::Game) -> Result<SchemeSource, CliError> {
    if let Some(path) = &args.scheme {
        return Ok(SchemeSource::Given(SchemeFile::load(path)?.to_scheme(game)?));
    }
    Ok(SchemeSource::Optimize {
        card_u: args.card_u.unwrap_or_else(|| default_card_u(game)),
        card_u2: args.card_u2,
        search: BoundSearch { restarts: args.restarts, iterations: args.iterations, seed: args.seed },
    })
}

fn parsed<T: std::str::FromStr<Err = stategame::Error>>(flag: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|e: stategame::Error| CliError::Usage(format!("--{flag}: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Value { game, a_info, b_info, out } => {
            let g = GameFile::load(&game)?.to_game()?;
            let a = commands::parse_info(&a_info, &g)?;
            let b = commands::parse_info(&b_info, &g)?;
            out.emit(&commands::value(&g, &a, &b)?)
        }
        Command::Bound { game, rate, b_knows_state, scheme, out } => {
            let g = GameFile::load(&game)?.to_game()?;
            let source = scheme_source(&scheme, &g)?;
            out.emit(&commands::bound(&g, rate, b_knows_state, &source)?)
        }
        Command::Sweep { game, rates, b_knows_state, scheme, out } => {
            let g = GameFile::load(&game)?.to_game()?;
            let rates = commands::parse_rates(&rates)?;
            let source = scheme_source(&scheme, &g)?;
            let (csv, notes) = commands::sweep(&g, &rates, b_knows_state, &source)?;
            notes.iter().for_each(|n| eprintln!("{n}"));
            out.emit(&csv)
        }
        Command::Simulate {
            game,
            scheme,
            rate,
            n,
            trials,
            adversary,
            b_knows_state,
            seed,
            encoder,
            engine,
            epsilon,
            max_symbols,
            out,
        } => {
            let g = GameFile::load(&game)?.to_game()?;
            let s = SchemeFile::load(&scheme)?.to_scheme(&g)?;
            let adversary: Adversary = parsed("adversary", &adversary)?;
            let mut config = MatchConfig::new(n, trials, rate, adversary, b_knows_state, seed);
            config.encoder = parsed::<EncoderRule>("encoder", &encoder)?;
            config.engine = parsed::<Engine>("engine", &engine)?;
            config.epsilon = epsilon;
            config.max_symbols = max_symbols;
            let (csv, summary) = commands::simulate(&g, &s, &config)?;
            eprintln!("{summary}");
            out.emit(&csv)
        }
        Command::CommonInfo { joint, game, scheme, card_u, seed, restarts, iterations, inner_iterations, out } => {
            let target = match (joint, game, scheme) {
                (Some(j), _, _) => JointFile::load(&j)?.to_joint()?,
                (None, Some(g), Some(s)) => {
                    let g = GameFile::load(&g)?.to_game()?;
                    let s = SchemeFile::load(&s)?.to_scheme(&g)?;
                    commands::induced_joint(&g, &s)?
                }
                _ => return Err(CliError::Usage("give --joint, or --game with --scheme".into())),
            };
            let search = WynerSearch { restarts, iterations, inner_iterations, seed };
            out.emit(&commands::common_info(&target, card_u, &search)?)
        }
        Command::Catalog { name, out } => {
            use stategame::game::catalog as games;
            let text = match name.as_str() {
                "erasure" => serde_json::to_string_pretty(&GameFile::from_game(&games::erasure())),
                "simple-mixed" => serde_json::to_string_pretty(&GameFile::from_game(&games::simple_mixed())),
                "hamming" => serde_json::to_string_pretty(&GameFile::from_game(&games::hamming())),
                "erasure-optimal" => serde_json::to_string_pretty(&SchemeFile::from_scheme(
                    &stategame::rate_value::catalog::erasure_optimal(),
                )),
                _ => return Err(CliError::Usage(format!("no catalog entry '{name}'"))),
            }
            .expect("catalog entries serialize");
            out.emit(&(text + "\n"))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = e.hint() {
                eprintln!("hint: {h}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
