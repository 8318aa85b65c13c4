use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlg_core::catalog;
use nlg_core::io::{model_from_json, GameSpec};
use nlg_core::quantum::{builtin_model, QuantumModel, Tolerance};
use nlg_core::rational::parse_rational;
use nlg_core::{BellFunctional, Rational};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "nlg", version, about = "Exact no-signaling, classical and quantum values of nonlocal games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classical, no-signaling and quantum values of each game.
    Bounds {
        /// Built-in names (gyni3, ip3, mi3, mii3, mf3, chsh, svetlichny:n:bits,
        /// optionally `@p1,p2` to place on parties) or JSON game files.
        games: Vec<String>,
        /// Lift every game to this many parties.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Trace max objective subject to constraint = x over a grid.
    Curve {
        #[arg(long)]
        objective: String,
        #[arg(long)]
        constraint: String,
        /// Party count; defaults to the constraint's.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Grid start; defaults to the constraint's minimum.
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        /// Grid end; defaults to the constraint's maximum.
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
    },
    /// Check closed forms against the LP.
    Verify {
        #[arg(value_enum)]
        theorem: Theorem,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Size of the lifted game for theorem 2; defaults to n - 1.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
    /// Evaluate games on a quantum model.
    Quantum {
        /// Model JSON file.
        #[arg(long, conflicts_with = "builtin")]
        model: Option<PathBuf>,
        /// Bundled model name.
        #[arg(long)]
        builtin: Option<String>,
        /// Games to evaluate; defaults to every built-in game of matching size.
        games: Vec<String>,
        /// Residual above which the model is reported as failing.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Pairwise S_n curves.
    #[value(name = "1")]
    Pairwise,
    /// S_n against lifted S_k.
    #[value(name = "2")]
    Lifted,
    /// Marginal games.
    #[value(name = "C", alias = "c")]
    Marginal,
    /// S_n against marginals and auxiliary games.
    #[value(name = "D", alias = "d")]
    Auxiliary,
}

/// A resolved game together with the name it was requested by.
#[derive(Clone, Debug)]
pub struct NamedGame {
    pub name: String,
    pub functional: BellFunctional,
}

// built once per run, so variant size does not matter
#[allow(clippy::large_enum_variant)]
#[derive(Debug)]
pub enum Task {
    Bounds { games: Vec<NamedGame> },
    Curve { n: usize, objective: NamedGame, constraint: NamedGame, grid: usize, range: Option<(Rational, Rational)> },
    Verify { theorem: Theorem, n: usize, k: usize, grid: usize },
    Quantum { model_name: String, model: QuantumModel, games: Vec<NamedGame>, tolerance: Tolerance },
}

/// Fully validated invocation: every file has been read and parsed.
#[derive(Debug)]
pub struct RunConfig {
    pub task: Task,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_grid(grid: usize) -> Result<(), CliError> {
    if grid < 2 {
        return Err(usage(format!("--grid must be at least 2, got {grid}")));
    }
    Ok(())
}

fn looks_like_file(spec: &str) -> bool {
    spec.ends_with(".json") || Path::new(spec).is_file()
}

/// Resolves a built-in name or JSON file, lifted to `n` parties when given.
pub fn resolve_game(spec: &str, n: Option<usize>) -> Result<NamedGame, CliError> {
    let functional = if looks_like_file(spec) {
        let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("{spec}: {e}")))?;
        let f = GameSpec::from_json(&text).and_then(|g| g.to_functional()).map_err(|e| usage(format!("{spec}: {e}")))?;
        if f.label().is_empty() {
            f.with_label(spec)
        } else {
            f
        }
    } else {
        let base = catalog::resolve(spec.split('@').next().unwrap_or(spec)).map_err(|e| usage(e.to_string()))?;
        catalog::resolve_for(spec, n.unwrap_or(base.n())).map_err(|e| usage(e.to_string()))?
    };
    let functional = match n {
        Some(n) if n != functional.n() => {
            let parties: Vec<usize> = (0..functional.n()).collect();
            functional.lift(n, &parties).map_err(|e| usage(e.to_string()))?
        }
        _ => functional,
    };
    Ok(NamedGame { name: spec.to_string(), functional })
}

const QUANTUM_DEFAULT_GAMES: [&str; 6] = ["gyni3", "ip3", "mi3", "mii3", "mf3", "svetlichny:3:0000"];

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let task = match cli.command {
            Command::Bounds { games, n } => {
                if games.is_empty() {
                    return Err(usage("bounds needs at least one game"));
                }
                let games = games.iter().map(|g| resolve_game(g, n)).collect::<Result<_, _>>()?;
                Task::Bounds { games }
            }
            Command::Curve { objective, constraint, n, grid, from, to } => {
                check_grid(grid)?;
                let constraint = resolve_game(&constraint, n)?;
                let n = constraint.functional.n();
                let objective = resolve_game(&objective, Some(n))?;
                let range = match (from, to) {
                    (None, None) => None,
                    (Some(a), Some(b)) => {
                        let parse = |s: &str| parse_rational(s).map_err(|e| usage(e.to_string()));
                        let (lo, hi) = (parse(&a)?, parse(&b)?);
                        if hi < lo {
                            return Err(usage("--to is below --from"));
                        }
                        Some((lo, hi))
                    }
                    _ => return Err(usage("--from and --to must be given together")),
                };
                Task::Curve { n, objective, constraint, grid, range }
            }
            Command::Verify { theorem, n, k, grid } => {
                check_grid(grid)?;
                if n < 1 {
                    return Err(usage("--n must be positive"));
                }
                let k = k.unwrap_or(n.saturating_sub(1).max(1));
                if theorem == Theorem::Lifted && !(1..n).contains(&k) {
                    return Err(usage(format!("theorem 2 needs 1 <= k < n, got n = {n}, k = {k}")));
                }
                Task::Verify { theorem, n, k, grid }
            }
            Command::Quantum { model, builtin, games, tolerance } => {
                let tolerance = Tolerance::new(tolerance).map_err(|e| usage(e.to_string()))?;
                let (model_name, model) = match (model, builtin) {
                    (Some(path), None) => {
                        let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                        let m = model_from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                        (path.display().to_string(), m)
                    }
                    (None, Some(name)) => {
                        let m = builtin_model(&name).map_err(|e| usage(e.to_string()))?;
                        (name, m)
                    }
                    _ => return Err(usage("quantum needs exactly one of --model or --builtin")),
                };
                let n = model.n();
                let games = if games.is_empty() {
                    QUANTUM_DEFAULT_GAMES
                        .iter()
                        .filter_map(|g| resolve_game(g, None).ok())
                        .filter(|g| g.functional.n() == n)
                        .collect()
                } else {
                    games.iter().map(|g| resolve_game(g, Some(n))).collect::<Result<_, _>>()?
                };
                Task::Quantum { model_name, model, games, tolerance }
            }
        };
        Ok(Self { task, format: cli.common.format, out: cli.common.out })
    }
}
