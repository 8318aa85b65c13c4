//! The `nlg` command line: bound tables, complementarity curves, closed-form
//! verification and quantum model evaluation.

pub mod config;

use std::fmt::Write as _;
use std::process::ExitCode;

use nlg_core::io::{curve_to_csv, curve_to_json};
use nlg_core::ns_lp::trace_curve_on;
use nlg_core::quantum::behavior_from_model;
use nlg_core::rational::{format_decimal, format_decimal_f64, format_rational};
use nlg_core::verify::{self, AuxiliaryForm, VerifyReport};
use nlg_core::{catalog, lhv_max, quantum, solve, trace_curve, LpProblem};
use serde::Serialize;

pub use config::{Cli, Format, RunConfig, Task, Theorem};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit code 2.
    Usage(String),
    /// A check ran and did not hold; exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Failed(_) => ExitCode::from(1),
            CliError::Usage(_) => ExitCode::from(2),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<nlg_core::Error> for CliError {
    fn from(e: nlg_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Output of a run: the rendered document plus an optional failure to
/// report after it has been written.
pub struct Rendered {
    pub text: String,
    pub failure: Option<String>,
}

pub fn execute(config: &RunConfig) -> Result<Rendered, CliError> {
    match &config.task {
        Task::Bounds { games } => bounds(games, config.format),
        Task::Curve { n, objective, constraint, grid, range } => {
            let curve = match range {
                Some((lo, hi)) => trace_curve_on(*n, &objective.functional, &constraint.functional, *grid, lo.clone(), hi.clone())?,
                None => trace_curve(*n, &objective.functional, &constraint.functional, *grid)?,
            };
            if curve.feasible_points().next().is_none() {
                let (lo, hi) = &curve.feasible_range;
                return Err(CliError::Failed(format!(
                    "{} is infeasible at every grid point; its feasible range is [{}, {}]",
                    constraint.name,
                    format_rational(lo),
                    format_rational(hi)
                )));
            }
            let text = match config.format {
                Format::Csv => curve_to_csv(&curve),
                Format::Json => curve_to_json(&curve),
            };
            Ok(Rendered { text, failure: None })
        }
        Task::Verify { theorem, n, k, grid } => {
            let report = verify_report(*theorem, *n, *k, *grid)?;
            let failure = (!report.ok()).then(|| format!("{} of {} checks failed", report.failures.len(), report.checks));
            Ok(Rendered { text: render_report(&report, config.format), failure })
        }
        Task::Quantum { model_name, model, games, tolerance } => {
            let behavior = behavior_from_model(model);
            let residuals = [
                ("normalization", behavior.normalization_residual()),
                ("no_signaling", behavior.no_signaling_residual()),
                ("negativity", (-behavior.min_entry()).max(0.0)),
            ];
            let rows = games
                .iter()
                .map(|g| Ok((g.name.clone(), behavior.value(&g.functional)?)))
                .collect::<Result<Vec<_>, nlg_core::Error>>()?;
            let bad: Vec<&str> = residuals.iter().filter(|(_, r)| *r > tolerance.eps()).map(|(name, _)| *name).collect();
            let failure = (!bad.is_empty()).then(|| format!("model residuals above tolerance: {}", bad.join(", ")));
            Ok(Rendered { text: render_quantum(model_name, &rows, &residuals, config.format), failure })
        }
    }
}

fn verify_report(theorem: Theorem, n: usize, k: usize, grid: usize) -> Result<VerifyReport, CliError> {
    let parts = match theorem {
        Theorem::Pairwise => vec![verify::theorem1(n, grid)?, verify::theorem1_witnesses(n, grid)?],
        Theorem::Lifted => vec![verify::theorem2(n, k, grid)?, verify::theorem2_witnesses(n, k, grid)?],
        Theorem::Marginal => vec![verify::marginal_games(n, grid)?],
        Theorem::Auxiliary => vec![
            verify::sn_vs_marginal(n, grid)?,
            verify::sn_vs_auxiliary(n, grid, AuxiliaryForm::Plain)?,
            verify::sn_vs_auxiliary(n, grid, AuxiliaryForm::Effective)?,
        ],
    };
    let name = match theorem {
        Theorem::Pairwise => format!("verify 1 n={n}"),
        Theorem::Lifted => format!("verify 2 n={n} k={k}"),
        Theorem::Marginal => format!("verify C n={n}"),
        Theorem::Auxiliary => format!("verify D n={n}"),
    };
    Ok(VerifyReport::merge(name, parts))
}

#[derive(Serialize)]
struct ReportJson<'a> {
    suite: &'a str,
    checks: usize,
    passed: usize,
    failures: Vec<FailureJson>,
}

#[derive(Serialize)]
struct FailureJson {
    case: String,
    x: String,
    expected: String,
    actual: Option<String>,
}

fn render_report(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("case,x,expected,actual\n");
            for f in &report.failures {
                let actual = f.actual.as_ref().map_or("infeasible".into(), format_rational);
                let _ = writeln!(s, "{},{},{},{actual}", f.case, format_rational(&f.x), format_rational(&f.expected));
            }
            let _ = writeln!(s, "# {}: {} / {} passed", report.suite, report.passed(), report.checks);
            s
        }
        Format::Json => {
            let doc = ReportJson {
                suite: &report.suite,
                checks: report.checks,
                passed: report.passed(),
                failures: report
                    .failures
                    .iter()
                    .map(|f| FailureJson {
                        case: f.case.clone(),
                        x: format_rational(&f.x),
                        expected: format_rational(&f.expected),
                        actual: f.actual.as_ref().map(format_rational),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
        }
    }
}

#[derive(Serialize)]
struct BoundsRow {
    game: String,
    n: usize,
    classical: String,
    classical_decimal: String,
    no_signaling: String,
    no_signaling_decimal: String,
    quantum: Option<String>,
    reference_classical: Option<String>,
    reference_quantum: Option<String>,
    reference_no_signaling: Option<String>,
}

fn bounds(games: &[config::NamedGame], format: Format) -> Result<Rendered, CliError> {
    let mut rows = Vec::with_capacity(games.len());
    for g in games {
        let f = &g.functional;
        let (lhv, _) = lhv_max(f)?;
        let ns = solve(&LpProblem::new(f.n(), f.clone()))?
            .value()
            .cloned()
            .ok_or_else(|| CliError::Failed(format!("{}: no-signaling LP reported infeasible", g.name)))?;
        let quantum = quantum::model_for_game(&g.name)
            .filter(|m| m.n() == f.n())
            .map(|m| behavior_from_model(&m).value(f))
            .transpose()?
            .map(format_decimal_f64);
        let reference = catalog::reference_for(&g.name).filter(|_| !g.name.contains('@'));
        rows.push(BoundsRow {
            game: g.name.clone(),
            n: f.n(),
            classical_decimal: format_decimal(&lhv),
            classical: format_rational(&lhv),
            no_signaling_decimal: format_decimal(&ns),
            no_signaling: format_rational(&ns),
            quantum,
            reference_classical: reference.map(|r| fraction(r.classical)),
            reference_quantum: reference.map(|r| format_decimal_f64(r.quantum)),
            reference_no_signaling: reference.map(|r| fraction(r.no_signaling)),
        });
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut s = String::from(
                "game,n,classical,classical_decimal,no_signaling,no_signaling_decimal,quantum,reference_classical,reference_quantum,reference_no_signaling\n",
            );
            for r in &rows {
                let opt = |v: &Option<String>| v.clone().unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.game,
                    r.n,
                    r.classical,
                    r.classical_decimal,
                    r.no_signaling,
                    r.no_signaling_decimal,
                    opt(&r.quantum),
                    opt(&r.reference_classical),
                    opt(&r.reference_quantum),
                    opt(&r.reference_no_signaling)
                );
            }
            s
        }
    };
    Ok(Rendered { text, failure: None })
}

fn fraction((p, q): (i64, i64)) -> String {
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

#[derive(Serialize)]
struct QuantumJson<'a> {
    model: &'a str,
    values: Vec<QuantumValue>,
    residuals: Vec<Residual>,
}

#[derive(Serialize)]
struct QuantumValue {
    game: String,
    value: String,
}

#[derive(Serialize)]
struct Residual {
    name: String,
    value: String,
}

fn render_quantum(model: &str, rows: &[(String, f64)], residuals: &[(&str, f64)], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("game,value\n");
            for (g, v) in rows {
                let _ = writeln!(s, "{g},{}", format_decimal_f64(*v));
            }
            let _ = writeln!(s, "# model {model}");
            for (name, r) in residuals {
                let _ = writeln!(s, "# {name} residual {r:.3e}");
            }
            s
        }
        Format::Json => {
            let doc = QuantumJson {
                model,
                values: rows.iter().map(|(g, v)| QuantumValue { game: g.clone(), value: format_decimal_f64(*v) }).collect(),
                residuals: residuals.iter().map(|(n, r)| Residual { name: n.to_string(), value: format!("{r:.3e}") }).collect(),
            };
            serde_json::to_string_pretty(&doc).expect("values serialize") + "\n"
        }
    }
}
