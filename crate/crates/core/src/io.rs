//! File formats: JSON game specs, behavior and model files, curve CSV/JSON.
//!
//! Rationals are always serialized as `"p/q"` strings.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::behavior::Behavior;
use crate::bits;
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::game::SvetlichnyGame;
use crate::ns_lp::ComplementarityCurve;
use crate::quantum::{QuantumModel, Setting};
use crate::rational::{format_decimal, format_rational, serde_str, serde_vec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub out: Vec<u8>,
    #[serde(rename = "in")]
    pub inp: Vec<u8>,
    #[serde(with = "serde_str")]
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GameSpec {
    Svetlichny {
        n: usize,
        c: Vec<u8>,
    },
    Functional {
        n: usize,
        #[serde(with = "serde_str", default = "zero_rational")]
        offset: Rational,
        terms: Vec<TermSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

fn zero_rational() -> Rational {
    crate::rational::zero()
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

impl GameSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_error("game spec", e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game specs serialize")
    }

    pub fn to_functional(&self) -> Result<BellFunctional> {
        match self {
            GameSpec::Svetlichny { n, c } => {
                if c.len() != n + 1 {
                    return Err(Error::Dimension(format!("{n}-party game needs {} coefficients, got {}", n + 1, c.len())));
                }
                Ok(SvetlichnyGame::new(c)?.to_functional())
            }
            GameSpec::Functional { n, offset, terms, label } => {
                let mut f = BellFunctional::constant(*n, offset.clone(), label.clone().unwrap_or_else(|| "functional".into()));
                for t in terms {
                    let o = bits::checked_index(&t.out, *n, "term output tuple")?;
                    let i = bits::checked_index(&t.inp, *n, "term input tuple")?;
                    f.add_term(o, i, t.coeff.clone());
                }
                Ok(f)
            }
        }
    }

    pub fn from_functional(f: &BellFunctional) -> Self {
        let n = f.n();
        GameSpec::Functional {
            n,
            offset: f.offset().clone(),
            terms: f
                .terms()
                .map(|(o, i, c)| TermSpec {
                    out: bits::index_to_tuple(o, n),
                    inp: bits::index_to_tuple(i, n),
                    coeff: c.clone(),
                })
                .collect(),
            label: Some(f.label().to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviorFile {
    pub n: usize,
    #[serde(with = "serde_vec")]
    pub table: Vec<Rational>,
}

pub fn behavior_to_json(b: &Behavior) -> String {
    serde_json::to_string_pretty(&BehaviorFile { n: b.n(), table: b.table().to_vec() }).expect("behaviors serialize")
}

pub fn behavior_from_json(text: &str) -> Result<Behavior> {
    let file: BehaviorFile = serde_json::from_str(text).map_err(|e| json_error("behavior file", e))?;
    Behavior::new(file.n, file.table)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: usize,
    /// Amplitudes as `[re, im]`.
    pub state: Vec<[f64; 2]>,
    /// Per party, per input, `[theta, phi]` in radians.
    pub settings: Vec<[[f64; 2]; 2]>,
}

impl ModelFile {
    pub fn from_model(m: &QuantumModel) -> Self {
        Self {
            n: m.n(),
            state: m.state().iter().map(|a| [a.re, a.im]).collect(),
            settings: m.settings().iter().map(|p| [[p[0].theta, p[0].phi], [p[1].theta, p[1].phi]]).collect(),
        }
    }

    pub fn into_model(self) -> Result<QuantumModel> {
        if self.settings.len() != self.n {
            return Err(Error::InvalidModel(format!(
                "model declares {} parties but lists settings for {}",
                self.n,
                self.settings.len()
            )));
        }
        let state = self.state.iter().map(|a| Complex64::new(a[0], a[1])).collect();
        let settings = self
            .settings
            .iter()
            .map(|p| [Setting { theta: p[0][0], phi: p[0][1] }, Setting { theta: p[1][0], phi: p[1][1] }])
            .collect();
        QuantumModel::new(state, settings)
    }
}

pub fn model_from_json(text: &str) -> Result<QuantumModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| json_error("model file", e))?;
    file.into_model()
}

pub fn model_to_json(m: &QuantumModel) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(m)).expect("models serialize")
}

pub const CURVE_CSV_HEADER: &str = "x,y,status,x_decimal,y_decimal";

/// One row per grid point; `y` columns are empty where infeasible.
pub fn curve_to_csv(curve: &ComplementarityCurve) -> String {
    let mut s = String::with_capacity(64 * (curve.points.len() + 1));
    s.push_str(CURVE_CSV_HEADER);
    s.push('\n');
    for p in &curve.points {
        let (y, status, yd) = match &p.y {
            Some(y) => (format_rational(y), "optimal", format_decimal(y)),
            None => (String::new(), "infeasible", String::new()),
        };
        let _ = writeln!(s, "{},{y},{status},{},{yd}", format_rational(&p.x), format_decimal(&p.x));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePointRecord {
    #[serde(with = "serde_str")]
    pub x: Rational,
    #[serde(default, with = "crate::rational::serde_opt")]
    pub y: Option<Rational>,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub objective: String,
    pub constraint: String,
    #[serde(with = "serde_vec")]
    pub feasible_range: Vec<Rational>,
    pub points: Vec<CurvePointRecord>,
}

pub fn curve_to_json(curve: &ComplementarityCurve) -> String {
    let record = CurveRecord {
        objective: curve.objective_label.clone(),
        constraint: curve.constraint_label.clone(),
        feasible_range: vec![curve.feasible_range.0.clone(), curve.feasible_range.1.clone()],
        points: curve
            .points
            .iter()
            .map(|p| CurvePointRecord {
                x: p.x.clone(),
                y: p.y.clone(),
                status: if p.y.is_some() { "optimal" } else { "infeasible" }.into(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&record).expect("curves serialize") + "\n"
}

/// Parses the exact columns of a curve CSV back into `(x, y)` pairs.
pub fn curve_from_csv(text: &str) -> Result<Vec<(Rational, Option<Rational>)>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CURVE_CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected curve header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::Parse(format!("line {}: expected 5 columns", k + 2)));
            }
            let x = crate::rational::parse_rational(cols[0])?;
            let y = match cols[2] {
                "optimal" => Some(crate::rational::parse_rational(cols[1])?),
                "infeasible" => None,
                s => return Err(Error::Parse(format!("line {}: unknown status {s:?}", k + 2))),
            };
            Ok((x, y))
        })
        .collect()
}
