//! Exhaustive checks of the closed forms in [`crate::analytic`] against the
//! no-signaling LP, plus explicit mixtures that attain each bound.

use std::fmt;

use rayon::prelude::*;

use crate::analytic;
use crate::behavior::{mix, Behavior};
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::game::{enumerate_games, GameRelation, SvetlichnyGame};
use crate::ns_lp::{self, grid, LpProblem, LpSolution};
use crate::rational::{format_rational, int, one, rat, Rational};

/// Party-count cap for the pairwise game check.
pub const PAIRWISE_MAX_PARTIES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub case: String,
    pub x: Rational,
    pub expected: Rational,
    pub actual: Option<Rational>,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let actual = self.actual.as_ref().map_or("infeasible".to_string(), format_rational);
        write!(
            f,
            "{} at x = {}: expected {}, got {actual}",
            self.case,
            format_rational(&self.x),
            format_rational(&self.expected)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks - self.failures.len()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn from_outcomes(suite: impl Into<String>, outcomes: Vec<Option<Failure>>) -> Self {
        let checks = outcomes.len();
        Self { suite: suite.into(), checks, failures: outcomes.into_iter().flatten().collect() }
    }

    pub fn merge(suite: impl Into<String>, parts: Vec<VerifyReport>) -> Self {
        let mut out = Self { suite: suite.into(), checks: 0, failures: Vec::new() };
        for p in parts {
            out.checks += p.checks;
            out.failures.extend(p.failures);
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} / {} passed", self.suite, self.passed(), self.checks)?;
        for failure in &self.failures {
            write!(f, "\n  FAIL {failure}")?;
        }
        Ok(())
    }
}

fn compare(case: String, x: &Rational, expected: Rational, actual: Option<Rational>) -> Option<Failure> {
    if actual.as_ref() == Some(&expected) {
        None
    } else {
        Some(Failure { case, x: x.clone(), expected, actual })
    }
}

fn constraint_grid(n: usize, constraint: &BellFunctional, points: usize) -> Result<Vec<Rational>> {
    let (lo, hi) = ns_lp::feasible_range(n, constraint)?;
    grid(&lo, &hi, points)
}

/// Pairwise `max S_j | S_i = x` for every ordered pair of `n`-party games.
pub fn theorem1(n: usize, points: usize) -> Result<VerifyReport> {
    theorem1_for(n, points, &enumerate_games(n)?)
}

/// [`theorem1`] restricted to constraint games in `games` (objectives still
/// range over all games).
pub fn theorem1_for(n: usize, points: usize, games: &[SvetlichnyGame]) -> Result<VerifyReport> {
    if n > PAIRWISE_MAX_PARTIES {
        return Err(Error::Capacity { what: "pairwise game check", n, max: PAIRWISE_MAX_PARTIES });
    }
    let all = enumerate_games(n)?;
    let mut tasks = Vec::new();
    for gi in games {
        let xs = constraint_grid(n, &gi.to_functional(), points)?;
        for gj in &all {
            for x in &xs {
                tasks.push((gi, gj, x.clone()));
            }
        }
    }
    let outcomes = tasks
        .into_par_iter()
        .map(|(gi, gj, x)| {
            let rel = gi.relation(gj)?;
            let expected = analytic::theorem1(&x, rel)?;
            let got = ns_lp::constrained_max(n, &gj.to_functional(), &gi.to_functional(), &x)?;
            Ok(compare(format!("max {gj} | {gi}"), &x, expected, got.value().cloned()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::from_outcomes(format!("pairwise n={n}"), outcomes))
}

/// Behavior attaining the pairwise bound: a two-box mixture of extremal
/// Svetlichny boxes.
pub fn theorem1_witness(constraint: &SvetlichnyGame, objective: &SvetlichnyGame, x: &Rational) -> Result<Behavior> {
    if *x < int(0) || *x > one() {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    let own = Behavior::svetlichny_box(constraint);
    let opposite = Behavior::svetlichny_box(&constraint.trivial_complement());
    let half = rat(1, 2);
    match constraint.relation(objective)? {
        GameRelation::Equivalent | GameRelation::TriviallyComplementary => {
            mix(&[own, opposite], &[x.clone(), one() - x])
        }
        GameRelation::Distinct => {
            let target = Behavior::svetlichny_box(objective);
            if *x >= half {
                let w = int(2) * x - one();
                mix(&[own, target], &[w.clone(), one() - w])
            } else {
                let w = one() - int(2) * x;
                mix(&[opposite, target], &[w.clone(), one() - w])
            }
        }
    }
}

/// Checks that [`theorem1_witness`] is no-signaling and hits `(x, bound)`.
pub fn theorem1_witnesses(n: usize, points: usize) -> Result<VerifyReport> {
    let games = enumerate_games(n)?;
    let xs = grid(&int(0), &one(), points)?;
    let mut outcomes = Vec::new();
    for gi in &games {
        for gj in &games {
            for x in &xs {
                let b = theorem1_witness(gi, gj, x)?;
                let expected = analytic::theorem1(x, gi.relation(gj)?)?;
                let got = (b.is_no_signaling() && b.value(&gi.to_functional())? == *x)
                    .then(|| b.value(&gj.to_functional()))
                    .transpose()?;
                outcomes.push(compare(format!("witness {gj} | {gi}"), x, expected, got));
            }
        }
    }
    Ok(VerifyReport::from_outcomes(format!("pairwise witnesses n={n}"), outcomes))
}

/// `max_j max S_k^j (first k parties) | S_n = x`, for every `n`-party game,
/// on `points` grid values spanning `[1/2, 1]`.
pub fn theorem2(n: usize, k: usize, points: usize) -> Result<VerifyReport> {
    theorem2_for(n, k, points, &enumerate_games(n)?)
}

pub fn theorem2_for(n: usize, k: usize, points: usize, games: &[SvetlichnyGame]) -> Result<VerifyReport> {
    if k == 0 || k >= n {
        return Err(Error::Domain(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    if n > ns_lp::LP_MAX_PARTIES {
        return Err(Error::Capacity { what: "subset game check", n, max: ns_lp::LP_MAX_PARTIES });
    }
    let head: Vec<usize> = (0..k).collect();
    let objectives = enumerate_games(k)?
        .iter()
        .map(|g| g.to_functional().lift(n, &head))
        .collect::<Result<Vec<_>>>()?;
    let xs = grid(&rat(1, 2), &one(), points)?;
    let tasks: Vec<_> = games.iter().flat_map(|g| xs.iter().map(move |x| (g, x.clone()))).collect();
    let outcomes = tasks
        .into_par_iter()
        .map(|(g, x)| {
            let constraint = g.to_functional();
            let mut best: Option<Rational> = None;
            for obj in &objectives {
                if let LpSolution::Optimal { value, .. } = ns_lp::constrained_max(n, obj, &constraint, &x)? {
                    if best.as_ref().is_none_or(|b| value > *b) {
                        best = Some(value);
                    }
                }
            }
            Ok(compare(format!("max_j S{k}^j | {g}"), &x, analytic::theorem2(&x)?, best))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::from_outcomes(format!("subset n={n} k={k}"), outcomes))
}

/// The `k`-party game the first `k` parties face when the tail outputs and
/// inputs are all zero.
pub fn theorem2_objective(game: &SvetlichnyGame, k: usize) -> Result<SvetlichnyGame> {
    let tail = game.n() - k.min(game.n());
    game.restrict(k, &vec![0; tail], &vec![0; tail])
}

/// Mixture attaining the subset bound at `x` in `[1/2, 1]`.
pub fn theorem2_witness(game: &SvetlichnyGame, k: usize, x: &Rational) -> Result<Behavior> {
    analytic::theorem2(x)?;
    let n = game.n();
    let head_game = theorem2_objective(game, k)?;
    let head = Behavior::svetlichny_box(&head_game);
    // tail box with the effective auxiliary output pinned to 0
    let tail_coeffs: Vec<u8> = std::iter::once(0).chain(game.c()[k + 1..].iter().copied()).collect();
    let tail_game = SvetlichnyGame::new(&tail_coeffs)?;
    let pinned = head.product(&Behavior::svetlichny_box(&tail_game))?;
    if *x <= rat(3, 4) {
        let noisy = head.product(&Behavior::uniform(n - k))?;
        let w = int(4) * x - int(2);
        mix(&[pinned, noisy], &[w.clone(), one() - w])
    } else {
        let w = int(4) * (one() - x);
        mix(&[pinned, Behavior::svetlichny_box(game)], &[w.clone(), one() - w])
    }
}

pub fn theorem2_witnesses(n: usize, k: usize, points: usize) -> Result<VerifyReport> {
    let head: Vec<usize> = (0..k).collect();
    let xs = grid(&rat(1, 2), &one(), points)?;
    let mut outcomes = Vec::new();
    for g in enumerate_games(n)? {
        let objective = theorem2_objective(&g, k)?.to_functional().lift(n, &head)?;
        for x in &xs {
            let b = theorem2_witness(&g, k, x)?;
            let got = (b.is_no_signaling() && b.value(&g.to_functional())? == *x)
                .then(|| b.value(&objective))
                .transpose()?;
            outcomes.push(compare(format!("witness S{k} | {g}"), x, analytic::theorem2(x)?, got));
        }
    }
    Ok(VerifyReport::from_outcomes(format!("subset witnesses n={n} k={k}"), outcomes))
}

/// Single-party games embedded on each party of an `n`-party system, checked
/// pairwise on the same party.
pub fn marginal_games(n: usize, points: usize) -> Result<VerifyReport> {
    let games = enumerate_games(1)?;
    let xs = grid(&int(0), &one(), points)?;
    let mut tasks = Vec::new();
    for party in 0..n {
        for gi in &games {
            for gj in &games {
                for x in &xs {
                    tasks.push((party, gi, gj, x.clone()));
                }
            }
        }
    }
    let outcomes = tasks
        .into_par_iter()
        .map(|(party, gi, gj, x)| {
            let fi = gi.to_functional().lift(n, &[party])?;
            let fj = gj.to_functional().lift(n, &[party])?;
            let expected = analytic::marginal_vs_marginal(&x, gi.relation(gj)?)?;
            let got = ns_lp::constrained_max(n, &fj, &fi, &x)?;
            Ok(compare(format!("max {gj} | {gi} on party {}", party + 1), &x, expected, got.value().cloned()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::from_outcomes(format!("marginal games n={n}"), outcomes))
}

/// `P(x_p = 0 | X_p = input)` as an `n`-party functional.
pub fn marginal_zero(n: usize, party: usize, input: u8) -> Result<BellFunctional> {
    let mut f = BellFunctional::zero(1, format!("P(x=0|X={input})"));
    f.add_term(0, input as usize, one());
    f.lift(n, &[party])
}

/// How the tail's auxiliary output is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxiliaryForm {
    /// `xor of tail outputs ^ xor of ci Xi` over the tail.
    Plain,
    /// [`Plain`](Self::Plain) shifted by the tail's internal pair term, so
    /// that it selects the offset of the restricted game exactly.
    Effective,
}

/// `P(A = 0 | B = b)` for the tail `k+1..n` under a uniform prior on the
/// tail inputs, as an `n`-party functional.
pub fn auxiliary_functional(game: &SvetlichnyGame, k: usize, b: bool, form: AuxiliaryForm) -> Result<BellFunctional> {
    let n = game.n();
    if k == 0 || k >= n {
        return Err(Error::Domain(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    let t = n - k;
    let inputs: Vec<usize> = (0..1usize << t).filter(|i| (i.count_ones() % 2 == 1) == b).collect();
    let weight = rat(1, inputs.len() as i64);
    let mut tail = BellFunctional::zero(t, format!("P(A=0|B={})", b as u8));
    for &inp in &inputs {
        for out in 0..1usize << t {
            let a = match form {
                AuxiliaryForm::Plain => game.auxiliary_from_indices(k, out, inp).a,
                AuxiliaryForm::Effective => game.effective_aux_a(k, out, inp),
            };
            if !a {
                tail.add_term(out, inp, weight.clone());
            }
        }
    }
    let parties: Vec<usize> = (k..n).collect();
    tail.lift(n, &parties)
}

fn pinned_pair(n: usize, objective: &BellFunctional, pins: [&BellFunctional; 2], p: &Rational) -> Result<Option<Rational>> {
    let problem = LpProblem::new(n, objective.clone())
        .with_constraint(pins[0].clone(), p.clone())
        .with_constraint(pins[1].clone(), p.clone());
    Ok(ns_lp::solve(&problem)?.value().cloned())
}

/// `max S_n | P(x_n = 0 | X_n = 0) = P(x_n = 0 | X_n = 1) = p` for every game
/// whose last coefficient is 0.
pub fn sn_vs_marginal(n: usize, points: usize) -> Result<VerifyReport> {
    let last = n - 1;
    let m0 = marginal_zero(n, last, 0)?;
    let m1 = marginal_zero(n, last, 1)?;
    let games: Vec<_> = enumerate_games(n)?.into_iter().filter(|g| g.c()[n] == 0).collect();
    let ps = grid(&int(0), &one(), points)?;
    let tasks: Vec<_> = games.iter().flat_map(|g| ps.iter().map(move |p| (g, p.clone()))).collect();
    let outcomes = tasks
        .into_par_iter()
        .map(|(g, p)| {
            let got = pinned_pair(n, &g.to_functional(), [&m0, &m1], &p)?;
            Ok(compare(format!("max {g} | marginal of party {n}"), &p, analytic::sn_vs_marginal(&p)?, got))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::from_outcomes(format!("marginal pin n={n}"), outcomes))
}

/// `max S_n | P(A = 0 | B = 0) = P(A = 0 | B = 1) = p` for every game and
/// every split `1 <= k < n`.
pub fn sn_vs_auxiliary(n: usize, points: usize, form: AuxiliaryForm) -> Result<VerifyReport> {
    let ps = grid(&int(0), &one(), points)?;
    let mut tasks = Vec::new();
    for g in enumerate_games(n)? {
        for k in 1..n {
            let pins = [auxiliary_functional(&g, k, false, form)?, auxiliary_functional(&g, k, true, form)?];
            for p in &ps {
                tasks.push((g, k, pins.clone(), p.clone()));
            }
        }
    }
    let outcomes = tasks
        .into_par_iter()
        .map(|(g, k, pins, p)| {
            let got = pinned_pair(n, &g.to_functional(), [&pins[0], &pins[1]], &p)?;
            Ok(compare(format!("max {g} | auxiliary k={k}"), &p, analytic::sn_vs_marginal(&p)?, got))
        })
        .collect::<Result<Vec<_>>>()?;
    let tag = match form {
        AuxiliaryForm::Plain => "plain",
        AuxiliaryForm::Effective => "effective",
    };
    Ok(VerifyReport::from_outcomes(format!("auxiliary pin ({tag}) n={n}"), outcomes))
}
