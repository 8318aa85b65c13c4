//! Acceptance criteria, run in order on one thread so the time budgets are
//! measured without interference. Each criterion prints one line. Runs
//! without the test harness so the lines are never captured.

use std::time::{Duration, Instant};

use nlg_core::behavior::random_ns_behavior;
use nlg_core::bits::index_to_tuple;
use nlg_core::ns_lp::grid;
use nlg_core::quantum::{self, angle_search, behavior_from_model, QuantumModel, Tolerance};
use nlg_core::rational::{int, one, rat, to_f64, zero};
use nlg_core::verify::{self, AuxiliaryForm, VerifyReport};
use nlg_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QUANTUM_TOLERANCE: f64 = 1e-9;
const GRID: usize = 11;
const CURVE_GRID: usize = 101;
const RANDOM_BEHAVIORS: usize = 100;

struct Outcome {
    id: &'static str,
    name: &'static str,
    problems: Vec<String>,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Outcome {
    fn ok(&self) -> bool {
        self.problems.is_empty() && self.budget.is_none_or(|b| self.elapsed <= b)
    }

    fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) => format!(" / budget {:.0} s", b.as_secs_f64()),
            None => String::new(),
        };
        let mut s = format!(
            "criterion {} {}: {} ({:.1} s{budget})",
            self.id,
            if self.ok() { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64()
        );
        for p in self.problems.iter().take(8) {
            s.push_str("\n    ");
            s.push_str(p);
        }
        s
    }
}

fn run(
    id: &'static str,
    name: &'static str,
    budget: Option<Duration>,
    body: impl FnOnce(&mut Vec<String>),
) -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    body(&mut problems);
    let o = Outcome { id, name, problems, elapsed: start.elapsed(), budget };
    println!("{}", o.line());
    o
}

fn absorb(problems: &mut Vec<String>, report: Result<VerifyReport>) {
    match report {
        Ok(r) if r.ok() => println!("    {r}"),
        Ok(r) => problems.push(r.to_string()),
        Err(e) => problems.push(format!("error: {e}")),
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn lp_max(n: usize, f: &BellFunctional) -> Option<Rational> {
    solve(&LpProblem::new(n, f.clone())).ok()?.value().cloned()
}

fn table_bounds(p: &mut Vec<String>) {
    let expected = [("gyni3", (1, 4), (1, 3)), ("ip3", (0, 1), (1, 2)), ("mi3", (7, 8), (1, 1)), ("mii3", (3, 4), (1, 1)), ("mf3", (2, 1), (4, 1))];
    for (name, lhv, ns) in expected {
        let f = catalog::resolve(name).unwrap();
        let got_lhv = lhv_max(&f).unwrap().0;
        let got_ns = lp_max(3, &f);
        if got_lhv != rat(lhv.0, lhv.1) || got_ns != Some(rat(ns.0, ns.1)) {
            p.push(format!("{name}: lhv {got_lhv}, ns {got_ns:?}"));
        }
    }
}

fn svetlichny_triple(p: &mut Vec<String>) {
    let q = (2.0 + std::f64::consts::SQRT_2) / 4.0;
    let tol = Tolerance::new(QUANTUM_TOLERANCE).unwrap();
    for n in 2..=3 {
        for game in enumerate_games(n).unwrap() {
            let f = game.to_functional();
            let lhv = lhv_max(&f).unwrap().0;
            let ns = lp_max(n, &f);
            let model = QuantumModel::new(quantum::ghz(n).unwrap(), quantum::svetlichny_settings(&game)).unwrap();
            let qv = behavior_from_model(&model).value(&f).unwrap();
            if lhv != rat(3, 4) || ns != Some(one()) || (qv - q).abs() > tol.eps() {
                p.push(format!("{game}: ({lhv}, {ns:?}, {qv})"));
            }
        }
        // the search is a lower bound and must not exceed the no-signaling value
        let game = SvetlichnyGame::canonical(n).unwrap();
        let found = angle_search(&game.to_functional(), &quantum::ghz(n).unwrap(), 12).unwrap();
        if found.value < q - QUANTUM_TOLERANCE || found.value > 1.0 + QUANTUM_TOLERANCE {
            p.push(format!("angle search on {game}: {}", found.value));
        }
        println!("    angle search {game}: {:.12}", found.value);
    }
}

fn theorem1(p: &mut Vec<String>) {
    for n in 2..=3 {
        absorb(p, verify::theorem1(n, GRID));
        absorb(p, verify::theorem1_witnesses(n, GRID));
    }
}

fn theorem2(p: &mut Vec<String>) {
    let xs = grid(&rat(1, 2), &one(), GRID).unwrap();
    if !xs.contains(&rat(3, 4)) {
        p.push("grid misses 3/4".into());
    }
    for (n, k) in [(2, 1), (3, 1), (3, 2)] {
        absorb(p, verify::theorem2(n, k, GRID));
        absorb(p, verify::theorem2_witnesses(n, k, GRID));
    }
}

fn theorem2_extended(p: &mut Vec<String>) {
    absorb(p, verify::theorem2(4, 2, GRID));
    absorb(p, verify::theorem2_witnesses(4, 2, GRID));
}

fn marginals(p: &mut Vec<String>) {
    for n in 2..=3 {
        absorb(p, verify::marginal_games(n, GRID));
        absorb(p, verify::sn_vs_marginal(n, GRID));
        absorb(p, verify::sn_vs_auxiliary(n, GRID, AuxiliaryForm::Plain));
        absorb(p, verify::sn_vs_auxiliary(n, GRID, AuxiliaryForm::Effective));
    }
}

/// Plateau at 1 ending at the threshold, strictly decreasing after it.
fn check_threshold(p: &mut Vec<String>, curve: &ComplementarityCurve, threshold: Option<Rational>, objective: &BellFunctional, constraint: &BellFunctional) {
    let label = &curve.constraint_label;
    let pts: Vec<(&Rational, &Rational)> = curve.feasible_points().collect();
    if pts.len() != CURVE_GRID {
        p.push(format!("{label}: {} feasible points", pts.len()));
    }
    let Some(t) = threshold else {
        if let Some((x, y)) = pts.iter().find(|(_, y)| **y != one()) {
            p.push(format!("{label}: y({x}) = {y}, expected 1"));
        }
        return;
    };
    let last_on_plateau = pts.iter().rev().find(|(_, y)| **y == one()).map(|(x, _)| (*x).clone());
    let last_below_t = pts.iter().rev().find(|(x, _)| **x <= t).map(|(x, _)| (*x).clone());
    if last_on_plateau.is_none() || last_on_plateau != last_below_t {
        p.push(format!("{label}: plateau ends at {last_on_plateau:?}, threshold {t}"));
    }
    let after: Vec<&Rational> = pts.iter().filter(|(x, _)| **x > t).map(|(_, y)| *y).collect();
    if after.is_empty() || after[0] >= &one() || after.windows(2).any(|w| w[1] >= w[0]) {
        p.push(format!("{label}: not strictly decreasing after {t}"));
    }
    let at = constrained_max(3, objective, constraint, &t).unwrap().value().cloned();
    let past = constrained_max(3, objective, constraint, &(&t + rat(1, 1000))).unwrap().value().cloned();
    if at != Some(one()) || past.as_ref().is_none_or(|y| *y >= one()) {
        p.push(format!("{label}: y({t}) = {at:?}, y({t} + 1/1000) = {past:?}"));
    }
}

fn curves(p: &mut Vec<String>, traced: &mut Vec<ComplementarityCurve>) {
    let chsh = catalog::chsh().lift(3, &[0, 1]).unwrap();
    let cases = [("gyni3", Some(rat(1, 4))), ("mi3", Some(rat(7, 8))), ("mii3", Some(rat(3, 4))), ("mf3", None)];
    for (name, threshold) in cases {
        let g = catalog::resolve(name).unwrap();
        let curve = trace_curve(3, &chsh, &g, CURVE_GRID).unwrap();
        check_threshold(p, &curve, threshold, &chsh, &g);
        traced.push(curve);
    }
    traced.push(trace_curve(3, &chsh, &catalog::ip3(), CURVE_GRID).unwrap());
}

fn decomposed(game: &SvetlichnyGame, k: usize, b: &Behavior) -> Rational {
    let tail = game.n() - k;
    let mut total = zero();
    for t_in in 0..1usize << tail {
        for t_out in 0..1usize << tail {
            let (o, i) = (index_to_tuple(t_out, tail), index_to_tuple(t_in, tail));
            let head = game.restrict(k, &o, &i).unwrap().to_functional();
            total += b.condition(k, &o, &i).unwrap().weighted_value(&head).unwrap();
        }
    }
    total / int(1 << tail)
}

fn identities(p: &mut Vec<String>, traced: &[ComplementarityCurve]) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let games = enumerate_games(3).unwrap();
    for t in 0..RANDOM_BEHAVIORS {
        let b = random_ns_behavior(3, 4, 2, &mut rng);
        for g in &games {
            let v = b.value(&g.to_functional()).unwrap();
            for k in 1..3 {
                if decomposed(g, k, &b) != v {
                    p.push(format!("decomposition k={k} fails for {g} on behavior {t}"));
                }
            }
            if &v + b.value(&g.trivial_complement().to_functional()).unwrap() != one() {
                p.push(format!("complement sum fails for {g} on behavior {t}"));
            }
        }
    }
    let chsh = catalog::chsh().lift(3, &[0, 1]).unwrap();
    let mut extra = Vec::new();
    for g in enumerate_games(3).unwrap().iter().take(4) {
        extra.push(trace_curve(3, &chsh, &g.to_functional(), GRID).unwrap());
    }
    for curve in traced.iter().chain(&extra) {
        if !curve.is_concave() {
            p.push(format!("curve {} vs {} is not concave", curve.objective_label, curve.constraint_label));
        }
    }
}

fn exclusions(p: &mut Vec<String>) {
    for item in [
        "second-level relaxation curves and the 0.8553 relaxation value",
        "the 0.14 quantum value of ip3",
        "quantum threshold estimates 0.225, 0.775, 0.687, 2.9, 0.6875",
    ] {
        println!("    excluded (needs an SDP solver): {item}");
    }
    let gyni = catalog::gyni3();
    let model = quantum::builtin_model("product3-z").unwrap();
    let spot = behavior_from_model(&model).value(&gyni).unwrap();
    let searched = angle_search(&gyni, &quantum::ghz(3).unwrap(), 8).unwrap().value;
    println!("    gyni3: product model {spot:.12}, equatorial search on GHZ {searched:.12}");
    if (spot - 0.25).abs() > QUANTUM_TOLERANCE || searched > 0.25 + QUANTUM_TOLERANCE {
        p.push(format!("gyni3 quantum spot check: {spot}, {searched}"));
    }
    let lower = to_f64(&lhv_max(&gyni).unwrap().0);
    if spot < lower - QUANTUM_TOLERANCE {
        p.push(format!("gyni3 product model below classical value: {spot}"));
    }
}

fn main() {
    let mut traced = Vec::new();
    let outcomes = vec![
        run("1", "bounds table, exact classical and no-signaling values", secs(10), table_bounds),
        run("2", "Svetlichny (classical, no-signaling, GHZ) triple for n = 2, 3", secs(10), svetlichny_triple),
        run("3", "pairwise Svetlichny curves, n = 2, 3, 11 points", secs(300), theorem1),
        run("4", "S_n vs lifted S_k for (2,1), (3,1), (3,2)", secs(600), theorem2),
        run("4x", "S_n vs lifted S_k extended run (4,2)", None, theorem2_extended),
        run("5", "marginal and auxiliary games, n = 2, 3", None, marginals),
        run("6", "CHSH curve thresholds on a 101-point grid", None, |p| curves(p, &mut traced)),
        run("7", "decomposition, complement sums and concavity", None, |p| identities(p, &traced)),
        run("8", "out-of-scope items and gyni3 quantum spot check", None, exclusions),
    ];
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.ok()).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", outcomes.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
