//! Exact optimization of Bell functionals over the no-signaling polytope.
//!
//! Two formulations are available:
//!
//! * [`Formulation::Parametric`] (default) writes every no-signaling behavior
//!   in correlation coordinates `q(S, X_S) = P(x_S = 0 | X_S)` for nonempty
//!   party sets `S`, so no-signaling and normalization hold by construction
//!   and only `P >= 0` remains. The simplex runs on the LP dual, which has
//!   `3^n - 1` rows; the optimal behavior is recovered from its multipliers.
//! * [`Formulation::Direct`] keeps all `4^n` entries as variables with
//!   explicit normalization and single-party no-signaling rows.
//!
//! Both end in the same independent re-validation of the witness.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::behavior::Behavior;
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::rational::{int, Rational};
use crate::simplex::{minimize, SimplexOutcome, StandardForm};

/// Largest party count the LP accepts.
pub const LP_MAX_PARTIES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Formulation {
    #[default]
    Parametric,
    Direct,
}

/// Maximize `objective` over no-signaling behaviors satisfying every
/// `constraint == target`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub n: usize,
    pub objective: BellFunctional,
    pub equality_constraints: Vec<(BellFunctional, Rational)>,
}

impl LpProblem {
    pub fn new(n: usize, objective: BellFunctional) -> Self {
        Self { n, objective, equality_constraints: Vec::new() }
    }

    pub fn with_constraint(mut self, constraint: BellFunctional, target: Rational) -> Self {
        self.equality_constraints.push((constraint, target));
        self
    }

    /// Number of table entries, i.e. primal variables of the direct form.
    pub fn variable_count(&self) -> usize {
        1 << (2 * self.n)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("LP needs at least one party".into()));
        }
        if self.n > LP_MAX_PARTIES {
            return Err(Error::Capacity { what: "no-signaling LP", n: self.n, max: LP_MAX_PARTIES });
        }
        let check = |f: &BellFunctional| {
            if f.n() != self.n {
                Err(Error::Dimension(format!(
                    "functional {} has {} parties, problem has {}",
                    f.label(),
                    f.n(),
                    self.n
                )))
            } else {
                Ok(())
            }
        };
        check(&self.objective)?;
        self.equality_constraints.iter().try_for_each(|(f, _)| check(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: Rational, witness: Behavior },
    Infeasible,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal { .. } => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            LpSolution::Infeasible => None,
        }
    }

    pub fn witness(&self) -> Option<&Behavior> {
        match self {
            LpSolution::Optimal { witness, .. } => Some(witness),
            LpSolution::Infeasible => None,
        }
    }
}

/// The affine map from correlation coordinates to the behavior table.
struct CorrelationMap {
    n: usize,
    /// For each table entry: the sparse row of its expansion in coordinates.
    rows: Vec<Vec<(usize, i8)>>,
    /// Constant part of each entry (1 on all-ones outputs, 0 elsewhere).
    constant: Vec<i8>,
    dim: usize,
}

impl CorrelationMap {
    fn new(n: usize) -> Self {
        let size = 1usize << n;
        // coordinate id for (S, X_S) with X_S a submask of S
        let mut id = vec![usize::MAX; size * size];
        let mut dim = 0;
        for s in 1..size {
            let mut sub = s;
            loop {
                id[s * size + sub] = dim;
                dim += 1;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & s;
            }
        }
        let mut rows = Vec::with_capacity(size * size);
        let mut constant = Vec::with_capacity(size * size);
        for output in 0..size {
            let zeros = !output & (size - 1);
            for input in 0..size {
                let mut row = Vec::new();
                let mut c = 0i8;
                // inclusion-exclusion over subsets T of the ones of `output`
                let mut t = output;
                loop {
                    let s = zeros | t;
                    let sign: i8 = if t.count_ones() % 2 == 0 { 1 } else { -1 };
                    if s == 0 {
                        c += sign;
                    } else {
                        row.push((id[s * size + (input & s)], sign));
                    }
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & output;
                }
                rows.push(row);
                constant.push(c);
            }
        }
        Self { n, rows, constant, dim }
    }

    /// Coefficients and constant of `f` expressed in coordinates.
    fn pull_back(&self, f: &BellFunctional) -> (Vec<Rational>, Rational) {
        let size = 1usize << self.n;
        let mut coeffs = vec![Rational::zero(); self.dim];
        let mut constant = f.offset().clone();
        for (o, i, w) in f.terms() {
            let entry = o * size + i;
            for &(coord, sign) in &self.rows[entry] {
                if sign > 0 {
                    coeffs[coord] += w;
                } else {
                    coeffs[coord] -= w;
                }
            }
            if self.constant[entry] != 0 {
                constant += w * int(self.constant[entry] as i64);
            }
        }
        (coeffs, constant)
    }

    fn push_forward(&self, coords: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .zip(&self.constant)
            .map(|(row, &c)| {
                let mut v = int(c as i64);
                for &(coord, sign) in row {
                    if sign > 0 {
                        v += &coords[coord];
                    } else {
                        v -= &coords[coord];
                    }
                }
                v
            })
            .collect()
    }
}

/// Solves with the default formulation.
pub fn solve(problem: &LpProblem) -> Result<LpSolution> {
    solve_with(problem, Formulation::default())
}

pub fn solve_with(problem: &LpProblem, formulation: Formulation) -> Result<LpSolution> {
    problem.validate()?;
    let candidate = match formulation {
        Formulation::Parametric => solve_parametric(problem),
        Formulation::Direct => solve_direct(problem),
    };
    match candidate {
        Some((claimed, table)) => {
            let witness = revalidate(problem, table, &claimed)?;
            Ok(LpSolution::Optimal { value: claimed, witness })
        }
        None => Ok(LpSolution::Infeasible),
    }
}

/// The dual LP of the parametric formulation, its objective constant, and
/// the coordinate map.
fn parametric_dual(problem: &LpProblem) -> (StandardForm, Rational, CorrelationMap) {
    let map = CorrelationMap::new(problem.n);
    let entries = map.rows.len();
    let (c, c0) = map.pull_back(&problem.objective);
    let pulled: Vec<(Vec<Rational>, Rational)> = problem
        .equality_constraints
        .iter()
        .map(|(g, target)| {
            let (coeffs, g0) = map.pull_back(g);
            (coeffs, target - g0)
        })
        .collect();

    // min a.lambda + t.(mu+ - mu-)  s.t.  -A^T lambda + G^T (mu+ - mu-) = c
    let cols = entries + 2 * pulled.len();
    let mut a = vec![vec![Rational::zero(); cols]; map.dim];
    for (entry, row) in map.rows.iter().enumerate() {
        for &(coord, sign) in row {
            a[coord][entry] = int(-(sign as i64));
        }
    }
    for (l, (g, _)) in pulled.iter().enumerate() {
        for (coord, w) in g.iter().enumerate() {
            if !w.is_zero() {
                a[coord][entries + 2 * l] = w.clone();
                a[coord][entries + 2 * l + 1] = -w;
            }
        }
    }
    let mut cost: Vec<Rational> = map.constant.iter().map(|&v| int(v as i64)).collect();
    for (_, t) in &pulled {
        cost.push(t.clone());
        cost.push(-t);
    }
    (StandardForm { a, b: c, c: cost }, c0, map)
}

#[doc(hidden)]
pub fn parametric_dual_form(problem: &LpProblem) -> StandardForm {
    parametric_dual(problem).0
}

fn solve_parametric(problem: &LpProblem) -> Option<(Rational, Vec<Rational>)> {
    let (lp, c0, map) = parametric_dual(problem);
    match minimize(&lp) {
        SimplexOutcome::Optimal { value, duals, .. } => Some((value + c0, map.push_forward(&duals))),
        // dual unbounded or infeasible: the (bounded) primal is infeasible
        SimplexOutcome::Unbounded | SimplexOutcome::Infeasible => None,
    }
}

fn solve_direct(problem: &LpProblem) -> Option<(Rational, Vec<Rational>)> {
    let n = problem.n;
    let size = 1usize << n;
    let vars = size * size;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for input in 0..size {
        let mut row = vec![Rational::zero(); vars];
        for output in 0..size {
            row[output * size + input] = Rational::one();
        }
        a.push(row);
        b.push(Rational::one());
    }
    for party in 0..n {
        let pbit = 1usize << party;
        for out in (0..size).filter(|o| o & pbit == 0) {
            for inp in (0..size).filter(|i| i & pbit == 0) {
                let mut row = vec![Rational::zero(); vars];
                for o in [out, out | pbit] {
                    row[o * size + inp] += Rational::one();
                    row[o * size + (inp | pbit)] -= Rational::one();
                }
                a.push(row);
                b.push(Rational::zero());
            }
        }
    }
    for (g, target) in &problem.equality_constraints {
        a.push(g.dense());
        b.push(target - g.offset());
    }
    let c: Vec<Rational> = problem.objective.dense().iter().map(|v| -v).collect();
    match minimize(&StandardForm { a, b, c }) {
        SimplexOutcome::Optimal { x, value, .. } => Some((problem.objective.offset() - value, x)),
        SimplexOutcome::Infeasible | SimplexOutcome::Unbounded => None,
    }
}

/// Checks the witness outside the solver: validity, no-signaling, every
/// constraint and the claimed objective value.
fn revalidate(problem: &LpProblem, table: Vec<Rational>, claimed: &Rational) -> Result<Behavior> {
    let witness = Behavior::new(problem.n, table).map_err(|e| Error::Solver(format!("witness: {e}")))?;
    if !witness.is_no_signaling() {
        return Err(Error::Solver("witness signals".into()));
    }
    for (g, target) in &problem.equality_constraints {
        if witness.value(g)? != *target {
            return Err(Error::Solver(format!("witness misses constraint {}", g.label())));
        }
    }
    if witness.value(&problem.objective)? != *claimed {
        return Err(Error::Solver("witness value differs from the optimum".into()));
    }
    Ok(witness)
}

/// Exact minimum and maximum of `f` over the no-signaling polytope.
pub fn feasible_range(n: usize, f: &BellFunctional) -> Result<(Rational, Rational)> {
    let max = solve(&LpProblem::new(n, f.clone()))?;
    let min = solve(&LpProblem::new(n, f.negated()))?;
    match (max, min) {
        (LpSolution::Optimal { value: hi, .. }, LpSolution::Optimal { value: lo, .. }) => Ok((-lo, hi)),
        _ => Err(Error::Solver("no-signaling polytope reported empty".into())),
    }
}

/// `max objective` subject to `constraint == x`.
pub fn constrained_max(
    n: usize,
    objective: &BellFunctional,
    constraint: &BellFunctional,
    x: &Rational,
) -> Result<LpSolution> {
    solve(&LpProblem::new(n, objective.clone()).with_constraint(constraint.clone(), x.clone()))
}

/// One sample of a complementarity curve; `y` is `None` where the constraint
/// value is infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    pub x: Rational,
    pub y: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementarityCurve {
    pub objective_label: String,
    pub constraint_label: String,
    pub points: Vec<CurvePoint>,
    /// Exact feasible range of the constraint functional.
    pub feasible_range: (Rational, Rational),
}

impl ComplementarityCurve {
    /// Feasible `(x, y)` pairs in grid order.
    pub fn feasible_points(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.points.iter().filter_map(|p| p.y.as_ref().map(|y| (&p.x, y)))
    }

    /// Discrete concavity: every feasible triple of consecutive samples lies on
    /// or above the chord of its neighbours.
    pub fn is_concave(&self) -> bool {
        let pts: Vec<_> = self.feasible_points().collect();
        pts.windows(3).all(|w| {
            let ((x1, y1), (x2, y2), (x3, y3)) = (w[0], w[1], w[2]);
            // y2 >= y1 + (y3 - y1) (x2 - x1) / (x3 - x1)
            let chord = y1 + (y3 - y1) * (x2 - x1) / (x3 - x1);
            *y2 >= chord
        })
    }
}

/// `grid_points` evenly spaced exact values spanning `[lo, hi]`.
pub fn grid(lo: &Rational, hi: &Rational, grid_points: usize) -> Result<Vec<Rational>> {
    if grid_points < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {grid_points}")));
    }
    if hi < lo {
        return Err(Error::Domain("grid range is reversed".into()));
    }
    let steps = int(grid_points as i64 - 1);
    Ok((0..grid_points)
        .map(|k| lo + (hi - lo) * int(k as i64) / &steps)
        .collect())
}

/// Traces `x -> max{objective | constraint = x}` over the constraint's full
/// feasible range.
pub fn trace_curve(
    n: usize,
    objective: &BellFunctional,
    constraint: &BellFunctional,
    grid_points: usize,
) -> Result<ComplementarityCurve> {
    let range = feasible_range(n, constraint)?;
    trace_curve_over(n, objective, constraint, grid_points, range.clone(), range)
}

/// Like [`trace_curve`] but sampling `[lo, hi]` instead of the full range.
/// Points outside the feasible range are recorded as infeasible.
pub fn trace_curve_on(
    n: usize,
    objective: &BellFunctional,
    constraint: &BellFunctional,
    grid_points: usize,
    lo: Rational,
    hi: Rational,
) -> Result<ComplementarityCurve> {
    let range = feasible_range(n, constraint)?;
    trace_curve_over(n, objective, constraint, grid_points, (lo, hi), range)
}

fn trace_curve_over(
    n: usize,
    objective: &BellFunctional,
    constraint: &BellFunctional,
    grid_points: usize,
    (lo, hi): (Rational, Rational),
    feasible: (Rational, Rational),
) -> Result<ComplementarityCurve> {
    let xs = grid(&lo, &hi, grid_points)?;
    let points = xs
        .into_par_iter()
        .map(|x| {
            if x < feasible.0 || x > feasible.1 {
                return Ok(CurvePoint { x, y: None });
            }
            let y = constrained_max(n, objective, constraint, &x)?.value().cloned();
            Ok(CurvePoint { x, y })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplementarityCurve {
        objective_label: objective.label().to_string(),
        constraint_label: constraint.label().to_string(),
        points,
        feasible_range: feasible,
    })
}

/// `lift` as a free function, mirroring [`BellFunctional::lift`].
pub fn lift(f: &BellFunctional, n_target: usize, parties: &[usize]) -> Result<BellFunctional> {
    f.lift(n_target, parties)
}

/// Whether `x` is a grid value inside the closed interval.
pub fn within(x: &Rational, lo: &Rational, hi: &Rational) -> bool {
    !(x - lo).is_negative() && !(hi - x).is_negative()
}

/// Dimension of the correlation-coordinate space, `3^n - 1`.
pub fn correlation_dimension(n: usize) -> usize {
    3usize.pow(n as u32) - 1
}

#[doc(hidden)]
pub fn table_from_coordinates(n: usize, coords: &[Rational]) -> Vec<Rational> {
    CorrelationMap::new(n).push_forward(coords)
}

/// Correlation coordinates of a table, each averaged over the inputs of the
/// parties outside its set. On no-signaling tables the average is over equal
/// values.
pub fn averaged_coordinates(n: usize, table: &[Rational]) -> Result<Vec<Rational>> {
    let size = 1usize << n;
    if table.len() != size * size {
        return Err(Error::Dimension(format!("table has {} entries, expected {}", table.len(), size * size)));
    }
    let mut coords = Vec::with_capacity(correlation_dimension(n));
    for s in 1..size {
        let rest = (size - 1) & !s;
        let weight = int(1 << rest.count_ones());
        let mut sub = s;
        loop {
            let mut total = Rational::zero();
            let mut fill = rest;
            loop {
                let input = sub | fill;
                for o in (0..size).filter(|o| o & s == 0) {
                    total += &table[o * size + input];
                }
                if fill == 0 {
                    break;
                }
                fill = (fill - 1) & rest;
            }
            coords.push(total / &weight);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
    }
    Ok(coords)
}

/// Projects an arbitrary table onto the affine hull of the no-signaling
/// polytope (normalized, no-signaling, entries possibly negative).
pub fn project_to_no_signaling(n: usize, table: &[Rational]) -> Result<Vec<Rational>> {
    Ok(table_from_coordinates(n, &averaged_coordinates(n, table)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::{random_ns_behavior, Behavior};
    use crate::catalog;
    use crate::game::SvetlichnyGame;
    use crate::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coordinates_reproduce_ns_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            assert_eq!(CorrelationMap::new(n).dim, correlation_dimension(n));
            for _ in 0..10 {
                let b = random_ns_behavior(n, 3, 2, &mut rng);
                let back = table_from_coordinates(n, &averaged_coordinates(n, b.table()).unwrap());
                assert_eq!(back, b.table());
            }
        }
    }

    #[test]
    fn unconstrained_maxima() {
        let v = |f: BellFunctional| solve(&LpProblem::new(3, f)).unwrap().value().cloned().unwrap();
        assert_eq!(v(catalog::gyni3()), rat(1, 3));
        assert_eq!(v(catalog::ip3()), rat(1, 2));
        assert_eq!(v(catalog::mermin_facet()), int(4));
    }

    #[test]
    fn formulations_agree() {
        let chsh3 = catalog::chsh().lift(3, &[0, 1]).unwrap();
        for f in [catalog::gyni3(), catalog::mermin1(), catalog::ip3()] {
            for target in [rat(0, 1), rat(1, 5), rat(1, 4)] {
                let p = LpProblem::new(3, chsh3.clone()).with_constraint(f.clone(), target);
                let a = solve_with(&p, Formulation::Parametric).unwrap();
                let b = solve_with(&p, Formulation::Direct).unwrap();
                assert_eq!(a.value(), b.value(), "{} at constraint", f.label());
            }
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(feasible_range(2, &catalog::chsh()).unwrap(), (int(0), int(1)));
        assert_eq!(feasible_range(3, &catalog::mermin_facet()).unwrap(), (int(-4), int(4)));
        let s3 = SvetlichnyGame::canonical(3).unwrap().to_functional();
        assert_eq!(feasible_range(3, &s3).unwrap(), (int(0), int(1)));
    }

    #[test]
    fn infeasible_targets() {
        let chsh = catalog::chsh();
        let s = constrained_max(2, &chsh, &chsh, &rat(3, 2)).unwrap();
        assert_eq!(s.status(), LpStatus::Infeasible);
        let gyni = catalog::gyni3();
        let s = constrained_max(3, &gyni, &gyni, &rat(1, 2)).unwrap();
        assert_eq!(s, LpSolution::Infeasible);
    }

    #[test]
    fn constrained_examples() {
        let si = SvetlichnyGame::new(&[0, 0, 0]).unwrap().to_functional();
        let sj = SvetlichnyGame::new(&[0, 1, 0]).unwrap().to_functional();
        assert_eq!(constrained_max(2, &sj, &si, &int(1)).unwrap().value(), Some(&rat(1, 2)));
        let chsh3 = catalog::chsh().lift(3, &[0, 1]).unwrap();
        let s3 = SvetlichnyGame::canonical(3).unwrap().to_functional();
        assert_eq!(constrained_max(3, &chsh3, &s3, &rat(3, 4)).unwrap().value(), Some(&int(1)));
        assert_eq!(constrained_max(3, &chsh3, &s3, &int(1)).unwrap().value(), Some(&rat(1, 2)));
    }

    #[test]
    fn capacity_and_dimension_errors() {
        let f6 = SvetlichnyGame::canonical(6).unwrap().to_functional();
        assert!(matches!(solve(&LpProblem::new(6, f6)), Err(Error::Capacity { .. })));
        assert!(matches!(solve(&LpProblem::new(3, catalog::chsh())), Err(Error::Dimension(_))));
    }

    #[test]
    fn lift_examples() {
        let lifted = lift(&catalog::chsh(), 3, &[0, 1]).unwrap();
        let pr_noise = Behavior::pr_box().product(&Behavior::uniform(1)).unwrap();
        assert_eq!(pr_noise.value(&lifted).unwrap(), int(1));
        let s3box = Behavior::svetlichny_box(&SvetlichnyGame::canonical(3).unwrap());
        assert_eq!(s3box.value(&lifted).unwrap(), rat(1, 2));
        // single-party game x = 0 on party 3
        let mut p0 = BellFunctional::zero(1, "x=0");
        p0.add_term(0, 0, rat(1, 2));
        p0.add_term(0, 1, rat(1, 2));
        let on3 = lift(&p0, 3, &[2]).unwrap();
        let biased = Behavior::uniform(2)
            .product(&Behavior::new(1, vec![rat(1, 3), rat(1, 3), rat(2, 3), rat(2, 3)]).unwrap())
            .unwrap();
        assert_eq!(biased.value(&on3).unwrap(), rat(1, 3));
    }

    #[test]
    fn curve_identity_and_grid() {
        let chsh = catalog::chsh();
        let curve = trace_curve(2, &chsh, &chsh, 5).unwrap();
        for p in &curve.points {
            assert_eq!(p.y.as_ref(), Some(&p.x));
        }
        assert!(curve.is_concave());
        assert!(grid(&int(0), &int(1), 1).is_err());
        assert_eq!(grid(&int(0), &int(1), 5).unwrap()[1], rat(1, 4));
    }
}
