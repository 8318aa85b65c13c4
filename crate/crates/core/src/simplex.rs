//! Dense exact two-phase simplex.
//!
//! Solves `minimize c.x subject to A x = b, x >= 0`. The tableau is kept
//! fraction-free: every entry is an integer over one shared positive
//! denominator (the current basis determinant up to the row scaling), so a
//! pivot costs only integer multiplications and exact divisions. Entries live
//! in `i128` with overflow checks; on overflow the solve restarts on `BigInt`.
//!
//! Pivoting uses the most negative reduced cost until a run of degenerate
//! pivots appears, then Bland's rule for the rest of the phase, which rules
//! out cycling. Artificial columns stay in the tableau after phase one
//! (barred from re-entering) so the simplex multipliers can be read off their
//! reduced costs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN_LIMIT: usize = 50;

/// `minimize c.x  s.t.  A x = b,  x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct StandardForm {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexOutcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        /// Multipliers `y` with `A^T y <= c` and `b.y = value`.
        duals: Vec<Rational>,
        pivots: usize,
    },
    Infeasible,
    Unbounded,
}

/// Integer arithmetic the tableau needs; `None` signals overflow.
trait Ring: Clone + Ord + Zero {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Exact division.
    fn div(&self, o: &Self) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn gcd(&self, o: &Self) -> Self;
}

impl Ring for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
}

impl Ring for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_unit(&self) -> bool {
        self.is_one()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
}

/// The problem scaled to integers: row `i` multiplied by `row_scale[i]`
/// (negative when the rhs was negative), costs by `cost_scale`.
struct Scaled {
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    c: Vec<BigInt>,
    row_scale: Vec<BigInt>,
    cost_scale: BigInt,
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scale(problem: &StandardForm) -> Scaled {
    let mut a = Vec::with_capacity(problem.a.len());
    let mut b = Vec::with_capacity(problem.b.len());
    let mut row_scale = Vec::with_capacity(problem.b.len());
    for (row, bi) in problem.a.iter().zip(&problem.b) {
        let mut s = lcm_of_denominators(row.iter().chain(std::iter::once(bi)));
        if bi.is_negative() {
            s = -s;
        }
        let to_int = |v: &Rational| (v * Rational::from_integer(s.clone())).to_integer();
        a.push(row.iter().map(to_int).collect());
        b.push(to_int(bi));
        row_scale.push(s);
    }
    let cost_scale = lcm_of_denominators(problem.c.iter());
    let c = problem
        .c
        .iter()
        .map(|v| (v * Rational::from_integer(cost_scale.clone())).to_integer())
        .collect();
    Scaled { a, b, c, row_scale, cost_scale }
}

/// A tableau row stored as integers over a positive per-row denominator,
/// kept primitive (the gcd of entries and denominator is 1).
#[derive(Clone)]
struct Row<R> {
    v: Vec<R>,
    d: R,
}

impl<R: Ring> Row<R> {
    fn normalize(&mut self) -> Option<()> {
        if self.d.is_neg() {
            for x in self.v.iter_mut() {
                *x = x.neg()?;
            }
            self.d = self.d.neg()?;
        }
        let mut g = self.d.clone();
        for x in &self.v {
            if g.is_unit() {
                return Some(());
            }
            if !x.is_zero() {
                g = g.gcd(x);
            }
        }
        if !g.is_unit() {
            for x in self.v.iter_mut() {
                *x = x.div(&g);
            }
            self.d = self.d.div(&g);
        }
        Some(())
    }

    /// `self - (self[col] / pivot[col]) * pivot`.
    fn eliminate(&mut self, pivot: &Row<R>, col: usize, nonzero: &[usize]) -> Option<()> {
        let f = self.v[col].clone();
        if f.is_zero() {
            return Some(());
        }
        // self/d_s - f/d_s * (pivot/d_p) / (p/d_p) = (p self - f pivot) / (d_s p)
        let p = &pivot.v[col];
        for x in self.v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(p)?;
            }
        }
        for &k in nonzero {
            self.v[k] = self.v[k].sub(&f.mul(&pivot.v[k])?)?;
        }
        self.d = self.d.mul(p)?;
        self.normalize()
    }

    fn value(&self, k: usize) -> Rational {
        Rational::new(self.v[k].to_big(), self.d.to_big())
    }
}

struct Tableau<R> {
    rows: Vec<Row<R>>,
    /// Reduced costs; the last slot holds minus the objective value.
    obj: Row<R>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl<R: Ring> Tableau<R> {
    fn new(p: &Scaled) -> Option<Self> {
        let m = p.b.len();
        let n = p.c.len();
        let width = n + m;
        let one = R::from_big(&BigInt::one())?;
        let mut rows = Vec::with_capacity(m);
        for (i, (a_row, bi)) in p.a.iter().zip(&p.b).enumerate() {
            let mut v = Vec::with_capacity(width + 1);
            for x in a_row {
                v.push(R::from_big(x)?);
            }
            v.extend((0..m).map(|j| if j == i { one.clone() } else { R::zero() }));
            v.push(R::from_big(bi)?);
            rows.push(Row { v, d: one.clone() });
        }
        let obj = Row { v: Vec::new(), d: one };
        Some(Self { rows, obj, basis: (n..n + m).collect(), width, pivots: 0 })
    }

    /// Installs integer `cost` (one entry per column) as the objective.
    fn set_costs(&mut self, cost: &[R]) -> Option<()> {
        let mut obj = Row { v: cost.to_vec(), d: R::from_big(&BigInt::one())? };
        obj.v.push(R::zero());
        for (row, &bj) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[bj];
            if cb.is_zero() {
                continue;
            }
            // obj - cb * row
            let f = cb.mul(&obj.d)?;
            for (x, t) in obj.v.iter_mut().zip(&row.v) {
                let scaled = if x.is_zero() { R::zero() } else { x.mul(&row.d)? };
                *x = if t.is_zero() { scaled } else { scaled.sub(&f.mul(t)?)? };
            }
            obj.d = obj.d.mul(&row.d)?;
            obj.normalize()?;
        }
        self.obj = obj;
        Some(())
    }

    fn pivot(&mut self, r: usize, col: usize) -> Option<()> {
        let mut pivot_row = std::mem::replace(&mut self.rows[r], Row { v: Vec::new(), d: R::zero() });
        // new row = row / row[col]
        pivot_row.d = pivot_row.v[col].clone();
        pivot_row.normalize()?;
        let nonzero: Vec<usize> = (0..pivot_row.v.len()).filter(|&k| !pivot_row.v[k].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                row.eliminate(&pivot_row, col, &nonzero)?;
            }
        }
        self.obj.eliminate(&pivot_row, col, &nonzero)?;
        self.rows[r] = pivot_row;
        self.basis[r] = col;
        self.pivots += 1;
        Some(())
    }

    /// Runs simplex iterations; `Some(false)` on unboundedness.
    fn optimize(&mut self, allowed: usize) -> Option<bool> {
        let rhs = self.width;
        let mut bland = false;
        let mut degenerate_run = 0usize;
        loop {
            let obj = &self.obj.v;
            let entering = if bland {
                (0..allowed).find(|&j| obj[j].is_neg())
            } else {
                (0..allowed).filter(|&j| obj[j].is_neg()).min_by(|&a, &b| obj[a].cmp(&obj[b]))
            };
            let Some(col) = entering else {
                return Some(true);
            };
            let mut best: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row.v[col].is_pos() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(bi) => {
                        let other = &self.rows[bi].v;
                        // row denominators cancel in rhs / col
                        let lhs = row.v[rhs].mul(&other[col])?;
                        let rhs_v = other[rhs].mul(&row.v[col])?;
                        match lhs.cmp(&rhs_v) {
                            Ordering::Less => true,
                            Ordering::Equal => self.basis[i] < self.basis[bi],
                            Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            let Some(r) = best else {
                return Some(false);
            };
            if self.rows[r].v[rhs].is_zero() {
                degenerate_run += 1;
                bland |= degenerate_run > DEGENERATE_RUN_LIMIT;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, col)?;
        }
    }
}

/// Outcome of one attempt; `None` means the ring overflowed.
fn run<R: Ring>(scaled: &Scaled) -> Option<SimplexOutcome> {
    let m = scaled.b.len();
    let n = scaled.c.len();
    let width = n + m;
    let mut t = Tableau::<R>::new(scaled)?;
    let one = R::from_big(&BigInt::one())?;

    let phase_one: Vec<R> = (0..width).map(|j| if j >= n { one.clone() } else { R::zero() }).collect();
    t.set_costs(&phase_one)?;
    let bounded = t.optimize(width)?;
    debug_assert!(bounded, "phase one is bounded below by zero");
    if !t.obj.v[width].is_zero() {
        return Some(SimplexOutcome::Infeasible);
    }
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !t.rows[r].v[j].is_zero()) {
                t.pivot(r, col)?;
            }
        }
    }

    let mut phase_two = Vec::with_capacity(width);
    for c in &scaled.c {
        phase_two.push(R::from_big(c)?);
    }
    phase_two.extend((n..width).map(|_| R::zero()));
    t.set_costs(&phase_two)?;
    if !t.optimize(n)? {
        return Some(SimplexOutcome::Unbounded);
    }

    let mut x = vec![Rational::zero(); n];
    for (row, &bj) in t.rows.iter().zip(&t.basis) {
        if bj < n {
            x[bj] = row.value(width);
        }
    }
    let cost_scale = Rational::from_integer(scaled.cost_scale.clone());
    let value = -t.obj.value(width) / &cost_scale;
    let duals = (0..m)
        .map(|i| -t.obj.value(n + i) * Rational::from_integer(scaled.row_scale[i].clone()) / &cost_scale)
        .collect();
    Some(SimplexOutcome::Optimal { x, value, duals, pivots: t.pivots })
}

/// Solves a standard-form LP exactly.
pub fn minimize(problem: &StandardForm) -> SimplexOutcome {
    let m = problem.a.len();
    let n = problem.c.len();
    assert_eq!(problem.b.len(), m, "rhs length");
    assert!(problem.a.iter().all(|r| r.len() == n), "ragged constraint matrix");
    let scaled = scale(problem);
    run::<i128>(&scaled).unwrap_or_else(|| run::<BigInt>(&scaled).expect("BigInt arithmetic cannot overflow"))
}

#[doc(hidden)]
pub fn minimize_big(problem: &StandardForm) -> SimplexOutcome {
    run::<BigInt>(&scale(problem)).expect("BigInt arithmetic cannot overflow")
}
