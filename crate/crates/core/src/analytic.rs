//! Closed-form complementarity relations between game values.
//!
//! Every relation is piecewise linear; [`ClosedForm`] stores its segments so
//! breakpoints and slopes can be inspected exactly.

use crate::error::{Error, Result};
use crate::game::GameRelation;
use crate::rational::{one, rat, zero, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormKind {
    /// Single-party marginal game against another one.
    MarginalVsMarginal,
    /// Two `n`-party games.
    SnVsSn,
    /// An `n`-party game against a pinned single-party marginal.
    SnVsMarginal,
    /// Best `k`-party game on a subset against an `n`-party game.
    SnVsSk,
}

/// One linear piece `y = slope * x + intercept` on `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: Rational,
    pub end: Rational,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Segment {
    fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub kind: ClosedFormKind,
    pub relation: Option<GameRelation>,
    pub domain: (Rational, Rational),
    segments: Vec<Segment>,
}

fn seg(start: Rational, end: Rational, slope: Rational, intercept: Rational) -> Segment {
    Segment { start, end, slope, intercept }
}

impl ClosedForm {
    pub fn theorem1(relation: GameRelation) -> Self {
        Self::xor_relation(ClosedFormKind::SnVsSn, relation)
    }

    pub fn marginal_vs_marginal(relation: GameRelation) -> Self {
        Self::xor_relation(ClosedFormKind::MarginalVsMarginal, relation)
    }

    fn xor_relation(kind: ClosedFormKind, relation: GameRelation) -> Self {
        let half = rat(1, 2);
        let segments = match relation {
            GameRelation::Equivalent => vec![seg(zero(), one(), one(), zero())],
            GameRelation::TriviallyComplementary => vec![seg(zero(), one(), -one(), one())],
            GameRelation::Distinct => vec![
                seg(zero(), half.clone(), one(), half.clone()),
                seg(half, one(), -one(), rat(3, 2)),
            ],
        };
        Self { kind, relation: Some(relation), domain: (zero(), one()), segments }
    }

    /// The `k`-party bound on `[1/2, 1]`.
    pub fn theorem2() -> Self {
        Self {
            kind: ClosedFormKind::SnVsSk,
            relation: None,
            domain: (rat(1, 2), one()),
            segments: vec![
                seg(rat(1, 2), rat(3, 4), zero(), one()),
                seg(rat(3, 4), one(), rat(-2, 1), rat(5, 2)),
            ],
        }
    }

    /// [`theorem2`](Self::theorem2) mirrored onto `[0, 1/2]` through the
    /// complementary game.
    pub fn theorem2_extended() -> Self {
        Self {
            kind: ClosedFormKind::SnVsSk,
            relation: None,
            domain: (zero(), one()),
            segments: vec![
                seg(zero(), rat(1, 4), rat(2, 1), rat(1, 2)),
                seg(rat(1, 4), rat(3, 4), zero(), one()),
                seg(rat(3, 4), one(), rat(-2, 1), rat(5, 2)),
            ],
        }
    }

    pub fn sn_vs_marginal() -> Self {
        Self {
            kind: ClosedFormKind::SnVsMarginal,
            relation: None,
            domain: (zero(), one()),
            segments: vec![
                seg(zero(), rat(1, 2), rat(1, 2), rat(3, 4)),
                seg(rat(1, 2), one(), rat(-1, 2), rat(5, 4)),
            ],
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.domain.0 && *x <= self.domain.1
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if !self.contains(x) {
            return Err(Error::Domain(format!(
                "x = {x} outside [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        let s = self
            .segments
            .iter()
            .find(|s| *x >= s.start && *x <= s.end)
            .expect("segments cover the domain");
        Ok(s.eval(x))
    }

    /// Sorted interior breakpoints.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.segments.iter().skip(1).map(|s| s.start.clone()).collect()
    }
}

pub fn theorem1(x: &Rational, relation: GameRelation) -> Result<Rational> {
    ClosedForm::theorem1(relation).eval(x)
}

pub fn theorem2(x: &Rational) -> Result<Rational> {
    ClosedForm::theorem2().eval(x)
}

pub fn theorem2_extended(x: &Rational) -> Result<Rational> {
    ClosedForm::theorem2_extended().eval(x)
}

pub fn marginal_vs_marginal(x: &Rational, relation: GameRelation) -> Result<Rational> {
    ClosedForm::marginal_vs_marginal(relation).eval(x)
}

pub fn sn_vs_marginal(p: &Rational) -> Result<Rational> {
    ClosedForm::sn_vs_marginal().eval(p)
}

pub fn breakpoints(form: &ClosedForm) -> Vec<Rational> {
    form.breakpoints()
}
