//! Nonlocal games as Bell functionals.
//!
//! Multiparty binary-input/binary-output games and inequalities are lowered to
//! exact rational functionals on behavior space, optimized over the
//! no-signaling polytope with an exact simplex, bounded classically by
//! deterministic-strategy enumeration, and evaluated on explicit qubit models.

pub mod analytic;
pub mod behavior;
pub mod bits;
pub mod catalog;
pub mod error;
pub mod functional;
pub mod game;
pub mod io;
pub mod ns_lp;
pub mod quantum;
pub mod rational;
pub mod simplex;
pub mod verify;

pub use behavior::{lhv_max, mix, Behavior, Conditioned, DeterministicStrategy};
pub use error::{Error, Result};
pub use functional::BellFunctional;
pub use game::{enumerate_games, AuxiliaryValues, GameRelation, SvetlichnyGame};
pub use ns_lp::{
    constrained_max, feasible_range, solve, trace_curve, ComplementarityCurve, CurvePoint, LpProblem,
    LpSolution, LpStatus,
};
pub use rational::Rational;
