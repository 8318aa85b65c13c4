//! Svetlichny XOR games and the relations between them.
//!
//! A game `S_n` with coefficient string `c0 c1 .. cn` is won on the assignment
//! `(x, X)` iff
//!
//! ```text
//! x1 ^ .. ^ xn ^ c0 == (sum_{i<j} Xi Xj) ^ (sum_i ci Xi)      (mod 2)
//! ```

use std::fmt;

use crate::bits::{self, checked_index, MAX_PARTIES};
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::rational::inv_pow2;

/// An `n`-party Svetlichny game, identified by its coefficient bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SvetlichnyGame {
    n: usize,
    c0: bool,
    /// Bit `i` holds the coefficient of party `i` (zero-based), i.e. `c_{i+1}`.
    coeffs: usize,
}

/// How two games over the same party count relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameRelation {
    Equivalent,
    TriviallyComplementary,
    Distinct,
}

/// Values of the auxiliary games `A_n^k` and `B_n^k` on a tail assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AuxiliaryValues {
    pub a: bool,
    pub b: bool,
    pub k: usize,
}

impl SvetlichnyGame {
    /// Builds a game from `[c0, c1, .., cn]`; `n` is `c.len() - 1`.
    pub fn new(c: &[u8]) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::Domain(format!(
                "coefficient string needs n+1 >= 2 entries, got {}",
                c.len()
            )));
        }
        let n = c.len() - 1;
        if n > MAX_PARTIES {
            return Err(Error::Capacity { what: "party count", n, max: MAX_PARTIES });
        }
        let c0 = match c[0] {
            0 => false,
            1 => true,
            v => return Err(Error::Domain(format!("coefficient {v} is not a bit"))),
        };
        let coeffs = bits::tuple_to_index(&c[1..])?;
        Ok(Self { n, c0, coeffs })
    }

    pub(crate) fn from_parts(n: usize, c0: bool, coeffs: usize) -> Self {
        debug_assert!(n >= 1 && coeffs < (1 << n));
        Self { n, c0, coeffs }
    }

    /// The canonical game `x1 ^ .. ^ xn = sum_{i<j} Xi Xj` (all coefficients zero).
    pub fn canonical(n: usize) -> Result<Self> {
        Self::new(&vec![0; n + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c0(&self) -> bool {
        self.c0
    }

    /// Per-party coefficient mask (bit `i` is party `i`'s coefficient).
    pub fn coefficient_mask(&self) -> usize {
        self.coeffs
    }

    /// The full coefficient string `[c0, c1, .., cn]`.
    pub fn c(&self) -> Vec<u8> {
        let mut c = vec![u8::from(self.c0)];
        c.extend(bits::index_to_tuple(self.coeffs, self.n));
        c
    }

    /// Output parity that wins on the given input index.
    #[inline]
    pub fn winning_parity(&self, input: usize) -> bool {
        bits::pair_parity(input) ^ bits::parity(input & self.coeffs) ^ self.c0
    }

    /// Index-level predicate used on hot paths.
    #[inline]
    pub fn wins(&self, output: usize, input: usize) -> bool {
        bits::parity(output) == self.winning_parity(input)
    }

    /// Whether the assignment `(outputs, inputs)` wins the game.
    pub fn predicate(&self, outputs: &[u8], inputs: &[u8]) -> Result<bool> {
        let out = checked_index(outputs, self.n, "output tuple")?;
        let inp = checked_index(inputs, self.n, "input tuple")?;
        Ok(self.wins(out, inp))
    }

    /// Lowers the game to its winning-probability functional under uniform inputs.
    pub fn to_functional(&self) -> BellFunctional {
        let weight = inv_pow2(self.n);
        let size = 1usize << self.n;
        let mut f = BellFunctional::zero(self.n, self.label());
        for input in 0..size {
            for output in 0..size {
                if self.wins(output, input) {
                    f.add_term(output, input, weight.clone());
                }
            }
        }
        f
    }

    /// The game differing only in `c0`.
    pub fn trivial_complement(&self) -> Self {
        Self { c0: !self.c0, ..*self }
    }

    pub fn relation(&self, other: &Self) -> Result<GameRelation> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "cannot relate a {}-party game to a {}-party game",
                self.n, other.n
            )));
        }
        Ok(if self.coeffs != other.coeffs {
            GameRelation::Distinct
        } else if self.c0 == other.c0 {
            GameRelation::Equivalent
        } else {
            GameRelation::TriviallyComplementary
        })
    }

    fn check_split(&self, k: usize) -> Result<()> {
        if k == 0 || k >= self.n {
            return Err(Error::Domain(format!(
                "retained party count k = {k} must satisfy 1 <= k < n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Evaluates `A_n^k = sum_{i>k} xi ^ ci Xi` and `B_n^k = sum_{i>k} Xi` on the
    /// tail parties `k+1 .. n`.
    pub fn auxiliary_values(
        &self,
        k: usize,
        tail_outputs: &[u8],
        tail_inputs: &[u8],
    ) -> Result<AuxiliaryValues> {
        self.check_split(k)?;
        let tail = self.n - k;
        let out = checked_index(tail_outputs, tail, "tail output tuple")?;
        let inp = checked_index(tail_inputs, tail, "tail input tuple")?;
        Ok(self.auxiliary_from_indices(k, out, inp))
    }

    pub(crate) fn auxiliary_from_indices(&self, k: usize, out: usize, inp: usize) -> AuxiliaryValues {
        let tail_coeffs = self.coeffs >> k;
        AuxiliaryValues {
            a: bits::parity(out) ^ bits::parity(inp & tail_coeffs),
            b: bits::parity(inp),
            k,
        }
    }

    /// The `k`-party game `S_k | (A_n^k = a, B_n^k = b)`: offset `c0 ^ a` and
    /// coefficients `ci ^ b` for the retained parties.
    pub fn conditioned_game(&self, k: usize, aux: AuxiliaryValues) -> Result<Self> {
        self.check_split(k)?;
        if aux.k != k {
            return Err(Error::Domain(format!(
                "auxiliary values computed for k = {}, requested k = {k}",
                aux.k
            )));
        }
        let head_mask = (1usize << k) - 1;
        let coeffs = if aux.b { (self.coeffs ^ head_mask) & head_mask } else { self.coeffs & head_mask };
        Ok(Self { n: k, c0: self.c0 ^ aux.a, coeffs })
    }

    /// The game the first `k` parties face once the tail's outputs and inputs
    /// are substituted into the winning condition.
    ///
    /// This equals [`conditioned_game`](Self::conditioned_game) with `A_n^k`
    /// shifted by the tail-internal term `sum_{k<i<j} Xi Xj`, which vanishes
    /// whenever the tail holds a single party.
    pub fn restrict(&self, k: usize, tail_outputs: &[u8], tail_inputs: &[u8]) -> Result<Self> {
        let aux = self.auxiliary_values(k, tail_outputs, tail_inputs)?;
        let inp = bits::tuple_to_index(tail_inputs)?;
        let shifted = AuxiliaryValues { a: aux.a ^ bits::pair_parity(inp), ..aux };
        self.conditioned_game(k, shifted)
    }

    /// Effective auxiliary output `A_n^k ^ sum_{k<i<j} Xi Xj`, the bit that
    /// actually selects the offset of the restricted game.
    pub(crate) fn effective_aux_a(&self, k: usize, out: usize, inp: usize) -> bool {
        self.auxiliary_from_indices(k, out, inp).a ^ bits::pair_parity(inp)
    }

    pub fn label(&self) -> String {
        let c: String = self.c().iter().map(|b| char::from(b'0' + b)).collect();
        format!("S{}[c={c}]", self.n)
    }
}

impl fmt::Display for SvetlichnyGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All `2^(n+1)` games for `n` parties, ordered by the coefficient string read
/// as a binary number with `c0` least significant.
pub fn enumerate_games(n: usize) -> Result<Vec<SvetlichnyGame>> {
    if n < 1 {
        return Err(Error::Domain("games need at least one party".into()));
    }
    if n > MAX_PARTIES {
        return Err(Error::Capacity { what: "party count", n, max: MAX_PARTIES });
    }
    Ok((0..(1usize << (n + 1)))
        .map(|code| SvetlichnyGame::from_parts(n, code & 1 == 1, code >> 1))
        .collect())
}
