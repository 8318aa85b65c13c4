//! Linear functionals on behavior space.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::bits::{self, checked_index, MAX_PARTIES};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// `value(P) = offset + sum_{(x, X)} coeff(x, X) * P(x | X)`.
///
/// Terms are keyed by `(output index, input index)`; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellFunctional {
    n: usize,
    terms: BTreeMap<(usize, usize), Rational>,
    offset: Rational,
    label: String,
}

impl BellFunctional {
    pub fn zero(n: usize, label: impl Into<String>) -> Self {
        assert!((1..=MAX_PARTIES).contains(&n), "party count {n} out of range");
        Self { n, terms: BTreeMap::new(), offset: Rational::zero(), label: label.into() }
    }

    /// Constant functional.
    pub fn constant(n: usize, value: Rational, label: impl Into<String>) -> Self {
        let mut f = Self::zero(n, label);
        f.offset = value;
        f
    }

    /// Builds a functional from tuple-addressed terms.
    pub fn from_terms<'a>(
        n: usize,
        terms: impl IntoIterator<Item = (&'a [u8], &'a [u8], Rational)>,
        offset: Rational,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !(1..=MAX_PARTIES).contains(&n) {
            return Err(Error::Domain(format!("party count {n} out of range")));
        }
        let mut f = Self::zero(n, label);
        for (out, inp, coeff) in terms {
            let o = checked_index(out, n, "term output tuple")?;
            let i = checked_index(inp, n, "term input tuple")?;
            f.add_term(o, i, coeff);
        }
        f.offset = offset;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates `(output index, input index, coefficient)` in index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.terms.iter().map(|(&(o, i), c)| (o, i, c))
    }

    pub fn coefficient(&self, output: usize, input: usize) -> Rational {
        self.terms.get(&(output, input)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff` to the term at `(output, input)`.
    pub fn add_term(&mut self, output: usize, input: usize, coeff: Rational) {
        let size = 1usize << self.n;
        assert!(output < size && input < size, "term index out of range");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((output, input)).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(output, input));
        }
    }

    pub fn add_offset(&mut self, delta: &Rational) {
        self.offset += delta;
    }

    /// Coefficients laid out in the canonical table order
    /// (`output * 2^n + input`).
    pub fn dense(&self) -> Vec<Rational> {
        let size = 1usize << self.n;
        let mut v = vec![Rational::zero(); size * size];
        for (&(o, i), c) in &self.terms {
            v[o * size + i] = c.clone();
        }
        v
    }

    /// Evaluates on a raw table in canonical order. The table is not validated.
    pub fn evaluate_table(&self, table: &[Rational]) -> Result<Rational> {
        let size = 1usize << self.n;
        if table.len() != size * size {
            return Err(Error::Dimension(format!(
                "table has {} entries, functional expects {}",
                table.len(),
                size * size
            )));
        }
        let mut acc = self.offset.clone();
        for (&(o, i), c) in &self.terms {
            acc += c * &table[o * size + i];
        }
        Ok(acc)
    }

    pub fn evaluate_f64(&self, table: &[f64]) -> Result<f64> {
        let size = 1usize << self.n;
        if table.len() != size * size {
            return Err(Error::Dimension(format!(
                "table has {} entries, functional expects {}",
                table.len(),
                size * size
            )));
        }
        let mut acc = crate::rational::to_f64(&self.offset);
        for (&(o, i), c) in &self.terms {
            acc += crate::rational::to_f64(c) * table[o * size + i];
        }
        Ok(acc)
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "functionals over {} and {} parties",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// `self + weight * other`.
    pub fn add_scaled(&self, other: &Self, weight: &Rational) -> Result<Self> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (&(o, i), c) in &other.terms {
            out.add_term(o, i, c * weight);
        }
        out.offset += &other.offset * weight;
        Ok(out)
    }

    pub fn scaled(&self, weight: &Rational) -> Self {
        let mut out = Self::zero(self.n, self.label.clone());
        for (&(o, i), c) in &self.terms {
            out.add_term(o, i, c * weight);
        }
        out.offset = &self.offset * weight;
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-Rational::from_integer(1.into()))
            .with_label(format!("-({})", self.label))
    }

    /// Embeds the functional into `n_target` parties. `parties[j]` is the
    /// (zero-based) target party playing the role of this functional's
    /// party `j`.
    ///
    /// Each term is spread over every output of the complementary parties at
    /// their all-zero input, so on no-signaling behaviors the value equals the
    /// original functional on the marginal of `parties`.
    pub fn lift(&self, n_target: usize, parties: &[usize]) -> Result<Self> {
        if parties.len() != self.n {
            return Err(Error::Dimension(format!(
                "lift needs {} target parties, got {}",
                self.n,
                parties.len()
            )));
        }
        if n_target < self.n || n_target > MAX_PARTIES {
            return Err(Error::Domain(format!(
                "cannot lift a {}-party functional to {n_target} parties",
                self.n
            )));
        }
        let mut seen = 0usize;
        for &p in parties {
            if p >= n_target || seen & (1 << p) != 0 {
                return Err(Error::Domain(format!("invalid target party list {parties:?}")));
            }
            seen |= 1 << p;
        }
        let rest: Vec<usize> = (0..n_target).filter(|p| seen & (1 << p) == 0).collect();
        let mut out = Self::zero(n_target, format!("{}@{}", self.label, party_list(parties)));
        for (&(o, i), c) in &self.terms {
            let o_full = bits::scatter(o, parties);
            let i_full = bits::scatter(i, parties);
            for y in 0..(1usize << rest.len()) {
                out.add_term(o_full | bits::scatter(y, &rest), i_full, c.clone());
            }
        }
        out.offset = self.offset.clone();
        Ok(out)
    }

    /// Human-readable dump of the nonzero terms.
    pub fn describe(&self) -> String {
        let mut s = format!("{} (n = {}, offset {})", self.label, self.n, format_rational(&self.offset));
        for (&(o, i), c) in &self.terms {
            let out: String = bits::index_to_tuple(o, self.n).iter().map(|b| char::from(b'0' + b)).collect();
            let inp: String = bits::index_to_tuple(i, self.n).iter().map(|b| char::from(b'0' + b)).collect();
            s.push_str(&format!("\n  {} P({out}|{inp})", format_rational(c)));
        }
        s
    }
}

/// One-based, comma-separated party list used in labels.
pub(crate) fn party_list(parties: &[usize]) -> String {
    parties.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BellFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn terms_cancel_and_vanish() {
        let mut f = BellFunctional::zero(2, "t");
        f.add_term(1, 2, rat(1, 2));
        f.add_term(1, 2, rat(-1, 2));
        assert_eq!(f.term_count(), 0);
    }

    #[test]
    fn from_terms_validates_tuples() {
        let ok = BellFunctional::from_terms(
            2,
            [(&[0u8, 1][..], &[1u8, 1][..], rat(1, 4))],
            int(0),
            "x",
        )
        .unwrap();
        assert_eq!(ok.coefficient(0b10, 0b11), rat(1, 4));
        let bad = BellFunctional::from_terms(2, [(&[0u8][..], &[1u8, 1][..], rat(1, 4))], int(0), "x");
        assert!(matches!(bad, Err(Error::Dimension(_))));
    }

    #[test]
    fn lift_spreads_over_complement_outputs() {
        let mut f = BellFunctional::zero(1, "p0");
        f.add_term(0, 0, int(1));
        let lifted = f.lift(3, &[2]).unwrap();
        assert_eq!(lifted.term_count(), 4);
        for y in 0..4 {
            assert_eq!(lifted.coefficient(y, 0), int(1));
        }
        assert!(f.lift(3, &[0, 1]).is_err());
        assert!(f.lift(3, &[3]).is_err());
    }
}
