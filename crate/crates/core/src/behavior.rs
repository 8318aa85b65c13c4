//! Behaviors (boxes): exact conditional distributions `P(x | X)`.

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::bits::{self, checked_index, MAX_PARTIES};
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::game::SvetlichnyGame;
use crate::rational::{int, inv_pow2, Rational};

/// Largest party count accepted by [`lhv_max`].
pub const LHV_MAX_PARTIES: usize = 5;

/// An `n`-party binary box. Entries are stored in canonical order,
/// `table[output * 2^n + input]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behavior {
    n: usize,
    table: Vec<Rational>,
}

/// Result of conditioning on a tail event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conditioned {
    /// `P(tail outputs | tail inputs)`.
    pub probability: Rational,
    /// The head's behavior given the event; `None` when the event has
    /// probability zero.
    pub behavior: Option<Behavior>,
}

impl Conditioned {
    /// `probability * f(conditioned)`, taken as zero for impossible events.
    pub fn weighted_value(&self, f: &BellFunctional) -> Result<Rational> {
        match &self.behavior {
            Some(b) => Ok(&self.probability * b.value(f)?),
            None => Ok(Rational::zero()),
        }
    }
}

/// One local deterministic response per party. Response `r` outputs bit 0 of
/// `r` on input 0 and bit 1 of `r` on input 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    responses: Vec<u8>,
}

impl DeterministicStrategy {
    pub fn new(responses: Vec<u8>) -> Result<Self> {
        if responses.is_empty() || responses.len() > MAX_PARTIES {
            return Err(Error::Domain(format!("{} responses", responses.len())));
        }
        if let Some(r) = responses.iter().find(|&&r| r > 3) {
            return Err(Error::Domain(format!("response code {r} is not in 0..4")));
        }
        Ok(Self { responses })
    }

    /// Decodes strategy number `code` in `0..4^n` (party 1 in the lowest digit).
    pub fn from_code(n: usize, code: usize) -> Self {
        let responses = (0..n).map(|i| ((code >> (2 * i)) & 3) as u8).collect();
        Self { responses }
    }

    /// All-parties-output-zero.
    pub fn constant_zero(n: usize) -> Self {
        Self { responses: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.responses.len()
    }

    pub fn responses(&self) -> &[u8] {
        &self.responses
    }

    /// Output index produced on the given input index.
    #[inline]
    pub fn output(&self, input: usize) -> usize {
        self.responses.iter().enumerate().fold(0, |acc, (i, &r)| {
            let x = (r >> u8::from(bits::bit(input, i))) & 1;
            acc | ((x as usize) << i)
        })
    }

    pub fn count(n: usize) -> usize {
        1 << (2 * n)
    }
}

impl Behavior {
    /// Validates non-negativity and per-input normalization exactly.
    pub fn new(n: usize, table: Vec<Rational>) -> Result<Self> {
        if !(1..=MAX_PARTIES).contains(&n) {
            return Err(Error::Domain(format!("party count {n} out of range")));
        }
        let size = 1usize << n;
        if table.len() != size * size {
            return Err(Error::Dimension(format!(
                "a {n}-party table has {} entries, got {}",
                size * size,
                table.len()
            )));
        }
        if let Some(pos) = table.iter().position(|p| p.is_negative()) {
            return Err(Error::Domain(format!("negative probability at index {pos}")));
        }
        let b = Self { n, table };
        for input in 0..size {
            let total: Rational = (0..size).map(|o| &b.table[o * size + input]).sum();
            if !total.is_one() {
                return Err(Error::Domain(format!("input {input} sums to {total}, not 1")));
            }
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn into_table(self) -> Vec<Rational> {
        self.table
    }

    #[inline]
    fn size(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn entry(&self, output: usize, input: usize) -> &Rational {
        &self.table[output * self.size() + input]
    }

    pub fn probability(&self, outputs: &[u8], inputs: &[u8]) -> Result<Rational> {
        let o = checked_index(outputs, self.n, "output tuple")?;
        let i = checked_index(inputs, self.n, "input tuple")?;
        Ok(self.entry(o, i).clone())
    }

    /// White noise: every output equally likely on every input.
    pub fn uniform(n: usize) -> Self {
        let size = 1usize << n;
        Self { n, table: vec![inv_pow2(n); size * size] }
    }

    /// Box uniform over the outputs whose parity equals `parity(input)`.
    pub fn xor_box(n: usize, parity: impl Fn(usize) -> bool) -> Self {
        let size = 1usize << n;
        let weight = inv_pow2(n - 1);
        let mut table = vec![Rational::zero(); size * size];
        for input in 0..size {
            let target = parity(input);
            for output in 0..size {
                if bits::parity(output) == target {
                    table[output * size + input] = weight.clone();
                }
            }
        }
        Self { n, table }
    }

    /// The extremal no-signaling box winning `game` with certainty.
    pub fn svetlichny_box(game: &SvetlichnyGame) -> Self {
        Self::xor_box(game.n(), |input| game.winning_parity(input))
    }

    /// The PR box `x1 ^ x2 = X1 X2`.
    pub fn pr_box() -> Self {
        Self::svetlichny_box(&SvetlichnyGame::canonical(2).expect("n = 2"))
    }

    pub fn deterministic_box(strategy: &DeterministicStrategy) -> Self {
        let n = strategy.n();
        let size = 1usize << n;
        let mut table = vec![Rational::zero(); size * size];
        for input in 0..size {
            table[strategy.output(input) * size + input] = Rational::one();
        }
        Self { n, table }
    }

    /// Tensor product; `self` occupies the low parties, `other` the high ones.
    pub fn product(&self, other: &Behavior) -> Result<Self> {
        let n = self.n + other.n;
        if n > MAX_PARTIES {
            return Err(Error::Capacity { what: "party count", n, max: MAX_PARTIES });
        }
        let (sa, sb) = (self.size(), other.size());
        let size = 1usize << n;
        let mut table = vec![Rational::zero(); size * size];
        for oa in 0..sa {
            for ia in 0..sa {
                let pa = self.entry(oa, ia);
                if pa.is_zero() {
                    continue;
                }
                for ob in 0..sb {
                    for ib in 0..sb {
                        let pb = other.entry(ob, ib);
                        if !pb.is_zero() {
                            let o = oa | (ob << self.n);
                            let i = ia | (ib << self.n);
                            table[o * size + i] = pa * pb;
                        }
                    }
                }
            }
        }
        Ok(Self { n, table })
    }

    /// `value(f, self)`.
    pub fn value(&self, f: &BellFunctional) -> Result<Rational> {
        if f.n() != self.n {
            return Err(Error::Dimension(format!(
                "{}-party functional on a {}-party behavior",
                f.n(),
                self.n
            )));
        }
        f.evaluate_table(&self.table)
    }

    /// Single-party no-signaling: for every party, the marginal of the others
    /// does not depend on that party's input.
    pub fn is_no_signaling(&self) -> bool {
        no_signaling_violation(self.n, &self.table, |a, b| a == b)
    }

    /// No-signaling checked for every proper nonempty subset of parties
    /// directly (slower, independent of the single-party reduction).
    pub fn is_fully_no_signaling(&self) -> bool {
        let size = self.size();
        let full = size - 1;
        for hidden in 1..full {
            let kept = full & !hidden;
            // marginal over `kept` must not depend on the inputs of `hidden`
            for kept_out in subsets_of(kept) {
                for kept_in in subsets_of(kept) {
                    let mut reference: Option<Rational> = None;
                    for hidden_in in subsets_of(hidden) {
                        let total: Rational = subsets_of(hidden)
                            .map(|hidden_out| self.entry(kept_out | hidden_out, kept_in | hidden_in))
                            .sum();
                        match &reference {
                            None => reference = Some(total),
                            Some(r) if *r != total => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
        true
    }

    /// Marginal on `parties` (zero-based; the result's party `j` is
    /// `parties[j]`).
    pub fn marginal(&self, parties: &[usize]) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::Domain("marginal over an empty party set".into()));
        }
        let mut seen = 0usize;
        for &p in parties {
            if p >= self.n || seen & (1 << p) != 0 {
                return Err(Error::Domain(format!("invalid party list {parties:?}")));
            }
            seen |= 1 << p;
        }
        if !self.is_no_signaling() {
            return Err(Error::IllDefinedMarginal);
        }
        Ok(self.marginal_unchecked(parties))
    }

    fn marginal_unchecked(&self, parties: &[usize]) -> Self {
        let m = parties.len();
        let rest: Vec<usize> = (0..self.n).filter(|p| !parties.contains(p)).collect();
        let msize = 1usize << m;
        let mut table = vec![Rational::zero(); msize * msize];
        for o in 0..msize {
            for i in 0..msize {
                let o_full = bits::scatter(o, parties);
                let i_full = bits::scatter(i, parties);
                let total: Rational = (0..(1usize << rest.len()))
                    .map(|y| self.entry(o_full | bits::scatter(y, &rest), i_full))
                    .sum();
                table[o * msize + i] = total;
            }
        }
        Self { n: m, table }
    }

    /// Conditions on the last `n - k` parties producing `tail_outputs` on
    /// `tail_inputs`.
    pub fn condition(&self, k: usize, tail_outputs: &[u8], tail_inputs: &[u8]) -> Result<Conditioned> {
        if k == 0 || k >= self.n {
            return Err(Error::Domain(format!("k = {k} must satisfy 1 <= k < n = {}", self.n)));
        }
        let tail = self.n - k;
        let t_out = checked_index(tail_outputs, tail, "tail output tuple")?;
        let t_in = checked_index(tail_inputs, tail, "tail input tuple")?;
        if !self.is_no_signaling() {
            return Err(Error::IllDefinedMarginal);
        }
        Ok(self.condition_indices(k, t_out, t_in))
    }

    pub(crate) fn condition_indices(&self, k: usize, t_out: usize, t_in: usize) -> Conditioned {
        let hsize = 1usize << k;
        let probability: Rational = (0..hsize)
            .map(|h_out| self.entry(h_out | (t_out << k), t_in << k))
            .sum();
        if probability.is_zero() {
            return Conditioned { probability, behavior: None };
        }
        let mut table = vec![Rational::zero(); hsize * hsize];
        for h_out in 0..hsize {
            for h_in in 0..hsize {
                let joint = self.entry(h_out | (t_out << k), h_in | (t_in << k));
                table[h_out * hsize + h_in] = joint / &probability;
            }
        }
        Conditioned { probability, behavior: Some(Self { n: k, table }) }
    }

    /// Entries as `f64`, same layout.
    pub fn to_f64(&self) -> Vec<f64> {
        self.table.iter().map(crate::rational::to_f64).collect()
    }
}

fn subsets_of(mask: usize) -> impl Iterator<Item = usize> {
    // enumerates every submask of `mask`, including 0 and `mask`
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Shared single-party no-signaling scan; `eq` compares two partial sums.
pub(crate) fn no_signaling_violation<T>(n: usize, table: &[T], eq: impl Fn(&T, &T) -> bool) -> bool
where
    T: Clone + for<'a> std::ops::Add<&'a T, Output = T>,
{
    let size = 1usize << n;
    for party in 0..n {
        let pbit = 1usize << party;
        for out in (0..size).filter(|o| o & pbit == 0) {
            for inp in (0..size).filter(|i| i & pbit == 0) {
                let sum = |input: usize| {
                    table[out * size + input].clone() + &table[(out | pbit) * size + input]
                };
                if !eq(&sum(inp), &sum(inp | pbit)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Entrywise convex combination.
pub fn mix(boxes: &[Behavior], weights: &[Rational]) -> Result<Behavior> {
    if boxes.is_empty() || boxes.len() != weights.len() {
        return Err(Error::Dimension(format!(
            "{} boxes with {} weights",
            boxes.len(),
            weights.len()
        )));
    }
    let n = boxes[0].n;
    if let Some(b) = boxes.iter().find(|b| b.n != n) {
        return Err(Error::Dimension(format!("mixing {n}-party and {}-party boxes", b.n)));
    }
    if weights.iter().any(|w| w.is_negative()) {
        return Err(Error::Domain("negative mixture weight".into()));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::Domain(format!("mixture weights sum to {total}, not 1")));
    }
    let mut table = vec![Rational::zero(); boxes[0].table.len()];
    for (b, w) in boxes.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (t, p) in table.iter_mut().zip(&b.table) {
            if !p.is_zero() {
                *t += p * w;
            }
        }
    }
    Ok(Behavior { n, table })
}

/// Exact maximum of `f` over local deterministic boxes, with a maximizing
/// strategy (the lowest-numbered one on ties).
pub fn lhv_max(f: &BellFunctional) -> Result<(Rational, DeterministicStrategy)> {
    let n = f.n();
    if n > LHV_MAX_PARTIES {
        return Err(Error::Capacity { what: "deterministic strategy enumeration", n, max: LHV_MAX_PARTIES });
    }
    let size = 1usize << n;
    let dense = f.dense();
    let mut best: Option<(Rational, usize)> = None;
    for code in 0..DeterministicStrategy::count(n) {
        let s = DeterministicStrategy::from_code(n, code);
        let mut v = f.offset().clone();
        for input in 0..size {
            let c = &dense[s.output(input) * size + input];
            if !c.is_zero() {
                v += c;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, code));
        }
    }
    let (v, code) = best.expect("at least one strategy");
    Ok((v, DeterministicStrategy::from_code(n, code)))
}

/// A random point of the no-signaling polytope: a mixture of random
/// deterministic boxes and, when `extremal > 0`, random Svetlichny boxes,
/// with random positive rational weights.
pub fn random_ns_behavior<R: Rng + ?Sized>(n: usize, deterministic: usize, extremal: usize, rng: &mut R) -> Behavior {
    assert!(deterministic + extremal > 0, "empty mixture");
    let mut boxes = Vec::with_capacity(deterministic + extremal);
    for _ in 0..deterministic {
        let code = rng.random_range(0..DeterministicStrategy::count(n));
        boxes.push(Behavior::deterministic_box(&DeterministicStrategy::from_code(n, code)));
    }
    for _ in 0..extremal {
        let code = rng.random_range(0..(1usize << (n + 1)));
        let game = SvetlichnyGame::from_parts(n, code & 1 == 1, code >> 1);
        boxes.push(Behavior::svetlichny_box(&game));
    }
    let raw: Vec<i64> = boxes.iter().map(|_| rng.random_range(1..=60)).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<Rational> = raw.iter().map(|&w| int(w) / int(total)).collect();
    mix(&boxes, &weights).expect("weights are a distribution")
}

/// A random behavior that is normalized but generally signaling.
pub fn random_signaling_behavior<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Behavior {
    let size = 1usize << n;
    let mut table = vec![Rational::zero(); size * size];
    for input in 0..size {
        let raw: Vec<i64> = (0..size).map(|_| rng.random_range(0..=9)).collect();
        let total: i64 = raw.iter().sum::<i64>().max(1);
        for (o, &w) in raw.iter().enumerate() {
            table[o * size + input] = int(w) / int(total);
        }
        if raw.iter().all(|&w| w == 0) {
            table[input] = Rational::one();
        }
    }
    Behavior { n, table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::game::enumerate_games;
    use crate::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(c: &[u8]) -> SvetlichnyGame {
        SvetlichnyGame::new(c).unwrap()
    }

    #[test]
    fn constructors_are_valid() {
        for n in 1..=4 {
            Behavior::new(n, Behavior::uniform(n).into_table()).unwrap();
            for game in enumerate_games(n).unwrap() {
                let b = Behavior::svetlichny_box(&game);
                assert!(b.is_no_signaling());
                Behavior::new(n, b.into_table()).unwrap();
            }
        }
        for code in 0..DeterministicStrategy::count(3) {
            let b = Behavior::deterministic_box(&DeterministicStrategy::from_code(3, code));
            assert!(b.is_no_signaling());
            Behavior::new(3, b.into_table()).unwrap();
        }
    }

    #[test]
    fn rejects_bad_tables() {
        let mut t = Behavior::uniform(1).into_table();
        t[0] = rat(3, 4);
        assert!(matches!(Behavior::new(1, t), Err(Error::Domain(_))));
        let mut t = Behavior::uniform(1).into_table();
        t[0] = rat(-1, 2);
        t[2] = rat(3, 2);
        assert!(matches!(Behavior::new(1, t), Err(Error::Domain(_))));
        assert!(Behavior::new(2, vec![Rational::zero(); 4]).is_err());
    }

    #[test]
    fn no_signaling_examples() {
        assert!(Behavior::uniform(3).is_no_signaling());
        assert!(Behavior::pr_box().is_no_signaling());
        // party 1 copies party 2's input
        let mut table = vec![Rational::zero(); 16];
        for input in 0..4usize {
            let out = (input >> 1) & 1;
            table[out * 4 + input] = Rational::one();
        }
        let signaling = Behavior::new(2, table).unwrap();
        assert!(!signaling.is_no_signaling());
        assert!(!signaling.is_fully_no_signaling());
        assert!(matches!(signaling.marginal(&[0]), Err(Error::IllDefinedMarginal)));
    }

    #[test]
    fn value_examples() {
        let chsh = catalog::chsh();
        assert_eq!(Behavior::pr_box().value(&chsh).unwrap(), rat(1, 1));
        assert_eq!(Behavior::uniform(2).value(&chsh).unwrap(), rat(1, 2));
        let s3 = s(&[0, 0, 0, 0]);
        assert_eq!(Behavior::svetlichny_box(&s3).value(&s3.to_functional()).unwrap(), rat(1, 1));
        assert!(Behavior::uniform(3).value(&chsh).is_err());
        assert_eq!(Behavior::svetlichny_box(&s(&[0, 0, 0])), Behavior::pr_box());
    }

    #[test]
    fn deterministic_examples() {
        let zeros = Behavior::deterministic_box(&DeterministicStrategy::constant_zero(3));
        for input in 0..8 {
            assert_eq!(*zeros.entry(0, input), Rational::one());
        }
        assert_eq!(zeros.value(&catalog::gyni3()).unwrap(), rat(1, 4));
    }

    #[test]
    fn mix_examples() {
        let pr = Behavior::pr_box();
        assert_eq!(mix(std::slice::from_ref(&pr), &[rat(1, 1)]).unwrap(), pr);
        let anti = Behavior::svetlichny_box(&s(&[1, 0, 0]));
        let m = mix(&[pr.clone(), anti], &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(m.value(&catalog::chsh()).unwrap(), rat(1, 2));
        assert!(mix(std::slice::from_ref(&pr), &[rat(1, 2)]).is_err());
        let game = s(&[0, 0, 0, 0]);
        let f = game.to_functional();
        for w in [rat(0, 1), rat(1, 3), rat(5, 7), rat(1, 1)] {
            let b = mix(
                &[Behavior::svetlichny_box(&game), Behavior::uniform(3)],
                &[w.clone(), rat(1, 1) - &w],
            )
            .unwrap();
            assert_eq!(b.value(&f).unwrap(), &w + (rat(1, 1) - &w) / int(2));
        }
    }

    #[test]
    fn marginal_examples() {
        assert_eq!(Behavior::pr_box().marginal(&[0]).unwrap(), Behavior::uniform(1));
        let zeros = Behavior::deterministic_box(&DeterministicStrategy::constant_zero(3));
        assert_eq!(
            zeros.marginal(&[0, 1]).unwrap(),
            Behavior::deterministic_box(&DeterministicStrategy::constant_zero(2))
        );
        let s3 = Behavior::svetlichny_box(&s(&[0, 0, 0, 0]));
        assert_eq!(s3.marginal(&[0, 1]).unwrap(), Behavior::uniform(2));
        assert!(s3.marginal(&[]).is_err());
    }

    #[test]
    fn condition_on_independent_product() {
        let pr2 = Behavior::pr_box().product(&Behavior::pr_box()).unwrap();
        for t_out in 0..4usize {
            for t_in in 0..4usize {
                let c = pr2
                    .condition(2, &bits::index_to_tuple(t_out, 2), &bits::index_to_tuple(t_in, 2))
                    .unwrap();
                // the tail is itself a PR box: each output pair has probability 1/2 or 0
                let expected = if bits::parity(t_out) == (t_in == 3) { rat(1, 2) } else { rat(0, 1) };
                assert_eq!(c.probability, expected);
                if expected.is_zero() {
                    assert!(c.behavior.is_none());
                } else {
                    assert_eq!(c.behavior.unwrap(), Behavior::pr_box());
                }
            }
        }
    }

    #[test]
    fn condition_probabilities_normalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = random_ns_behavior(3, 4, 2, &mut rng);
        for t_in in 0..2usize {
            let total: Rational = (0..2usize).map(|t_out| b.condition_indices(2, t_out, t_in).probability).sum();
            assert!(total.is_one());
        }
    }

    #[test]
    fn lhv_examples() {
        assert_eq!(lhv_max(&catalog::chsh()).unwrap().0, rat(3, 4));
        assert_eq!(lhv_max(&catalog::mermin1()).unwrap().0, rat(7, 8));
        assert_eq!(lhv_max(&catalog::mermin2()).unwrap().0, rat(3, 4));
        assert_eq!(lhv_max(&catalog::mermin_facet()).unwrap().0, int(2));
        assert_eq!(lhv_max(&catalog::ip3()).unwrap().0, int(0));
        assert_eq!(lhv_max(&catalog::gyni3()).unwrap().0, rat(1, 4));
        let s3 = s(&[0, 0, 0, 0]).to_functional();
        let (v, strategy) = lhv_max(&s3).unwrap();
        assert_eq!(v, rat(3, 4));
        assert_eq!(Behavior::deterministic_box(&strategy).value(&s3).unwrap(), v);
        let big = SvetlichnyGame::canonical(6).unwrap().to_functional();
        assert!(matches!(lhv_max(&big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn lhv_matches_explicit_boxes() {
        for f in [catalog::gyni3(), catalog::ip3(), catalog::mermin_facet()] {
            let explicit = (0..DeterministicStrategy::count(3))
                .map(|c| Behavior::deterministic_box(&DeterministicStrategy::from_code(3, c)).value(&f).unwrap())
                .max()
                .unwrap();
            assert_eq!(lhv_max(&f).unwrap().0, explicit);
        }
    }

    #[test]
    fn strategy_validation() {
        assert!(DeterministicStrategy::new(vec![0, 4]).is_err());
        assert_eq!(DeterministicStrategy::new(vec![2]).unwrap().output(1), 1);
        assert_eq!(DeterministicStrategy::new(vec![1]).unwrap().output(1), 0);
    }

    #[test]
    fn random_behaviors_are_ns_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = catalog::mermin_facet();
        for _ in 0..100 {
            let b1 = random_ns_behavior(3, 3, 1, &mut rng);
            let b2 = random_ns_behavior(3, 2, 2, &mut rng);
            assert!(b1.is_no_signaling() && b1.is_fully_no_signaling());
            let w = rat(rng.random_range(0..=10), 10);
            let m = mix(&[b1.clone(), b2.clone()], &[w.clone(), rat(1, 1) - &w]).unwrap();
            assert!(m.is_no_signaling());
            let expected = &w * b1.value(&f).unwrap() + (rat(1, 1) - &w) * b2.value(&f).unwrap();
            assert_eq!(m.value(&f).unwrap(), expected);
        }
    }

    #[test]
    fn complement_values_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for game in enumerate_games(n).unwrap() {
                let f = game.to_functional();
                let g = game.trivial_complement().to_functional();
                for _ in 0..10 {
                    let b = random_signaling_behavior(n, &mut rng);
                    assert!((b.value(&f).unwrap() + b.value(&g).unwrap()).is_one());
                }
            }
        }
    }
}
