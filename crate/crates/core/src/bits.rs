//! Bit-tuple indexing. Party `i` (zero-based) occupies bit `i` of an index,
//! so party 1 in the usual one-based numbering is the least significant bit.

use crate::error::{Error, Result};

/// Largest party count any dense table in this crate is built for.
pub const MAX_PARTIES: usize = 12;

#[inline]
pub fn bit(index: usize, party: usize) -> bool {
    (index >> party) & 1 == 1
}

#[inline]
pub fn parity(index: usize) -> bool {
    index.count_ones() & 1 == 1
}

/// Parity of `sum_{i<j} b_i b_j`, i.e. `C(w, 2) mod 2` for Hamming weight `w`.
#[inline]
pub fn pair_parity(index: usize) -> bool {
    let w = index.count_ones() as usize;
    (w * w.saturating_sub(1) / 2) & 1 == 1
}

/// Packs a tuple of 0/1 entries (party 1 first) into an index.
pub fn tuple_to_index(bits: &[u8]) -> Result<usize> {
    if bits.len() > MAX_PARTIES {
        return Err(Error::Dimension(format!("tuple of length {} is too long", bits.len())));
    }
    bits.iter().enumerate().try_fold(0usize, |acc, (i, &b)| match b {
        0 => Ok(acc),
        1 => Ok(acc | (1 << i)),
        other => Err(Error::Domain(format!("tuple entry {other} is not a bit"))),
    })
}

pub fn index_to_tuple(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| u8::from(bit(index, i))).collect()
}

/// Checks a tuple's length and packs it.
pub fn checked_index(bits: &[u8], n: usize, what: &str) -> Result<usize> {
    if bits.len() != n {
        return Err(Error::Dimension(format!(
            "{what} has length {}, expected {n}",
            bits.len()
        )));
    }
    tuple_to_index(bits)
}

/// Scatters the low bits of `compact` onto the positions listed in `parties`.
#[inline]
pub fn scatter(compact: usize, parties: &[usize]) -> usize {
    parties
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | (((compact >> j) & 1) << p))
}

/// Inverse of [`scatter`]: gathers the bits at `parties` into the low bits.
#[inline]
pub fn gather(index: usize, parties: &[usize]) -> usize {
    parties
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | (((index >> p) & 1) << j))
}
