//! Rank over F2 by Gaussian elimination on packed rows.

use crate::error::{Error, Result};

/// A packed row vector over F2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                row.set(i);
            }
        }
        row
    }

    /// Row of `len <= 64` bits taken from the low bits of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut row = Self::zeros(len);
        if len > 0 {
            row.words[0] = if len == 64 { value } else { value & ((1 << len) - 1) };
        }
        row
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), len.div_ceil(64));
        BitRow { len, words }
    }

    /// Parse a `0`/`1` string, character `i` being entry `i`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Syntax {
                    pos: i,
                    msg: format!("expected '0' or '1', found {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
}

/// Rank over F2 of the matrix whose rows are given; 0 for no rows.
pub fn f2_matrix_rank(rows: &[BitRow]) -> Result<usize> {
    let Some(first) = rows.first() else {
        return Ok(0);
    };
    let width = first.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != width) {
        return Err(Error::invalid(format!(
            "ragged rows: lengths {width} and {}",
            bad.len()
        )));
    }
    // basis[c] holds a reduced row whose lowest set column is c
    let mut basis: Vec<Option<BitRow>> = vec![None; width];
    let mut rank = 0;
    for row in rows {
        let mut r = row.clone();
        while let Some(c) = r.leading() {
            match &basis[c] {
                Some(b) => r.xor_assign(b),
                None => {
                    basis[c] = Some(r);
                    rank += 1;
                    break;
                }
            }
        }
    }
    Ok(rank)
}

/// Rank of a list of vectors in `F2^n`, `n <= 64`, stored as bitmasks.
pub fn rank_u64(rows: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &row in rows {
        let mut r = row;
        while r != 0 {
            let c = r.trailing_zeros() as usize;
            if basis[c] == 0 {
                basis[c] = r;
                rank += 1;
                break;
            }
            r ^= basis[c];
        }
    }
    rank
}
