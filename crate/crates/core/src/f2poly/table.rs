use std::fmt;

use crate::error::{Error, Result};

/// Packed truth table of a function `{0,1}^n -> {0,1}`.
///
/// Entry `x` is the value at the point whose coordinate `i` is bit `i` of `x`
/// (little-endian: `x1` is the least significant bit).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n_vars: usize,
    words: Vec<u64>,
}

// Masks selecting positions whose bit i is 0, for i < 6.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

impl TruthTable {
    pub fn zeros(n_vars: usize) -> Self {
        TruthTable {
            n_vars,
            words: vec![0; word_count(n_vars)],
        }
    }

    pub fn ones(n_vars: usize) -> Self {
        let mut t = Self::zeros(n_vars);
        for w in &mut t.words {
            *w = u64::MAX;
        }
        t.clear_padding();
        t
    }

    pub fn from_fn(n_vars: usize, mut f: impl FnMut(u64) -> bool) -> Self {
        let mut t = Self::zeros(n_vars);
        for x in 0..t.len() as u64 {
            if f(x) {
                t.set(x, true);
            }
        }
        t
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let n_vars = exact_log2(bits.len())?;
        let mut t = Self::zeros(n_vars);
        for (x, &b) in bits.iter().enumerate() {
            t.set(x as u64, b);
        }
        Ok(t)
    }

    /// Parse a bitstring of `0`/`1` characters; entry `x` is character `x`.
    pub fn parse_bitstring(s: &str) -> Result<Self> {
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
        Self::from_bits(&bits)
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len() as u64).map(|x| if self.get(x) { '1' } else { '0' }).collect()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        1usize << self.n_vars
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, x: u64) -> bool {
        self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: u64, value: bool) {
        let w = &mut self.words[(x >> 6) as usize];
        let bit = 1u64 << (x & 63);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, x: u64) {
        self.words[(x >> 6) as usize] ^= 1u64 << (x & 63);
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.len() as u64
    }

    pub fn xor(&self, other: &TruthTable) -> Result<TruthTable> {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn or(&self, other: &TruthTable) -> Result<TruthTable> {
        self.zip(other, |a, b| a | b)
    }

    pub fn and(&self, other: &TruthTable) -> Result<TruthTable> {
        self.zip(other, |a, b| a & b)
    }

    pub fn or_assign(&mut self, other: &TruthTable) -> Result<()> {
        check_same(self.n_vars, other.n_vars)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    /// Hamming distance between two tables of equal size.
    pub fn distance(&self, other: &TruthTable) -> Result<u64> {
        check_same(self.n_vars, other.n_vars)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    fn zip(&self, other: &TruthTable, op: impl Fn(u64, u64) -> u64) -> Result<TruthTable> {
        check_same(self.n_vars, other.n_vars)?;
        Ok(TruthTable {
            n_vars: self.n_vars,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    /// In-place subset-sum (zeta/Möbius) transform over F2; it is an involution,
    /// mapping monomial coefficients to values and back.
    pub(crate) fn moebius_in_place(&mut self) {
        let n = self.n_vars;
        for i in 0..n.min(6) {
            let shift = 1u32 << i;
            for w in &mut self.words {
                *w ^= (*w & LOW_HALF[i]) << shift;
            }
        }
        for i in 6..n {
            let stride = 1usize << (i - 6);
            let len = self.words.len();
            let mut base = 0;
            while base < len {
                for j in base..base + stride {
                    self.words[j + stride] ^= self.words[j];
                }
                base += 2 * stride;
            }
        }
        self.clear_padding();
    }

    fn clear_padding(&mut self) {
        if self.n_vars < 6 {
            self.words[0] &= (1u64 << (1 << self.n_vars)) - 1;
        }
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n_vars <= 8 {
            write!(f, "TruthTable({})", self.to_bitstring())
        } else {
            write!(f, "TruthTable(n={}, ones={})", self.n_vars, self.count_ones())
        }
    }
}

fn word_count(n_vars: usize) -> usize {
    if n_vars <= 6 {
        1
    } else {
        1 << (n_vars - 6)
    }
}

fn exact_log2(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::invalid(format!("table length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::MismatchedVars { left: a, right: b });
    }
    Ok(())
}
