//! Reed-Muller codes as truth tables of low-degree polynomials.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::combinatorics::{binomial_le, bits_of, masks_up_to_weight};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{MultilinearPoly, TruthTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmCode {
    pub m: usize,
    pub r: usize,
    /// Codeword `c` is the sum of the generators (degree `<= r` monomials in
    /// (size, lex) order) selected by the bits of `c`.
    pub codewords: Vec<TruthTable>,
}

impl RmCode {
    pub fn block_length(&self) -> usize {
        1 << self.m
    }

    pub fn dimension(&self) -> usize {
        self.codewords.len().trailing_zeros() as usize
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Minimum distance, via the minimum nonzero weight of the linear code.
    pub fn min_distance(&self) -> Option<u64> {
        self.codewords.iter().skip(1).map(TruthTable::count_ones).min()
    }
}

/// All codewords of RM(m, r).
pub fn rm_code(m: usize, r: usize, caps: &Caps) -> Result<RmCode> {
    caps.check_table(m)?;
    let gens: Vec<TruthTable> = masks_up_to_weight(m, r)
        .map(|mono| MultilinearPoly::from_monomials(m, [mono]).and_then(|p| p.truth_table_capped(caps)))
        .collect::<Result<_>>()?;
    if gens.len() >= 64 {
        return Err(Error::cap("code size", u128::MAX, caps.family as u128));
    }
    caps.check_family(1u128 << gens.len())?;
    let size = 1usize << gens.len();
    let mut codewords = Vec::with_capacity(size);
    codewords.push(TruthTable::zeros(m));
    for c in 1..size {
        let prev = &codewords[c & (c - 1)];
        let next = prev.xor(&gens[c.trailing_zeros() as usize])?;
        codewords.push(next);
    }
    Ok(RmCode { m, r, codewords })
}

/// Codewords within Hamming distance `radius` of `center`.
pub fn rm_list_size(code: &RmCode, center: &TruthTable, radius: usize) -> Result<usize> {
    if radius > code.block_length() {
        return Err(Error::invalid(format!(
            "radius {radius} exceeds block length {}",
            code.block_length()
        )));
    }
    if center.n_vars() != code.m {
        return Err(Error::MismatchedVars {
            left: center.n_vars(),
            right: code.m,
        });
    }
    let mut count = 0;
    for w in &code.codewords {
        if w.distance(center)? as usize <= radius {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether `|Q| · binom(N, <= radius) <= 2^N · list_size`, the counting bound any
/// code with lists of size `list_size` at that radius must satisfy.
pub fn hamming_bound_holds(code_size: usize, block_length: usize, radius: usize, list_size: usize) -> bool {
    let lhs = BigUint::from(code_size) * binomial_le(block_length as u64, radius as u64);
    let rhs = (BigUint::one() << block_length) * BigUint::from(list_size);
    lhs <= rhs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListScan {
    pub radius: usize,
    pub counts: Vec<usize>,
    pub max_count: usize,
    /// `None` when no center had a codeword in range, so no list size was observed.
    pub hamming_bound_holds: Option<bool>,
}

/// List sizes at `trials` uniformly random centers.
pub fn rm_list_scan<R: Rng + ?Sized>(code: &RmCode, radius: usize, trials: usize, rng: &mut R) -> Result<ListScan> {
    let mut counts = Vec::with_capacity(trials);
    for _ in 0..trials {
        let center = random_table(code.m, rng);
        counts.push(rm_list_size(code, &center, radius)?);
    }
    let max_count = counts.iter().copied().max().unwrap_or(0);
    Ok(ListScan {
        radius,
        hamming_bound_holds: (max_count > 0).then(|| hamming_bound_holds(code.len(), code.block_length(), radius, max_count)),
        counts,
        max_count,
    })
}

pub fn random_table<R: Rng + ?Sized>(m: usize, rng: &mut R) -> TruthTable {
    TruthTable::from_fn(m, |_| rng.gen())
}

/// The polynomial of a codeword index.
pub fn rm_codeword_poly(m: usize, r: usize, index: u64) -> Result<MultilinearPoly> {
    let monos: Vec<u64> = masks_up_to_weight(m, r).collect();
    if monos.len() < 64 && index >> monos.len() != 0 {
        return Err(Error::invalid(format!("codeword index {index} out of range")));
    }
    MultilinearPoly::from_monomials(m, bits_of(index).map(|j| monos[j]))
}
