//! Bias of a polynomial over d-local affine subspaces.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ScanMode;
use crate::combinatorics::{deposit, Combinations};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{full_mask, rank_u64, MultilinearPoly, TruthTable};
use crate::sources::AffineSubspace;
use crate::subspace::span_points;

const MAX_RETRIES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineCensus {
    pub scanned: u64,
    pub max_bias: BigRational,
    /// First subspace in scan order attaining `max_bias`.
    pub worst: AffineSubspace,
}

/// `|2^k - 2·#ones|` of `f` on `shift + span(basis)`.
fn bias_numerator(table: &TruthTable, shift: u64, basis: &[u64]) -> u64 {
    let total = 1u64 << basis.len();
    let ones = span_points(shift, basis).filter(|&p| table.get(p)).count() as u64;
    total.abs_diff(2 * ones)
}

/// Maximum exact bias of `f` over dimension-`k` affine subspaces of `{0,1}^n`
/// with a `d`-local basis.
///
/// Exhaustive mode walks every `d`-local independent basis `b_1 < ... < b_k`
/// (as integers) and every coset, shifts ranging over vectors that vanish on
/// the pivot coordinates. Random mode draws each coordinate's column uniformly
/// among the subsets of size `<= d` of the basis, redrawing dependent bases, and
/// a uniform shift.
pub fn affine_extractor_census(
    f: &MultilinearPoly,
    d: usize,
    k: usize,
    mode: ScanMode,
    caps: &Caps,
) -> Result<AffineCensus> {
    let n = f.n_vars();
    if k > n || d == 0 {
        return Err(Error::invalid(format!("need 1 <= d and k <= n, got d = {d}, k = {k}, n = {n}")));
    }
    caps.check_dist(k)?;
    let table = f.truth_table_capped(caps)?;
    let mut best: Option<(u64, u64, Vec<u64>)> = None;
    let mut scanned = 0u64;
    let mut visit = |shift: u64, basis: &[u64]| -> Result<()> {
        scanned += 1;
        if scanned > caps.family {
            return Err(Error::cap("affine subspaces scanned", scanned as u128, caps.family as u128));
        }
        let b = bias_numerator(&table, shift, basis);
        if best.as_ref().is_none_or(|(m, _, _)| b > *m) {
            best = Some((b, shift, basis.to_vec()));
        }
        Ok(())
    };
    match mode {
        ScanMode::Exhaustive => {
            let mut basis = Vec::with_capacity(k);
            let mut cols = vec![0usize; n];
            exhaustive(n, d, k, 1, &mut basis, &mut cols, &mut visit)?;
        }
        ScanMode::Random { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let basis = random_local_basis(&mut rng, n, d, k)?;
                let shift = rng.gen::<u64>() & full_mask(n);
                visit(shift, &basis)?;
            }
        }
    }
    let (b, shift, basis) = best.ok_or_else(|| Error::invalid("no subspace scanned"))?;
    Ok(AffineCensus {
        scanned,
        max_bias: BigRational::new(BigInt::from(b), BigInt::from(1u64 << k)),
        worst: AffineSubspace::new(n, shift, basis)?,
    })
}

fn exhaustive(
    n: usize,
    d: usize,
    k: usize,
    start: u64,
    basis: &mut Vec<u64>,
    cols: &mut [usize],
    visit: &mut impl FnMut(u64, &[u64]) -> Result<()>,
) -> Result<()> {
    if basis.len() == k {
        let pivots = AffineSubspace::linear(n, basis.clone())?.canonical_form().pivots;
        let free = pivots.iter().fold(full_mask(n), |m, &p| m & !(1u64 << p));
        for s in 0..1u64 << free.count_ones() {
            visit(deposit(s, free), basis)?;
        }
        return Ok(());
    }
    for v in start..=full_mask(n) {
        if (0..n).any(|j| v >> j & 1 == 1 && cols[j] >= d) {
            continue;
        }
        basis.push(v);
        if rank_u64(basis) == basis.len() {
            for j in 0..n {
                cols[j] += (v >> j & 1) as usize;
            }
            exhaustive(n, d, k, v + 1, basis, cols, visit)?;
            for j in 0..n {
                cols[j] -= (v >> j & 1) as usize;
            }
        }
        basis.pop();
    }
    Ok(())
}

/// A uniformly drawn `d`-local column pattern with rank `k`.
pub fn random_local_basis<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize, k: usize) -> Result<Vec<u64>> {
    let columns: Vec<u64> = (0..=d.min(k)).flat_map(|w| Combinations::of_range(k, w)).collect();
    for _ in 0..MAX_RETRIES {
        let mut basis = vec![0u64; k];
        for j in 0..n {
            let col = columns[rng.gen_range(0..columns.len())];
            for (i, v) in basis.iter_mut().enumerate() {
                *v |= (col >> i & 1) << j;
            }
        }
        if rank_u64(&basis) == k {
            return Ok(basis);
        }
    }
    Err(Error::invalid(format!(
        "no rank-{k} {d}-local basis found in {MAX_RETRIES} draws"
    )))
}
