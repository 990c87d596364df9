//! Weight-ordered search for light nonzero common solutions.

use rayon::prelude::*;
use serde::Serialize;

use super::PolySystem;
use crate::combinatorics::{binomial_le_u128, bits_of, Combinations};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::full_mask;

/// A nonzero common solution and its Hamming weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub vector: u64,
    pub weight: usize,
}

const CHUNK: usize = 1 << 14;
const PARALLEL_FROM: usize = 512;

/// Lightest nonzero common solution supported inside `allowed` (all coordinates
/// when `None`), trying weights `1, 2, ..., max_weight` in turn and, within a
/// weight, supports in lexicographic order.
///
/// `Ok(None)` means no solution of weight `<= max_weight` exists in the allowed
/// support (none at all when `max_weight` is `None`). Running past
/// `caps.weight_combinations` candidates first is a cap error.
pub fn min_weight_nontrivial_solution(
    sys: &PolySystem,
    allowed: Option<u64>,
    max_weight: Option<usize>,
    caps: &Caps,
) -> Result<Option<Solution>> {
    let full = full_mask(sys.n());
    let allowed = allowed.unwrap_or(full);
    if allowed & !full != 0 {
        return Err(Error::invalid(format!(
            "allowed support uses coordinates beyond {}",
            sys.n()
        )));
    }
    let positions: Vec<usize> = bits_of(allowed).collect();
    let top = max_weight.unwrap_or(positions.len()).min(positions.len());
    let budget = caps.weight_combinations;
    let mut tried: u64 = 0;
    for w in 1..=top {
        let mut combos = Combinations::new(positions.clone(), w);
        loop {
            let mut chunk: Vec<u64> = combos.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let left = budget - tried;
            let over = chunk.len() as u64 > left;
            if over {
                chunk.truncate(left as usize);
            }
            tried += chunk.len() as u64;
            let hit = if chunk.len() >= PARALLEL_FROM {
                chunk.par_iter().find_first(|&&x| sys.is_solution(x)).copied()
            } else {
                chunk.iter().find(|&&x| sys.is_solution(x)).copied()
            };
            if let Some(v) = hit {
                return Ok(Some(Solution { vector: v, weight: w }));
            }
            if over {
                let space = binomial_le_u128(positions.len() as u64, top as u64) - 1;
                return Err(Error::cap("weight-ordered candidates", space, budget));
            }
        }
    }
    Ok(None)
}
