//! Branch-and-bound search for the largest d-local monochromatic subspace, for
//! tiny instances.

use serde::Serialize;

use crate::combinatorics::masks_up_to_weight;
use crate::error::{Error, Result};
use crate::f2poly::MultilinearPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub max_n: usize,
    pub max_dim: usize,
    /// Also try every shift, not only subspaces through 0.
    pub affine: bool,
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_n: 8,
            max_dim: 4,
            affine: true,
            max_nodes: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BestDimension {
    /// Largest dimension found, at most `max_dim`.
    pub dimension: usize,
    pub shift: u64,
    pub basis: Vec<u64>,
    /// The search stopped because `max_dim` was reached.
    pub at_limit: bool,
    pub nodes: u64,
}

/// Largest `k <= max_dim` such that `f` is constant on some `shift + span(B)` with
/// `B` independent, `|B| = k` and every coordinate 1 in at most `d` vectors of `B`.
pub fn exhaustive_best_dimension(f: &MultilinearPoly, d: usize, limits: &SearchLimits) -> Result<BestDimension> {
    let n = f.n_vars();
    if n > limits.max_n {
        return Err(Error::cap("oracle variables", n as u128, limits.max_n as u128));
    }
    let target = limits.max_dim.min(n);
    let mut search = Search {
        f,
        d,
        n,
        target,
        max_nodes: limits.max_nodes,
        nodes: 0,
        best: BestDimension {
            dimension: 0,
            shift: 0,
            basis: Vec::new(),
            at_limit: target == 0,
            nodes: 0,
        },
    };
    let shifts: Vec<u64> = if limits.affine { (0..1u64 << n).collect() } else { vec![0] };
    for x in shifts {
        if search.best.dimension == target {
            break;
        }
        let value = f.eval(x);
        let candidates: Vec<u64> = masks_up_to_weight(n, n)
            .skip(1)
            .filter(|&v| f.eval(x ^ v) == value)
            .collect();
        let mut basis = Vec::new();
        let mut span = vec![0u64];
        search.dfs(x, value, &candidates, 0, &mut basis, &mut span, &mut vec![0; n])?;
    }
    search.best.at_limit = search.best.dimension == target;
    search.best.nodes = search.nodes;
    Ok(search.best)
}

struct Search<'a> {
    f: &'a MultilinearPoly,
    d: usize,
    n: usize,
    target: usize,
    max_nodes: u64,
    nodes: u64,
    best: BestDimension,
}

impl Search<'_> {
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        x: u64,
        value: bool,
        candidates: &[u64],
        start: usize,
        basis: &mut Vec<u64>,
        span: &mut Vec<u64>,
        cols: &mut Vec<usize>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::cap("oracle search nodes", self.nodes as u128, self.max_nodes as u128));
        }
        if basis.len() > self.best.dimension {
            self.best.dimension = basis.len();
            self.best.shift = x;
            self.best.basis = basis.clone();
        }
        if basis.len() == self.target || self.best.dimension == self.target {
            return Ok(());
        }
        for (i, &c) in candidates.iter().enumerate().skip(start) {
            if basis.len() + (candidates.len() - i) <= self.best.dimension {
                break;
            }
            if (0..self.n).any(|j| c >> j & 1 == 1 && cols[j] >= self.d) {
                continue;
            }
            if span.contains(&c) {
                continue;
            }
            if span.iter().any(|&s| self.f.eval(x ^ s ^ c) != value) {
                continue;
            }
            let old = span.len();
            for k in 0..old {
                let s = span[k] ^ c;
                span.push(s);
            }
            basis.push(c);
            for j in 0..self.n {
                cols[j] += (c >> j & 1) as usize;
            }
            self.dfs(x, value, candidates, i + 1, basis, span, cols)?;
            for j in 0..self.n {
                cols[j] -= (c >> j & 1) as usize;
            }
            basis.pop();
            span.truncate(old);
            if self.best.dimension == self.target {
                return Ok(());
            }
        }
        Ok(())
    }
}
