//! Counting and weight bounds, each checked against exact enumeration.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{common_solutions, min_weight_nontrivial_solution, PolySystem, Solution};
use crate::combinatorics::{binomial_le, binomial_le_u128};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{f2_matrix_rank, BitRow, MultilinearPoly, TruthTable};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountCheck {
    pub count: u64,
    pub total_degree: usize,
    /// `2^(n - total degree)`; at most 1 once the degree reaches `n`.
    pub bound: f64,
    /// Whether the total degree is below `n`, which forces a nonzero solution.
    pub degree_below_n: bool,
    pub holds: bool,
}

/// Compare the number of common solutions with `2^(n - total degree)`.
pub fn cw_count_check(sys: &PolySystem, caps: &Caps) -> Result<CountCheck> {
    let n = sys.n();
    let total = sys.total_degree();
    if !sys.is_solution(0) {
        return Err(Error::precondition("0 is not a common solution"));
    }
    let count = common_solutions(sys, caps)?.count();
    let bound = (n as f64 - total as f64).exp2();
    Ok(CountCheck {
        count,
        total_degree: total,
        bound,
        degree_below_n: total < n,
        holds: count as f64 >= bound,
    })
}

/// `8Δ + 8D / log2(s/D) + 8`, the `D` term read as 0 when `D = 0`.
pub fn low_weight_bound(d: usize, delta: usize, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::precondition("support size must be positive"));
    }
    let linear = if d == 0 {
        0.0
    } else {
        if s <= d {
            return Err(Error::precondition(format!("need s > D, got s = {s}, D = {d}")));
        }
        8.0 * d as f64 / (s as f64 / d as f64).log2()
    };
    Ok(8.0 * delta as f64 + linear + 8.0)
}

/// `binom(n, <= floor(w/2)) <= 2^(D+Δ+1) * binom(n, <= floor(Δ/2))`, which must hold
/// whenever every nonzero solution is heavier than `w`.
pub fn weight_inequality_holds(n: usize, w: usize, d: usize, delta: usize) -> bool {
    let lhs = binomial_le(n as u64, (w / 2) as u64);
    let rhs = (BigUint::one() << (d + delta + 1)) * binomial_le(n as u64, (delta / 2) as u64);
    lhs <= rhs
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowWeightCheck {
    pub linear_degree: usize,
    pub nonlinear_degree: usize,
    pub min_weight: usize,
    pub witness: u64,
    pub bound: f64,
    pub holds: bool,
    /// The counting inequality at `w = min_weight - 1`.
    pub inequality_holds: bool,
}

/// Exhaustive minimum nonzero solution weight against [`low_weight_bound`] with `s = n`.
pub fn low_weight_cw_check(sys: &PolySystem, caps: &Caps) -> Result<LowWeightCheck> {
    let n = sys.n();
    let (d, delta) = (sys.linear_degree(), sys.nonlinear_degree());
    if !sys.is_solution(0) {
        return Err(Error::precondition("0 is not a common solution"));
    }
    if d + delta >= n {
        return Err(Error::precondition(format!("D + Δ = {} is not below n = {n}", d + delta)));
    }
    let sol = common_solutions(sys, caps)?
        .min_weight_nontrivial()
        .ok_or_else(|| Error::invalid("no nonzero common solution despite D + Δ < n"))?;
    let bound = low_weight_bound(d, delta, n)?;
    Ok(LowWeightCheck {
        linear_degree: d,
        nonlinear_degree: delta,
        min_weight: sol.weight,
        witness: sol.vector,
        bound,
        holds: sol.weight as f64 <= bound,
        inequality_holds: weight_inequality_holds(n, sol.weight - 1, d, delta),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionCheck {
    pub support_size: usize,
    pub solution: Option<Solution>,
    /// [`low_weight_bound`] at `s = |S|`; absent when `D + Δ >= |S|`.
    pub bound: Option<f64>,
    /// `D + Δ + 1`, from plain counting.
    pub counting_bound: usize,
    /// Whether the found weight is within `bound`; vacuously true without one.
    pub holds: bool,
}

/// Lightest nonzero solution supported on `support`, compared with the bound at `s = |S|`.
pub fn projection_cw_check(sys: &PolySystem, support: u64, caps: &Caps) -> Result<ProjectionCheck> {
    if !sys.is_solution(0) {
        return Err(Error::precondition("0 is not a common solution"));
    }
    let s = support.count_ones() as usize;
    let (d, delta) = (sys.linear_degree(), sys.nonlinear_degree());
    let solution = min_weight_nontrivial_solution(sys, Some(support), None, caps)?;
    let bound = if d + delta < s { Some(low_weight_bound(d, delta, s)?) } else { None };
    let holds = match (bound, solution) {
        (Some(b), Some(sol)) => sol.weight as f64 <= b,
        (Some(_), None) => false,
        (None, _) => true,
    };
    Ok(ProjectionCheck {
        support_size: s,
        solution,
        bound,
        counting_bound: d + delta + 1,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumsetWitness {
    pub sum: u64,
    pub left: u64,
    pub right: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumsetOutcome {
    /// `2 * binom(n, <= floor(Δ/2))`.
    pub threshold: u128,
    pub above_threshold: bool,
    /// First pair `a < a'` (by index in the deduplicated ascending set) whose sum solves.
    pub witness: Option<SumsetWitness>,
}

/// Search `A + A` for a nonzero common solution, over all unordered pairs of `A`.
pub fn sumset_solution_search(sys: &PolySystem, a: &[u64]) -> Result<SumsetOutcome> {
    if !sys.is_solution(0) {
        return Err(Error::precondition("0 is not a common solution"));
    }
    let mut pts = a.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if let Some(&bad) = pts.iter().find(|&&x| !sys.is_solution(x)) {
        return Err(Error::invalid(format!("{bad:#b} is not a common solution")));
    }
    let threshold = 2 * binomial_le_u128(sys.n() as u64, (sys.nonlinear_degree() / 2) as u64);
    let mut witness = None;
    'outer: for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            if sys.is_solution(x ^ y) {
                witness = Some(SumsetWitness {
                    sum: x ^ y,
                    left: x,
                    right: y,
                });
                break 'outer;
            }
        }
    }
    Ok(SumsetOutcome {
        threshold,
        above_threshold: pts.len() as u128 > threshold,
        witness,
    })
}

/// Largest `n` for which the `2^n x 2^n` matrix is materialized.
pub const CLP_MAX_VARS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClpCheck {
    pub rank: usize,
    /// `2 * binom(n, <= floor(r/2))`.
    pub bound: u128,
    pub holds: bool,
}

/// Rank over F2 of `M[x][y] = f(x + y)` against `2 * binom(n, <= floor(r/2))`.
pub fn clp_rank_check(f: &MultilinearPoly, r: usize, caps: &Caps) -> Result<ClpCheck> {
    let n = f.n_vars();
    if n > CLP_MAX_VARS {
        return Err(Error::cap("matrix variables", n as u128, CLP_MAX_VARS as u128));
    }
    if let Some(deg) = f.degree() {
        if deg > r {
            return Err(Error::precondition(format!("degree {deg} exceeds r = {r}")));
        }
    }
    let t = f.truth_table_capped(caps)?;
    let rows: Vec<BitRow> = (0..t.len() as u64)
        .map(|x| {
            let row = TruthTable::from_fn(n, |y| t.get(x ^ y));
            BitRow::from_words(t.len(), row.words().to_vec())
        })
        .collect();
    let rank = f2_matrix_rank(&rows)?;
    let bound = 2 * binomial_le_u128(n as u64, (r / 2) as u64);
    Ok(ClpCheck {
        rank,
        bound,
        holds: rank as u128 <= bound,
    })
}
