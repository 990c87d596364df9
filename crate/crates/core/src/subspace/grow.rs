//! Greedy growth of a d-local subspace through light common solutions of the
//! derivative system.

use serde::Serialize;

use super::{check_vectors, verify_d_local, verify_monochromatic};
use crate::combinatorics::binomial_le_u128;
use crate::config::Caps;
use crate::cw::{low_weight_bound, min_weight_nontrivial_solution, PolySystem};
use crate::error::{Error, Result};
use crate::f2poly::{full_mask, rank_u64, MultilinearPoly};

/// One loop iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    /// 1-based iteration number `t`.
    pub iteration: usize,
    pub vector: u64,
    pub weight: usize,
    /// 0-based lowest set coordinate of `vector`.
    pub alpha: usize,
    /// Size of the allowed support the vector was drawn from.
    pub allowed: usize,
    /// Weight bound at the allowed support size, when it applies.
    pub weight_bound: Option<f64>,
    pub unique: usize,
    pub saturated: usize,
    pub column_weights: Vec<usize>,
    /// Total and nonlinear degree of the system after this iteration.
    pub system_degree: usize,
    pub nonlinear_degree: usize,
    pub system_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthOutcome {
    pub constant_value: bool,
    pub basis: Vec<u64>,
    /// The weight search hit its cap, so the loop stopped early.
    pub truncated: bool,
    pub trace: Vec<TraceStep>,
}

impl GrowthOutcome {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Grow a `d`-local linear subspace on which `f` (of degree `<= r`) is constant.
///
/// When `f(0) = 1` the loop runs on `1 + f` and reports constant value 1. Each
/// step takes the lightest nonzero common solution of all derivatives of order
/// `<= r` across the current basis, supported off the used pivots and the
/// coordinates already carrying `d` ones. The output is verified before return.
pub fn grow_local_subspace(f: &MultilinearPoly, d: usize, r: usize, caps: &Caps) -> Result<GrowthOutcome> {
    if d == 0 {
        return Err(Error::precondition("locality d must be at least 1"));
    }
    if let Some(deg) = f.degree() {
        if deg > r {
            return Err(Error::precondition(format!("degree {deg} exceeds r = {r}")));
        }
    }
    let n = f.n_vars();
    let constant_value = f.eval(0);
    let g = if constant_value { f.add(&MultilinearPoly::one(n))? } else { f.clone() };

    let mut basis: Vec<u64> = Vec::new();
    // (subset of basis indices, f_S) for |S| <= r
    let mut derivs: Vec<(u64, MultilinearPoly)> = vec![(0, g.clone())];
    let mut unique = 0u64;
    let mut saturated = 0u64;
    let mut trace = Vec::new();
    let mut truncated = false;
    loop {
        let sys = system_of(n, &derivs)?;
        let allowed = full_mask(n) & !(unique | saturated);
        let found = match min_weight_nontrivial_solution(&sys, Some(allowed), None, caps) {
            Ok(s) => s,
            Err(e) if e.is_cap() => {
                truncated = true;
                None
            }
            Err(e) => return Err(e),
        };
        let Some(sol) = found else { break };
        let s = allowed.count_ones() as usize;
        let (lin, delta) = (sys.linear_degree(), sys.nonlinear_degree());
        let weight_bound = if lin + delta < s { Some(low_weight_bound(lin, delta, s)?) } else { None };

        let b = sol.vector;
        let idx = basis.len();
        basis.push(b);
        let alpha = b.trailing_zeros() as usize;
        unique |= 1 << alpha;
        let weights = crate::sources::column_weights(n, &basis);
        saturated = weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w >= d)
            .fold(0, |m, (i, _)| m | 1 << i);

        let fresh: Vec<(u64, MultilinearPoly)> = derivs
            .iter()
            .filter(|(s, _)| (s.count_ones() as usize) < r)
            .map(|(s, p)| Ok((s | 1 << idx, p.derivative(b)?)))
            .collect::<Result<_>>()?;
        derivs.extend(fresh);

        let after = system_of(n, &derivs)?;
        let t = basis.len();
        let step = TraceStep {
            iteration: t,
            vector: b,
            weight: sol.weight,
            alpha,
            allowed: s,
            weight_bound,
            unique: unique.count_ones() as usize,
            saturated: saturated.count_ones() as usize,
            column_weights: weights,
            system_degree: after.total_degree(),
            nonlinear_degree: after.nonlinear_degree(),
            system_size: after.len(),
        };
        check_step(&step, r, &trace)?;
        trace.push(step);
        if t >= caps.dist_seed_bits {
            // the span can no longer be verified exhaustively
            truncated = true;
            break;
        }
    }

    check_vectors(n, &basis)?;
    if rank_u64(&basis) != basis.len() {
        return Err(Error::invalid("grown basis is linearly dependent"));
    }
    if !verify_d_local(&basis, d) {
        return Err(Error::invalid(format!("grown basis is not {d}-local")));
    }
    if !verify_monochromatic(f, 0, &basis, caps)? {
        return Err(Error::invalid("polynomial is not constant on the grown subspace"));
    }
    Ok(GrowthOutcome {
        constant_value,
        basis,
        truncated,
        trace,
    })
}

fn system_of(n: usize, derivs: &[(u64, MultilinearPoly)]) -> Result<PolySystem> {
    let mut polys: Vec<MultilinearPoly> = derivs.iter().map(|(_, p)| p.clone()).collect();
    polys.sort();
    polys.dedup();
    PolySystem::new(n, polys)
}

/// Bookkeeping facts every iteration must satisfy.
fn check_step(step: &TraceStep, r: usize, earlier: &[TraceStep]) -> Result<()> {
    let t = step.iteration as u64;
    let r64 = r as u64;
    let deg_cap = r as u128 * if r >= 1 { binomial_le_u128(t, r64 - 1) } else { 0 };
    let nonlin_cap = r as u128 * if r >= 2 { binomial_le_u128(t, r64 - 2) } else { 0 };
    if step.system_degree as u128 > deg_cap {
        return Err(Error::invalid(format!(
            "iteration {t}: system degree {} exceeds {deg_cap}",
            step.system_degree
        )));
    }
    if step.nonlinear_degree as u128 > nonlin_cap {
        return Err(Error::invalid(format!(
            "iteration {t}: nonlinear degree {} exceeds {nonlin_cap}",
            step.nonlinear_degree
        )));
    }
    if step.unique != step.iteration {
        return Err(Error::invalid(format!("iteration {t}: {} pivots", step.unique)));
    }
    if let Some(e) = earlier.iter().find(|e| step.vector >> e.alpha & 1 == 1) {
        return Err(Error::invalid(format!(
            "iteration {t}: vector touches the pivot of iteration {}",
            e.iteration
        )));
    }
    if let Some(bound) = step.weight_bound {
        if step.weight as f64 > bound {
            return Err(Error::invalid(format!(
                "iteration {t}: weight {} exceeds {bound}",
                step.weight
            )));
        }
    }
    Ok(())
}
