//! Local subspaces on which a polynomial is constant.

mod grow;
mod oracle;

use crate::combinatorics::{binomial_le_u128, Combinations};
use crate::config::Caps;
use crate::cw::PolySystem;
use crate::error::{Error, Result};
use crate::f2poly::{full_mask, MultilinearPoly};
use crate::sources::column_weights;

pub use grow::{grow_local_subspace, GrowthOutcome, TraceStep};
pub use oracle::{exhaustive_best_dimension, BestDimension, SearchLimits};

/// `{f_S : S ⊆ B, |S| <= r}` in (size, lex) order of `S`, before cancellation.
pub fn derivative_list(f: &MultilinearPoly, basis: &[u64], r: usize, caps: &Caps) -> Result<Vec<MultilinearPoly>> {
    let count = binomial_le_u128(basis.len() as u64, r as u64);
    caps.check_family(count)?;
    let mut out = Vec::with_capacity(count as usize);
    for size in 0..=r.min(basis.len()) {
        for s in Combinations::of_range(basis.len(), size) {
            let dirs: Vec<u64> = crate::combinatorics::bits_of(s).map(|i| basis[i]).collect();
            out.push(f.directional_derivative_capped(&dirs, caps)?);
        }
    }
    Ok(out)
}

/// The system of all directional derivatives of order `<= r` across `basis`.
///
/// Fails with [`Error::UnsatisfiableSystem`] when some derivative is the constant 1.
pub fn derivative_closure(f: &MultilinearPoly, basis: &[u64], r: usize, caps: &Caps) -> Result<PolySystem> {
    PolySystem::new(f.n_vars(), derivative_list(f, basis, r, caps)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CriterionCheck {
    /// `f` vanishes on every point `x + Σ_{v ∈ S} v`, `S ⊆ B`.
    pub lhs: bool,
    /// Every `f_S` with `|S| <= r` vanishes at `x`.
    pub rhs: bool,
    pub agree: bool,
}

/// Evaluate both sides of the derivative criterion for `f` of degree `<= r`.
pub fn derivative_criterion_check(
    f: &MultilinearPoly,
    x: u64,
    basis: &[u64],
    r: usize,
    caps: &Caps,
) -> Result<CriterionCheck> {
    if let Some(deg) = f.degree() {
        if deg > r {
            return Err(Error::precondition(format!("degree {deg} exceeds r = {r}")));
        }
    }
    caps.check_dist(basis.len())?;
    let lhs = span_points(x, basis).all(|p| !f.eval(p));
    let rhs = derivative_list(f, basis, r, caps)?.iter().all(|g| !g.eval(x));
    Ok(CriterionCheck {
        lhs,
        rhs,
        agree: lhs == rhs,
    })
}

/// Whether `f` takes a single value on `shift + span(basis)`.
pub fn verify_monochromatic(f: &MultilinearPoly, shift: u64, basis: &[u64], caps: &Caps) -> Result<bool> {
    caps.check_dist(basis.len())?;
    let value = f.eval(shift);
    Ok(span_points(shift, basis).all(|p| f.eval(p) == value))
}

/// Whether every coordinate is 1 in at most `d` of the vectors.
pub fn verify_d_local(basis: &[u64], d: usize) -> bool {
    let n = basis.iter().map(|v| 64 - v.leading_zeros() as usize).max().unwrap_or(0);
    column_weights(n, basis).into_iter().all(|w| w <= d)
}

/// `shift + Σ_{i ∈ T} basis[i]` for every subset `T`, in Gray-code order.
pub(crate) fn span_points(shift: u64, basis: &[u64]) -> impl Iterator<Item = u64> + '_ {
    let total = 1u64 << basis.len();
    let mut cur = shift;
    (0..total).map(move |i| {
        if i > 0 {
            cur ^= basis[i.trailing_zeros() as usize];
        }
        cur
    })
}

pub(crate) fn check_vectors(n: usize, vectors: &[u64]) -> Result<()> {
    let full = full_mask(n);
    match vectors.iter().find(|&&v| v & !full != 0) {
        Some(v) => Err(Error::invalid(format!("vector {v:#b} has coordinates beyond {n}"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests;
