//! Perturbations by high-degree terms cannot destroy a hit at degree r.

use rand::Rng;
use serde::Serialize;

use crate::combinatorics::masks_up_to_weight;
use crate::error::{Error, Result};
use crate::f2poly::{random_poly_with, MultilinearPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HittingVerdict {
    /// `f(a+b)` has a monomial of size `r`.
    pub hits: bool,
    /// `f(a+b)` and `f(a)` share every monomial of size `<= r`.
    pub low_part_agrees: bool,
}

impl HittingVerdict {
    pub fn holds(&self) -> bool {
        self.hits && self.low_part_agrees
    }
}

/// Check the conclusion for `f(a + b)`, after validating that every `b_i` only
/// has monomials of size `> r` and that `f(a)` hits degree `r`.
pub fn hitting_lemma_check(
    f: &MultilinearPoly,
    a: &[MultilinearPoly],
    b: &[MultilinearPoly],
    r: usize,
) -> Result<HittingVerdict> {
    if a.len() != f.n_vars() || b.len() != f.n_vars() {
        return Err(Error::precondition(format!(
            "f has {} variables but a has {} and b has {} entries",
            f.n_vars(),
            a.len(),
            b.len()
        )));
    }
    if let Some(i) = b.iter().position(|p| p.hits_degree_at_most(r)) {
        return Err(Error::precondition(format!(
            "b_{} has a monomial of size at most {r}",
            i + 1
        )));
    }
    let fa = f.substitute(a)?;
    if !fa.hits_degree(r) {
        return Err(Error::precondition(format!("f(a) does not hit degree {r}")));
    }
    let sums: Vec<MultilinearPoly> = a.iter().zip(b).map(|(x, y)| x.add(y)).collect::<Result<_>>()?;
    let fab = f.substitute(&sums)?;
    Ok(HittingVerdict {
        hits: fab.hits_degree(r),
        low_part_agrees: fab.split_at_degree(r).0 == fa.split_at_degree(r).0,
    })
}

/// One random instance of the hitting lemma, `None` when the sampled `f(a)` misses
/// degree `r`. Sizes: `n <= max_n` inputs of `f`, `k <= max_k` variables, `1 <= r <= max_r`.
#[allow(clippy::type_complexity)]
pub fn random_hitting_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_n: usize,
    max_k: usize,
    max_r: usize,
) -> Option<(MultilinearPoly, Vec<MultilinearPoly>, Vec<MultilinearPoly>, usize)> {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k);
    let r = rng.gen_range(1..=max_r.min(k));
    let deg = rng.gen_range(1..=3);
    let f = random_poly_with(rng, n, deg);
    let a: Vec<MultilinearPoly> = (0..n)
        .map(|_| {
            let deg = rng.gen_range(0..=2);
            random_poly_with(rng, k, deg)
        })
        .collect();
    let high: Vec<u64> = masks_up_to_weight(k, k).filter(|m| m.count_ones() as usize > r).collect();
    let b = (0..n)
        .map(|_| {
            let keep = if rng.gen_bool(0.25) { 0.0 } else { rng.gen_range(0.1..0.6) };
            let ms: Vec<u64> = high.iter().copied().filter(|_| rng.gen_bool(keep)).collect();
            MultilinearPoly::from_monomials(k, ms).expect("in range")
        })
        .collect();
    let fa = f.substitute(&a).ok()?;
    fa.hits_degree(r).then_some((f, a, b, r))
}
