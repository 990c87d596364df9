use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact;
use crate::f2poly::MultilinearPoly;

/// Exact probability mass function on `{0,1}^n`; only positive masses are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactDistribution {
    n: usize,
    mass: BTreeMap<u64, BigRational>,
}

impl ExactDistribution {
    /// Checks that masses are positive and sum to exactly 1.
    pub fn new(n: usize, mass: BTreeMap<u64, BigRational>) -> Result<Self> {
        let d = ExactDistribution { n, mass };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(n: usize, mass: BTreeMap<u64, BigRational>) -> Self {
        let d = ExactDistribution { n, mass };
        debug_assert!(d.validate().is_ok());
        d
    }

    /// Each point with mass `count / total`.
    pub(crate) fn from_counts(n: usize, counts: impl IntoIterator<Item = (u64, u64)>, total: u64) -> Self {
        let total = BigInt::from(total);
        let mass = counts
            .into_iter()
            .map(|(x, c)| (x, BigRational::new(BigInt::from(c), total.clone())))
            .collect();
        Self::from_parts_unchecked(n, mass)
    }

    pub fn point_mass(n: usize, x: u64) -> Self {
        Self::from_parts_unchecked(n, BTreeMap::from([(x, BigRational::one())]))
    }

    pub fn uniform_over(n: usize, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for p in points {
            *counts.entry(p).or_default() += 1;
        }
        if counts.is_empty() {
            return Err(Error::invalid("uniform distribution over an empty set"));
        }
        let total = counts.len() as u64;
        Ok(Self::from_counts(n, counts.into_keys().map(|x| (x, 1)), total))
    }

    fn validate(&self) -> Result<()> {
        if self.mass.is_empty() {
            return Err(Error::invalid("distribution has empty support"));
        }
        if self.mass.values().any(|m| !m.is_positive()) {
            return Err(Error::invalid("distribution masses must be positive"));
        }
        if self.mass.keys().any(|&x| x & !crate::f2poly::full_mask(self.n) != 0) {
            return Err(Error::invalid("distribution point outside {0,1}^n"));
        }
        let total: BigRational = self.mass.values().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "masses sum to {}, not 1",
                exact::fmt_rational(&total)
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self) -> &BTreeMap<u64, BigRational> {
        &self.mass
    }

    pub fn prob(&self, x: u64) -> BigRational {
        self.mass.get(&x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.mass.keys().copied()
    }

    pub fn support_size(&self) -> usize {
        self.mass.len()
    }

    pub fn max_mass(&self) -> &BigRational {
        self.mass.values().max().expect("nonempty by construction")
    }

    /// `-log2 max_x Pr[X = x]`.
    pub fn min_entropy(&self) -> f64 {
        let v = -exact::log2_abs(self.max_mass());
        if v == 0.0 {
            0.0
        } else {
            v
        }
    }

    /// Probability that `pred` holds.
    pub fn prob_of(&self, mut pred: impl FnMut(u64) -> bool) -> BigRational {
        self.mass
            .iter()
            .filter(|(x, _)| pred(**x))
            .map(|(_, m)| m)
            .sum()
    }

    /// `|Pr[pred] - Pr[!pred]|`.
    pub fn bias_of(&self, pred: impl FnMut(u64) -> bool) -> BigRational {
        let one = self.prob_of(pred);
        (BigRational::one() - &one - &one).abs()
    }

    /// Bias of a polynomial over `n` variables under this distribution.
    pub fn bias_under(&self, f: &MultilinearPoly) -> Result<BigRational> {
        if f.n_vars() != self.n {
            return Err(Error::MismatchedVars {
                left: f.n_vars(),
                right: self.n,
            });
        }
        Ok(self.bias_of(|x| f.eval(x)))
    }

    pub fn is_subset_support_of(&self, other: &ExactDistribution) -> bool {
        self.mass.keys().all(|x| other.mass.contains_key(x))
    }
}

/// Half the L1 distance between two mass functions.
pub fn statistical_distance(a: &ExactDistribution, b: &ExactDistribution) -> Result<BigRational> {
    if a.n != b.n {
        return Err(Error::MismatchedVars {
            left: a.n,
            right: b.n,
        });
    }
    let mut total = BigRational::zero();
    for (x, m) in &a.mass {
        total += (m - b.prob(*x)).abs();
    }
    for (x, m) in &b.mass {
        if !a.mass.contains_key(x) {
            total += m;
        }
    }
    Ok(total / BigInt::from(2))
}

/// Weighted sum of distributions; the weights must be positive and sum to 1.
pub fn mix_distributions(parts: &[(BigRational, ExactDistribution)]) -> Result<ExactDistribution> {
    let first = parts.first().ok_or_else(|| Error::invalid("empty convex combination"))?;
    let n = first.1.n;
    let mut weight_sum = BigRational::zero();
    let mut mass: BTreeMap<u64, BigRational> = BTreeMap::new();
    for (w, d) in parts {
        if !w.is_positive() {
            return Err(Error::invalid("convex combination weights must be positive"));
        }
        if d.n != n {
            return Err(Error::MismatchedVars { left: n, right: d.n });
        }
        weight_sum += w;
        for (x, m) in &d.mass {
            *mass.entry(*x).or_insert_with(BigRational::zero) += w * m;
        }
    }
    if !weight_sum.is_one() {
        return Err(Error::invalid(format!(
            "convex combination weights sum to {}",
            exact::fmt_rational(&weight_sum)
        )));
    }
    mass.retain(|_, m| !m.is_zero());
    Ok(ExactDistribution::from_parts_unchecked(n, mass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn distances() {
        let u = ExactDistribution::uniform_over(1, [0, 1]).unwrap();
        let z = ExactDistribution::point_mass(1, 0);
        let o = ExactDistribution::point_mass(1, 1);
        assert_eq!(statistical_distance(&u, &u).unwrap(), ratio(0, 1));
        assert_eq!(statistical_distance(&z, &o).unwrap(), ratio(1, 1));
        // ½(|½−1| + |½−0|)
        assert_eq!(statistical_distance(&u, &z).unwrap(), ratio(1, 2));
        assert!(statistical_distance(&u, &ExactDistribution::point_mass(2, 0)).is_err());
    }

    #[test]
    fn entropy() {
        let u = ExactDistribution::uniform_over(3, 0..8).unwrap();
        assert_eq!(u.min_entropy(), 3.0);
        assert_eq!(ExactDistribution::point_mass(3, 5).min_entropy(), 0.0);
    }

    #[test]
    fn mixing() {
        let z = ExactDistribution::point_mass(1, 0);
        let o = ExactDistribution::point_mass(1, 1);
        let m = mix_distributions(&[(ratio(1, 2), z.clone()), (ratio(1, 2), o)]).unwrap();
        assert_eq!(m, ExactDistribution::uniform_over(1, [0, 1]).unwrap());
        assert_eq!(mix_distributions(&[(ratio(1, 1), z.clone())]).unwrap(), z);
        assert!(mix_distributions(&[(ratio(1, 3), z)]).is_err());
    }

    #[test]
    fn rejects_bad_masses() {
        let m = BTreeMap::from([(0, ratio(1, 2))]);
        assert!(ExactDistribution::new(1, m).is_err());
        assert!(ExactDistribution::new(1, BTreeMap::new()).is_err());
    }
}
