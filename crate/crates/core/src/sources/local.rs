use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use super::ExactDistribution;
use crate::combinatorics::extract;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{MultilinearPoly, TruthTable};

/// One output bit of a local source: a function of the seed bits in `support`.
///
/// Table entry `j` is the output when seed `support[i]` equals bit `i` of `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LocalOutput {
    pub support: Vec<usize>,
    pub table: TruthTable,
}

impl LocalOutput {
    pub fn new(support: Vec<usize>, table: TruthTable) -> Result<Self> {
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("support {support:?} is not strictly increasing")));
        }
        if table.n_vars() != support.len() {
            return Err(Error::invalid(format!(
                "table has {} inputs but support has {}",
                table.n_vars(),
                support.len()
            )));
        }
        Ok(LocalOutput { support, table })
    }

    pub fn constant(value: bool) -> Self {
        let table = if value { TruthTable::ones(0) } else { TruthTable::zeros(0) };
        LocalOutput {
            support: Vec::new(),
            table,
        }
    }

    /// The seed bit `i` itself.
    pub fn projection(i: usize) -> Self {
        LocalOutput {
            support: vec![i],
            table: TruthTable::from_fn(1, |x| x == 1),
        }
    }

    pub fn support_mask(&self) -> u64 {
        self.support.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn eval(&self, seed: u64) -> bool {
        self.table.get(extract(seed, self.support_mask()))
    }

    pub fn is_constant(&self) -> bool {
        self.table.is_constant()
    }

    /// The same function restricted to the seed bits it actually depends on.
    pub fn effective(&self) -> LocalOutput {
        let s = self.support.len();
        let relevant: Vec<usize> = (0..s)
            .filter(|&j| (0..self.table.len() as u64).any(|x| self.table.get(x) != self.table.get(x ^ 1 << j)))
            .collect();
        if relevant.len() == s {
            return self.clone();
        }
        let rel_mask = relevant.iter().fold(0u64, |m, &j| m | 1 << j);
        let table = TruthTable::from_fn(relevant.len(), |y| self.table.get(crate::combinatorics::deposit(y, rel_mask)));
        LocalOutput {
            support: relevant.iter().map(|&j| self.support[j]).collect(),
            table,
        }
    }

    /// The output as a polynomial over `m` seed variables.
    pub fn to_poly(&self, m: usize) -> Result<MultilinearPoly> {
        let local = MultilinearPoly::from_truth_table(&self.table);
        let mask = self.support_mask();
        MultilinearPoly::from_monomials(
            m,
            local.monomials().iter().map(|&mono| crate::combinatorics::deposit(mono, mask)),
        )
    }
}

/// A map from `m` uniform seed bits to `n` output bits, each output reading few seed bits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LocalSource {
    m: usize,
    outputs: Vec<LocalOutput>,
}

impl LocalSource {
    pub fn new(m: usize, outputs: Vec<LocalOutput>) -> Result<Self> {
        if m > 64 || outputs.len() > 64 {
            return Err(Error::invalid("seed and output lengths are limited to 64"));
        }
        for (i, o) in outputs.iter().enumerate() {
            if let Some(&bad) = o.support.iter().find(|&&s| s >= m) {
                return Err(Error::invalid(format!(
                    "output {i} reads seed bit {bad} but m = {m}"
                )));
            }
            if o.table.n_vars() != o.support.len() || o.support.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("output {i} is malformed")));
            }
        }
        Ok(LocalSource { m, outputs })
    }

    /// `n` outputs each copying its own seed bit.
    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(LocalOutput::projection).collect()).expect("identity is valid")
    }

    /// Outputs given as polynomials over the `m` seed bits.
    pub fn from_polys(m: usize, polys: &[MultilinearPoly]) -> Result<Self> {
        let mut outputs = Vec::with_capacity(polys.len());
        for f in polys {
            if f.n_vars() != m {
                return Err(Error::MismatchedVars {
                    left: m,
                    right: f.n_vars(),
                });
            }
            let mask = f.support();
            let support: Vec<usize> = crate::combinatorics::bits_of(mask).collect();
            let table = TruthTable::from_fn(support.len(), |y| f.eval(crate::combinatorics::deposit(y, mask)));
            outputs.push(LocalOutput { support, table });
        }
        Self::new(m, outputs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self) -> &[LocalOutput] {
        &self.outputs
    }

    /// Largest support size.
    pub fn locality(&self) -> usize {
        self.outputs.iter().map(|o| o.support.len()).max().unwrap_or(0)
    }

    pub fn eval(&self, seed: u64) -> u64 {
        self.outputs
            .iter()
            .enumerate()
            .fold(0, |acc, (i, o)| acc | (o.eval(seed) as u64) << i)
    }

    pub fn exact_distribution(&self, caps: &Caps) -> Result<ExactDistribution> {
        caps.check_dist(self.m)?;
        let total = 1u64 << self.m;
        let counts = (0..total)
            .into_par_iter()
            .fold(HashMap::new, |mut acc: HashMap<u64, u64>, seed| {
                *acc.entry(self.eval(seed)).or_default() += 1;
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
        Ok(ExactDistribution::from_counts(self.n(), counts, total))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let seed = if self.m == 0 {
            0
        } else {
            rng.gen::<u64>() & crate::f2poly::full_mask(self.m)
        };
        self.eval(seed)
    }

    /// Renumber seed bits so that only those read by some output remain.
    pub fn normalize(&self) -> LocalSource {
        let used = self.outputs.iter().fold(0u64, |m, o| m | o.support_mask());
        let mut rename = vec![usize::MAX; self.m];
        for (new, old) in crate::combinatorics::bits_of(used).enumerate() {
            rename[old] = new;
        }
        let outputs = self
            .outputs
            .iter()
            .map(|o| LocalOutput {
                support: o.support.iter().map(|&s| rename[s]).collect(),
                table: o.table.clone(),
            })
            .collect();
        LocalSource {
            m: used.count_ones() as usize,
            outputs,
        }
    }

    /// Fix the seed bits in `mask` to the corresponding bits of `values`.
    ///
    /// The seed length is unchanged; fixed bits are simply no longer read.
    pub fn fix_seeds(&self, mask: u64, values: u64) -> LocalSource {
        let outputs = self
            .outputs
            .iter()
            .map(|o| {
                let omask = o.support_mask();
                if omask & mask == 0 {
                    return o.clone();
                }
                let keep = omask & !mask;
                let keep_local = extract(keep, omask);
                let fixed_local = extract(values & mask & omask, omask);
                let table = TruthTable::from_fn(keep.count_ones() as usize, |y| {
                    o.table.get(crate::combinatorics::deposit(y, keep_local) | fixed_local)
                });
                LocalOutput {
                    support: crate::combinatorics::bits_of(keep).collect(),
                    table,
                }
                .effective()
            })
            .collect();
        LocalSource { m: self.m, outputs }
    }
}

/// Random source: each output reads `min(d, m)` distinct random seed bits
/// through a uniformly random table.
pub fn random_local_source<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, d: usize) -> LocalSource {
    let s = d.min(m);
    let outputs = (0..n)
        .map(|_| {
            let mut support = rand::seq::index::sample(rng, m, s).into_vec();
            support.sort_unstable();
            let table = TruthTable::from_fn(s, |_| rng.gen());
            LocalOutput { support, table }
        })
        .collect();
    LocalSource::new(m, outputs).expect("valid by construction")
}

/// The clique source on `k` vertices: outputs are the `k` seed bits followed by
/// every pairwise AND `y_i y_j`, `i < j`, in lexicographic order.
pub fn clique_source(k: usize) -> Result<LocalSource> {
    if k == 0 {
        return Err(Error::invalid("clique source needs k >= 1"));
    }
    let n = k + k * (k - 1) / 2;
    if n > 64 {
        return Err(Error::invalid(format!("clique source with k = {k} has {n} > 64 outputs")));
    }
    let mut outputs: Vec<LocalOutput> = (0..k).map(LocalOutput::projection).collect();
    for i in 0..k {
        for j in i + 1..k {
            outputs.push(LocalOutput {
                support: vec![i, j],
                table: TruthTable::from_fn(2, |x| x == 3),
            });
        }
    }
    LocalSource::new(k, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn identity_and_constants() {
        let caps = Caps::default();
        let d = LocalSource::identity(1).exact_distribution(&caps).unwrap();
        assert_eq!(d, ExactDistribution::uniform_over(1, [0, 1]).unwrap());
        let c = LocalSource::new(3, vec![LocalOutput::constant(true), LocalOutput::constant(false)]).unwrap();
        assert_eq!(c.exact_distribution(&caps).unwrap(), ExactDistribution::point_mass(2, 0b01));
    }

    #[test]
    fn clique_examples() {
        let caps = Caps::default();
        let c2 = clique_source(2).unwrap();
        assert_eq!(c2.n(), 3);
        let d = c2.exact_distribution(&caps).unwrap();
        // (y1, y2, y1 y2) over the 4 seeds: 000, 100, 010, 111
        let expected: Vec<u64> = vec![0b000, 0b001, 0b010, 0b111];
        assert_eq!(d.support().collect::<Vec<_>>(), expected);
        assert!(d.mass().values().all(|m| *m == ratio(1, 4)));
        assert_eq!(d.min_entropy(), 2.0);
        assert_eq!(clique_source(4).unwrap().n(), 10);
        let d3 = clique_source(3).unwrap().exact_distribution(&caps).unwrap();
        assert_eq!(d3.min_entropy(), 3.0);
        assert_eq!(clique_source(3).unwrap().locality(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let caps = Caps {
            dist_seed_bits: 3,
            ..Caps::default()
        };
        assert!(LocalSource::identity(4).exact_distribution(&caps).unwrap_err().is_cap());
    }

    #[test]
    fn effective_support_drops_dummies() {
        // f(s0, s1) = s1
        let o = LocalOutput::new(vec![2, 5], TruthTable::parse_bitstring("0011").unwrap()).unwrap();
        let e = o.effective();
        assert_eq!(e.support, vec![5]);
        assert_eq!(e.table.to_bitstring(), "01");
        for seed in 0..64u64 {
            assert_eq!(o.eval(seed), e.eval(seed));
        }
    }

    #[test]
    fn fixing_and_normalizing() {
        let caps = Caps::default();
        let src = clique_source(3).unwrap();
        let fixed = src.fix_seeds(0b001, 0b001);
        assert!(fixed.outputs()[0].is_constant());
        for seed in 0..8u64 {
            assert_eq!(fixed.eval(seed), src.eval(seed | 1));
        }
        let norm = LocalSource::new(5, vec![LocalOutput::projection(3)]).unwrap().normalize();
        assert_eq!(norm.m(), 1);
        assert_eq!(
            norm.exact_distribution(&caps).unwrap(),
            ExactDistribution::uniform_over(1, [0, 1]).unwrap()
        );
    }

    #[test]
    fn from_polys_matches_eval() {
        let f = crate::parse_poly("x1*x3 + x2", 3).unwrap();
        let g = crate::parse_poly("1 + x3", 3).unwrap();
        let src = LocalSource::from_polys(3, &[f.clone(), g.clone()]).unwrap();
        for seed in 0..8u64 {
            let x = src.eval(seed);
            assert_eq!(x & 1 == 1, f.eval(seed));
            assert_eq!(x >> 1 & 1 == 1, g.eval(seed));
        }
        assert_eq!(src.outputs()[0].to_poly(3).unwrap(), f);
    }
}
