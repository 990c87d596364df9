//! Reductions from local sources to (biased, then unbiased) NOBF sources.

mod tree;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{bits_of, deposit};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::exact;
use crate::f2poly::TruthTable;
use crate::sources::{
    mixture, statistical_distance, BadBit, Bias, ConvexCombination, ExactDistribution, LocalOutput, LocalSource,
    NobfSource,
};

pub use tree::{find_maximal_disjoint_set, local_to_biased_nobf, total_weight, Branch, Case, FixingNode, FixingTree, Leaf};

/// Unbiased NOBF components simulating a biased NOBF source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Debiased {
    /// `Σ (2 - 2 p_i)`, the expected number of surviving good bits.
    pub mu: BigRational,
    /// `μ / 4`.
    pub k_prime: BigRational,
    pub components: Vec<(BigRational, NobfSource)>,
}

impl Debiased {
    /// `2^{-μ/4}`.
    pub fn epsilon(&self) -> f64 {
        (-exact::to_f64(&self.mu) / 4.0).exp2()
    }

    pub fn combo(&self) -> ConvexCombination {
        ConvexCombination {
            components: self.components.iter().map(|(w, s)| (w.clone(), s.clone().into())).collect(),
        }
    }

    /// Total weight of components with fewer than `k` good bits.
    pub fn weight_below(&self, k: &BigRational) -> BigRational {
        self.components
            .iter()
            .filter(|(_, s)| BigRational::from_integer(BigInt::from(s.k())) < *k)
            .fold(BigRational::zero(), |a, (w, _)| a + w)
    }

    /// Whether the weight below `k'` is at most `ε`.
    pub fn guarantee_holds(&self) -> bool {
        let w = self.weight_below(&self.k_prime);
        w.is_zero() || exact::log2_abs(&w) <= -exact::to_f64(&self.mu) / 4.0 + 1e-9
    }
}

/// Write each good bit as `h(B_i, A_i)` with `Pr[B_i = 0] = 2p_i - 1` and `A_i`
/// uniform; one component per value of `B`, where good bits with `B_i = 0`
/// are frozen to their favored value.
pub fn debias_nobf(source: &NobfSource, caps: &Caps) -> Result<Debiased> {
    let k = source.k();
    caps.check_dist(k)?;
    let two = BigRational::from_integer(BigInt::from(2));
    // pb[i] = [Pr[B_i = 0], Pr[B_i = 1]]
    let pb: Vec<[BigRational; 2]> = source
        .biases()
        .iter()
        .map(|b| [&two * &b.p - BigRational::one(), &two - &two * &b.p])
        .collect();
    let mu: BigRational = pb.iter().map(|p| p[1].clone()).sum();
    let full = crate::f2poly::full_mask(k);
    let mut components = Vec::new();
    for b in (0..=full).rev() {
        let mut w = BigRational::one();
        for (i, p) in pb.iter().enumerate() {
            w *= &p[(b >> i & 1) as usize];
            if w.is_zero() {
                break;
            }
        }
        if w.is_zero() {
            continue;
        }
        components.push((w, freeze(source, b)?));
    }
    Ok(Debiased {
        k_prime: &mu / BigInt::from(4),
        mu,
        components,
    })
}

/// Keep the good ordinals in `keep` as uniform bits; fix the rest to their favored values.
fn freeze(source: &NobfSource, keep: u64) -> Result<NobfSource> {
    let k = source.k();
    let favored: u64 = source
        .biases()
        .iter()
        .enumerate()
        .fold(0, |a, (i, b)| a | (b.favored as u64) << i);
    let mut new_ord = vec![usize::MAX; k];
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for i in 0..k {
        if keep >> i & 1 == 1 {
            new_ord[i] = good.len();
            good.push(source.good()[i]);
        } else {
            bad.push(BadBit::constant(source.good()[i], favored >> i & 1 == 1));
        }
    }
    for b in source.bad() {
        let kept_local = b
            .support
            .iter()
            .enumerate()
            .fold(0u64, |m, (l, &ord)| if keep >> ord & 1 == 1 { m | 1 << l } else { m });
        let fixed_local = b.support.iter().enumerate().fold(0u64, |m, (l, &ord)| {
            if keep >> ord & 1 == 0 && favored >> ord & 1 == 1 {
                m | 1 << l
            } else {
                m
            }
        });
        let table = TruthTable::from_fn(kept_local.count_ones() as usize, |y| {
            b.table.get(deposit(y, kept_local) | fixed_local)
        });
        let support: Vec<usize> = bits_of(kept_local).map(|l| new_ord[b.support[l]]).collect();
        let eff = LocalOutput { support, table }.effective();
        bad.push(BadBit {
            position: b.position,
            support: eff.support,
            table: eff.table,
        });
    }
    let kk = good.len();
    NobfSource::new(source.n(), good, vec![Bias::unbiased(); kk], bad)
}

/// A local source as a convex combination of unbiased NOBF sources.
#[derive(Clone, Debug, PartialEq)]
pub struct NobfDecomposition {
    /// Distinct components with merged weights, in order of first appearance.
    pub components: Vec<(BigRational, NobfSource)>,
    /// `Σ_leaves w · 2^{-μ_leaf/4}`.
    pub epsilon: f64,
    /// Smallest `μ_leaf / 4` over the leaves.
    pub k_prime: BigRational,
    /// Weight removed by truncation before renormalizing.
    pub dropped_weight: BigRational,
    pub truncated: bool,
    pub leaf_count: usize,
}

impl NobfDecomposition {
    pub fn combo(&self) -> ConvexCombination {
        ConvexCombination {
            components: self.components.iter().map(|(w, s)| (w.clone(), s.clone().into())).collect(),
        }
    }

    pub fn min_good_bits(&self) -> usize {
        self.components.iter().map(|(_, s)| s.k()).min().unwrap_or(0)
    }
}

/// Compose [`local_to_biased_nobf`] with [`debias_nobf`] on every leaf.
///
/// With `truncate`, components with fewer than `k'` good bits are dropped and
/// the rest renormalized; the result is then within the reported `ε` of the source.
pub fn local_to_nobf(source: &LocalSource, t: usize, truncate: bool, caps: &Caps) -> Result<NobfDecomposition> {
    let tree = local_to_biased_nobf(source, t, caps)?;
    let leaves = tree.leaves();
    let mut index: HashMap<NobfSource, usize> = HashMap::new();
    let mut components: Vec<(BigRational, NobfSource)> = Vec::new();
    let mut epsilon = 0.0;
    let mut k_prime: Option<BigRational> = None;
    for leaf in &leaves {
        let deb = debias_nobf(&leaf.source, caps)?;
        epsilon += exact::to_f64(&leaf.weight) * deb.epsilon();
        k_prime = Some(match k_prime {
            Some(k) if k <= deb.k_prime => k,
            _ => deb.k_prime.clone(),
        });
        for (w, s) in deb.components {
            let w = &leaf.weight * w;
            match index.get(&s) {
                Some(&i) => components[i].0 += w,
                None => {
                    index.insert(s.clone(), components.len());
                    components.push((w, s));
                }
            }
        }
    }
    let k_prime = k_prime.unwrap_or_else(BigRational::zero);
    let mut dropped = BigRational::zero();
    let mut truncated = false;
    if truncate {
        let below = |s: &NobfSource| BigRational::from_integer(BigInt::from(s.k())) < k_prime;
        let drop: BigRational = components.iter().filter(|(_, s)| below(s)).map(|(w, _)| w.clone()).sum();
        if !drop.is_zero() && drop < BigRational::one() {
            let keep = BigRational::one() - &drop;
            components.retain(|(_, s)| !below(s));
            for c in &mut components {
                c.0 /= &keep;
            }
            dropped = drop;
            truncated = true;
        }
    }
    Ok(NobfDecomposition {
        components,
        epsilon,
        k_prime,
        dropped_weight: dropped,
        truncated,
        leaf_count: leaves.len(),
    })
}

/// A leaf with at least `t` good bits, with its biases reset to 1/2; its support
/// is contained in the support of `source` (checked by enumeration).
pub fn nobf_witness_for_disperser(source: &LocalSource, t: usize, caps: &Caps) -> Result<NobfSource> {
    let tree = local_to_biased_nobf(source, t, caps)?;
    let leaf = tree
        .leaves()
        .into_iter()
        .find(|l| l.source.k() >= t)
        .ok_or_else(|| Error::precondition(format!("no leaf has {t} good bits")))?;
    let witness = leaf.source.unbiased();
    let original = source.exact_distribution(caps)?;
    if !witness.exact_distribution(caps)?.is_subset_support_of(&original) {
        return Err(Error::invalid("witness support escapes the source support"));
    }
    Ok(witness)
}

/// Statistical distance between a source and a claimed decomposition of it.
pub fn verify_decomposition(original: &LocalSource, combo: &ConvexCombination, caps: &Caps) -> Result<BigRational> {
    statistical_distance(&original.exact_distribution(caps)?, &mixture(combo, caps)?)
}

/// Checks, from the distribution alone, that the positions `source` calls good
/// are independent non-constant bits and that each other position is determined
/// by the at most `d` good positions its declared support names.
pub fn check_nobf_form(dist: &ExactDistribution, source: &NobfSource, d: usize) -> std::result::Result<(), String> {
    if dist.n() != source.n() {
        return Err(format!("distribution has {} bits, source {}", dist.n(), source.n()));
    }
    let good = source.good();
    let k = good.len();
    let marginals: Vec<BigRational> = good.iter().map(|&g| dist.prob_of(|x| x >> g & 1 == 1)).collect();
    for (i, q) in marginals.iter().enumerate() {
        if q.is_zero() || q.is_one() {
            return Err(format!("good position {} is constant", good[i]));
        }
    }
    if k <= 20 {
        let mut joint: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (x, m) in dist.mass() {
            let a = good.iter().enumerate().fold(0u64, |a, (i, &g)| a | (x >> g & 1) << i);
            *joint.entry(a).or_insert_with(BigRational::zero) += m;
        }
        for a in 0..1u64 << k {
            let expected = marginals.iter().enumerate().fold(BigRational::one(), |acc, (i, q)| {
                if a >> i & 1 == 1 {
                    acc * q
                } else {
                    acc * (BigRational::one() - q)
                }
            });
            let got = joint.get(&a).cloned().unwrap_or_else(BigRational::zero);
            if got != expected {
                return Err(format!("good bits are not independent at assignment {a:#b}"));
            }
        }
    }
    for b in source.bad() {
        if b.support.len() > d {
            return Err(format!("bad position {} reads {} > {d} good bits", b.position, b.support.len()));
        }
        let positions: Vec<usize> = b.support.iter().map(|&o| good[o]).collect();
        let mut seen: HashMap<u64, bool> = HashMap::new();
        for x in dist.support() {
            let key = positions.iter().enumerate().fold(0u64, |a, (i, &p)| a | (x >> p & 1) << i);
            let v = x >> b.position & 1 == 1;
            if *seen.entry(key).or_insert(v) != v {
                return Err(format!(
                    "bad position {} is not a function of positions {positions:?}",
                    b.position
                ));
            }
        }
    }
    Ok(())
}
