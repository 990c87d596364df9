//! The clique set: its Sidon structure, how little of any affine subspace it
//! fills, and the resulting distance from mixtures of affine sources.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{deposit, Combinations};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{full_mask, rank_u64};
use crate::lab::ScanMode;
use crate::sources::{mix_distributions, statistical_distance, AffineSubspace, ExactDistribution};

const MAX_RETRIES: usize = 64;

/// Number of coordinates of the clique source on `k` vertices.
pub fn clique_n(k: usize) -> usize {
    k + k * k.saturating_sub(1) / 2
}

/// The `2^k` points of the clique source: vertex bits first, then edge `(i, j)`,
/// `i < j`, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSet {
    pub k: usize,
    pub n: usize,
    /// Indexed by vertex set.
    pub points: Vec<u64>,
}

pub fn clique_set(k: usize) -> Result<CliqueSet> {
    let n = clique_n(k);
    if k == 0 || n > 64 {
        return Err(Error::invalid(format!("clique set needs 1 <= k with k + k(k-1)/2 <= 64, got k = {k}")));
    }
    let points = (0..1u64 << k).map(|v| clique_point(k, v)).collect();
    Ok(CliqueSet { k, n, points })
}

fn clique_point(k: usize, vertices: u64) -> u64 {
    let mut x = vertices;
    let mut e = k;
    for i in 0..k {
        for j in i + 1..k {
            if vertices >> i & 1 == 1 && vertices >> j & 1 == 1 {
                x |= 1 << e;
            }
            e += 1;
        }
    }
    x
}

/// Whether the edge bits of `x` are exactly the pairwise ANDs of its vertex bits.
pub fn clique_membership(x: u64, n: usize, k: usize) -> Result<bool> {
    if n != clique_n(k) {
        return Err(Error::invalid(format!(
            "point has {n} coordinates, the clique layout on {k} vertices has {}",
            clique_n(k)
        )));
    }
    if x & !full_mask(n) != 0 {
        return Err(Error::invalid(format!("point has coordinates beyond {n}")));
    }
    Ok(clique_point(k, x & full_mask(k)) == x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SidonReport {
    /// Every nonzero pairwise sum has at most 2 ordered representations.
    pub is_sidon: bool,
    pub max_ordered: usize,
    /// Same count with `(x, y)` and `(y, x)` identified.
    pub max_unordered: usize,
    /// Smallest sum with more than 2 ordered representations, and its count.
    pub violation: Option<(u64, usize)>,
}

/// Count ordered pairs `x != y` per sum `x + y` over the distinct points.
pub fn sidon_check(points: &[u64]) -> SidonReport {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            *counts.entry(x ^ y).or_default() += 2;
        }
    }
    let max_ordered = counts.values().copied().max().unwrap_or(0);
    let violation = counts.iter().filter(|(_, &c)| c > 2).map(|(&z, &c)| (z, c)).min();
    SidonReport {
        is_sidon: violation.is_none(),
        max_ordered,
        max_unordered: max_ordered / 2,
        violation,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubspaceEvasion {
    /// `|Q ∩ S|`.
    pub intersection: usize,
    pub dim: usize,
    pub fraction: String,
    pub sidon: bool,
    /// `|Q_S|(|Q_S| - 1)/2 <= |S| - 1`.
    pub pair_inequality: bool,
}

/// How much of `sub` the clique set fills.
pub fn subspace_evasion(q: &CliqueSet, sub: &AffineSubspace) -> Result<SubspaceEvasion> {
    if sub.n() != q.n {
        return Err(Error::MismatchedVars {
            left: sub.n(),
            right: q.n,
        });
    }
    let inside: Vec<u64> = q.points.iter().copied().filter(|&x| sub.contains(x)).collect();
    let c = inside.len() as u128;
    let size = 1u128 << sub.dim();
    Ok(SubspaceEvasion {
        intersection: inside.len(),
        dim: sub.dim(),
        fraction: crate::exact::fmt_rational(&BigRational::new(BigInt::from(c), BigInt::from(size))),
        sidon: sidon_check(&inside).is_sidon,
        pair_inequality: c * c.saturating_sub(1) / 2 < size,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvasionReport {
    pub k: usize,
    pub n: usize,
    pub t: usize,
    pub affine: bool,
    pub scanned: u64,
    pub max_intersection: usize,
    pub max_fraction: String,
    /// `2^{-(t-3)/2}`, approximate.
    pub bound: f64,
    /// `max_fraction <= bound`, decided exactly as `c^2 <= 2^{t+3}`.
    pub holds: bool,
    pub sidon_everywhere: bool,
    pub pair_inequality_everywhere: bool,
    pub worst_shift: u64,
    pub worst_basis: Vec<u64>,
}

/// Scan dimension-`t` subspaces (affine ones when `affine`) of the clique
/// source's space for the largest fraction of clique points.
pub fn evasiveness_scan(k: usize, t: usize, mode: ScanMode, affine: bool, caps: &Caps) -> Result<EvasionReport> {
    let q = clique_set(k)?;
    let n = q.n;
    if t > n {
        return Err(Error::invalid(format!("dimension {t} exceeds {n}")));
    }
    let subspaces: Vec<AffineSubspace> = match mode {
        ScanMode::Exhaustive => all_subspaces(n, t, affine, caps)?,
        ScanMode::Random { trials, seed } => {
            caps.check_family(trials as u128)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials)
                .map(|_| random_subspace(&mut rng, n, t, affine))
                .collect::<Result<_>>()?
        }
    };
    let results: Vec<SubspaceEvasion> = subspaces
        .par_iter()
        .map(|s| subspace_evasion(&q, s))
        .collect::<Result<_>>()?;
    let worst = (0..results.len()).fold(0, |w, i| {
        if results[i].intersection > results[w].intersection {
            i
        } else {
            w
        }
    });
    let max_intersection = results.get(worst).map_or(0, |r| r.intersection);
    let c = max_intersection as u128;
    Ok(EvasionReport {
        k,
        n,
        t,
        affine,
        scanned: results.len() as u64,
        max_intersection,
        max_fraction: crate::exact::fmt_rational(&BigRational::new(BigInt::from(c), BigInt::one() << t)),
        bound: (-(t as f64 - 3.0) / 2.0).exp2(),
        holds: c * c <= 1u128 << (t + 3),
        sidon_everywhere: results.iter().all(|r| r.sidon),
        pair_inequality_everywhere: results.iter().all(|r| r.pair_inequality),
        worst_shift: subspaces.get(worst).map_or(0, |s| s.shift()),
        worst_basis: subspaces.get(worst).map_or(Vec::new(), |s| s.basis().to_vec()),
    })
}

/// Fair-bit `t × n` matrix, redrawn until it has rank `t`; zero shift unless `affine`.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, t: usize, affine: bool) -> Result<AffineSubspace> {
    let mask = full_mask(n);
    for _ in 0..MAX_RETRIES {
        let basis: Vec<u64> = (0..t).map(|_| rng.gen::<u64>() & mask).collect();
        if rank_u64(&basis) == t {
            let shift = if affine { rng.gen::<u64>() & mask } else { 0 };
            return AffineSubspace::new(n, shift, basis);
        }
    }
    Err(Error::invalid(format!("no rank-{t} matrix in {MAX_RETRIES} draws")))
}

/// Every dimension-`t` subspace of `{0,1}^n` once, by reduced echelon form (pivot
/// at each row's lowest bit), and with `affine` every coset once.
pub fn all_subspaces(n: usize, t: usize, affine: bool, caps: &Caps) -> Result<Vec<AffineSubspace>> {
    let mut out = Vec::new();
    for pivots in Combinations::of_range(n, t) {
        let ps: Vec<usize> = crate::combinatorics::bits_of(pivots).collect();
        // free positions of each row: above its pivot, off every pivot
        let free: Vec<u64> = ps
            .iter()
            .map(|&p| full_mask(n) & !full_mask(p + 1) & !pivots)
            .collect();
        let bits: u32 = free.iter().map(|f| f.count_ones()).sum();
        let shift_bits = if affine { n - t } else { 0 } as u32;
        let size = 1u128 << (bits + shift_bits).min(127);
        caps.check_family(out.len() as u128 + size)?;
        for fill in 0..1u64 << bits {
            let mut rest = fill;
            let basis: Vec<u64> = ps
                .iter()
                .zip(&free)
                .map(|(&p, &f)| {
                    let w = f.count_ones();
                    let v = 1u64 << p | deposit(rest & full_mask(w as usize), f);
                    rest >>= w;
                    v
                })
                .collect();
            for s in 0..1u64 << shift_bits {
                let shift = deposit(s, full_mask(n) & !pivots);
                out.push(AffineSubspace::new(n, shift, basis.clone())?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixtureBound {
    /// `|Q ∩ S_i| / |S_i|` per component.
    pub fractions: Vec<BigRational>,
    /// `1 - max_i fraction_i`.
    pub bound: BigRational,
    /// Distance from the clique source to the mixture, when materialized.
    pub true_distance: Option<BigRational>,
    /// `bound <= true_distance`.
    pub consistent: Option<bool>,
}

/// Lower bound on the distance from the clique source to any mixture of the
/// given affine components. With `weights` (uniform when `None`) and every
/// component small enough, the actual mixture is built and its exact distance
/// reported alongside.
pub fn affine_mixture_distance_bound(
    k: usize,
    components: &[AffineSubspace],
    weights: Option<&[BigRational]>,
    caps: &Caps,
) -> Result<MixtureBound> {
    let q = clique_set(k)?;
    if components.is_empty() {
        return Err(Error::invalid("no components"));
    }
    let mut fractions = Vec::with_capacity(components.len());
    for c in components {
        let e = subspace_evasion(&q, c)?;
        fractions.push(BigRational::new(BigInt::from(e.intersection), BigInt::one() << c.dim()));
    }
    let max = fractions.iter().max().expect("nonempty").clone();
    let bound = BigRational::one() - max;
    let weights: Vec<BigRational> = match weights {
        Some(w) if w.len() != components.len() => {
            return Err(Error::invalid(format!(
                "{} weights for {} components",
                w.len(),
                components.len()
            )))
        }
        Some(w) => w.to_vec(),
        None => vec![BigRational::new(BigInt::one(), BigInt::from(components.len())); components.len()],
    };
    let materialize = components.iter().all(|c| c.dim() <= caps.dist_seed_bits);
    let true_distance = if materialize {
        let parts: Vec<(BigRational, ExactDistribution)> = weights
            .into_iter()
            .zip(components)
            .map(|(w, c)| Ok((w, c.exact_distribution(caps)?)))
            .collect::<Result<_>>()?;
        let mix = mix_distributions(&parts)?;
        let target = ExactDistribution::uniform_over(q.n, q.points.iter().copied())?;
        Some(statistical_distance(&target, &mix)?)
    } else {
        None
    };
    Ok(MixtureBound {
        consistent: true_distance.as_ref().map(|d| bound <= *d),
        fractions,
        bound,
        true_distance,
    })
}
