//! Exact extractor and disperser censuses over enumerated NOBF families.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::family::{Family, FamilySpec};
use crate::combinatorics::trial_seed;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{random_poly, MultilinearPoly, TruthTable};
use crate::sources::NobfSource;

#[derive(Clone, Debug, PartialEq)]
pub struct CensusOutcome {
    pub descriptors: u64,
    pub max_bias: BigRational,
    /// First descriptor (in index order) attaining `max_bias`.
    pub worst_index: u64,
    pub worst_source: NobfSource,
    /// `f` is non-constant on every descriptor.
    pub disperser: bool,
}

/// `|2^k - 2·#{y : f(src(y)) = 1}|`, the bias numerator over `2^k`.
fn bias_numerator(f: &TruthTable, src: &NobfSource) -> u64 {
    let total = 1u64 << src.k();
    let ones = (0..total).filter(|&y| f.get(src.eval(y))).count() as u64;
    total.abs_diff(2 * ones)
}

#[derive(Clone, Copy)]
struct Tally {
    max: u64,
    index: u64,
    constant_somewhere: bool,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        let pick = if other.max > self.max || (other.max == self.max && other.index < self.index) {
            other
        } else {
            self
        };
        Tally {
            constant_somewhere: self.constant_somewhere || other.constant_somewhere,
            ..pick
        }
    }
}

/// Maximum exact bias of `f` over every descriptor of the family.
pub fn extractor_census(f: &MultilinearPoly, spec: FamilySpec, caps: &Caps) -> Result<CensusOutcome> {
    let family = Family::new(spec, caps)?;
    census_on(f, &family, caps)
}

fn census_on(f: &MultilinearPoly, family: &Family, caps: &Caps) -> Result<CensusOutcome> {
    if f.n_vars() != family.spec().n {
        return Err(Error::MismatchedVars {
            left: f.n_vars(),
            right: family.spec().n,
        });
    }
    if family.is_empty() {
        return Err(Error::invalid("empty family"));
    }
    let table = f.truth_table_capped(caps)?;
    let full = 1u64 << family.spec().k;
    let tally = (0..family.len())
        .into_par_iter()
        .map(|i| {
            let b = bias_numerator(&table, &family.source(i));
            Tally {
                max: b,
                index: i,
                constant_somewhere: b == full,
            }
        })
        .reduce_with(Tally::merge)
        .expect("nonempty");
    Ok(CensusOutcome {
        descriptors: family.len(),
        max_bias: BigRational::new(BigInt::from(tally.max), BigInt::from(full)),
        worst_index: tally.index,
        worst_source: family.source(tally.index),
        disperser: !tally.constant_somewhere,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub trials: usize,
    pub successes: usize,
    pub success_fraction: BigRational,
    /// First trial attaining the smallest census value.
    pub best_trial: usize,
    pub best_poly: MultilinearPoly,
    pub best_bias: BigRational,
    pub biases: Vec<BigRational>,
}

/// Census every polynomial; success means max bias `<= 2ε`.
pub fn search_polys(
    polys: &[MultilinearPoly],
    spec: FamilySpec,
    eps: &BigRational,
    caps: &Caps,
) -> Result<SearchOutcome> {
    if polys.is_empty() {
        return Err(Error::invalid("no polynomials to search"));
    }
    let family = Family::new(spec, caps)?;
    let threshold = eps * BigInt::from(2);
    let mut biases = Vec::with_capacity(polys.len());
    for f in polys {
        biases.push(census_on(f, &family, caps)?.max_bias);
    }
    let successes = biases.iter().filter(|b| **b <= threshold).count();
    let best_trial = (0..biases.len()).fold(0, |best, i| if biases[i] < biases[best] { i } else { best });
    Ok(SearchOutcome {
        trials: polys.len(),
        successes,
        success_fraction: BigRational::new(BigInt::from(successes), BigInt::from(polys.len())),
        best_trial,
        best_poly: polys[best_trial].clone(),
        best_bias: biases[best_trial].clone(),
        biases,
    })
}

/// Random degree-`<= r` polynomials, trial `t` drawn from `trial_seed(seed, t)`.
pub fn extractor_search(
    spec: FamilySpec,
    r: usize,
    trials: usize,
    seed: u64,
    eps: &BigRational,
    caps: &Caps,
) -> Result<SearchOutcome> {
    let polys: Vec<MultilinearPoly> = (0..trials)
        .map(|t| random_poly(spec.n, r, trial_seed(seed, t as u64)))
        .collect();
    search_polys(&polys, spec, eps, caps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingFailure {
    pub index: u64,
    pub source: NobfSource,
    /// `f` composed with the generating polynomials.
    pub composed: MultilinearPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisperserOutcome {
    pub descriptors: u64,
    pub all_hit: bool,
    pub first_failure: Option<HittingFailure>,
}

/// Generating polynomials over the `k` good variables: `y_i` for good ordinal `i`,
/// the bad-bit table's polynomial on its support otherwise.
pub fn generating_polys(src: &NobfSource) -> Result<Vec<MultilinearPoly>> {
    let k = src.k();
    let mut out = vec![MultilinearPoly::zero(k); src.n()];
    for (i, &pos) in src.good().iter().enumerate() {
        out[pos] = MultilinearPoly::var(k, i);
    }
    for b in src.bad() {
        let vars: Vec<MultilinearPoly> = b.support.iter().map(|&s| MultilinearPoly::var(k, s)).collect();
        let local = MultilinearPoly::from_truth_table(&b.table);
        out[b.position] = if vars.is_empty() {
            MultilinearPoly::constant(k, local.constant_term())
        } else {
            local.substitute(&vars)?
        };
    }
    Ok(out)
}

/// Whether `f` composed with every generating tuple of the degree-restricted
/// family keeps a monomial of some size in `1..=r`.
pub fn disperser_census_via_hitting(f: &MultilinearPoly, spec: FamilySpec, caps: &Caps) -> Result<DisperserOutcome> {
    let r = spec
        .r
        .ok_or_else(|| Error::precondition("the hitting census needs a degree-restricted family"))?;
    let family = Family::new(spec, caps)?;
    if f.n_vars() != spec.n {
        return Err(Error::MismatchedVars {
            left: f.n_vars(),
            right: spec.n,
        });
    }
    let compose = |i: u64| -> Result<MultilinearPoly> { f.substitute(&generating_polys(&family.source(i))?) };
    let hits = |g: &MultilinearPoly| (1..=r).any(|j| g.hits_degree(j));
    let failure = (0..family.len())
        .into_par_iter()
        .map(|i| compose(i).map(|g| (i, g)))
        .find_first(|res| res.as_ref().map_or(true, |(_, g)| !hits(g)));
    let first_failure = match failure {
        None => None,
        Some(res) => {
            let (index, composed) = res?;
            Some(HittingFailure {
                index,
                source: family.source(index),
                composed,
            })
        }
    };
    Ok(DisperserOutcome {
        descriptors: family.len(),
        all_hit: first_failure.is_none(),
        first_failure,
    })
}
