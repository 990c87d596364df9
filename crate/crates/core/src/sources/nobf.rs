use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::{ExactDistribution, LocalOutput, LocalSource};
use crate::combinatorics::extract;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::exact;
use crate::f2poly::TruthTable;

/// Law of one good bit: it equals `favored` with probability `p >= 1/2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bias {
    pub p: BigRational,
    pub favored: bool,
}

impl Bias {
    pub fn new(p: BigRational, favored: bool) -> Result<Self> {
        if p < exact::half() || p > BigRational::one() {
            return Err(Error::invalid(format!(
                "bias {} outside [1/2, 1]",
                exact::fmt_rational(&p)
            )));
        }
        // ties go to 1
        let favored = favored || p == exact::half();
        Ok(Bias { p, favored })
    }

    pub fn unbiased() -> Self {
        Bias {
            p: exact::half(),
            favored: true,
        }
    }

    /// Bias for a bit with `Pr[bit = 1] = q`.
    pub fn from_prob_one(q: BigRational) -> Result<Self> {
        let other = BigRational::one() - &q;
        if q >= other {
            Bias::new(q, true)
        } else {
            Bias::new(other, false)
        }
    }

    pub fn is_unbiased(&self) -> bool {
        self.p == exact::half()
    }

    pub fn prob(&self, value: bool) -> BigRational {
        if value == self.favored {
            self.p.clone()
        } else {
            BigRational::one() - &self.p
        }
    }
}

/// A bad bit: a deterministic function of the good bits with the listed ordinals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BadBit {
    pub position: usize,
    pub support: Vec<usize>,
    pub table: TruthTable,
}

impl BadBit {
    pub fn constant(position: usize, value: bool) -> Self {
        BadBit {
            position,
            support: Vec::new(),
            table: if value { TruthTable::ones(0) } else { TruthTable::zeros(0) },
        }
    }

    fn support_mask(&self) -> u64 {
        self.support.iter().fold(0, |m, &i| m | 1 << i)
    }

    /// Value given the good-bit assignment (bit `i` = good ordinal `i`).
    pub fn eval(&self, good: u64) -> bool {
        self.table.get(extract(good, self.support_mask()))
    }
}

/// Non-oblivious bit-fixing source: independent (possibly biased) good bits in
/// plain sight, every other bit a function of few good bits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NobfSource {
    n: usize,
    good: Vec<usize>,
    biases: Vec<Bias>,
    bad: Vec<BadBit>,
}

impl NobfSource {
    pub fn new(n: usize, good: Vec<usize>, biases: Vec<Bias>, mut bad: Vec<BadBit>) -> Result<Self> {
        if n > 64 {
            return Err(Error::invalid("at most 64 output bits"));
        }
        if good.len() != biases.len() {
            return Err(Error::invalid(format!(
                "{} good positions but {} biases",
                good.len(),
                biases.len()
            )));
        }
        let mut seen = vec![false; n];
        for &g in &good {
            if g >= n || seen[g] {
                return Err(Error::invalid(format!("good position {g} is out of range or repeated")));
            }
            seen[g] = true;
        }
        for b in &bad {
            if b.position >= n || seen[b.position] {
                return Err(Error::invalid(format!(
                    "bad position {} is out of range or repeated",
                    b.position
                )));
            }
            seen[b.position] = true;
            if b.support.iter().any(|&s| s >= good.len()) || b.support.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "bad bit {} has an invalid good-ordinal support {:?}",
                    b.position, b.support
                )));
            }
            if b.table.n_vars() != b.support.len() {
                return Err(Error::invalid(format!("bad bit {} has a table of the wrong size", b.position)));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("position {missing} is neither good nor bad")));
        }
        for b in &biases {
            Bias::new(b.p.clone(), b.favored)?;
        }
        bad.sort_by_key(|b| b.position);
        Ok(NobfSource { n, good, biases, bad })
    }

    /// Same structure with every good bit uniform.
    pub fn unbiased(&self) -> NobfSource {
        NobfSource {
            biases: vec![Bias::unbiased(); self.good.len()],
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.good.len()
    }

    pub fn good(&self) -> &[usize] {
        &self.good
    }

    pub fn biases(&self) -> &[Bias] {
        &self.biases
    }

    pub fn bad(&self) -> &[BadBit] {
        &self.bad
    }

    pub fn is_unbiased(&self) -> bool {
        self.biases.iter().all(Bias::is_unbiased)
    }

    /// Largest bad-bit support.
    pub fn locality(&self) -> usize {
        self.bad.iter().map(|b| b.support.len()).max().unwrap_or(0)
    }

    /// Output point for a good-bit assignment.
    pub fn eval(&self, good: u64) -> u64 {
        let mut x = 0;
        for (i, &pos) in self.good.iter().enumerate() {
            x |= (good >> i & 1) << pos;
        }
        for b in &self.bad {
            x |= (b.eval(good) as u64) << b.position;
        }
        x
    }

    pub fn exact_distribution(&self, caps: &Caps) -> Result<ExactDistribution> {
        let k = self.k();
        caps.check_dist(k)?;
        if self.is_unbiased() {
            let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
            for a in 0..1u64 << k {
                *counts.entry(self.eval(a)).or_default() += 1;
            }
            return Ok(ExactDistribution::from_counts(self.n, counts, 1 << k));
        }
        // integer numerators over the common denominator Π den_i
        let probs: Vec<[BigRational; 2]> = self.biases.iter().map(|b| [b.prob(false), b.prob(true)]).collect();
        let den: BigInt = probs.iter().map(|p| p[0].denom().lcm(p[1].denom())).product();
        let nums: Vec<[BigInt; 2]> = probs
            .iter()
            .map(|p| {
                let d = p[0].denom().lcm(p[1].denom());
                [p[0].numer() * (&d / p[0].denom()), p[1].numer() * (&d / p[1].denom())]
            })
            .collect();
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for a in 0..1u64 << k {
            let mut w = BigInt::one();
            for (i, num) in nums.iter().enumerate() {
                w *= &num[(a >> i & 1) as usize];
                if w.is_zero() {
                    break;
                }
            }
            if !w.is_zero() {
                *acc.entry(self.eval(a)).or_insert_with(BigInt::zero) += w;
            }
        }
        let mass = acc.into_iter().map(|(x, w)| (x, BigRational::new(w, den.clone()))).collect();
        Ok(ExactDistribution::from_parts_unchecked(self.n, mass))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mut a = 0u64;
        for (i, b) in self.biases.iter().enumerate() {
            let hit = match (b.p.numer().to_u64(), b.p.denom().to_u64()) {
                (Some(num), Some(den)) => rng.gen_range(0..den) < num,
                _ => rng.gen::<f64>() < exact::to_f64(&b.p),
            };
            if hit == b.favored {
                a |= 1 << i;
            }
        }
        self.eval(a)
    }

    /// The local source with one seed bit per good bit; only for unbiased sources.
    pub fn as_local(&self) -> Result<LocalSource> {
        if !self.is_unbiased() {
            return Err(Error::precondition("only unbiased NOBF sources are local sources"));
        }
        let mut outputs = vec![LocalOutput::constant(false); self.n];
        for (i, &pos) in self.good.iter().enumerate() {
            outputs[pos] = LocalOutput::projection(i);
        }
        for b in &self.bad {
            outputs[b.position] = LocalOutput::new(b.support.clone(), b.table.clone())?;
        }
        LocalSource::new(self.k(), outputs)
    }
}

/// Random biased NOBF source on `n` bits with `k` good bits at random positions.
/// Each good bit gets `p = a / den` for a uniform `a` in `[den/2, den]` and a
/// random favored value; each bad bit reads `min(d, k)` random good bits.
pub fn random_nobf_source<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, d: usize, den: u64) -> NobfSource {
    assert!(k <= n && den >= 2);
    let mut good = rand::seq::index::sample(rng, n, k).into_vec();
    good.sort_unstable();
    let biases = (0..k)
        .map(|_| {
            let a = rng.gen_range(den.div_ceil(2)..=den);
            Bias::new(BigRational::new(BigInt::from(a), BigInt::from(den)), rng.gen()).expect("p in range")
        })
        .collect();
    let s = d.min(k);
    let bad = (0..n)
        .filter(|p| !good.contains(p))
        .map(|position| {
            let mut support = rand::seq::index::sample(rng, k, s).into_vec();
            support.sort_unstable();
            BadBit {
                position,
                support,
                table: TruthTable::from_fn(s, |_| rng.gen()),
            }
        })
        .collect();
    NobfSource::new(n, good, biases, bad).expect("valid by construction")
}

/// [`NobfSource::as_local`] as a free function.
pub fn nobf_as_local(source: &NobfSource) -> Result<LocalSource> {
    source.as_local()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn copy_bit(position: usize, of: usize) -> BadBit {
        BadBit {
            position,
            support: vec![of],
            table: TruthTable::from_fn(1, |x| x == 1),
        }
    }

    #[test]
    fn biased_distribution() {
        let caps = Caps::default();
        let s = NobfSource::new(
            2,
            vec![0],
            vec![Bias::new(ratio(3, 4), true).unwrap()],
            vec![copy_bit(1, 0)],
        )
        .unwrap();
        let d = s.exact_distribution(&caps).unwrap();
        assert_eq!(d.prob(0b11), ratio(3, 4));
        assert_eq!(d.prob(0b00), ratio(1, 4));
        let u = s.unbiased().exact_distribution(&caps).unwrap();
        assert_eq!(u.prob(0b11), ratio(1, 2));
    }

    #[test]
    fn frozen_bit_has_no_zero_mass_points() {
        let s = NobfSource::new(1, vec![0], vec![Bias::new(ratio(1, 1), false).unwrap()], vec![]).unwrap();
        let d = s.exact_distribution(&Caps::default()).unwrap();
        assert_eq!(d, ExactDistribution::point_mass(1, 0));
    }

    #[test]
    fn as_local_preserves_distribution() {
        let caps = Caps::default();
        let s = NobfSource::new(
            4,
            vec![3, 1],
            vec![Bias::unbiased(), Bias::unbiased()],
            vec![
                copy_bit(0, 1),
                BadBit {
                    position: 2,
                    support: vec![0, 1],
                    table: TruthTable::parse_bitstring("0110").unwrap(),
                },
            ],
        )
        .unwrap();
        let l = s.as_local().unwrap();
        assert_eq!(l.exact_distribution(&caps).unwrap(), s.exact_distribution(&caps).unwrap());
        let ident = NobfSource::new(2, vec![0, 1], vec![Bias::unbiased(); 2], vec![]).unwrap();
        assert_eq!(ident.as_local().unwrap(), LocalSource::identity(2));
        let biased = NobfSource::new(1, vec![0], vec![Bias::new(ratio(2, 3), true).unwrap()], vec![]).unwrap();
        assert!(matches!(biased.as_local(), Err(Error::Precondition(_))));
    }

    #[test]
    fn validation() {
        assert!(NobfSource::new(2, vec![0], vec![Bias::unbiased()], vec![]).is_err());
        assert!(NobfSource::new(1, vec![0, 0], vec![Bias::unbiased(); 2], vec![]).is_err());
        assert!(Bias::new(ratio(1, 3), true).is_err());
        assert!(Bias::new(ratio(1, 2), false).unwrap().favored);
        assert_eq!(Bias::from_prob_one(ratio(1, 4)).unwrap(), Bias::new(ratio(3, 4), false).unwrap());
    }
}
