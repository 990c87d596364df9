//! Indexed enumeration of d-local NOBF families.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_le, bits_of, masks_up_to_weight, Combinations};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{MultilinearPoly, TruthTable};
use crate::sources::{BadBit, Bias, NobfSource};

/// Parameters of a family of unbiased d-local NOBF sources on `n` bits with `k`
/// good bits. With `r` set, bad bits are restricted to degree `<= r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub r: Option<usize>,
}

impl FamilySpec {
    pub fn new(n: usize, k: usize, d: usize) -> Self {
        FamilySpec { n, k, d, r: None }
    }

    pub fn with_degree(n: usize, k: usize, d: usize, r: usize) -> Self {
        FamilySpec { n, k, d, r: Some(r) }
    }

    /// Support size actually used by bad bits.
    pub fn support_size(&self) -> usize {
        self.d.min(self.k)
    }

    fn table_count(&self, s: usize) -> BigUint {
        let exp = match self.r {
            Some(r) => binomial_le(s as u64, r as u64),
            None => BigUint::one() << s,
        };
        match exp.to_usize() {
            Some(e) => BigUint::one() << e,
            None => BigUint::from(u128::MAX),
        }
    }

    /// Number of descriptors the enumeration produces.
    pub fn descriptor_count(&self) -> BigUint {
        if self.k > self.n {
            return BigUint::default();
        }
        let s = self.support_size();
        let per_bad = binomial(self.k as u64, s as u64) * self.table_count(s);
        binomial(self.n as u64, self.k as u64) * per_bad.pow((self.n - self.k) as u32)
    }

    /// The textbook size bound `binom(n,k)·(binom(k,d)·T)^{n-k}` with `d` itself
    /// (not clipped to `k`) and `T` the number of allowed tables on `d` inputs.
    pub fn family_bound(&self) -> BigUint {
        if self.k > self.n {
            return BigUint::default();
        }
        let per_bad = binomial(self.k as u64, self.d as u64) * self.table_count(self.d);
        binomial(self.n as u64, self.k as u64) * per_bad.pow((self.n - self.k) as u32)
    }

    fn validate(&self) -> Result<()> {
        if self.k > self.n || self.n > 64 {
            return Err(Error::invalid(format!(
                "family needs k <= n <= 64, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        Ok(())
    }
}

/// A family with random access by descriptor index.
///
/// Index order: good-position sets in lexicographic order, then one digit per
/// bad position (ascending, first is most significant), each digit choosing a
/// support (lexicographic) and then a table.
#[derive(Clone, Debug)]
pub struct Family {
    spec: FamilySpec,
    goods: Vec<u64>,
    supports: Vec<Vec<usize>>,
    tables: Vec<TruthTable>,
    count: u64,
}

impl Family {
    pub fn new(spec: FamilySpec, caps: &Caps) -> Result<Self> {
        spec.validate()?;
        let count = u128::try_from(spec.descriptor_count()).unwrap_or(u128::MAX);
        caps.check_family(count)?;
        caps.check_dist(spec.k)?;
        let s = spec.support_size();
        let goods = Combinations::of_range(spec.n, spec.k).collect();
        let (supports, tables) = if spec.n > spec.k {
            let supports = Combinations::of_range(spec.k, s).map(|m| bits_of(m).collect()).collect();
            (supports, allowed_tables(s, spec.r))
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Family {
            spec,
            goods,
            supports,
            tables,
            count: count as u64,
        })
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// The tables a bad bit may use, in digit order.
    pub fn tables(&self) -> &[TruthTable] {
        &self.tables
    }

    /// `(support, table index)` choice of every bad position, plus the good set.
    fn decode(&self, index: u64) -> (u64, Vec<(usize, usize)>) {
        let per = (self.supports.len() * self.tables.len()) as u64;
        let bad = self.spec.n - self.spec.k;
        let mut rest = index;
        let mut digits = vec![(0, 0); bad];
        for slot in digits.iter_mut().rev() {
            let c = rest % per;
            rest /= per;
            *slot = ((c / self.tables.len() as u64) as usize, (c % self.tables.len() as u64) as usize);
        }
        (self.goods[rest as usize], digits)
    }

    /// Descriptor number `index`; panics when out of range.
    pub fn source(&self, index: u64) -> NobfSource {
        assert!(index < self.count, "descriptor {index} out of range");
        let (good_mask, digits) = self.decode(index);
        let good: Vec<usize> = bits_of(good_mask).collect();
        let bad_positions = (0..self.spec.n).filter(|p| good_mask >> p & 1 == 0);
        let bad = bad_positions
            .zip(digits)
            .map(|(position, (s, t))| BadBit {
                position,
                support: self.supports[s].clone(),
                table: self.tables[t].clone(),
            })
            .collect();
        NobfSource::new(self.spec.n, good, vec![Bias::unbiased(); self.spec.k], bad).expect("valid by construction")
    }

    pub fn iter(&self) -> impl Iterator<Item = NobfSource> + '_ {
        (0..self.count).map(|i| self.source(i))
    }
}

fn allowed_tables(s: usize, r: Option<usize>) -> Vec<TruthTable> {
    match r {
        None => (0..1u64 << (1u64 << s)).map(|t| TruthTable::from_fn(s, |x| t >> x & 1 == 1)).collect(),
        Some(r) => {
            let monos: Vec<u64> = masks_up_to_weight(s, r).collect();
            (0..1u64 << monos.len())
                .map(|t| {
                    let p = MultilinearPoly::from_monomials(s, bits_of(t).map(|j| monos[j])).expect("in range");
                    p.truth_table().expect("small")
                })
                .collect()
        }
    }
}

/// Every descriptor of the family, in index order.
pub fn enumerate_nobf_family(spec: FamilySpec, caps: &Caps) -> Result<impl Iterator<Item = NobfSource>> {
    let family = Family::new(spec, caps)?;
    Ok((0..family.len()).map(move |i| family.source(i)))
}

/// All `2^{binom(n,<=r)}` polynomials of degree `<= r` on `n` variables, indexed by
/// monomial subsets in (size, lex) monomial order.
pub fn all_polys_up_to_degree(n: usize, r: usize, caps: &Caps) -> Result<Vec<MultilinearPoly>> {
    let monos: Vec<u64> = masks_up_to_weight(n, r).collect();
    if monos.len() >= 64 {
        return Err(Error::cap("polynomial family", u128::MAX, caps.family as u128));
    }
    caps.check_family(1u128 << monos.len())?;
    (0..1u64 << monos.len())
        .map(|t| MultilinearPoly::from_monomials(n, bits_of(t).map(|j| monos[j])))
        .collect()
}
