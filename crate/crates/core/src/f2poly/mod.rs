//! Multilinear polynomials over F2.
//!
//! A polynomial is stored as the sorted set of its monomials, each monomial a
//! bitmask of variable indices (bit `i` is `x{i+1}` in text form, the empty mask
//! is the constant 1). Points of `{0,1}^n` are `u64`s with coordinate `i` in
//! bit `i`.

mod parse;
mod rank;
mod table;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{bits_of, masks_up_to_weight};
use crate::config::Caps;
use crate::error::{Error, Result};

pub use parse::{infer_n_vars, parse_poly};
pub use rank::{f2_matrix_rank, rank_u64, BitRow};
pub use table::TruthTable;

pub const MAX_VARS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultilinearPoly {
    n_vars: usize,
    monomials: Vec<u64>,
}

impl MultilinearPoly {
    pub fn zero(n_vars: usize) -> Self {
        assert!(n_vars <= MAX_VARS);
        MultilinearPoly {
            n_vars,
            monomials: Vec::new(),
        }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, true)
    }

    pub fn constant(n_vars: usize, value: bool) -> Self {
        let mut p = Self::zero(n_vars);
        if value {
            p.monomials.push(0);
        }
        p
    }

    /// The variable with 0-based index `i`.
    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars, "variable {i} out of range for {n_vars}");
        MultilinearPoly {
            n_vars,
            monomials: vec![1 << i],
        }
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(n_vars: usize, monomials: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n_vars > MAX_VARS {
            return Err(Error::invalid(format!("at most {MAX_VARS} variables are supported")));
        }
        let allowed = full_mask(n_vars);
        let mut ms: Vec<u64> = monomials.into_iter().collect();
        if let Some(&bad) = ms.iter().find(|&&m| m & !allowed != 0) {
            let index = 64 - (bad & !allowed).leading_zeros() as usize;
            return Err(Error::VarOutOfRange { index, n_vars });
        }
        ms.sort_unstable();
        Ok(MultilinearPoly {
            n_vars,
            monomials: cancel_sorted(ms),
        })
    }

    /// Sum of the linear form `Σ_{i ∈ mask} x_i` plus `constant`.
    pub fn linear(n_vars: usize, mask: u64, constant: bool) -> Self {
        let mut ms: Vec<u64> = bits_of(mask).map(|i| 1u64 << i).collect();
        if constant {
            ms.push(0);
        }
        Self::from_monomials(n_vars, ms).expect("linear form in range")
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Monomial masks in ascending numeric order.
    pub fn monomials(&self) -> &[u64] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.monomials == [0]
    }

    pub fn is_constant(&self) -> bool {
        self.monomials.iter().all(|&m| m == 0)
    }

    /// Constant term.
    pub fn constant_term(&self) -> bool {
        self.monomials.first() == Some(&0)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.monomials.iter().map(|m| m.count_ones() as usize).max()
    }

    /// Variables appearing in some monomial.
    pub fn support(&self) -> u64 {
        self.monomials.iter().fold(0, |a, m| a | m)
    }

    pub fn eval(&self, x: u64) -> bool {
        self.monomials.iter().filter(|&&m| m & !x == 0).count() % 2 == 1
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        let (a, b) = (&self.monomials, &other.monomials);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(MultilinearPoly {
            n_vars: self.n_vars,
            monomials: out,
        })
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        let mut ms = Vec::with_capacity(self.monomials.len() * other.monomials.len());
        for &a in &self.monomials {
            for &b in &other.monomials {
                ms.push(a | b);
            }
        }
        ms.sort_unstable();
        Ok(MultilinearPoly {
            n_vars: self.n_vars,
            monomials: cancel_sorted(ms),
        })
    }

    /// `f(a_1, ..., a_n)`, a polynomial over the common variable count of the `a_i`.
    pub fn substitute(&self, args: &[MultilinearPoly]) -> Result<Self> {
        let k = self.check_args(args)?;
        let mut acc: Vec<u64> = Vec::new();
        for &m in &self.monomials {
            let mut prod = MultilinearPoly::one(k);
            for i in bits_of(m) {
                prod = prod.multiply(&args[i])?;
                if prod.is_zero() {
                    break;
                }
            }
            acc.extend_from_slice(&prod.monomials);
        }
        acc.sort_unstable();
        Ok(MultilinearPoly {
            n_vars: k,
            monomials: cancel_sorted(acc),
        })
    }

    /// Same result as [`substitute`](Self::substitute), computed pointwise on
    /// truth tables over the `k` argument variables.
    pub fn substitute_via_tables(&self, args: &[MultilinearPoly], caps: &Caps) -> Result<Self> {
        let k = self.check_args(args)?;
        caps.check_table(k)?;
        let tables = args.iter().map(|a| a.truth_table_capped(caps)).collect::<Result<Vec<_>>>()?;
        let out = TruthTable::from_fn(k, |y| {
            let point = tables
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, t)| acc | (t.get(y) as u64) << i);
            self.eval(point)
        });
        Ok(Self::from_truth_table(&out))
    }

    fn check_args(&self, args: &[MultilinearPoly]) -> Result<usize> {
        if args.len() != self.n_vars {
            return Err(Error::invalid(format!(
                "expected {} substitution arguments, got {}",
                self.n_vars,
                args.len()
            )));
        }
        let k = args.first().map_or(0, |a| a.n_vars);
        for a in args {
            if a.n_vars != k {
                return Err(Error::MismatchedVars {
                    left: k,
                    right: a.n_vars,
                });
            }
        }
        Ok(k)
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        self.truth_table_capped(&Caps::default())
    }

    pub fn truth_table_capped(&self, caps: &Caps) -> Result<TruthTable> {
        caps.check_table(self.n_vars)?;
        let mut t = TruthTable::zeros(self.n_vars);
        for &m in &self.monomials {
            t.set(m, true);
        }
        t.moebius_in_place();
        Ok(t)
    }

    pub fn from_truth_table(t: &TruthTable) -> Self {
        let mut coeffs = t.clone();
        coeffs.moebius_in_place();
        let mut monomials = Vec::with_capacity(coeffs.count_ones() as usize);
        for (wi, &w) in coeffs.words().iter().enumerate() {
            for b in bits_of(w) {
                monomials.push((wi as u64) << 6 | b as u64);
            }
        }
        MultilinearPoly {
            n_vars: t.n_vars(),
            monomials,
        }
    }

    /// `|Pr[f=0] - Pr[f=1]|` under the uniform distribution.
    pub fn bias(&self) -> Result<BigRational> {
        self.bias_capped(&Caps::default())
    }

    pub fn bias_capped(&self, caps: &Caps) -> Result<BigRational> {
        let t = self.truth_table_capped(caps)?;
        Ok(balance_ratio(t.len() as u64, t.count_ones()))
    }

    /// `|Pr[f=g] - Pr[f≠g]|` under the uniform distribution.
    pub fn correlation(&self, other: &Self) -> Result<BigRational> {
        self.correlation_capped(other, &Caps::default())
    }

    pub fn correlation_capped(&self, other: &Self, caps: &Caps) -> Result<BigRational> {
        check_same(self, other)?;
        let d = self.truth_table_capped(caps)?.distance(&other.truth_table_capped(caps)?)?;
        Ok(balance_ratio(1u64 << self.n_vars, d))
    }

    /// `x -> f(x + v)`.
    pub fn shift(&self, v: u64) -> Result<Self> {
        self.check_point(v)?;
        let mut ms = Vec::new();
        for &m in &self.monomials {
            let w = m & v;
            let base = m & !w;
            for u in submasks(w) {
                ms.push(base | u);
            }
        }
        ms.sort_unstable();
        Ok(MultilinearPoly {
            n_vars: self.n_vars,
            monomials: cancel_sorted(ms),
        })
    }

    /// `x -> f(x + v) + f(x)`.
    pub fn derivative(&self, v: u64) -> Result<Self> {
        self.check_point(v)?;
        let mut ms = Vec::new();
        for &m in &self.monomials {
            let w = m & v;
            let base = m & !w;
            for u in submasks(w) {
                if u != w {
                    ms.push(base | u);
                }
            }
        }
        ms.sort_unstable();
        Ok(MultilinearPoly {
            n_vars: self.n_vars,
            monomials: cancel_sorted(ms),
        })
    }

    /// `f_S(x) = Σ_{T ⊆ S} f(x + Σ_{v ∈ T} v)`, computed as iterated derivatives.
    pub fn directional_derivative(&self, dirs: &[u64]) -> Result<Self> {
        self.directional_derivative_capped(dirs, &Caps::default())
    }

    pub fn directional_derivative_capped(&self, dirs: &[u64], caps: &Caps) -> Result<Self> {
        caps.check_dist(dirs.len())?;
        let mut f = self.clone();
        for &v in dirs {
            if f.is_zero() {
                self.check_point(v)?;
                continue;
            }
            f = f.derivative(v)?;
        }
        Ok(f)
    }

    /// True iff some monomial has exactly `r` variables.
    pub fn hits_degree(&self, r: usize) -> bool {
        self.monomials.iter().any(|m| m.count_ones() as usize == r)
    }

    /// True iff some monomial has at most `r` variables.
    pub fn hits_degree_at_most(&self, r: usize) -> bool {
        self.monomials.iter().any(|m| m.count_ones() as usize <= r)
    }

    /// `(low, high)` with `low` the monomials of size `<= r`.
    pub fn split_at_degree(&self, r: usize) -> (Self, Self) {
        let (low, high): (Vec<u64>, Vec<u64>) =
            self.monomials.iter().partition(|m| m.count_ones() as usize <= r);
        (
            MultilinearPoly {
                n_vars: self.n_vars,
                monomials: low,
            },
            MultilinearPoly {
                n_vars: self.n_vars,
                monomials: high,
            },
        )
    }

    /// The same polynomial viewed over `n_vars` variables (must cover its support).
    pub fn with_n_vars(&self, n_vars: usize) -> Result<Self> {
        Self::from_monomials(n_vars, self.monomials.iter().copied())
    }

    fn check_point(&self, v: u64) -> Result<()> {
        if v & !full_mask(self.n_vars) != 0 {
            return Err(Error::invalid(format!(
                "vector has coordinates outside {} variables",
                self.n_vars
            )));
        }
        Ok(())
    }
}

/// Random polynomial with every monomial of size `<= r` (constant included)
/// present independently with probability 1/2.
pub fn random_poly(n_vars: usize, r: usize, seed: u64) -> MultilinearPoly {
    random_poly_with(&mut ChaCha8Rng::seed_from_u64(seed), n_vars, r)
}

pub fn random_poly_with<R: Rng + ?Sized>(rng: &mut R, n_vars: usize, r: usize) -> MultilinearPoly {
    assert!(n_vars <= MAX_VARS);
    let mut ms: Vec<u64> = masks_up_to_weight(n_vars, r).filter(|_| rng.gen::<bool>()).collect();
    ms.sort_unstable();
    MultilinearPoly {
        n_vars,
        monomials: ms,
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let mut ms = self.monomials.clone();
        ms.sort_by_key(|&m| (m.count_ones(), m));
        for (i, m) in ms.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m == 0 {
                f.write_str("1")?;
                continue;
            }
            for (j, v) in bits_of(m).enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                write!(f, "x{}", v + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearPoly(n={}, {})", self.n_vars, self)
    }
}

/// Parse a point written as a bitstring, character `i` being coordinate `i`.
pub fn parse_point(s: &str, n: usize) -> Result<u64> {
    let s = s.trim();
    if s.len() != n {
        return Err(Error::invalid(format!("point {s:?} has length {}, expected {n}", s.len())));
    }
    if n > 64 {
        return Err(Error::invalid("points are limited to 64 coordinates"));
    }
    let mut x = 0;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => x |= 1 << i,
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("expected '0' or '1', found {c:?}"),
                })
            }
        }
    }
    Ok(x)
}

pub fn format_point(x: u64, n: usize) -> String {
    (0..n).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All submasks of `w`, including 0 and `w`.
pub(crate) fn submasks(w: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(w);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & w) };
        Some(cur)
    })
}

/// `|total - 2·ones| / total`.
pub(crate) fn balance_ratio(total: u64, ones: u64) -> BigRational {
    let diff = (total as i128 - 2 * ones as i128).abs();
    BigRational::new(BigInt::from(diff), BigInt::from(total))
}

fn cancel_sorted(sorted: Vec<u64>) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(sorted.len());
    for m in sorted {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}

fn check_same(a: &MultilinearPoly, b: &MultilinearPoly) -> Result<()> {
    if a.n_vars != b.n_vars {
        return Err(Error::MismatchedVars {
            left: a.n_vars,
            right: b.n_vars,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn p(s: &str, n: usize) -> MultilinearPoly {
        parse_poly(s, n).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    // Oracle: values by direct enumeration of the monomial sum.
    fn table_by_eval(f: &MultilinearPoly) -> Vec<bool> {
        (0..1u64 << f.n_vars()).map(|x| f.eval(x)).collect()
    }

    #[test]
    fn arithmetic_examples() {
        let f = p("x1 + x2*x3", 3);
        assert!(f.add(&f).unwrap().is_zero());
        assert_eq!(f.add(&MultilinearPoly::zero(3)).unwrap(), f);
        assert_eq!(p("x1", 2).add(&p("x1*x2", 2)).unwrap().monomials(), &[0b01, 0b11]);
        assert_eq!(f.multiply(&MultilinearPoly::one(3)).unwrap(), f);
        assert_eq!(p("x1", 1).multiply(&p("x1", 1)).unwrap(), p("x1", 1));
        let s = p("x1 + x2", 2);
        let sq = s.multiply(&s).unwrap();
        assert_eq!(table_by_eval(&sq), table_by_eval(&s));
        assert_eq!(sq, s);
        assert!(p("x1", 2).add(&p("x1", 3)).is_err());
    }

    #[test]
    fn substitution_examples() {
        let y = |s: &str, k| p(s, k);
        assert_eq!(p("x1", 1).substitute(&[y("x2", 2)]).unwrap(), y("x2", 2));
        assert_eq!(
            p("x1*x2", 2).substitute(&[y("x1", 1), y("x1", 1)]).unwrap(),
            y("x1", 1)
        );
        assert_eq!(
            p("x1 + x2", 2).substitute(&[y("x1", 2), y("x1 + x2", 2)]).unwrap(),
            y("x2", 2)
        );
        assert!(p("x1", 1).substitute(&[]).is_err());
        assert!(p("x1*x2", 2).substitute(&[y("x1", 1), y("x1", 2)]).is_err());
    }

    #[test]
    fn truth_table_examples() {
        assert_eq!(MultilinearPoly::zero(3).truth_table().unwrap().count_ones(), 0);
        assert_eq!(MultilinearPoly::one(3).truth_table().unwrap().count_ones(), 8);
        assert_eq!(p("x1*x2", 2).truth_table().unwrap().to_bitstring(), "0001");
        let caps = Caps {
            table_vars: 4,
            ..Caps::default()
        };
        assert!(MultilinearPoly::zero(5).truth_table_capped(&caps).unwrap_err().is_cap());
    }

    #[test]
    fn bias_and_correlation_examples() {
        assert_eq!(MultilinearPoly::zero(3).bias().unwrap(), BigRational::one());
        assert_eq!(p("x1", 2).bias().unwrap(), BigRational::zero());
        assert_eq!(p("x1*x2", 2).bias().unwrap(), rat(1, 2));
        let f = p("x1*x2 + x3", 3);
        assert_eq!(f.correlation(&f).unwrap(), BigRational::one());
        assert_eq!(f.correlation(&MultilinearPoly::zero(3)).unwrap(), f.bias().unwrap());
        assert_eq!(p("x1", 2).correlation(&p("x2", 2)).unwrap(), BigRational::zero());
    }

    #[test]
    fn derivative_examples() {
        let f = p("x1*x2 + x3", 3);
        assert_eq!(f.directional_derivative(&[]).unwrap(), f);
        assert_eq!(p("x1*x2", 2).directional_derivative(&[0b01]).unwrap(), p("x2", 2));
        assert_eq!(
            p("x1*x2*x3", 3).directional_derivative(&[0b001, 0b010]).unwrap(),
            p("x3", 3)
        );
        assert_eq!(p("x1*x2", 2).shift(0b11).unwrap(), p("x1*x2 + x1 + x2 + 1", 2));
    }

    #[test]
    fn degree_predicates() {
        assert!(MultilinearPoly::one(2).hits_degree(0));
        let f = p("x1*x2 + x3", 3);
        assert!(f.hits_degree(2) && f.hits_degree(1) && !f.hits_degree(3));
        assert!(!MultilinearPoly::zero(3).hits_degree(0));
        assert!(!MultilinearPoly::zero(3).hits_degree_at_most(3));
        let (lo, hi) = p("x1 + x1*x2*x3", 3).split_at_degree(1);
        assert_eq!((lo, hi), (p("x1", 3), p("x1*x2*x3", 3)));
        let g = p("x1 + x2*x3", 3);
        assert_eq!(g.split_at_degree(2), (g.clone(), MultilinearPoly::zero(3)));
    }

    #[test]
    fn random_poly_basics() {
        assert_eq!(random_poly(8, 2, 7), random_poly(8, 2, 7));
        let c = random_poly(5, 0, 3);
        assert!(c.is_constant());
        assert!(random_poly(6, 2, 1).degree().unwrap_or(0) <= 2);
    }

    #[test]
    fn display_round_trips() {
        let f = p("x3*x1 + 1 + x2 + x1*x2*x3", 3);
        assert_eq!(f.to_string(), "1 + x2 + x1*x3 + x1*x2*x3");
        assert_eq!(p(&f.to_string(), 3), f);
        assert_eq!(MultilinearPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("01", 2).unwrap(), 0b10);
        assert_eq!(format_point(0b10, 2), "01");
        assert!(parse_point("0", 2).is_err());
    }
}
