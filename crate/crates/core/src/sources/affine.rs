use rand::Rng;

use super::ExactDistribution;
use crate::combinatorics::bits_of;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::f2poly::{full_mask, rank_u64, MultilinearPoly};

/// `shift + span(basis)` inside `{0,1}^n`, with an independent basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineSubspace {
    n: usize,
    shift: u64,
    basis: Vec<u64>,
}

impl AffineSubspace {
    pub fn new(n: usize, shift: u64, basis: Vec<u64>) -> Result<Self> {
        if n > 64 {
            return Err(Error::invalid("at most 64 coordinates"));
        }
        let mask = full_mask(n);
        if shift & !mask != 0 || basis.iter().any(|v| v & !mask != 0) {
            return Err(Error::invalid(format!("vector outside {{0,1}}^{n}")));
        }
        if rank_u64(&basis) != basis.len() {
            return Err(Error::precondition("basis vectors are linearly dependent"));
        }
        Ok(AffineSubspace { n, shift, basis })
    }

    pub fn linear(n: usize, basis: Vec<u64>) -> Result<Self> {
        Self::new(n, 0, basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `shift + Σ_{j : bit j of c} basis[j]`.
    pub fn point(&self, c: u64) -> u64 {
        bits_of(c).fold(self.shift, |x, j| x ^ self.basis[j])
    }

    /// All `2^dim` points in coefficient order.
    pub fn points(&self, caps: &Caps) -> Result<Vec<u64>> {
        caps.check_dist(self.dim())?;
        Ok((0..1u64 << self.dim()).map(|c| self.point(c)).collect())
    }

    pub fn contains(&self, x: u64) -> bool {
        let mut v = x ^ self.shift;
        for row in self.reduced().0 {
            if v >> row.trailing_zeros() & 1 == 1 {
                v ^= row;
            }
        }
        v == 0
    }

    pub fn exact_distribution(&self, caps: &Caps) -> Result<ExactDistribution> {
        ExactDistribution::uniform_over(self.n, self.points(caps)?)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let c = if self.dim() == 0 { 0 } else { rng.gen::<u64>() & full_mask(self.dim()) };
        self.point(c)
    }

    /// Largest number of basis vectors with a 1 in any one coordinate.
    pub fn locality(&self) -> usize {
        column_weights(self.n, &self.basis).into_iter().max().unwrap_or(0)
    }

    /// Reduced row echelon rows with pivots at their lowest set bit, sorted by pivot.
    fn reduced(&self) -> (Vec<u64>, Vec<usize>) {
        let mut rows: Vec<u64> = Vec::new();
        for &v in &self.basis {
            let mut r = v;
            for &b in &rows {
                if r >> b.trailing_zeros() & 1 == 1 {
                    r ^= b;
                }
            }
            debug_assert!(r != 0);
            let p = r.trailing_zeros();
            for b in &mut rows {
                if *b >> p & 1 == 1 {
                    *b ^= r;
                }
            }
            rows.push(r);
        }
        rows.sort_by_key(|r| r.trailing_zeros());
        let pivots = rows.iter().map(|r| r.trailing_zeros() as usize).collect();
        (rows, pivots)
    }

    /// Pivot coordinates and an affine expression of every coordinate in the
    /// pivot values `z_j = x_{pivots[j]}`.
    pub fn canonical_form(&self) -> CanonicalForm {
        let (rows, pivots) = self.reduced();
        let dim = rows.len();
        let mut coordinates = Vec::with_capacity(self.n);
        for c in 0..self.n {
            // x_c = shift_c + Σ_j rows[j]_c (z_j + shift_{p_j})
            let mut constant = self.shift >> c & 1 == 1;
            let mut mask = 0u64;
            for (j, r) in rows.iter().enumerate() {
                if r >> c & 1 == 1 {
                    mask |= 1 << j;
                    constant ^= self.shift >> pivots[j] & 1 == 1;
                }
            }
            coordinates.push(MultilinearPoly::linear(dim, mask, constant));
        }
        CanonicalForm { pivots, coordinates }
    }
}

/// Output of [`AffineSubspace::canonical_form`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalForm {
    /// 0-based pivot coordinates, ascending.
    pub pivots: Vec<usize>,
    /// One degree-≤1 polynomial over `dim` variables per coordinate.
    pub coordinates: Vec<MultilinearPoly>,
}

impl CanonicalForm {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// The point with pivot values `z`.
    pub fn point(&self, z: u64) -> u64 {
        self.coordinates
            .iter()
            .enumerate()
            .fold(0, |x, (c, e)| x | (e.eval(z) as u64) << c)
    }

    /// `f` restricted to the subspace, as a polynomial in the pivot values.
    pub fn restrict(&self, f: &MultilinearPoly) -> Result<MultilinearPoly> {
        f.substitute(&self.coordinates)
    }
}

pub fn affine_canonical_form(sub: &AffineSubspace) -> CanonicalForm {
    sub.canonical_form()
}

/// Number of vectors with a 1 at each coordinate.
pub fn column_weights(n: usize, vectors: &[u64]) -> Vec<usize> {
    (0..n).map(|i| vectors.iter().filter(|v| *v >> i & 1 == 1).count()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2poly::parse_point;
    use std::collections::BTreeSet;

    fn pt(s: &str) -> u64 {
        parse_point(s, s.len()).unwrap()
    }

    fn check_round_trip(sub: &AffineSubspace) {
        let cf = sub.canonical_form();
        let direct: BTreeSet<u64> = sub.points(&Caps::default()).unwrap().into_iter().collect();
        let via: BTreeSet<u64> = (0..1u64 << cf.dim()).map(|z| cf.point(z)).collect();
        assert_eq!(direct, via);
        for z in 0..1u64 << cf.dim() {
            let x = cf.point(z);
            for (j, &p) in cf.pivots.iter().enumerate() {
                assert_eq!(x >> p & 1, z >> j & 1);
            }
        }
    }

    #[test]
    fn canonical_examples() {
        let s = AffineSubspace::linear(3, vec![pt("100"), pt("010")]).unwrap();
        let cf = s.canonical_form();
        assert_eq!(cf.pivots, vec![0, 1]);
        assert!(cf.coordinates[2].is_zero());

        // span {000, 110, 011, 101}: every point has even weight, so x3 = x1 + x2
        let s = AffineSubspace::linear(3, vec![pt("110"), pt("011")]).unwrap();
        let cf = s.canonical_form();
        assert_eq!(cf.pivots, vec![0, 1]);
        assert_eq!(cf.coordinates[2], crate::parse_poly("x1 + x2", 2).unwrap());
        check_round_trip(&s);

        let s = AffineSubspace::new(3, pt("100"), vec![pt("010")]).unwrap();
        let cf = s.canonical_form();
        assert_eq!(cf.pivots, vec![1]);
        assert!(cf.coordinates[0].is_one());
        assert!(cf.coordinates[2].is_zero());
        check_round_trip(&s);
    }

    #[test]
    fn shifted_round_trips() {
        let s = AffineSubspace::new(6, pt("101101"), vec![pt("110010"), pt("011001"), pt("000111")]).unwrap();
        check_round_trip(&s);
        let pts: BTreeSet<u64> = s.points(&Caps::default()).unwrap().into_iter().collect();
        for x in 0..64u64 {
            assert_eq!(s.contains(x), pts.contains(&x));
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        assert!(AffineSubspace::linear(3, vec![pt("110"), pt("011"), pt("101")]).is_err());
    }

    #[test]
    fn locality() {
        let s = AffineSubspace::linear(3, vec![pt("110"), pt("011")]).unwrap();
        assert_eq!(s.locality(), 2);
        assert_eq!(AffineSubspace::linear(3, vec![pt("100"), pt("001")]).unwrap().locality(), 1);
    }
}
