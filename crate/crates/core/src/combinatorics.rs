//! Small counting and enumeration helpers over bitmask subsets.

use num_bigint::BigUint;
use num_traits::One;

/// `binom(n, k)` as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `binom(n, <= k)`, the size of a Hamming ball of radius `k` in `{0,1}^n`.
pub fn binomial_le(n: u64, k: u64) -> BigUint {
    (0..=k.min(n)).map(|i| binomial(n, i)).sum()
}

/// Saturating `u128` version of [`binomial_le`], for size estimates.
pub fn binomial_le_u128(n: u64, k: u64) -> u128 {
    u128::try_from(binomial_le(n, k)).unwrap_or(u128::MAX)
}

/// Iterator over the `k`-subsets of the given (ascending) positions, as bitmasks,
/// in lexicographic order of their sorted index lists.
#[derive(Clone, Debug)]
pub struct Combinations {
    positions: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(positions: Vec<usize>, k: usize) -> Self {
        let done = k > positions.len();
        Combinations {
            idx: (0..k).collect(),
            positions,
            done,
        }
    }

    /// `k`-subsets of `0..n`.
    pub fn of_range(n: usize, k: usize) -> Self {
        Self::new((0..n).collect(), k)
    }

    /// `k`-subsets of the set bits of `mask`.
    pub fn of_mask(mask: u64, k: usize) -> Self {
        Self::new(bits_of(mask).collect(), k)
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let mask = self.idx.iter().fold(0u64, |m, &i| m | 1 << self.positions[i]);
        // advance
        let n = self.positions.len();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn bits_of(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Lexicographic order on equal-weight supports: `a` precedes `b` when the
/// smallest index where they differ belongs to `a`.
pub fn support_lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// All masks of weight `<= r` over `n` bits, ordered by (weight, lex).
pub fn masks_up_to_weight(n: usize, r: usize) -> impl Iterator<Item = u64> {
    (0..=r.min(n)).flat_map(move |w| Combinations::of_range(n, w))
}

/// Deposit the low bits of `value` into the positions set in `mask` (software pdep).
pub fn deposit(value: u64, mask: u64) -> u64 {
    let mut out = 0;
    for (j, pos) in bits_of(mask).enumerate() {
        if value >> j & 1 == 1 {
            out |= 1 << pos;
        }
    }
    out
}

/// Gather the bits of `x` at the positions set in `mask` into the low bits (software pext).
pub fn extract(x: u64, mask: u64) -> u64 {
    let mut out = 0;
    for (j, pos) in bits_of(mask).enumerate() {
        out |= (x >> pos & 1) << j;
    }
    out
}

/// SplitMix64 step, used to derive independent per-trial seeds from one run seed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 2), BigUint::from(28u32));
        assert_eq!(binomial_le(8, 2), BigUint::from(37u32));
        assert_eq!(binomial_le(4, 9), BigUint::from(16u32));
        assert_eq!(binomial(3, 5), BigUint::default());
    }

    #[test]
    fn combinations_are_lex() {
        let got: Vec<u64> = Combinations::of_range(4, 2).collect();
        // [0,1] [0,2] [0,3] [1,2] [1,3] [2,3]
        assert_eq!(got, vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        assert_eq!(Combinations::of_range(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(Combinations::of_range(2, 3).count(), 0);
        assert_eq!(Combinations::of_mask(0b1010, 1).collect::<Vec<_>>(), vec![0b0010, 0b1000]);
    }

    #[test]
    fn lex_order_matches_combinations() {
        let all: Vec<u64> = Combinations::of_range(6, 3).collect();
        for w in all.windows(2) {
            assert!(support_lex_less(w[0], w[1]));
            assert!(!support_lex_less(w[1], w[0]));
        }
    }

    #[test]
    fn deposit_extract_roundtrip() {
        let mask = 0b1011_0010;
        for v in 0..16 {
            assert_eq!(extract(deposit(v, mask), mask), v);
        }
    }
}
