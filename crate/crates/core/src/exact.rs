//! Helpers for exact rationals: text form and conversion to floats.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn half() -> BigRational {
    ratio(1, 2)
}

/// `2^-e`.
pub fn pow2_neg(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << e as usize)
}

/// Always `num/den`, integers included (`1/1`).
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::invalid(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let l = log2_abs(q);
        let s = if q.is_negative() { -1.0 } else { 1.0 };
        s * l.exp2()
    })
}

/// `log2 |q|`, accurate even when numerator and denominator overflow `f64`.
pub fn log2_abs(q: &BigRational) -> f64 {
    log2_big(q.numer().magnitude()) - log2_big(q.denom().magnitude())
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 60 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 60;
    (x >> shift as usize).to_f64().unwrap().log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(fmt_rational(&ratio(2, 4)), "1/2");
        assert_eq!(fmt_rational(&ratio(1, 1)), "1/1");
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("1").unwrap(), ratio(1, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }

    #[test]
    fn logs() {
        assert_eq!(log2_abs(&ratio(1, 8)), -3.0);
        let tiny = pow2_neg(2000);
        assert!((log2_abs(&tiny) + 2000.0).abs() < 1e-9);
        assert_eq!(to_f64(&ratio(3, 4)), 0.75);
    }
}
