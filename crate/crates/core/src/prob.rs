//! Exact probabilities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// Parses `p/q` (or an integer `0`/`1`) into a rational in `[0, 1]`; decimals are refused.
pub fn parse_probability(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Probability(format!("{s:?} is not a rational p/q in [0, 1]"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    let v = BigRational::new(p, q);
    check_probability(&v)?;
    Ok(v)
}

pub fn check_probability(p: &BigRational) -> Result<()> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::Probability(p.to_string()));
    }
    Ok(())
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn pow(p: &BigRational, k: usize) -> BigRational {
    Pow::pow(p, k as u32)
}

/// `1 - 2^{-k}`.
pub fn one_minus_half_pow(k: usize) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(2u8).pow(k as u32))
}

pub fn to_f64(p: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    p.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_probability("1/2").unwrap(), rational(1, 2));
        assert_eq!(parse_probability(" 3 / 4 ").unwrap(), rational(3, 4));
        assert_eq!(parse_probability("1").unwrap(), rational(1, 1));
        assert!(parse_probability("0.5").is_err());
        assert!(parse_probability("3/2").is_err());
        assert!(parse_probability("1/0").is_err());
        assert!(parse_probability("-1/2").is_err());
    }

    #[test]
    fn half_powers() {
        assert_eq!(one_minus_half_pow(4), rational(15, 16));
        assert_eq!(pow(&rational(1, 2), 3), rational(1, 8));
    }
}
