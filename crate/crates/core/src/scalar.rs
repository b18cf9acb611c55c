//! Exact rational scalars.
//!
//! Every coefficient in this crate is a `BigRational` kept in lowest terms
//! with positive denominator; no floating point appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses coefficient text of the form `"p"` or `"p/q"`.
pub fn parse_scalar(text: &str) -> Result<Scalar, Error> {
    let bad = || Error::Parse(format!("invalid rational literal {text:?}"));
    let mut parts = text.splitn(2, '/');
    let num: BigInt = parts
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let den: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Renders a scalar as `"p"` or `"p/q"`, the inverse of [`parse_scalar`].
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Sign of a Koszul transposition of elements with degrees `p` and `q`.
pub fn koszul_sign(p: i64, q: i64) -> Scalar {
    if (p * q) % 2 == 0 {
        scalar(1)
    } else {
        scalar(-1)
    }
}

pub fn is_negative(s: &Scalar) -> bool {
    s.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for text in ["3", "-7", "1/2", "-22/7", "0"] {
            let s = parse_scalar(text).unwrap();
            assert_eq!(format_scalar(&s), text);
        }
        assert_eq!(parse_scalar(" 4 / 6 ").unwrap(), frac(2, 3));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn koszul_signs() {
        assert_eq!(koszul_sign(3, 3), scalar(-1));
        assert_eq!(koszul_sign(2, 4), scalar(1));
        assert_eq!(koszul_sign(2, 3), scalar(1));
    }
}
