//! Exact rational scalars and their reduced `p/q` text form.
//!
//! No floating point appears anywhere in this crate; every scalar is a
//! [`Q`] and every scalar in a report is printed with [`format_q`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, the scalar type of the whole crate.
pub type Q = num_rational::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Render as a reduced fraction: `3/4`, `-1/2`, or plain `7` for integers.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p/q` or a bare integer `p`; rejects zero denominators.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::BadRational(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Q::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-1/2", "7", "0", "-13"] {
            let v = parse_q(s).unwrap();
            assert_eq!(format_q(&v), s);
        }
        assert_eq!(format_q(&parse_q("2/4").unwrap()), "1/2");
        assert_eq!(format_q(&parse_q(" 6/-4 ").unwrap()), "-3/2");
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a/b").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q("1.5").is_err());
    }
}
