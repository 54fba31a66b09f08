//! Scalar fields the algebra is generic over.
//!
//! Everything above this module is written against [`Scalar`]. Exact work uses
//! [`BigRational`]; [`Rational64`] is a faster exact alternative for small
//! instances and `f64` is available for exploratory runs, where zero tests are
//! tolerance based and results carry no exactness guarantee.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + fmt::Debug + PartialEq + Num + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    fn from_bigint(n: &BigInt) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    /// Exact rational value, when one exists.
    fn to_rational(&self) -> Option<BigRational>;

    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool;

    /// Zero test used for pivoting. Exact types only accept true zero.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    /// Canonical text form: `p/q` (or `p` for integers) for exact types.
    fn to_exact_string(&self) -> String;
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn is_exact() -> bool {
        true
    }

    fn to_exact_string(&self) -> String {
        format_ratio(self)
    }
}

impl Scalar for Rational64 {
    fn from_bigint(n: &BigInt) -> Self {
        Rational64::from_integer(n.to_i64().expect("integer does not fit in Rational64"))
    }

    fn from_rational(q: &BigRational) -> Self {
        let num = q.numer().to_i64().expect("numerator does not fit in Rational64");
        let den = q.denom().to_i64().expect("denominator does not fit in Rational64");
        Rational64::new(num, den)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(BigRational::new((*self.numer()).into(), (*self.denom()).into()))
    }

    fn is_exact() -> bool {
        true
    }

    fn to_exact_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Relative size below which an `f64` is treated as zero.
pub const F64_NEGLIGIBLE: f64 = 1e-9;

impl Scalar for f64 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn is_exact() -> bool {
        false
    }

    fn is_negligible(&self) -> bool {
        self.abs() < F64_NEGLIGIBLE
    }

    fn to_exact_string(&self) -> String {
        format!("{self}")
    }
}

pub fn format_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a rational number (expected \"p\" or \"p/q\")")]
pub struct ParseRationalError(pub String);

/// Parses `"p"` or `"p/q"` into a reduced rational. Decimal notation is
/// rejected so that no float ever leaks into an exact computation.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Smallest positive integer multiple of a rational vector that is integral
/// and primitive. Returns the input unchanged if it is zero.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if gcd.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|n| !n.is_zero())
        .map(|n| if n.is_negative() { -BigInt::one() } else { BigInt::one() })
        .unwrap_or_else(BigInt::one);
    ints.into_iter().map(|n| n / &gcd * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rational("17/3").unwrap(), BigRational::new(17.into(), 3.into()));
        assert_eq!(parse_rational(" -4 ").unwrap(), BigRational::from_integer((-4).into()));
        assert_eq!(parse_rational("2/4").unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn parse_rejects_decimals_and_zero_denominators() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn exact_strings_round_trip() {
        for s in ["0", "1", "-3/2", "17/3"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(q.to_exact_string(), s);
            let small = Rational64::from_rational(&q);
            assert_eq!(small.to_exact_string(), s);
        }
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let v = vec![BigRational::new(1.into(), 2.into()), BigRational::from_integer(1.into())];
        assert_eq!(primitive_integer_vector(&v), vec![BigInt::from(1), BigInt::from(2)]);
        let w = vec![BigRational::from_integer((-2).into()), BigRational::from_integer((-4).into())];
        assert_eq!(primitive_integer_vector(&w), vec![BigInt::from(1), BigInt::from(2)]);
    }
}
