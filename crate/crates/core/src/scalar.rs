//! Exact scalar fields.
//!
//! Everything in the crate is generic over [`Field`]; floating point types do
//! not implement it on purpose, since dimensions computed with rounding are
//! worthless.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// An exact field of characteristic zero.
pub trait Field:
    Clone + Debug + PartialEq + Eq + Hash + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Converts a big rational, failing when it does not fit the representation.
    fn from_big(q: &BigRational) -> Option<Self>;

    fn to_big(&self) -> BigRational;

    /// Parses `p/q` or `p`, with optional sign.
    fn parse_q(s: &str) -> Option<Self> {
        parse_big(s).and_then(|q| Self::from_big(&q))
    }

    /// Serializes as `p/q` (the denominator is always printed).
    fn to_q_string(&self) -> String {
        let q = self.to_big();
        format!("{}/{}", q.numer(), q.denom())
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

pub fn parse_big(s: &str) -> Option<BigRational> {
    let s = s.trim().replace('\u{2212}', "-");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.as_str(), "1"),
    };
    let n: BigInt = n.strip_prefix('+').unwrap_or(n).parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn big_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_big(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

impl Field for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }
    fn from_big(q: &BigRational) -> Option<Self> {
        Some(Ratio::new(q.numer().to_i64()?, q.denom().to_i64()?))
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

pub(crate) fn sign<F: Field>(negative: bool) -> F {
    if negative {
        -F::one()
    } else {
        F::one()
    }
}

pub(crate) fn is_negative<F: Field>(x: &F) -> bool {
    x.to_big().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let q = BigRational::parse_q("-6/4").unwrap();
        assert_eq!(q.to_q_string(), "-3/2");
        assert_eq!(BigRational::parse_q("2").unwrap().to_q_string(), "2/1");
        assert!(BigRational::parse_q("1/0").is_none());
        assert!(BigRational::parse_q("x").is_none());
        let small = Ratio::<i64>::parse_q("5/10").unwrap();
        assert_eq!(small, Ratio::new(1, 2));
    }

    #[test]
    fn small_ratio_overflow_is_reported() {
        let huge = parse_big("100000000000000000000000/1").unwrap();
        assert!(Ratio::<i64>::from_big(&huge).is_none());
    }
}
