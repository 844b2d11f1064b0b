//! Exact scalar types.
//!
//! Everything that ends up in a certificate is an exact ordered-field value.
//! The LP kernel is generic over [`ExactField`]; the rest of the crate fixes the
//! scalar to [`Rational`](crate::Rational).

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};

/// An ordered field with exact arithmetic.
///
/// Only implemented for [`Ratio`] types: the pivoting rules rely on exact zero
/// tests, so floating point scalars are deliberately excluded.
pub trait ExactField:
    Clone + Debug + PartialOrd + Ord + Signed + num_traits::Num + Send + Sync
{
    fn from_i64(v: i64) -> Self;
}

impl<T> ExactField for Ratio<T>
where
    T: Clone + Integer + Signed + Debug + Send + Sync + From<i32> + TryFrom<i64>,
    <T as TryFrom<i64>>::Error: Debug,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::try_from(v).expect("integer does not fit the scalar type"))
    }
}

pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Formats a rational as a reduced `p/q` string (integers get `/1`).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, `p` or a finite decimal such as `-0.14` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let s = s.trim();
    let err = || ParseRationalError(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_int = if whole_abs.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole_abs).map_err(|_| err())?
        };
        let frac_int = BigInt::from_str(frac).map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = BigRational::new(whole_int * &scale + frac_int, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| err())
}

/// Nearest `f64` to a rational; used only for floating-point sampling parameters.
pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}
