//! Exact rational scalars and their text form.
//!
//! All linear algebra in this crate is exact: scalars are arbitrary-precision
//! rationals, kept in lowest terms with a positive denominator (the invariant
//! maintained by [`num_rational::BigRational`] itself).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Scalar = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("too many `/` in `{0}`")]
    TooManySlashes(String),
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a scalar.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    let mut parts = text.split('/');
    let numer = parts.next().ok_or(ScalarParseError::Empty)?;
    let numer: BigInt = numer
        .trim()
        .parse()
        .map_err(|_| ScalarParseError::BadInteger(numer.to_string()))?;
    let denom: BigInt = match parts.next() {
        None => BigInt::one(),
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| ScalarParseError::BadInteger(d.to_string()))?,
    };
    if parts.next().is_some() {
        return Err(ScalarParseError::TooManySlashes(text.to_string()));
    }
    if denom.is_zero() {
        return Err(ScalarParseError::ZeroDenominator(text.to_string()));
    }
    Ok(BigRational::new(numer, denom))
}

/// Renders a scalar as `"p"` or `"p/q"`, the inverse of [`parse_scalar`].
pub fn scalar_to_string(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// `(-1)^k` as a scalar-multiplying sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sign(pub bool); // true = negative

impl Sign {
    pub const PLUS: Sign = Sign(false);
    pub const MINUS: Sign = Sign(true);

    pub fn from_parity(k: usize) -> Sign {
        Sign(k % 2 == 1)
    }

    pub fn compose(self, other: Sign) -> Sign {
        Sign(self.0 ^ other.0)
    }

    pub fn apply(self, s: Scalar) -> Scalar {
        if self.0 {
            -s
        } else {
            s
        }
    }

    pub fn as_scalar(self) -> Scalar {
        let one = Scalar::one();
        if self.0 {
            -one
        } else {
            one
        }
    }
}

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_scalar("3").unwrap(), scalar(3));
        assert_eq!(parse_scalar("-2").unwrap(), scalar(-2));
        assert_eq!(parse_scalar("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_scalar(" -6/8 ").unwrap(), ratio(-3, 4));
        assert_eq!(parse_scalar("4/-6").unwrap(), ratio(-2, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        assert_eq!(parse_scalar("1/0"), Err(ScalarParseError::ZeroDenominator("1/0".into())));
        assert!(matches!(parse_scalar(""), Err(ScalarParseError::Empty)));
        assert!(matches!(parse_scalar("a/2"), Err(ScalarParseError::BadInteger(_))));
        assert!(matches!(parse_scalar("1/2/3"), Err(ScalarParseError::TooManySlashes(_))));
    }

    #[test]
    fn round_trips_canonical_form() {
        for text in ["0", "5", "-5", "1/3", "-7/11"] {
            assert_eq!(scalar_to_string(&parse_scalar(text).unwrap()), text);
        }
        // Normalization: positive denominator, lowest terms.
        assert_eq!(scalar_to_string(&parse_scalar("2/-4").unwrap()), "-1/2");
    }

    #[test]
    fn signs_compose() {
        assert_eq!(Sign::from_parity(3), Sign::MINUS);
        assert_eq!(Sign::MINUS.compose(Sign::MINUS), Sign::PLUS);
        assert_eq!(Sign::MINUS.apply(scalar(2)), scalar(-2));
        assert!(Sign::from_parity(4).apply(scalar(1)).is_positive());
    }
}
