use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::AlgebraError;

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator. The only scalar type used anywhere in the crate.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"7"`, `"-3/4"` or `" 2 / 6 "` into a reduced fraction.
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let text = text.trim();
    let bad = || AlgebraError::Input(format!("not a rational literal: `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(AlgebraError::Input(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

/// Exact square root when `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q < &Rational::zero() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("2/6").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(" -3 / 4 ").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("5").unwrap(), rat(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn denominator_is_positive() {
        let q = ratio(3, -6);
        assert_eq!(q.numer(), &BigInt::from(-1));
        assert_eq!(q.denom(), &BigInt::from(2));
    }

    #[test]
    fn sqrt_of_squares_only() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&rat(2)), None);
        assert_eq!(rational_sqrt(&rat(-4)), None);
    }
}

/// JSON form of a rational: an integer or a string such as `"-3/4"`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Int(i64),
    Text(String),
}

impl RationalInput {
    pub fn value(&self) -> Result<Rational, AlgebraError> {
        match self {
            RationalInput::Int(n) => Ok(rat(*n)),
            RationalInput::Text(s) => parse_rational(s),
        }
    }
}

impl From<&Rational> for RationalInput {
    fn from(q: &Rational) -> Self {
        RationalInput::Text(q.to_string())
    }
}

impl Default for RationalInput {
    fn default() -> Self {
        RationalInput::Int(0)
    }
}
