//! Exact semiring arithmetic for the two weight domains used throughout the
//! crate: the Boolean semiring and the extended nonnegative rationals
//! (nonnegative rationals together with a `+inf` element).
//!
//! All rational arithmetic is exact. Values never mix domains inside one
//! expression; mixing is reported as an error rather than coerced.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which of the two supported semirings a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemiringKind {
    Boolean,
    Real,
}

impl fmt::Display for SemiringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringKind::Boolean => write!(f, "bool"),
            SemiringKind::Real => write!(f, "real"),
        }
    }
}

/// An extended nonnegative rational: a finite value in lowest terms, or +inf.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    Finite(BigRational),
    Infinity,
}

impl ExtRat {
    /// Builds a finite value, rejecting negatives.
    pub fn finite(value: BigRational) -> Result<Self, SemiringError> {
        if value.is_negative() {
            Err(SemiringError::Negative(value.to_string()))
        } else {
            Ok(ExtRat::Finite(value))
        }
    }

    /// Convenience constructor from an integer numerator and denominator.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self, SemiringError> {
        if den == 0 {
            return Err(SemiringError::ZeroDenominator);
        }
        ExtRat::finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        ExtRat::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtRat::Finite(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(r) if r.is_zero())
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinity => None,
        }
    }

    fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtRat::Infinity, _) | (_, ExtRat::Infinity) => ExtRat::Infinity,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        // 0 ⊗ ∞ = 0: the additive identity must annihilate.
        match (self, other) {
            (a, b) if a.is_zero() || b.is_zero() => ExtRat::zero(),
            (ExtRat::Infinity, _) | (_, ExtRat::Infinity) => ExtRat::Infinity,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a * b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", r),
            ExtRat::Infinity => write!(f, "inf"),
        }
    }
}

/// A weight in one of the two semirings.
///
/// `Bool` carries disjunction/conjunction; `ExtRat` carries exact rational
/// addition/multiplication with an absorbing infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemiringValue {
    Bool(bool),
    ExtRat(ExtRat),
}

impl SemiringValue {
    pub fn kind(&self) -> SemiringKind {
        match self {
            SemiringValue::Bool(_) => SemiringKind::Boolean,
            SemiringValue::ExtRat(_) => SemiringKind::Real,
        }
    }

    pub fn zero(kind: SemiringKind) -> Self {
        match kind {
            SemiringKind::Boolean => SemiringValue::Bool(false),
            SemiringKind::Real => SemiringValue::ExtRat(ExtRat::zero()),
        }
    }

    pub fn one(kind: SemiringKind) -> Self {
        match kind {
            SemiringKind::Boolean => SemiringValue::Bool(true),
            SemiringKind::Real => SemiringValue::ExtRat(ExtRat::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SemiringValue::Bool(b) => !b,
            SemiringValue::ExtRat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            SemiringValue::Bool(b) => *b,
            SemiringValue::ExtRat(ExtRat::Finite(r)) => r.is_one(),
            SemiringValue::ExtRat(ExtRat::Infinity) => false,
        }
    }

    /// Convenience constructor for a finite rational weight.
    pub fn rational(num: i64, den: i64) -> Self {
        SemiringValue::ExtRat(ExtRat::from_ratio(num, den).expect("valid ratio"))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            SemiringValue::Bool(b) => Some(*b),
            SemiringValue::ExtRat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            SemiringValue::ExtRat(ExtRat::Finite(r)) => Some(r),
            _ => None,
        }
    }

    /// Semiring addition: disjunction over booleans, exact sum over
    /// rationals with absorbing infinity.
    pub fn add(&self, other: &Self) -> Result<Self, SemiringError> {
        match (self, other) {
            (SemiringValue::Bool(a), SemiringValue::Bool(b)) => Ok(SemiringValue::Bool(*a || *b)),
            (SemiringValue::ExtRat(a), SemiringValue::ExtRat(b)) => {
                Ok(SemiringValue::ExtRat(a.add(b)))
            }
            (a, b) => Err(SemiringError::Mismatch {
                left: a.kind(),
                right: b.kind(),
            }),
        }
    }

    /// Semiring multiplication: conjunction over booleans, exact product
    /// over rationals with 0 ⊗ ∞ = 0.
    pub fn mul(&self, other: &Self) -> Result<Self, SemiringError> {
        match (self, other) {
            (SemiringValue::Bool(a), SemiringValue::Bool(b)) => Ok(SemiringValue::Bool(*a && *b)),
            (SemiringValue::ExtRat(a), SemiringValue::ExtRat(b)) => {
                Ok(SemiringValue::ExtRat(a.mul(b)))
            }
            (a, b) => Err(SemiringError::Mismatch {
                left: a.kind(),
                right: b.kind(),
            }),
        }
    }
}

impl fmt::Display for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringValue::Bool(true) => write!(f, "true"),
            SemiringValue::Bool(false) => write!(f, "false"),
            SemiringValue::ExtRat(r) => write!(f, "{}", r),
        }
    }
}

/// Weight literal grammar: `INT ("/" INT)? | "inf" | "true" | "false"`.
impl FromStr for SemiringValue {
    type Err = SemiringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "true" => return Ok(SemiringValue::Bool(true)),
            "false" => return Ok(SemiringValue::Bool(false)),
            "inf" => return Ok(SemiringValue::ExtRat(ExtRat::Infinity)),
            _ => {}
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| SemiringError::BadLiteral(s.to_string()))?;
        let den: BigInt = match den {
            Some(d) => d
                .parse()
                .map_err(|_| SemiringError::BadLiteral(s.to_string()))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(SemiringError::ZeroDenominator);
        }
        let r = BigRational::new(num, den);
        ExtRat::finite(r).map(SemiringValue::ExtRat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemiringError {
    /// Two operands from different semirings met in one expression.
    Mismatch {
        left: SemiringKind,
        right: SemiringKind,
    },
    Negative(String),
    ZeroDenominator,
    BadLiteral(String),
}

impl fmt::Display for SemiringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringError::Mismatch { left, right } => {
                write!(f, "semiring mismatch: {} vs {}", left, right)
            }
            SemiringError::Negative(v) => write!(f, "negative weight {} not allowed", v),
            SemiringError::ZeroDenominator => write!(f, "zero denominator in weight"),
            SemiringError::BadLiteral(s) => write!(f, "cannot parse weight literal `{}`", s),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SemiringError {}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> SemiringValue {
        SemiringValue::rational(n, d)
    }

    fn inf() -> SemiringValue {
        SemiringValue::ExtRat(ExtRat::Infinity)
    }

    #[test]
    fn boolean_tables() {
        let t = SemiringValue::Bool(true);
        let f = SemiringValue::Bool(false);
        assert_eq!(f.add(&t).unwrap(), t);
        assert_eq!(t.mul(&t).unwrap(), t);
        assert_eq!(t.mul(&f).unwrap(), f);
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(rat(1, 2).add(&rat(1, 4)).unwrap(), rat(3, 4));
        assert_eq!(rat(1, 2).mul(&rat(3, 4)).unwrap(), rat(3, 8));
    }

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(inf().add(&rat(5, 3)).unwrap(), inf());
    }

    #[test]
    fn zero_annihilates_infinity() {
        assert_eq!(rat(0, 1).mul(&inf()).unwrap(), rat(0, 1));
        assert_eq!(inf().mul(&rat(0, 1)).unwrap(), rat(0, 1));
    }

    #[test]
    fn mismatch_is_an_error() {
        let err = SemiringValue::Bool(true).add(&rat(1, 2)).unwrap_err();
        assert!(matches!(err, SemiringError::Mismatch { .. }));
    }

    #[test]
    fn literal_round_trip() {
        for text in ["true", "false", "inf", "3", "1/2", "7/3"] {
            let v: SemiringValue = text.parse().unwrap();
            assert_eq!(alloc::format!("{}", v), text);
        }
        assert!("1/0".parse::<SemiringValue>().is_err());
        assert!("-1/2".parse::<SemiringValue>().is_err());
        assert!("x".parse::<SemiringValue>().is_err());
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(alloc::format!("{}", rat(2, 4)), "1/2");
        assert_eq!(alloc::format!("{}", rat(6, 3)), "2");
    }
}
