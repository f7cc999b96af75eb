use std::fmt::Debug;

use num::{BigInt, BigRational};
pub use num::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Renders a rational as `"p/q"`, or `"p"` when integral.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Commutative ring operations used by the generic polynomial and series
/// containers. Division is only required for units.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + Zero + One {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Multiplicative inverse, `None` for non-units.
    fn inv(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn scale(&self, q: &Rational) -> Self {
        self.times(&Self::from_rational(q))
    }
}

impl Ring for Rational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
}
