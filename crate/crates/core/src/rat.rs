//! Exact nonnegative rationals extended by a formal infinity.
//!
//! All coordinate arithmetic in this crate is exact: values are arbitrary
//! precision rationals, and the point at infinity is a separate symbol, never
//! a float. The conventions are the usual ones for the compactified
//! nonnegative half line: `0 * inf = 0`, `a * inf = inf` for `a != 0`, and a
//! finite sum is infinite iff some summand is.

use num::{BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(num.into())
}

/// An element of the compactified half line: a rational or `inf`.
///
/// Negative finite values are representable (they occur transiently in
/// affine-function arithmetic) but every geometric container validates
/// nonnegativity on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    Infinity,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        ExtRat::Finite(r)
    }

    pub fn from_int(n: i64) -> Self {
        ExtRat::Finite(rat_int(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            ExtRat::Finite(r) => !r.is_negative(),
            ExtRat::Infinity => true,
        }
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinity => None,
        }
    }

    pub fn add(&self, other: &ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Infinity,
        }
    }

    /// Multiplication with the convention `0 * inf = 0`.
    pub fn mul(&self, other: &ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a * b),
            (ExtRat::Finite(a), ExtRat::Infinity) | (ExtRat::Infinity, ExtRat::Finite(a)) => {
                if a.is_zero() {
                    ExtRat::zero()
                } else {
                    ExtRat::Infinity
                }
            }
            (ExtRat::Infinity, ExtRat::Infinity) => ExtRat::Infinity,
        }
    }

    /// Scale by a nonnegative integer, `0 * inf = 0`.
    pub fn mul_nat(&self, k: u64) -> ExtRat {
        self.mul(&ExtRat::from_int(k as i64))
    }

    pub fn min(&self, other: &ExtRat) -> ExtRat {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &ExtRat) -> ExtRat {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Infinity, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
        }
    }
}

/// Canonical string form: `p/q` in lowest terms, `p` when the denominator is
/// one, `inf` for infinity. This is the exchange format used everywhere.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = num::BigInt::from_str(p.trim()).ok()?;
            let q = num::BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p = num::BigInt::from_str(s).ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", format_rat(r)),
            ExtRat::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtRat::Infinity);
        }
        parse_rat(s)
            .map(ExtRat::Finite)
            .ok_or_else(|| format!("not a rational or `inf`: {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(ExtRat::zero().mul(&ExtRat::Infinity), ExtRat::zero());
        assert_eq!(ExtRat::Infinity.mul(&ExtRat::zero()), ExtRat::zero());
        assert_eq!(ExtRat::from_int(3).mul(&ExtRat::Infinity), ExtRat::Infinity);
    }

    #[test]
    fn infinity_dominates_sums_and_order() {
        assert_eq!(ExtRat::from_int(5).add(&ExtRat::Infinity), ExtRat::Infinity);
        assert!(ExtRat::Finite(rat(7, 2)) < ExtRat::Infinity);
        assert!(ExtRat::Finite(rat(1, 3)) < ExtRat::Finite(rat(1, 2)));
    }

    #[test]
    fn round_trip_strings() {
        for s in ["0", "7", "-3", "2/3", "inf"] {
            let v: ExtRat = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("4/6".parse::<ExtRat>().unwrap().to_string(), "2/3");
        assert!("1/0".parse::<ExtRat>().is_err());
        assert!("x".parse::<ExtRat>().is_err());
    }
}
