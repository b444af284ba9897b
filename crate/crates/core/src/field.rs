//! Exact valued coefficients: finite formal sums of rational powers of a
//! uniformizer `t` with rational coefficients. The valuation is the least
//! exponent present, so `val(ab) = val(a) + val(b)` and nonzero integers
//! have valuation 0.

use crate::rat::{format_rat, parse_rat, rat_int, ExtRat, Rat};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A finite sum `Σ q_e · t^e` with `q_e ∈ ℚ`, `e ∈ ℚ`, keyed by exponent.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coeff {
    terms: BTreeMap<Rat, Rat>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Coeff::from_rat(rat_int(1))
    }

    pub fn from_rat(q: Rat) -> Self {
        Coeff::term(q, rat_int(0))
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::from_rat(rat_int(n))
    }

    /// The single term `q · t^e`.
    pub fn term(q: Rat, e: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(e, q);
        }
        Coeff { terms }
    }

    /// `t^e`.
    pub fn t_pow(e: Rat) -> Self {
        Coeff::term(rat_int(1), e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Rat, Rat> {
        &self.terms
    }

    /// The valuation: least exponent with a nonzero coefficient; `∞` for 0.
    pub fn val(&self) -> ExtRat {
        match self.terms.keys().next() {
            Some(e) => ExtRat::Finite(e.clone()),
            None => ExtRat::Infinity,
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let mut terms = self.terms.clone();
        for (e, q) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += q;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Coeff { terms }
    }

    pub fn neg(&self) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(e, q)| (e.clone(), -q.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        let mut terms: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (e1, q1) in &self.terms {
            for (e2, q2) in &other.terms {
                let e = e1 + e2;
                let entry = terms.entry(e.clone()).or_insert_with(Rat::zero);
                *entry += q1 * q2;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        Coeff { terms }
    }

    pub fn scale(&self, q: &Rat) -> Coeff {
        if q.is_zero() {
            return Coeff::zero();
        }
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * q))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Coeff {
        let mut out = Coeff::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Parse from the display syntax: terms `q`, `t^e`, or `q*t^e` joined by
    /// `+` / `-` (e.g. `"1/2*t^3 - t + 2"`); `e` may be a fraction.
    pub fn parse(input: &str) -> Option<Coeff> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "0" {
            return Some(Coeff::zero());
        }
        let mut out = Coeff::zero();
        let mut rest = s.as_str();
        let mut sign = rat_int(1);
        if let Some(r) = rest.strip_prefix('-') {
            sign = rat_int(-1);
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        while !rest.is_empty() {
            let bytes = rest.as_bytes();
            let end = (1..rest.len())
                .find(|&i| {
                    (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^'
                })
                .unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            let (q, e) = if let Some((qs, es)) = term.split_once("t^") {
                let qs = qs.strip_suffix('*').unwrap_or(qs);
                let q = if qs.is_empty() {
                    rat_int(1)
                } else {
                    parse_rat(qs)?
                };
                (q, parse_rat(es)?)
            } else if term == "t" {
                (rat_int(1), rat_int(1))
            } else if let Some(qs) = term.strip_suffix("*t") {
                (parse_rat(qs)?, rat_int(1))
            } else {
                (parse_rat(term)?, rat_int(0))
            };
            out = out.add(&Coeff::term(&q * &sign, e));
            match tail.chars().next() {
                Some('+') => {
                    sign = rat_int(1);
                    rest = &tail[1..];
                }
                Some('-') => {
                    sign = rat_int(-1);
                    rest = &tail[1..];
                }
                _ => rest = tail,
            }
        }
        Some(out)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, q)) in self.terms.iter().enumerate() {
            let mag = q.abs();
            if idx == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{}", format_rat(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", format_rat(&mag))?;
                }
                if e.is_one() {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{}", format_rat(e))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn valuation_laws() {
        let a = Coeff::t_pow(rat_int(2)).add(&Coeff::t_pow(rat(7, 2)));
        let b = Coeff::from_int(3).add(&Coeff::t_pow(rat_int(2)).neg());
        assert_eq!(a.val(), ExtRat::from_int(2));
        assert_eq!(b.val(), ExtRat::zero());
        assert_eq!(a.mul(&b).val(), a.val().add(&b.val()));
        assert_eq!(Coeff::zero().val(), ExtRat::Infinity);
        // Equal-valuation sum may cancel upward; distinct valuations cannot.
        let c = Coeff::t_pow(rat_int(2)).neg();
        assert_eq!(a.add(&c).val(), ExtRat::Finite(rat(7, 2)));
        assert_eq!(a.add(&b).val(), ExtRat::min(&a.val(), &b.val()));
    }

    #[test]
    fn ring_identities() {
        let a = Coeff::parse("1/2*t^3 - t + 2").unwrap();
        let b = Coeff::parse("t^1/2 + 1").unwrap();
        assert_eq!(a.sub(&a), Coeff::zero());
        assert_eq!(a.mul(&Coeff::one()), a);
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.pow(2), a.mul(&a));
        assert_eq!(
            a.add(&b).mul(&a),
            a.mul(&a).add(&b.mul(&a))
        );
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["0", "1", "-t", "1/2*t^3 - t + 2", "t^1/2 + 1", "-3*t^-1 + 5"] {
            let c = Coeff::parse(s).unwrap();
            assert_eq!(Coeff::parse(&c.to_string()).unwrap(), c, "{s}");
        }
    }
}
