//! Nonnegative rationals in lowest terms with overflow-checked arithmetic.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let g = gcd(num, den);
        Ok(Rational { num: num / g, den: den / g })
    }

    pub fn integer(n: u64) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn checked_add(self, other: Rational) -> Result<Rational> {
        let g = gcd(self.den, other.den);
        let den = (self.den / g).checked_mul(other.den).ok_or(Error::Overflow("rational addition"))?;
        let lhs = self.num.checked_mul(other.den / g).ok_or(Error::Overflow("rational addition"))?;
        let rhs = other.num.checked_mul(self.den / g).ok_or(Error::Overflow("rational addition"))?;
        Rational::new(lhs.checked_add(rhs).ok_or(Error::Overflow("rational addition"))?, den)
    }

    pub fn checked_mul(self, other: Rational) -> Result<Rational> {
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        let num = (self.num / g1.max(1))
            .checked_mul(other.num / g2.max(1))
            .ok_or(Error::Overflow("rational multiplication"))?;
        let den = (self.den / g2.max(1))
            .checked_mul(other.den / g1.max(1))
            .ok_or(Error::Overflow("rational multiplication"))?;
        Rational::new(num, den)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_order() {
        let r = Rational::new(6, 4).unwrap();
        assert_eq!((r.num(), r.den()), (3, 2));
        assert!(Rational::new(5, 2).unwrap() > Rational::new(7, 3).unwrap());
        assert_eq!(Rational::new(4, 2).unwrap(), Rational::integer(2));
        assert!(Rational::new(1, 0).is_err());
        assert_eq!(r.to_string(), "3/2");
    }

    #[test]
    fn arithmetic_is_checked() {
        let half = Rational::new(1, 2).unwrap();
        let third = Rational::new(1, 3).unwrap();
        assert_eq!(half.checked_add(third).unwrap(), Rational::new(5, 6).unwrap());
        assert_eq!(half.checked_mul(third).unwrap(), Rational::new(1, 6).unwrap());
        let big = Rational::new(1, u64::MAX - 1).unwrap();
        let other = Rational::new(1, u64::MAX - 2).unwrap();
        assert_eq!(big.checked_add(other), Err(Error::Overflow("rational addition")));
    }
}
