//! Arc-weight arithmetic for Bellman-Ford.
//!
//! Most instances have small integer values, so exchange products fit in
//! machine words for the few rounds a search usually takes. [`Small`] does
//! exact fraction arithmetic in `i128` and reports overflow instead of
//! wrapping; callers then rerun the same search on [`Rational`].

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::rational::Rational;

pub(crate) trait Weight: Clone {
    fn unit() -> Self;
    /// `None` on overflow.
    fn times(&self, other: &Self) -> Option<Self>;
    /// `None` on overflow.
    fn below(&self, other: &Self) -> Option<bool>;
}

impl Weight for Rational {
    fn unit() -> Self {
        Rational::one()
    }

    fn times(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }

    fn below(&self, other: &Self) -> Option<bool> {
        Some(self < other)
    }
}

/// A reduced fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Small {
    num: i128,
    den: i128,
}

impl Small {
    /// Only weights whose parts fit in `i64` take the fast path.
    pub(crate) fn from_rational(r: &Rational) -> Option<Self> {
        let num = i128::from(r.numer().to_i64()?);
        let den = i128::from(r.denom().to_i64()?);
        Some(Small { num, den })
    }

    pub(crate) fn to_rational(self) -> Rational {
        Rational::new(self.num.into(), self.den.into())
    }
}

impl Weight for Small {
    fn unit() -> Self {
        Small { num: 1, den: 1 }
    }

    fn times(&self, other: &Self) -> Option<Self> {
        // Cross-cancel first so the products stay reduced and small.
        let g1 = self.num.gcd(&other.den).max(1);
        let g2 = other.num.gcd(&self.den).max(1);
        let num = (self.num / g1).checked_mul(other.num / g2)?;
        let den = (self.den / g2).checked_mul(other.den / g1)?;
        Some(Small { num, den })
    }

    fn below(&self, other: &Self) -> Option<bool> {
        let lhs = self.num.checked_mul(other.den)?;
        let rhs = other.num.checked_mul(self.den)?;
        Some(lhs.cmp(&rhs) == Ordering::Less)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn matches_exact_arithmetic() {
        let a = Small::from_rational(&ratio(-6, 35)).unwrap();
        let b = Small::from_rational(&ratio(14, 9)).unwrap();
        let p = a.times(&b).unwrap();
        assert_eq!(p.to_rational(), ratio(-6, 35) * ratio(14, 9));
        assert_eq!(p, Small { num: -4, den: 15 });
        assert_eq!(a.below(&b), Some(true));
        assert_eq!(b.below(&a), Some(false));
    }

    #[test]
    fn reports_overflow() {
        let big = Small::from_rational(&Rational::from_integer(i64::MAX.into())).unwrap();
        let sq = big.times(&big).unwrap();
        assert_eq!(sq.times(&big), None);
        let tiny = Small::from_rational(&ratio(1, i64::MAX)).unwrap();
        assert_eq!(sq.below(&tiny), None);
        assert!(
            Small::from_rational(&Rational::from_integer(i128::from(i64::MAX).pow(2).into()))
                .is_none()
        );
    }
}
