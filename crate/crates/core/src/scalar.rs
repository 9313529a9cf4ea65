//! The integer scalar abstraction used by the exact linear algebra.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// A Euclidean ring of exact integers.
///
/// Implemented for every type with the listed capabilities; in practice
/// `i64`, `i128` and [`num_bigint::BigInt`].
pub trait IntRing:
    Integer + Signed + Clone + Debug + Display + FromStr + FromPrimitive + ToPrimitive + Send + Sync
{
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("integer type cannot hold i64 value")
    }

    /// Euclidean quotient rounded to nearest, so that `|self - q*d| <= |d|/2`.
    fn nearest_quotient(&self, d: &Self) -> Self {
        let (q, r) = self.div_mod_floor(d);
        let two_r = r.clone() + r;
        // r carries the sign of d, so stepping q up shrinks |r|
        if two_r.abs() > d.abs() {
            q + Self::one()
        } else {
            q
        }
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl<T> IntRing for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
{
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn nearest_quotient_minimizes_remainder() {
        for a in -20i64..=20 {
            for d in [-7i64, -3, -2, 2, 3, 7] {
                let q = a.nearest_quotient(&d);
                assert!(2 * (a - q * d).abs() <= d.abs(), "a={a} d={d} q={q}");
                let qb = BigInt::from(a).nearest_quotient(&BigInt::from(d));
                assert_eq!(qb, BigInt::from(q));
            }
        }
    }
}
