//! Exact half-integer arithmetic.
//!
//! Twisting numbers and the index `l` of the nondestabilizeable family live
//! in (1/2)Z. Values are stored doubled so that all arithmetic stays in
//! `i64`; nothing in this crate ever touches floating point.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const NEG_HALF: HalfInt = HalfInt { doubled: -1 };

    pub fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    /// Half the sum of three integers; errors if the sum is odd are the
    /// caller's problem — this constructor is exact.
    pub fn half_of(n: i64) -> Self {
        HalfInt { doubled: n }
    }

    pub fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    /// The integer value, if this is an integer.
    pub fn as_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.doubled / 2)
        } else {
            None
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.doubled <= other.doubled {
            self
        } else {
            other
        }
    }

    /// Parses "2", "-1/2", "0.5", "-1.5".
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(format!("unsupported denominator in half-integer: {s}"));
            }
            let n: i64 = num
                .trim()
                .parse()
                .map_err(|_| format!("bad half-integer: {s}"))?;
            return Ok(HalfInt::from_doubled(n));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac != "5" && frac != "0" {
                return Err(format!("bad half-integer: {s}"));
            }
            let negative = int.starts_with('-');
            let whole: i64 = if int == "-" || int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| format!("bad half-integer: {s}"))?
            };
            let mut doubled = 2 * whole;
            if frac == "5" {
                doubled += if negative { -1 } else { 1 };
            }
            return Ok(HalfInt::from_doubled(doubled));
        }
        let n: i64 = s.parse().map_err(|_| format!("bad half-integer: {s}"))?;
        Ok(HalfInt::from_int(n))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: Self) -> Self {
        HalfInt::from_doubled(self.doubled + rhs.doubled)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: Self) -> Self {
        HalfInt::from_doubled(self.doubled - rhs.doubled)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> Self {
        HalfInt::from_doubled(-self.doubled)
    }
}

impl Add<i64> for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: i64) -> Self {
        HalfInt::from_doubled(self.doubled + 2 * rhs)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.doubled % 2 == 0 {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_forms() {
        assert_eq!(HalfInt::parse("2").unwrap(), HalfInt::from_int(2));
        assert_eq!(HalfInt::parse("-1/2").unwrap(), HalfInt::from_doubled(-1));
        assert_eq!(HalfInt::parse("0.5").unwrap(), HalfInt::from_doubled(1));
        assert_eq!(HalfInt::parse("-1.5").unwrap(), HalfInt::from_doubled(-3));
        assert_eq!(HalfInt::parse("-0.5").unwrap(), HalfInt::from_doubled(-1));
        assert!(HalfInt::parse("1/3").is_err());
        assert!(HalfInt::parse("x").is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(HalfInt::from_int(3).to_string(), "3");
        assert_eq!(HalfInt::from_doubled(-1).to_string(), "-1/2");
        assert_eq!(HalfInt::from_doubled(5).to_string(), "5/2");
    }

    proptest! {
        #[test]
        fn add_sub_roundtrip(a in -1000i64..1000, b in -1000i64..1000) {
            let x = HalfInt::from_doubled(a);
            let y = HalfInt::from_doubled(b);
            prop_assert_eq!(x + y - y, x);
            prop_assert_eq!(-(-x), x);
        }

        #[test]
        fn integer_iff_even_doubled(a in -1000i64..1000) {
            let x = HalfInt::from_doubled(a);
            prop_assert_eq!(x.is_integer(), a % 2 == 0);
        }

        #[test]
        fn display_parse_roundtrip(a in -1000i64..1000) {
            let x = HalfInt::from_doubled(a);
            prop_assert_eq!(HalfInt::parse(&x.to_string()).unwrap(), x);
        }
    }
}
