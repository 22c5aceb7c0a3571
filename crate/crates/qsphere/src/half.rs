//! Half-integers stored as doubled integers.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// A value in ½ℤ, held as `2·value` so parity checks stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Half(i32);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const HALF: Half = Half(1);

    pub const fn from_doubled(twice: i32) -> Self {
        Half(twice)
    }

    pub const fn int(n: i32) -> Self {
        Half(2 * n)
    }

    /// Exact conversion; fails unless `2x` is an integer.
    pub fn from_f64(x: f64) -> Result<Self, Error> {
        let t = 2.0 * x;
        if t.is_finite() && t == t.round() && t.abs() < i32::MAX as f64 {
            Ok(Half(t as i32))
        } else {
            Err(Error::NotHalfInteger(x))
        }
    }

    pub const fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Half {
    type Err = Error;

    /// Accepts `"25/2"`, `"12.5"` and `"3"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::ParseHalf(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(Half(num)),
                "1" => num.checked_mul(2).map(Half).ok_or_else(bad),
                _ => Err(bad()),
            }
        } else {
            let x: f64 = t.parse().map_err(|_| bad())?;
            Half::from_f64(x).map_err(|_| bad())
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
