use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A non-negative multiple of 1/2, stored as twice its value.
///
/// Ordering and equality are integer comparisons on the doubled value, so ties
/// between quadruple elements are exact. Renders as `"k"` or `"k/2"`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfValue {
    doubled: u64,
}

impl HalfValue {
    pub const ZERO: HalfValue = HalfValue { doubled: 0 };

    pub const fn from_doubled(doubled: u64) -> Self {
        HalfValue { doubled }
    }

    pub const fn from_int(n: u64) -> Self {
        HalfValue { doubled: 2 * n }
    }

    pub const fn doubled(self) -> u64 {
        self.doubled
    }

    pub const fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    pub const fn ceil(self) -> u64 {
        self.doubled.div_ceil(2)
    }

    /// Exact as long as the doubled value stays below 2^53.
    pub fn to_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }
}

impl Add for HalfValue {
    type Output = HalfValue;

    fn add(self, rhs: HalfValue) -> HalfValue {
        HalfValue {
            doubled: self.doubled + rhs.doubled,
        }
    }
}

impl fmt::Display for HalfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::invalid(format!("not a half-integer: {s:?}"));
        match s.strip_suffix("/2") {
            Some(num) => {
                // "4/2" is not canonical output but still parses.
                let doubled: u64 = num.parse().map_err(|_| bad())?;
                Ok(HalfValue { doubled })
            }
            None => {
                let n: u64 = s.parse().map_err(|_| bad())?;
                n.checked_mul(2).map(HalfValue::from_doubled).ok_or_else(bad)
            }
        }
    }
}

impl Serialize for HalfValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
