//! Exact rational time coordinates.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A point on the real time axis, stored as an exact rational.
///
/// All arithmetic and comparisons are exact; no rounding occurs anywhere in
/// the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Time(Ratio<i64>);

impl Time {
    pub fn new(numer: i64, denom: i64) -> Time {
        Time(Ratio::new(numer, denom))
    }

    pub fn int(n: i64) -> Time {
        Time(Ratio::from_integer(n))
    }

    pub fn zero() -> Time {
        Time(Ratio::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Euclidean remainder of `self` by a positive `period`, in `[0, period)`.
    pub fn rem_euclid(&self, period: Time) -> Time {
        assert!(period.is_positive(), "period must be positive");
        let q = (self.0 / period.0).floor();
        Time(self.0 - q * period.0)
    }

    /// Least common multiple of two positive rationals: the smallest positive
    /// rational that is an integer multiple of both.
    pub fn lcm(a: Time, b: Time) -> Time {
        assert!(a.is_positive() && b.is_positive());
        let (p1, q1) = (*a.0.numer(), *a.0.denom());
        let (p2, q2) = (*b.0.numer(), *b.0.denom());
        Time(Ratio::new(p1.lcm(&p2), q1.gcd(&q2)))
    }

    pub fn min(a: Time, b: Time) -> Time {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max(a: Time, b: Time) -> Time {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Add for Time {
    type Output = Time;
    fn add(self, rhs: Time) -> Time {
        Time(self.0 + rhs.0)
    }
}

impl Sub for Time {
    type Output = Time;
    fn sub(self, rhs: Time) -> Time {
        Time(self.0 - rhs.0)
    }
}

impl Neg for Time {
    type Output = Time;
    fn neg(self) -> Time {
        Time(-self.0)
    }
}

impl Mul<i64> for Time {
    type Output = Time;
    fn mul(self, rhs: i64) -> Time {
        Time(self.0 * Ratio::from_integer(rhs))
    }
}

impl Div<i64> for Time {
    type Output = Time;
    fn div(self, rhs: i64) -> Time {
        Time(self.0 / Ratio::from_integer(rhs))
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Time({})", self)
    }
}

impl FromStr for Time {
    type Err = String;

    fn from_str(s: &str) -> Result<Time, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer: i64 = n.parse().map_err(|_| format!("bad rational `{s}`"))?;
        let denom: i64 = d.parse().map_err(|_| format!("bad rational `{s}`"))?;
        if denom == 0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(Time(Ratio::new(numer, denom)))
    }
}

impl Serialize for Time {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Time {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Time, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
