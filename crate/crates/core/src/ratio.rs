//! Exact non-negative fractions for metric arithmetic.

use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

/// A non-negative fraction `num / den` with `den > 0`, kept in lowest terms.
///
/// Equality and ordering are by value, so `1/2 == 2/4`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Ratio {
    num: u64,
    den: u64,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };
    pub const HALF: Ratio = Ratio { num: 1, den: 2 };

    /// Panics when `den == 0`.
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Arithmetic mean of two fractions, `(a + b) / 2`.
    pub fn midpoint(self, other: Ratio) -> Ratio {
        let num = self.num as u128 * other.den as u128 + other.num as u128 * self.den as u128;
        let den = 2 * self.den as u128 * other.den as u128;
        let g = gcd128(num, den).max(1);
        let (num, den) = (num / g, den / g);
        Ratio {
            num: u64::try_from(num).expect("ratio numerator overflow"),
            den: u64::try_from(den).expect("ratio denominator overflow"),
        }
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
