// SPDX-License-Identifier: MIT OR Apache-2.0
//! Scalar traits and rational helpers.
//!
//! [`Ring`] and [`Field`] are deliberately small: the exterior algebra only
//! needs addition, multiplication and an embedding of the rationals, while
//! the linear algebra additionally needs inverses.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational number, always in lowest terms.
pub type Rat = num_rational::BigRational;

/// Commutative ring with a unit and an embedding of ℚ.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// Whether the value is the additive identity.
    fn is_zero(&self) -> bool;
    /// Sum.
    fn add(&self, other: &Self) -> Self;
    /// Difference.
    fn sub(&self, other: &Self) -> Self;
    /// Product.
    fn mul(&self, other: &Self) -> Self;
    /// Additive inverse.
    fn neg(&self) -> Self;
    /// Image of a rational number.
    fn from_rat(r: &Rat) -> Self;

    /// Image of a machine integer.
    fn from_i64(n: i64) -> Self {
        Self::from_rat(&rat(n))
    }

    /// Product with a rational number.
    fn scale(&self, r: &Rat) -> Self {
        self.mul(&Self::from_rat(r))
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Quotient, `None` when dividing by zero.
    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// A [`Field`] embedded in ℝ, so that signs are decidable.
pub trait OrderedField: Field {
    /// Sign of the value as `-1`, `0` or `1`.
    fn signum(&self) -> i8;
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl OrderedField for Rat {
    fn signum(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// The rational number `n`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The rational number `n / d`.
///
/// # Panics
///
/// Panics if `d` is zero.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q` with decimal integers.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if Zero::is_zero(&d) {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Writes a nonnegative rational as `s²·m` with `s` rational and `m` a
/// positive integer free of small square factors.
///
/// Square factors up to `10⁴` are extracted by trial division; any
/// remaining cofactor that is a perfect square is extracted as well. The
/// result always satisfies `r = s²·m` exactly, so the decomposition is
/// sound even if `m` keeps a large square factor.
pub fn square_split(r: &Rat) -> (Rat, BigInt) {
    debug_assert!(!r.is_negative());
    if Zero::is_zero(r) {
        return (Zero::zero(), One::one());
    }
    let mut m = r.numer() * r.denom();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(10_000u32);
    while p <= limit && &p * &p <= m {
        let pp = &p * &p;
        while m.is_multiple_of(&pp) {
            m /= &pp;
            s *= &p;
        }
        p += 1u32;
    }
    let root = m.sqrt();
    if &root * &root == m {
        s *= &root;
        m = One::one();
    }
    (Rat::new(s, r.denom().clone()), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7", "1/2", "-22/7"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("4/6").unwrap(), frac(2, 3));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(sqrt_exact(&rat(2)), None);
        assert_eq!(sqrt_exact(&rat(-4)), None);
    }

    #[test]
    fn square_split_reconstructs() {
        for r in [rat(12), frac(8, 3), rat(49), frac(1, 7), rat(0)] {
            let (s, m) = square_split(&r);
            assert_eq!(&s * &s * Rat::from_integer(m), r);
        }
        assert_eq!(square_split(&rat(12)), (rat(2), BigInt::from(3)));
    }
}
