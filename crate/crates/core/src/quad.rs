// SPDX-License-Identifier: MIT OR Apache-2.0
//! Elements `a + b·√D` of a real quadratic extension of ℚ.
//!
//! Radicands are normalized on construction: `D = s²·m` is rewritten as
//! `s·√m`, and a value whose irrational part vanishes carries the radicand
//! `1`. Two values can be combined when their radicands agree or when one of
//! them is rational.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::scalar::{format_rat, square_split, Field, OrderedField, Rat, Ring};

/// Failures of quadratic-extension arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadError {
    /// The operands live in different extensions.
    MismatchedRadicand,
    /// Inversion of zero.
    DivisionByZero,
    /// A negative radicand was supplied.
    NegativeRadicand,
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::MismatchedRadicand => f.write_str("mismatched radicands"),
            QuadError::DivisionByZero => f.write_str("division by zero"),
            QuadError::NegativeRadicand => f.write_str("negative radicand"),
        }
    }
}

/// The real number `a + b·√d` with `d` a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: BigInt,
}

impl QuadExt {
    /// Builds `a + b·√radicand`, normalizing the radicand.
    pub fn new(a: Rat, b: Rat, radicand: &Rat) -> Result<Self, QuadError> {
        if radicand.is_negative() {
            return Err(QuadError::NegativeRadicand);
        }
        let (s, m) = square_split(radicand);
        Ok(Self::normalized(a, b * s, m))
    }

    fn normalized(a: Rat, b: Rat, d: BigInt) -> Self {
        if b.is_zero() {
            QuadExt { a, b, d: <BigInt as One>::one() }
        } else if One::is_one(&d) {
            QuadExt { a: a + b, b: <Rat as Ring>::zero(), d }
        } else {
            QuadExt { a, b, d }
        }
    }

    /// The rational value `r`.
    pub fn rational(r: Rat) -> Self {
        QuadExt { a: r, b: <Rat as Ring>::zero(), d: <BigInt as One>::one() }
    }

    /// `√r` for a nonnegative rational `r`.
    pub fn sqrt(r: &Rat) -> Result<Self, QuadError> {
        Self::new(<Rat as Ring>::zero(), <Rat as Ring>::one(), r)
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    /// Irrational coefficient `b`.
    pub fn irrational_part(&self) -> &Rat {
        &self.b
    }

    /// Normalized radicand; `1` for rational values.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// The value as a rational, if its irrational part vanishes.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    fn common(&self, other: &Self) -> Result<BigInt, QuadError> {
        if self.b.is_zero() {
            Ok(other.d.clone())
        } else if other.b.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(QuadError::MismatchedRadicand)
        }
    }

    /// Sum, failing on mismatched radicands.
    pub fn checked_add(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.common(other)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, d))
    }

    /// Difference, failing on mismatched radicands.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, QuadError> {
        self.checked_add(&Ring::neg(other))
    }

    /// Product, failing on mismatched radicands.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.common(other)?;
        let dr = Rat::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, d))
    }

    /// Multiplicative inverse `(a − b√d) / (a² − b²d)`.
    pub fn checked_inv(&self) -> Result<Self, QuadError> {
        let dr = Rat::from_integer(self.d.clone());
        let norm = &self.a * &self.a - &self.b * &self.b * dr;
        if norm.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        Ok(Self::normalized(&self.a / &norm, -&self.b / &norm, self.d.clone()))
    }

    /// Exact sign of the real number `a + b√d`.
    pub fn sign(&self) -> i8 {
        let sa = OrderedField::signum(&self.a);
        let sb = OrderedField::signum(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rat::from_integer(self.d.clone());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    /// Human readable form `a+b*sqrt(d)`.
    pub fn to_text(&self) -> String {
        if self.b.is_zero() {
            return format_rat(&self.a);
        }
        let root = alloc::format!("sqrt({})", self.d);
        let irr = if self.b == <Rat as Ring>::one() {
            root
        } else if self.b == -<Rat as Ring>::one() {
            alloc::format!("-{root}")
        } else {
            alloc::format!("{}*{root}", format_rat(&self.b))
        };
        if self.a.is_zero() {
            irr
        } else if irr.starts_with('-') {
            alloc::format!("{}{irr}", format_rat(&self.a))
        } else {
            alloc::format!("{}+{irr}", format_rat(&self.a))
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<Rat> for QuadExt {
    fn from(r: Rat) -> Self {
        QuadExt::rational(r)
    }
}

/// Trait arithmetic panics on mismatched radicands; callers that mix
/// extensions should use the `checked_*` methods.
impl Ring for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(<Rat as Ring>::zero())
    }
    fn one() -> Self {
        QuadExt::rational(<Rat as Ring>::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("quadratic extension: mismatched radicands")
    }
    fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("quadratic extension: mismatched radicands")
    }
    fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("quadratic extension: mismatched radicands")
    }
    fn neg(&self) -> Self {
        QuadExt { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
    fn from_rat(r: &Rat) -> Self {
        QuadExt::rational(r.clone())
    }
}

impl Field for QuadExt {
    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}

impl OrderedField for QuadExt {
    fn signum(&self) -> i8 {
        self.sign()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat};

    fn q(a: i64, b: i64, d: i64) -> QuadExt {
        QuadExt::new(rat(a), rat(b), &rat(d)).unwrap()
    }

    #[test]
    fn conjugate_product() {
        assert_eq!(q(1, 1, 2).mul(&q(1, -1, 2)), QuadExt::rational(rat(-1)));
    }

    #[test]
    fn inverse_of_root_three() {
        let inv = q(0, 1, 3).inv().unwrap();
        assert_eq!(inv, QuadExt::new(rat(0), frac(1, 3), &rat(3)).unwrap());
        assert_eq!(q(0, 0, 3).checked_inv(), Err(QuadError::DivisionByZero));
    }

    #[test]
    fn perfect_square_radicand_folds() {
        assert_eq!(q(0, 1, 4), QuadExt::rational(rat(2)));
        assert_eq!(q(0, 1, 4).to_rat(), Some(rat(2)));
        assert_eq!(q(1, 1, 12), q(1, 2, 3));
    }

    #[test]
    fn signs() {
        assert_eq!(q(1, 1, 2).sign(), 1);
        assert_eq!(q(3, -2, 2).sign(), 1);
        assert_eq!(q(2, -2, 2).sign(), -1);
        assert_eq!(q(0, 0, 2).sign(), 0);
        assert_eq!(q(-3, 2, 2).sign(), -1);
    }

    #[test]
    fn mismatched_radicands_are_rejected() {
        assert_eq!(q(0, 1, 2).checked_add(&q(0, 1, 3)), Err(QuadError::MismatchedRadicand));
        assert_eq!(q(0, 1, 2).checked_add(&q(5, 0, 3)).unwrap(), q(5, 1, 2));
        assert_eq!(QuadExt::new(rat(0), rat(1), &rat(-1)), Err(QuadError::NegativeRadicand));
    }

    #[test]
    fn text_form() {
        assert_eq!(q(1, -1, 2).to_text(), "1-sqrt(2)");
        assert_eq!(q(0, 3, 5).to_text(), "3*sqrt(5)");
        assert_eq!(q(7, 0, 5).to_text(), "7");
    }
}
