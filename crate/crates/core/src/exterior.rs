// SPDX-License-Identifier: MIT OR Apache-2.0
//! Exterior algebra on a fixed coframe `e¹…eⁿ` with `n ≤ 9`.
//!
//! A monomial `e^{i₁…i_k}` with `i₁ < … < i_k` is stored as the bitmask with
//! bits `i₁−1, …, i_k−1` set. Indices are 1-based throughout the public API.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::mpoly::MPoly;
use crate::quad::QuadExt;
use crate::scalar::{format_rat, Rat, Ring};

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 9;

/// Failures of exterior algebra operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtError {
    /// The operands live on coframes of different sizes.
    DimensionMismatch,
    /// An index outside `1..=n`.
    IndexOutOfRange(usize),
}

impl fmt::Display for ExtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtError::DimensionMismatch => f.write_str("forms on different numbers of generators"),
            ExtError::IndexOutOfRange(i) => write!(f, "generator index {i} out of range"),
        }
    }
}

/// Strictly increasing 1-based indices of a monomial mask.
pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b as usize + 1).collect()
}

/// Mask of a set of 1-based indices, with the sign of sorting them.
///
/// Returns `None` when an index repeats.
pub fn indices_mask(idx: &[usize]) -> Option<(u32, i8)> {
    let mut mask = 0u32;
    let mut sign = 1i8;
    for &i in idx {
        let bit = 1u32 << (i - 1);
        if mask & bit != 0 {
            return None;
        }
        if (mask >> i).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

/// Masks of all degree-`k` monomials on `n` generators, in lexicographic
/// order of their index tuples.
pub fn basis_masks(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n {
            if n - i + 1 < k {
                break;
            }
            rec(i + 1, n, k - 1, acc | 1 << (i - 1), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, 0, &mut out);
    }
    out
}

/// Sign of `e^a ∧ e^b` relative to `e^{a∪b}`; zero when they overlap.
pub fn wedge_sign(a: u32, b: u32) -> i8 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn lex_key(mask: u32) -> (u32, Vec<usize>) {
    (mask.count_ones(), mask_indices(mask))
}

/// A (possibly inhomogeneous) form with coefficients in `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<C> {
    n: usize,
    terms: BTreeMap<u32, C>,
}

impl<C: Ring> Form<C> {
    /// The zero form on `n` generators.
    ///
    /// # Panics
    ///
    /// Panics if `n` exceeds [`MAX_GENERATORS`].
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators are supported");
        Form { n, terms: BTreeMap::new() }
    }

    /// The constant `c` as a 0-form.
    pub fn scalar(n: usize, c: C) -> Self {
        let mut f = Self::zero(n);
        f.add_term(0, c);
        f
    }

    /// `c · e^{i₁} ∧ … ∧ e^{i_k}` for arbitrary (unsorted) indices.
    pub fn monomial(n: usize, idx: &[usize], c: C) -> Result<Self, ExtError> {
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
            return Err(ExtError::IndexOutOfRange(bad));
        }
        let mut f = Self::zero(n);
        if let Some((mask, sign)) = indices_mask(idx) {
            f.add_term(mask, if sign < 0 { c.neg() } else { c });
        }
        Ok(f)
    }

    /// The basis monomial with the given mask and coefficient.
    pub fn from_mask(n: usize, mask: u32, c: C) -> Self {
        let mut f = Self::zero(n);
        f.add_term(mask, c);
        f
    }

    /// The 1-form `e^i`.
    ///
    /// # Panics
    ///
    /// Panics if `i` is not in `1..=n`.
    pub fn generator(n: usize, i: usize) -> Self {
        Self::monomial(n, &[i], C::one()).expect("generator index in range")
    }

    /// Adds `c·e^mask` in place.
    pub fn add_term(&mut self, mask: u32, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    /// Number of generators.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether the form vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(mask, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &C)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Union of the index sets of all terms, as a mask.
    pub fn support_mask(&self) -> u32 {
        self.terms.keys().fold(0, |acc, m| acc | m)
    }

    /// Degree of a nonzero homogeneous form; `None` if zero or mixed.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.count_ones() as usize);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Degree-`k` homogeneous part.
    pub fn grade(&self, k: usize) -> Self {
        Form { n: self.n, terms: self.terms.iter().filter(|(m, _)| m.count_ones() as usize == k).map(|(m, c)| (*m, c.clone())).collect() }
    }

    /// Coefficient of `e^{idx}` for strictly increasing indices.
    pub fn coefficient(&self, idx: &[usize]) -> C {
        match indices_mask(idx) {
            Some((mask, _)) => self.coefficient_mask(mask),
            None => C::zero(),
        }
    }

    /// Coefficient of the monomial with the given mask.
    pub fn coefficient_mask(&self, mask: u32) -> C {
        self.terms.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the volume form `e^{1…n}`.
    pub fn top_coefficient(&self) -> C {
        self.coefficient_mask((1u32 << self.n) - 1)
    }

    fn check(&self, other: &Self) -> Result<(), ExtError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(ExtError::DimensionMismatch)
        }
    }

    /// Sum, failing on mismatched generator counts.
    pub fn try_add(&self, other: &Self) -> Result<Self, ExtError> {
        self.check(other)?;
        let mut f = self.clone();
        for (m, c) in &other.terms {
            f.add_term(*m, c.clone());
        }
        Ok(f)
    }

    /// Wedge product, failing on mismatched generator counts.
    pub fn try_wedge(&self, other: &Self) -> Result<Self, ExtError> {
        self.check(other)?;
        let mut f = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let s = wedge_sign(*ma, *mb);
                if s == 0 {
                    continue;
                }
                let c = ca.mul(cb);
                f.add_term(ma | mb, if s < 0 { c.neg() } else { c });
            }
        }
        Ok(f)
    }

    /// Sum.
    ///
    /// # Panics
    ///
    /// Panics on mismatched generator counts; see [`Form::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("forms on different numbers of generators")
    }

    /// Difference.
    ///
    /// # Panics
    ///
    /// Panics on mismatched generator counts.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    /// Product with a scalar.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        self.map(|x| x.mul(c))
    }

    /// Product with a rational scalar.
    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&C::from_rat(r))
    }

    /// Wedge product.
    ///
    /// # Panics
    ///
    /// Panics on mismatched generator counts; see [`Form::try_wedge`].
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("forms on different numbers of generators")
    }

    /// `k`-th wedge power (`k ≥ 1`).
    pub fn power(&self, k: usize) -> Self {
        let mut p = self.clone();
        for _ in 1..k {
            p = p.wedge(self);
        }
        p
    }

    /// Contraction `ι_{e_i}` with the `i`-th basis vector.
    pub fn interior_basis(&self, i: usize) -> Self {
        let bit = 1u32 << (i - 1);
        let mut f = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let before = (m & (bit - 1)).count_ones();
            f.add_term(m & !bit, if before % 2 == 1 { c.neg() } else { c.clone() });
        }
        f
    }

    /// Contraction `ι_v` with a vector given by its components `v₁…vₙ`.
    pub fn interior(&self, v: &[C]) -> Result<Self, ExtError> {
        if v.len() != self.n {
            return Err(ExtError::DimensionMismatch);
        }
        let mut f = Self::zero(self.n);
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                f = f.add(&self.interior_basis(i + 1).scale(vi));
            }
        }
        Ok(f)
    }

    /// Entrywise image of the coefficients.
    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Coefficients on the degree-`k` basis in [`basis_masks`] order.
    pub fn to_vector(&self, k: usize) -> Vec<C> {
        basis_masks(self.n, k).into_iter().map(|m| self.coefficient_mask(m)).collect()
    }

    /// Degree-`k` form with the given coefficients in [`basis_masks`] order.
    pub fn from_vector(n: usize, k: usize, v: &[C]) -> Self {
        let mut f = Self::zero(n);
        for (m, c) in basis_masks(n, k).into_iter().zip(v) {
            f.add_term(m, c.clone());
        }
        f
    }

    /// Relabels generators: index `i` becomes `map(i)`, on `n_new` generators.
    ///
    /// Returns `None` if some term uses an index that `map` drops.
    pub fn relabel(&self, n_new: usize, map: impl Fn(usize) -> Option<usize>) -> Option<Self> {
        let mut f = Form::zero(n_new);
        for (m, c) in &self.terms {
            let idx: Option<Vec<usize>> = mask_indices(*m).into_iter().map(&map).collect();
            let g = Form::monomial(n_new, &idx?, c.clone()).ok()?;
            f = f.add(&g);
        }
        Some(f)
    }

    /// Removes generator `x`, shifting later indices down by one.
    ///
    /// Returns `None` if some term involves `e^x`.
    pub fn drop_index(&self, x: usize) -> Option<Self> {
        self.relabel(self.n - 1, |i| match i.cmp(&x) {
            core::cmp::Ordering::Less => Some(i),
            core::cmp::Ordering::Equal => None,
            core::cmp::Ordering::Greater => Some(i - 1),
        })
    }

    /// Inverse of [`Form::drop_index`]: inserts a generator at position `x`.
    pub fn insert_index(&self, x: usize) -> Self {
        self.relabel(self.n + 1, |i| Some(if i < x { i } else { i + 1 })).expect("insertion never drops indices")
    }

    /// Terms sorted by degree, then lexicographically by index tuple.
    pub fn sorted_terms(&self) -> Vec<(Vec<usize>, &C)> {
        let mut v: Vec<(u32, &C)> = self.terms.iter().map(|(m, c)| (*m, c)).collect();
        v.sort_by_key(|(m, _)| lex_key(*m));
        v.into_iter().map(|(m, c)| (mask_indices(m), c)).collect()
    }
}

/// Coefficients that can be printed in the `2*e13-1/2*e57` notation.
pub trait Coefficient: Ring {
    /// Whether the printed coefficient starts with a minus sign.
    fn is_negative_text(&self) -> bool;
    /// Text of the absolute value; `None` for the value one.
    fn abs_text(&self) -> Option<String>;
}

impl Coefficient for Rat {
    fn is_negative_text(&self) -> bool {
        self.is_negative()
    }
    fn abs_text(&self) -> Option<String> {
        let a = self.abs();
        if a == Rat::one() {
            None
        } else {
            Some(format_rat(&a))
        }
    }
}

impl Coefficient for QuadExt {
    fn is_negative_text(&self) -> bool {
        match self.to_rat() {
            Some(r) => r.is_negative(),
            None => num_traits::Zero::is_zero(self.rational_part()) && self.irrational_part().is_negative(),
        }
    }
    fn abs_text(&self) -> Option<String> {
        if let Some(r) = self.to_rat() {
            return r.abs_text();
        }
        if num_traits::Zero::is_zero(self.rational_part()) {
            let pos = if self.irrational_part().is_negative() { Ring::neg(self) } else { self.clone() };
            Some(pos.to_text())
        } else {
            Some(alloc::format!("({})", self.to_text()))
        }
    }
}

impl Coefficient for MPoly {
    fn is_negative_text(&self) -> bool {
        false
    }
    fn abs_text(&self) -> Option<String> {
        if *self == MPoly::constant(Rat::one()) {
            None
        } else {
            Some(alloc::format!("({})", self.to_text()))
        }
    }
}

impl<C: Coefficient> Form<C> {
    /// Text in the `e13+2*e24-1/2*e567` notation; the zero form prints as `0`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (idx, c) in self.sorted_terms() {
            let name: String = if idx.is_empty() {
                String::new()
            } else {
                let digits: String = idx.iter().map(|i| char::from_digit(*i as u32, 10).unwrap_or('?')).collect();
                alloc::format!("e{digits}")
            };
            if c.is_negative_text() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            match (c.abs_text(), name.is_empty()) {
                (None, true) => out.push('1'),
                (None, false) => out.push_str(&name),
                (Some(t), true) => out.push_str(&t),
                (Some(t), false) => {
                    out.push_str(&t);
                    out.push('*');
                    out.push_str(&name);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<C: Coefficient> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[n={}]({})", self.n, self.to_text())
    }
}

impl Form<Rat> {
    /// Image in another coefficient ring.
    pub fn lift<D: Ring>(&self) -> Form<D> {
        self.map(D::from_rat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn e(idx: &[usize]) -> Form<Rat> {
        Form::monomial(7, idx, rat(1)).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(e(&[1]).wedge(&e(&[2])), e(&[1, 2]));
        assert_eq!(e(&[2]).wedge(&e(&[1])), e(&[1, 2]).neg());
        assert!(e(&[1, 2]).wedge(&e(&[1, 2])).is_zero());
        assert_eq!(Form::<Rat>::zero(6).try_wedge(&e(&[1])), Err(ExtError::DimensionMismatch));
    }

    #[test]
    fn interior_examples() {
        let f = e(&[1, 2, 7]);
        assert_eq!(f.interior_basis(1), e(&[2, 7]));
        assert_eq!(f.interior_basis(2), e(&[1, 7]).neg());
        assert!(f.interior_basis(3).is_zero());
    }

    #[test]
    fn grade_and_coefficient() {
        let f = e(&[1]).add(&e(&[1, 2]));
        assert_eq!(f.grade(1), e(&[1]));
        assert_eq!(f.grade(2), e(&[1, 2]));
        assert!(Form::<Rat>::zero(7).grade(3).is_zero());
        let vol = Form::monomial(6, &[1, 2, 3, 4, 5, 6], rat(3)).unwrap();
        assert_eq!(vol.coefficient(&[1, 2, 3, 4, 5, 6]), rat(3));
        assert_eq!(e(&[1, 2]).coefficient(&[1, 3]), rat(0));
        assert_eq!(e(&[1, 7]).neg().coefficient(&[1, 7]), rat(-1));
    }

    #[test]
    fn unsorted_monomials_pick_up_signs() {
        assert_eq!(Form::monomial(7, &[3, 1, 2], rat(1)).unwrap(), e(&[1, 2, 3]));
        assert_eq!(Form::monomial(7, &[2, 1, 3], rat(1)).unwrap(), e(&[1, 2, 3]).neg());
        assert!(Form::monomial(7, &[2, 2], rat(1)).unwrap().is_zero());
        assert_eq!(Form::monomial(7, &[8], rat(1)), Err(ExtError::IndexOutOfRange(8)));
    }

    #[test]
    fn basis_order_is_lexicographic() {
        let b = basis_masks(4, 2);
        let tuples: Vec<Vec<usize>> = b.into_iter().map(mask_indices).collect();
        assert_eq!(
            tuples,
            alloc::vec![alloc::vec![1, 2], alloc::vec![1, 3], alloc::vec![1, 4], alloc::vec![2, 3], alloc::vec![2, 4], alloc::vec![3, 4]]
        );
        assert_eq!(basis_masks(7, 4).len(), 35);
    }

    #[test]
    fn relabelling() {
        let f = e(&[1, 3]).add(&e(&[2, 6]));
        let g = f.drop_index(5).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.insert_index(5), f);
        assert!(e(&[5]).drop_index(5).is_none());
    }

    #[test]
    fn text() {
        let f = e(&[1, 3]).scale(&rat(2)).sub(&e(&[2, 4])).add(&e(&[7]).scale(&crate::scalar::frac(-1, 2)));
        assert_eq!(f.to_text(), "-1/2*e7+2*e13-e24");
        assert_eq!(Form::<Rat>::zero(7).to_text(), "0");
    }
}
