// SPDX-License-Identifier: MIT OR Apache-2.0
//! Sparse multivariate polynomials over ℚ in parameters `a1, a2, …`.
//!
//! Monomials are exponent vectors with trailing zeros removed, ordered
//! lexicographically with `a1 > a2 > …`. That order is a monomial order, so
//! the leading term of a product is the product of leading terms.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::scalar::{format_rat, Rat, Ring};

type Monomial = Vec<u32>;

/// Polynomial with rational coefficients; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    let v = (0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect();
    trim(v)
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut v = Vec::with_capacity(a.len());
    for (i, &ai) in a.iter().enumerate() {
        let bi = b.get(i).copied().unwrap_or(0);
        v.push(ai.checked_sub(bi)?);
    }
    Some(trim(v))
}

impl MPoly {
    /// The zero polynomial.
    pub fn new() -> Self {
        MPoly::default()
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Rat) -> Self {
        let mut p = MPoly::new();
        p.add_term(Vec::new(), c);
        p
    }

    /// The parameter `a_{i+1}` (zero-based index `i`).
    pub fn var(i: usize) -> Self {
        let mut m = alloc::vec![0; i + 1];
        m[i] = 1;
        let mut p = MPoly::new();
        p.add_term(m, Rat::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rat)>>(terms: I) -> Self {
        let mut p = MPoly::new();
        for (m, c) in terms {
            p.add_term(trim(m), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Iterates over `(exponents, coefficient)` in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether this is the zero polynomial.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of parameters that can occur (one more than the largest index).
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Whether every term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Leading term with respect to the lexicographic order.
    pub fn leading(&self) -> Option<(&[u32], &Rat)> {
        self.terms.iter().next_back().map(|(m, c)| (m.as_slice(), c))
    }

    /// Evaluates at a point; missing coordinates count as zero.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match point.get(i) {
                    Some(x) => t *= num_traits::pow(x.clone(), e as usize),
                    None => {
                        t = Rat::zero();
                        break;
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// Writes `self = c·q²` with `c > 0`, if possible.
    ///
    /// The square root is extracted term by term in decreasing lexicographic
    /// order, which is the univariate square-root algorithm in the first
    /// parameter with coefficients recursively in the others. The zero
    /// polynomial yields `(1, 0)`.
    pub fn perfect_square(&self) -> Option<(Rat, MPoly)> {
        let (lead_m, lead_c) = match self.leading() {
            None => return Some((Rat::one(), MPoly::new())),
            Some(t) => t,
        };
        if !lead_c.is_positive() || lead_m.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let c = lead_c.clone();
        let target = self.scale(&c.recip());
        let q0: Monomial = lead_m.iter().map(|e| e / 2).collect();
        let mut q = MPoly::from_terms([(q0.clone(), Rat::one())]);
        let two = Rat::from_integer(2.into());
        for _ in 0..=self.len() * 4 + 8 {
            let r = target.sub(&q.mul(&q));
            let (rm, rc) = match r.leading() {
                None => return Some((c, q)),
                Some((m, c)) => (m.to_vec(), c.clone()),
            };
            let tm = mono_div(&rm, &q0)?;
            if tm >= q0 {
                return None;
            }
            q = q.add(&MPoly::from_terms([(tm, rc / &two)]));
        }
        None
    }

    /// Human readable form such as `4*a1^2-a1*a2+1/2`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { alloc::format!("a{}", i + 1) } else { alloc::format!("a{}^{e}", i + 1) })
                .collect();
            let mono = mono.join("*");
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if mono.is_empty() {
                out.push_str(&format_rat(&abs));
            } else if abs == Rat::one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format_rat(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::new()
    }
    fn one() -> Self {
        MPoly::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
    fn sub(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
    fn mul(&self, other: &Self) -> Self {
        let mut p = MPoly::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                p.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        p
    }
    fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_rat(r: &Rat) -> Self {
        MPoly::constant(r.clone())
    }
    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return MPoly::new();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat};

    fn a() -> MPoly {
        MPoly::var(0)
    }
    fn b() -> MPoly {
        MPoly::var(1)
    }

    #[test]
    fn square_of_sum() {
        let p = a().mul(&a()).add(&a().mul(&b()).scale(&rat(2))).add(&b().mul(&b()));
        let (c, q) = p.perfect_square().unwrap();
        assert_eq!(c, rat(1));
        assert_eq!(q, a().add(&b()));
    }

    #[test]
    fn sum_of_squares_is_not_a_square() {
        let p = a().mul(&a()).add(&b().mul(&b()));
        assert!(p.perfect_square().is_none());
    }

    #[test]
    fn scaled_fourth_power() {
        let a2 = a().mul(&a());
        let p = a2.mul(&a2).scale(&rat(4));
        assert_eq!(p.perfect_square().unwrap(), (rat(4), a2));
    }

    #[test]
    fn negative_multiple_is_rejected() {
        let p = a().mul(&a()).scale(&rat(-3));
        assert!(p.perfect_square().is_none());
    }

    #[test]
    fn zero_is_trivially_a_square() {
        assert_eq!(MPoly::new().perfect_square(), Some((rat(1), MPoly::new())));
    }

    #[test]
    fn evaluation_and_text() {
        let p = a().mul(&b()).scale(&frac(1, 2)).sub(&MPoly::constant(rat(3)));
        assert_eq!(p.eval(&[rat(2), rat(3)]), rat(0));
        assert_eq!(p.to_text(), "1/2*a1*a2-3");
        assert_eq!(p.total_degree(), Some(2));
        assert!(!p.is_homogeneous());
    }
}
