// SPDX-License-Identifier: MIT OR Apache-2.0
//! Nilpotent Lie algebras given by their Chevalley–Eilenberg differential.
//!
//! An algebra of dimension `n` is stored as the list of 2-forms
//! `d e¹, …, d eⁿ`. The shorthand `12` in slot `i` means `d eⁱ = e¹∧e²`.
//! The differential extends to all forms as a degree +1 antiderivation.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::exterior::{basis_masks, mask_indices, wedge_sign, Form};
use crate::mat::Mat;
use crate::parse::{parse_structure, ParseError, StructureSpec};
use crate::scalar::{Rat, Ring};

/// Failures when building or transforming Lie algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieError {
    /// `d(d eⁱ) ≠ 0` for the reported generator (1-based).
    JacobiViolation {
        /// First generator whose second differential is nonzero.
        generator: usize,
    },
    /// Structurally invalid data.
    BadSpec(String),
    /// The structure text did not parse.
    Parse(ParseError),
    /// The vector is not in the center.
    NotCentral,
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::JacobiViolation { generator } => write!(f, "Jacobi identity fails: d(d e{generator}) != 0"),
            LieError::BadSpec(m) => write!(f, "bad structure equations: {m}"),
            LieError::Parse(e) => write!(f, "structure equations: {e}"),
            LieError::NotCentral => f.write_str("vector is not central"),
        }
    }
}

impl From<ParseError> for LieError {
    fn from(e: ParseError) -> Self {
        LieError::Parse(e)
    }
}

/// A nilpotent Lie algebra presented by structure equations in a nilpotent
/// coframe.
#[derive(Clone, PartialEq, Eq)]
pub struct NilpotentLieAlgebra {
    name: String,
    d1: Vec<Form<Rat>>,
}

impl fmt::Debug for NilpotentLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.structure_text())
    }
}

impl NilpotentLieAlgebra {
    /// Validates `d eⁱ = d1[i-1]` and builds the algebra.
    ///
    /// Each `d eⁱ` must be a 2-form in the generators `e¹…e^{i−1}`, and the
    /// antiderivation must square to zero on every generator.
    pub fn new(name: &str, d1: Vec<Form<Rat>>) -> Result<Self, LieError> {
        let n = d1.len();
        if n == 0 {
            return Err(LieError::BadSpec(String::from("no generators")));
        }
        for (i, f) in d1.iter().enumerate() {
            if f.n() != n {
                return Err(LieError::BadSpec(alloc::format!("d e{} lives on {} generators, expected {n}", i + 1, f.n())));
            }
            if !f.is_zero() && f.degree() != Some(2) {
                return Err(LieError::BadSpec(alloc::format!("d e{} is not a 2-form", i + 1)));
            }
            if f.support_mask() >> i != 0 {
                return Err(LieError::BadSpec(alloc::format!("d e{} involves a generator of index >= {}", i + 1, i + 1)));
            }
        }
        let g = NilpotentLieAlgebra { name: name.to_string(), d1 };
        for i in 0..n {
            if !g.differential(&g.d1[i]).is_zero() {
                return Err(LieError::JacobiViolation { generator: i + 1 });
            }
        }
        Ok(g)
    }

    /// Parses and validates a parameter-free structure string.
    pub fn from_structure(name: &str, text: &str) -> Result<Self, LieError> {
        Self::from_spec(name, &parse_structure(text)?, None)
    }

    /// Instantiates parsed structure equations at a parameter value.
    pub fn from_spec(name: &str, spec: &StructureSpec, param: Option<&Rat>) -> Result<Self, LieError> {
        Self::new(name, spec.instantiate(param)?)
    }

    /// The abelian algebra `ℝⁿ`.
    pub fn abelian(n: usize) -> Self {
        NilpotentLieAlgebra { name: alloc::format!("R{n}"), d1: alloc::vec![Form::zero(n); n] }
    }

    /// Identifier given at construction.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.d1.len()
    }

    /// The 2-forms `d e¹, …, d eⁿ`.
    pub fn structure(&self) -> &[Form<Rat>] {
        &self.d1
    }

    /// Structure equations in the `(0,0,12,...)` shorthand.
    pub fn structure_text(&self) -> String {
        let slots: Vec<String> = self
            .d1
            .iter()
            .map(|f| {
                let t = f.to_text();
                t.replace('e', "")
            })
            .collect();
        alloc::format!("({})", slots.join(","))
    }

    /// The Chevalley–Eilenberg differential of a form.
    ///
    /// # Panics
    ///
    /// Panics if the form lives on a different number of generators.
    pub fn differential<C: Ring>(&self, a: &Form<C>) -> Form<C> {
        let n = self.dim();
        assert_eq!(a.n(), n, "form and algebra dimensions differ");
        let mut out = Form::zero(n);
        for (mask, c) in a.terms() {
            let mut before = 0u32;
            for i in mask_indices(mask) {
                let bit = 1u32 << (i - 1);
                let after = mask & !(before | bit);
                let pos_sign = if before.count_ones() % 2 == 1 { -1 } else { 1 };
                for (m2, c2) in self.d1[i - 1].terms() {
                    if m2 & (before | after) != 0 {
                        continue;
                    }
                    let s = pos_sign * wedge_sign(before, m2) * wedge_sign(before | m2, after);
                    let v = c.mul(&C::from_rat(c2));
                    out.add_term(before | m2 | after, if s < 0 { v.neg() } else { v });
                }
                before |= bit;
            }
        }
        out
    }

    /// Matrix of `d : Λᵏ → Λᵏ⁺¹` in the lexicographic monomial bases.
    pub fn d_matrix(&self, k: usize) -> Mat<Rat> {
        let n = self.dim();
        let src = basis_masks(n, k);
        let dst = basis_masks(n, k + 1);
        let mut m = Mat::zeros(dst.len(), src.len());
        for (j, &s) in src.iter().enumerate() {
            let df = self.differential(&Form::from_mask(n, s, Rat::one()));
            for (mask, c) in df.terms() {
                let i = dst.iter().position(|&d| d == mask).expect("degree k+1 monomial");
                m.set(i, j, c.clone());
            }
        }
        m
    }

    /// Basis of the closed `k`-forms.
    pub fn closed_forms(&self, k: usize) -> Vec<Form<Rat>> {
        let n = self.dim();
        if k > n {
            return Vec::new();
        }
        if k == n {
            return alloc::vec![Form::from_mask(n, (1u32 << n) - 1, Rat::one())];
        }
        self.d_matrix(k).kernel_basis().iter().map(|v| Form::from_vector(n, k, v)).collect()
    }

    /// Echelon basis of the exact `k`-forms.
    pub fn exact_forms(&self, k: usize) -> Vec<Form<Rat>> {
        let n = self.dim();
        if k == 0 || k > n {
            return Vec::new();
        }
        let img = self.d_matrix(k - 1).transpose();
        let (r, pivots) = img.rref();
        (0..pivots.len()).map(|i| Form::from_vector(n, k, r.row(i))).collect()
    }

    /// `dim Hᵏ = dim ker d_k − rank d_{k−1}`.
    pub fn cohomology_dim(&self, k: usize) -> usize {
        self.closed_forms(k).len() - self.exact_forms(k).len()
    }

    /// Closed `k`-forms whose classes form a basis of `Hᵏ`.
    pub fn cohomology_representatives(&self, k: usize) -> Vec<Form<Rat>> {
        let exact = self.exact_forms(k);
        let mut rows: Vec<Vec<Rat>> = exact.iter().map(|f| f.to_vector(k)).collect();
        let mut rank = rows.len();
        let mut reps = Vec::new();
        for z in self.closed_forms(k) {
            rows.push(z.to_vector(k));
            let r = Mat::from_rows(rows.clone()).map(|m| m.rank()).unwrap_or(0);
            if r > rank {
                rank = r;
                reps.push(z);
            } else {
                rows.pop();
            }
        }
        reps
    }

    /// Betti numbers `b₀, …, bₙ`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.cohomology_dim(k)).collect()
    }

    /// Basis of the center `{X : ι_X d eⁱ = 0 for all i}`.
    pub fn center(&self) -> Vec<Vec<Rat>> {
        let n = self.dim();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for f in &self.d1 {
            let cols: Vec<Vec<Rat>> = (1..=n).map(|i| f.interior_basis(i).to_vector(1)).collect();
            for r in 0..n {
                rows.push(cols.iter().map(|c| c[r].clone()).collect());
            }
        }
        Mat::from_rows(rows).expect("rectangular").kernel_basis()
    }

    /// Indices of the basis vectors `e_i` that are central.
    pub fn central_basis_vectors(&self) -> Vec<usize> {
        (1..=self.dim()).filter(|&i| self.d1.iter().all(|f| f.interior_basis(i).is_zero())).collect()
    }

    /// Whether the vector with components `x` is central.
    pub fn is_central(&self, x: &[Rat]) -> bool {
        self.d1.iter().all(|f| f.interior(x).map(|g| g.is_zero()).unwrap_or(false))
    }

    /// Lie bracket of two vectors, dual to `d e^k(u, v) = −e^k([u, v])`.
    pub fn bracket(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        self.d1
            .iter()
            .map(|f| {
                let iu = f.interior(u).expect("vector dimension");
                let uv = iu.interior(v).expect("vector dimension");
                uv.coefficient_mask(0).neg()
            })
            .collect()
    }

    /// Length of the lower central series `C¹ = 𝔤, Cᵏ⁺¹ = [𝔤, Cᵏ]`.
    pub fn nilpotency_step(&self) -> usize {
        let n = self.dim();
        let unit = |i: usize| -> Vec<Rat> { (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect() };
        let mut current: Vec<Vec<Rat>> = (0..n).map(unit).collect();
        let mut step = 0;
        while !current.is_empty() {
            step += 1;
            let mut next = Vec::new();
            for i in 0..n {
                for v in &current {
                    let b = self.bracket(&unit(i), v);
                    if b.iter().any(|x| !x.is_zero()) {
                        next.push(b);
                    }
                }
            }
            current = if next.is_empty() {
                Vec::new()
            } else {
                let (r, pivots) = Mat::from_rows(next).expect("rectangular").rref();
                (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
            };
            if step > n {
                break;
            }
        }
        step
    }

    /// The quotient `𝔤/⟨e_x⟩` by a central basis vector.
    ///
    /// The surviving coframe keeps its order and is re-indexed `1…n−1`.
    pub fn quotient_by_central(&self, x: usize) -> Result<Self, LieError> {
        if x == 0 || x > self.dim() {
            return Err(LieError::BadSpec(alloc::format!("no generator e{x}")));
        }
        if !self.central_basis_vectors().contains(&x) {
            return Err(LieError::NotCentral);
        }
        let d1 = self
            .d1
            .iter()
            .enumerate()
            .filter(|(i, _)| i + 1 != x)
            .map(|(_, f)| f.drop_index(x).ok_or(LieError::NotCentral))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&alloc::format!("{}/e{x}", self.name), d1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;

    fn alg(s: &str) -> NilpotentLieAlgebra {
        NilpotentLieAlgebra::from_structure("t", s).unwrap()
    }

    #[test]
    fn builds_37b() {
        let g = alg("(0^4,12,23,34)");
        assert_eq!(g.differential(&parse_form("e5", 7).unwrap()).to_text(), "e12");
        assert!(g.differential(&parse_form("e1", 7).unwrap()).is_zero());
        assert_eq!(g.central_basis_vectors(), alloc::vec![5, 6, 7]);
        assert_eq!(g.center().len(), 3);
        assert_eq!(g.nilpotency_step(), 2);
        assert_eq!(g.structure_text(), "(0,0,0,0,12,23,34)");
    }

    #[test]
    fn antiderivation_by_hand() {
        let g = alg("(0^4,12,23,34)");
        let f = parse_form("e13+e24-e67", 7).unwrap();
        assert_eq!(g.differential(&f).to_text(), "-e237+e346");
        let f = parse_form("e57", 7).unwrap();
        assert_eq!(g.differential(&f).to_text(), "e127-e345");
    }

    #[test]
    fn abelian() {
        let g = NilpotentLieAlgebra::abelian(7);
        assert_eq!(g.nilpotency_step(), 1);
        assert_eq!(g.center().len(), 7);
        assert_eq!(g.closed_forms(4).len(), 35);
        assert_eq!(g.exact_forms(4).len(), 0);
        assert_eq!(g.cohomology_dim(4), 35);
    }

    #[test]
    fn jacobi_violation_is_reported() {
        let e = NilpotentLieAlgebra::from_structure("t", "(0^3,12,23,-13,15+16+26+2*34)").unwrap_err();
        assert_eq!(e, LieError::JacobiViolation { generator: 7 });
        let e = NilpotentLieAlgebra::from_structure("t", "(0,13,0)").unwrap_err();
        assert!(matches!(e, LieError::BadSpec(_)));
    }

    #[test]
    fn quotients() {
        let g = alg("(0^4,12,23,34)");
        let h = g.quotient_by_central(7).unwrap();
        assert_eq!(h.structure_text(), "(0,0,0,0,12,23)");
        assert_eq!(alg("(0^5,12,14+35)").quotient_by_central(7).unwrap().structure_text(), "(0,0,0,0,0,12)");
        assert_eq!(g.quotient_by_central(1), Err(LieError::NotCentral));
        assert_eq!(
            NilpotentLieAlgebra::abelian(7).quotient_by_central(7).unwrap().structure(),
            NilpotentLieAlgebra::abelian(6).structure()
        );
    }

    #[test]
    fn step_four() {
        assert_eq!(alg("(0,0,12,13,14,0,0)").nilpotency_step(), 4);
    }
}
