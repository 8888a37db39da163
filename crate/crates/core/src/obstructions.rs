// SPDX-License-Identifier: MIT OR Apache-2.0
//! Certificates proving that a nilpotent Lie algebra carries no coclosed
//! G₂-structure, with exact checkers and bounded deterministic searches.
//!
//! * **Contraction.** Central `Y`, any `X`, and a subspace `U` of 2-forms
//!   with `Λ²U = 0` such that `ι_X ι_Y κ ∈ U` for every closed 4-form `κ`.
//!   Since `(ι_Xι_Y *φ)² ≠ 0` for a G₂-form, `*φ` cannot be closed.
//! * **Ideal.** Two independent closed 1-forms `a, b` such that every closed
//!   4-form lies in the ideal they generate, i.e. `κ∧a∧b = 0`.
//! * **λ-positivity.** With `X = e₇` and `𝔥 = 𝔤/⟨X⟩`, a splitting
//!   `Λ⁵𝔥* = W ⊕ ⟨w₁,…,w_ℓ⟩` such that `β∧dβ ∈ W` for every 2-form `β`
//!   and `τ∧deʲ ∈ W` for every closed 3-form `τ`. Then `λ ≥ 0` on
//!   `H = {τ closed : τ∧de⁷ ∈ W}` rules out a coclosed structure.
//!
//! The contraction checker works on the full space of closed 4-forms, not on
//! cohomology representatives, so it never needs exact forms to contract
//! to zero.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::exterior::{basis_masks, Form};
use crate::lie_ce::NilpotentLieAlgebra;
use crate::mat::Mat;
use crate::mpoly::MPoly;
use crate::scalar::{Rat, Ring};
use crate::su3::lambda;

/// Failures of the obstruction checkers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    /// The certificate violates a structural requirement; the text names it.
    BadCertificate(String),
}

impl fmt::Display for ObstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstructionError::BadCertificate(m) => write!(f, "bad obstruction certificate: {m}"),
        }
    }
}

fn bad<T>(m: impl Into<String>) -> Result<T, ObstructionError> {
    Err(ObstructionError::BadCertificate(m.into()))
}

/// A witness for the non-existence of coclosed G₂-structures.
#[derive(Debug, Clone, PartialEq)]
pub enum ObstructionCertificate {
    /// Contraction witness.
    Contraction {
        /// Index of `X`.
        x: usize,
        /// Index of the central vector `Y`.
        y: usize,
        /// Basis of `U`.
        u: Vec<Form<Rat>>,
    },
    /// Ideal witness.
    Ideal {
        /// The two closed covectors.
        covectors: (Form<Rat>, Form<Rat>),
    },
    /// λ-positivity witness.
    LambdaPositivity {
        /// Index of the central vector `X`.
        x: usize,
        /// The complement vectors `w₁,…,w_ℓ` on the quotient.
        w: Vec<Form<Rat>>,
        /// Basis of `W` on the quotient.
        w_space: Vec<Form<Rat>>,
        /// `c` with `λ|_H = c·q²`.
        scale: Rat,
        /// `q`.
        square_root: MPoly,
    },
}

impl ObstructionCertificate {
    /// Method tag: `contraction`, `ideal` or `lambda`.
    pub fn method(&self) -> &'static str {
        match self {
            ObstructionCertificate::Contraction { .. } => "contraction",
            ObstructionCertificate::Ideal { .. } => "ideal",
            ObstructionCertificate::LambdaPositivity { .. } => "lambda",
        }
    }
}

/// Outcome of [`check_lambda_obstruction`].
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaVerdict {
    /// `λ|_H = c·q²` with `c > 0`, or `λ|_H = 0`.
    Proven {
        /// `c`.
        scale: Rat,
        /// `q`.
        square_root: MPoly,
    },
    /// The hypotheses hold and no negative sample was found, but `λ|_H` is
    /// not certified as a square.
    Inconclusive,
    /// A hypothesis fails or `λ` is negative somewhere on `H`.
    Fails(String),
}

/// Limits for the searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest dimension of a monomial `U`.
    pub max_u_dim: usize,
    /// Largest number of monomial `w`'s.
    pub max_w: usize,
    /// Sample points used to refute `λ ≥ 0`.
    pub samples: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_u_dim: 3, max_w: 3, samples: 200 }
    }
}

fn in_span(basis: &[Form<Rat>], v: &Form<Rat>, k: usize) -> bool {
    if v.is_zero() {
        return true;
    }
    let mut rows: Vec<Vec<Rat>> = basis.iter().map(|b| b.to_vector(k)).collect();
    let r = Mat::from_rows(rows.clone()).map(|m| m.rank()).unwrap_or(0);
    rows.push(v.to_vector(k));
    Mat::from_rows(rows).map(|m| m.rank()).unwrap_or(usize::MAX) == r
}

fn wedge_square_zero(u: &[Form<Rat>]) -> bool {
    u.iter().enumerate().all(|(i, a)| u[i..].iter().all(|b| a.wedge(b).is_zero()))
}

/// The contractions `ι_X ι_Y κ` over a basis of closed 4-forms.
pub fn contractions(g: &NilpotentLieAlgebra, x: usize, y: usize) -> Vec<Form<Rat>> {
    g.closed_forms(4).iter().map(|k| k.interior_basis(y).interior_basis(x)).collect()
}

/// Checks a contraction certificate.
pub fn check_contraction(g: &NilpotentLieAlgebra, x: usize, y: usize, u: &[Form<Rat>]) -> Result<bool, ObstructionError> {
    let n = g.dim();
    if x == 0 || y == 0 || x > n || y > n {
        return bad("X or Y out of range");
    }
    if x == y {
        return bad("X and Y are not independent");
    }
    if !g.central_basis_vectors().contains(&y) {
        return bad("Y is not central");
    }
    if u.iter().any(|f| f.n() != n || !(f.is_zero() || f.degree() == Some(2))) {
        return bad("U must consist of 2-forms");
    }
    if !wedge_square_zero(u) {
        return bad("wedge square of U is nonzero");
    }
    Ok(contractions(g, x, y).iter().all(|c| in_span(u, c, 2)))
}

/// Lexicographically first contraction certificate with monomial `U`.
pub fn search_contraction(g: &NilpotentLieAlgebra, bounds: &SearchBounds) -> Option<ObstructionCertificate> {
    let n = g.dim();
    let closed = g.closed_forms(4);
    for x in 1..=n {
        for y in g.central_basis_vectors() {
            if x == y {
                continue;
            }
            let mut masks: Vec<u32> = Vec::new();
            for k in &closed {
                for (m, _) in k.interior_basis(y).interior_basis(x).terms() {
                    if !masks.contains(&m) {
                        masks.push(m);
                    }
                }
            }
            masks.sort_by_key(|&m| crate::exterior::mask_indices(m));
            if masks.len() > bounds.max_u_dim {
                continue;
            }
            let u: Vec<Form<Rat>> = masks.iter().map(|&m| Form::from_mask(n, m, Rat::one())).collect();
            if wedge_square_zero(&u) {
                return Some(ObstructionCertificate::Contraction { x, y, u });
            }
        }
    }
    None
}

/// Checks an ideal certificate.
pub fn check_ideal(g: &NilpotentLieAlgebra, a: &Form<Rat>, b: &Form<Rat>) -> Result<bool, ObstructionError> {
    let n = g.dim();
    for f in [a, b] {
        if f.n() != n || f.degree() != Some(1) {
            return bad("covectors must be nonzero 1-forms");
        }
        if !g.differential(f).is_zero() {
            return bad("covector is not closed");
        }
    }
    let ab = a.wedge(b);
    if ab.is_zero() {
        return bad("covectors are not independent");
    }
    Ok(g.closed_forms(4).iter().all(|k| k.wedge(&ab).is_zero()))
}

/// Tries the pair `(e¹, e²)`.
pub fn search_ideal(g: &NilpotentLieAlgebra) -> Option<ObstructionCertificate> {
    let n = g.dim();
    let (a, b) = (Form::generator(n, 1), Form::generator(n, 2));
    match check_ideal(g, &a, &b) {
        Ok(true) => Some(ObstructionCertificate::Ideal { covectors: (a, b) }),
        _ => None,
    }
}

/// The quotient `𝔥 = 𝔤/⟨e_x⟩` and `d eˣ` as a 2-form on it.
fn quotient_data(g: &NilpotentLieAlgebra, x: usize) -> Result<(NilpotentLieAlgebra, Form<Rat>), ObstructionError> {
    let h = g.quotient_by_central(x).map_err(|e| ObstructionError::BadCertificate(alloc::format!("{e}")))?;
    let dx = g.structure()[x - 1].drop_index(x).expect("central");
    Ok((h, dx))
}

/// `λ(Σ tᵢ zᵢ)` for a basis `z` of a space of 3-forms, as a polynomial in
/// the `tᵢ`.
pub fn lambda_poly(z: &[Form<Rat>]) -> MPoly {
    let n = z.first().map(|f| f.n()).unwrap_or(6);
    let mut tau: Form<MPoly> = Form::zero(n);
    for (i, zi) in z.iter().enumerate() {
        tau = tau.add(&zi.lift::<MPoly>().scale(&MPoly::var(i)));
    }
    lambda(&tau).unwrap_or_else(|_| MPoly::new())
}

/// `λ` restricted to `{Σ aₐ zₐ : constraint(a) = 0}` where `z` is the basis
/// of closed 3-forms of `h`.
///
/// Each row of `constraint` is a linear equation on the coefficients `a`.
/// The solution space is parametrized by its kernel basis, whose
/// coordinates become the polynomial variables.
pub fn restricted_lambda_poly(h: &NilpotentLieAlgebra, constraint: &[Vec<Rat>]) -> (MPoly, Vec<Form<Rat>>) {
    let z = h.closed_forms(3);
    let basis: Vec<Form<Rat>> = if constraint.is_empty() {
        z.clone()
    } else {
        let m = Mat::from_rows(constraint.to_vec()).expect("rectangular");
        m.kernel_basis().into_iter().map(|v| v.iter().zip(&z).fold(Form::zero(h.dim()), |acc, (c, f)| acc.add(&f.scale_rat(c)))).collect()
    };
    (lambda_poly(&basis), basis)
}

fn lattice_point(k: usize, m: usize) -> Vec<Rat> {
    const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    (0..m).map(|i| Rat::from_i64(((k as i64 + 1) * PRIMES[i % 12] + i as i64 * (k as i64)) % 9 - 4)).collect()
}

/// Checks a λ-positivity certificate with quotient by `e_x`, complement
/// vectors `w` and subspace `W` of 5-forms on `𝔤/⟨e_x⟩`.
pub fn check_lambda_obstruction(
    g: &NilpotentLieAlgebra,
    x: usize,
    w: &[Form<Rat>],
    w_space: &[Form<Rat>],
    samples: usize,
) -> Result<LambdaVerdict, ObstructionError> {
    if x == 0 || x > g.dim() {
        return bad("X out of range");
    }
    let (h, dx) = quotient_data(g, x)?;
    let n = h.dim();
    let top = basis_masks(n, 5).len();
    let all: Vec<Form<Rat>> = w_space.iter().chain(w).cloned().collect();
    if all.iter().any(|f| f.n() != n || !(f.is_zero() || f.degree() == Some(5))) {
        return bad("w and W must be 5-forms on the quotient");
    }
    let rows: Vec<Vec<Rat>> = all.iter().map(|f| f.to_vector(5)).collect();
    if all.len() != top || Mat::from_rows(rows.clone()).map(|m| m.rank()).unwrap_or(0) != top {
        return bad("W and w do not form a direct sum decomposition");
    }
    let change = Mat::from_rows(rows).expect("square").transpose();
    let nw = w_space.len();
    let complement = |v: &Form<Rat>| -> Vec<Rat> {
        let coords = change.solve(&v.to_vector(5)).expect("square").expect("invertible");
        coords[nw..].to_vec()
    };
    let outside = |v: &Form<Rat>| complement(v).iter().any(|c| !c.is_zero());

    let twos: Vec<Form<Rat>> = basis_masks(n, 2).into_iter().map(|m| Form::from_mask(n, m, Rat::one())).collect();
    let dtwos: Vec<Form<Rat>> = twos.iter().map(|b| h.differential(b)).collect();
    for i in 0..twos.len() {
        for j in i..twos.len() {
            if outside(&twos[i].wedge(&dtwos[j]).add(&twos[j].wedge(&dtwos[i]))) {
                return Ok(LambdaVerdict::Fails(alloc::format!(
                    "beta wedge d beta leaves W for e{:?}, e{:?}",
                    twos[i].sorted_terms()[0].0,
                    twos[j].sorted_terms()[0].0
                )));
            }
        }
    }
    let z = h.closed_forms(3);
    for t in &z {
        for (j, dj) in h.structure().iter().enumerate() {
            if outside(&t.wedge(dj)) {
                return Ok(LambdaVerdict::Fails(alloc::format!("tau wedge d e{} leaves W", j + 1)));
            }
        }
    }
    let cols: Vec<Vec<Rat>> = z.iter().map(|t| complement(&t.wedge(&dx))).collect();
    let constraint: Vec<Vec<Rat>> = (0..w.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let (poly, basis) = restricted_lambda_poly(&h, &constraint);
    if let Some((scale, square_root)) = poly.perfect_square() {
        return Ok(LambdaVerdict::Proven { scale, square_root });
    }
    for k in 0..samples {
        let p = lattice_point(k, basis.len());
        if crate::scalar::OrderedField::signum(&poly.eval(&p)) < 0 {
            return Ok(LambdaVerdict::Fails(alloc::format!("lambda is negative at sample {k}")));
        }
    }
    Ok(LambdaVerdict::Inconclusive)
}

/// Searches splittings `W ⊕ ⟨w⟩` with monomial `w` for `X = e_n`.
pub fn search_lambda_obstruction(g: &NilpotentLieAlgebra, bounds: &SearchBounds) -> Option<ObstructionCertificate> {
    let x = g.dim();
    if !g.central_basis_vectors().contains(&x) {
        return None;
    }
    let n = x - 1;
    let monomials: Vec<Form<Rat>> = basis_masks(n, 5).into_iter().map(|m| Form::from_mask(n, m, Rat::one())).collect();
    for size in 1..=bounds.max_w.min(monomials.len()) {
        for pick in combinations(monomials.len(), size) {
            let w: Vec<Form<Rat>> = pick.iter().map(|&i| monomials[i].clone()).collect();
            let w_space: Vec<Form<Rat>> = (0..monomials.len()).filter(|i| !pick.contains(i)).map(|i| monomials[i].clone()).collect();
            if let Ok(LambdaVerdict::Proven { scale, square_root }) = check_lambda_obstruction(g, x, &w, &w_space, bounds.samples) {
                return Some(ObstructionCertificate::LambdaPositivity { x, w, w_space, scale, square_root });
            }
        }
    }
    None
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Re-checks any certificate.
pub fn check_certificate(g: &NilpotentLieAlgebra, cert: &ObstructionCertificate, samples: usize) -> Result<bool, ObstructionError> {
    match cert {
        ObstructionCertificate::Contraction { x, y, u } => check_contraction(g, *x, *y, u),
        ObstructionCertificate::Ideal { covectors: (a, b) } => check_ideal(g, a, b),
        ObstructionCertificate::LambdaPositivity { x, w, w_space, scale, square_root } => {
            match check_lambda_obstruction(g, *x, w, w_space, samples)? {
                LambdaVerdict::Proven { scale: s, square_root: q } => Ok(&s == scale && (&q == square_root || q.neg() == *square_root)),
                _ => Ok(false),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;
    use crate::scalar::rat;

    fn alg(s: &str) -> NilpotentLieAlgebra {
        NilpotentLieAlgebra::from_structure("t", s).unwrap()
    }

    #[test]
    fn contraction_27a() {
        let g = alg("(0^5,12,14+35)");
        let narrow = [parse_form("e13", 7).unwrap()];
        assert_eq!(check_contraction(&g, 6, 7, &narrow), Ok(false));
        let u = [parse_form("e13", 7).unwrap(), parse_form("e15", 7).unwrap()];
        assert_eq!(check_contraction(&g, 6, 7, &u), Ok(true));
        let found = search_contraction(&g, &SearchBounds::default()).unwrap();
        assert_eq!(found, ObstructionCertificate::Contraction { x: 6, y: 7, u: u.to_vec() });
        assert_eq!(check_certificate(&g, &found, 0), Ok(true));
    }

    #[test]
    fn worksheet_presentation_has_free_factor() {
        let g = alg("(0^5,12,15+23)");
        assert_eq!(g.central_basis_vectors(), alloc::vec![4, 6, 7]);
        assert!(g.structure().iter().all(|f| f.support_mask() & (1 << 3) == 0));
        assert!(search_contraction(&g, &SearchBounds::default()).is_none());
    }

    #[test]
    fn contraction_negatives() {
        let ab = NilpotentLieAlgebra::abelian(7);
        assert_eq!(check_contraction(&ab, 1, 7, &[parse_form("e12", 7).unwrap()]), Ok(false));
        assert!(search_contraction(&ab, &SearchBounds::default()).is_none());
        let g37b = alg("(0^4,12,23,34)");
        assert!(search_contraction(&g37b, &SearchBounds::default()).is_none());
        assert!(search_contraction(&alg("(0^5,0,12)"), &SearchBounds::default()).is_none());
        assert!(check_contraction(&g37b, 1, 1, &[]).is_err());
        assert!(check_contraction(&g37b, 1, 5, &[parse_form("e12+e34", 7).unwrap()]).is_err());
    }

    #[test]
    fn ideal_examples() {
        let ab = NilpotentLieAlgebra::abelian(7);
        let (e1, e2) = (parse_form("e1", 7).unwrap(), parse_form("e2", 7).unwrap());
        assert_eq!(check_ideal(&ab, &e1, &e2), Ok(false));
        assert!(check_ideal(&ab, &e1, &e1).is_err());
        let g37b = alg("(0^4,12,23,34)");
        assert!(check_ideal(&g37b, &e1, &parse_form("e5", 7).unwrap()).is_err());
    }

    #[test]
    fn lambda_polys() {
        let h = NilpotentLieAlgebra::abelian(6);
        assert!(lambda_poly(&[parse_form("e123", 6).unwrap()]).is_empty());
        let std = parse_form("e136+e145+e235-e246", 6).unwrap();
        let p = lambda_poly(&[std]);
        assert_eq!(p, MPoly::from_terms([(alloc::vec![4], rat(-4))]));
        let (full, basis) = restricted_lambda_poly(&h, &[]);
        assert_eq!(basis.len(), 20);
        assert!(full.is_homogeneous());
    }

    #[test]
    fn lambda_abelian_fails() {
        let ab = NilpotentLieAlgebra::abelian(7);
        assert!(search_lambda_obstruction(&ab, &SearchBounds::default()).is_none());
        let w = [parse_form("e12345", 6).unwrap()];
        let rest: Vec<Form<Rat>> = basis_masks(6, 5).into_iter().skip(1).map(|m| Form::from_mask(6, m, rat(1))).collect();
        assert!(matches!(check_lambda_obstruction(&ab, 7, &w, &rest, 200), Ok(LambdaVerdict::Fails(_))));
        assert!(check_lambda_obstruction(&ab, 7, &w, &rest[1..], 200).is_err());
    }

    #[test]
    fn lex_combinations() {
        assert_eq!(
            combinations(4, 2),
            alloc::vec![alloc::vec![0, 1], alloc::vec![0, 2], alloc::vec![0, 3], alloc::vec![1, 2], alloc::vec![1, 3], alloc::vec![2, 3]]
        );
        assert_eq!(combinations(6, 3).len(), 20);
        assert_eq!(combinations(2, 3).len(), 0);
    }
}
