// SPDX-License-Identifier: MIT OR Apache-2.0
//! Linear SU(3)-structures on a 6-dimensional space with coframe `e¹…e⁶`.
//!
//! For a 3-form `τ` the map `k_τ(v) = ι_vτ ∧ τ` takes values in `Λ⁵`, and
//! `κ_{ℓm}` is the coefficient of `e^{1…6}` in `e^ℓ ∧ k_τ(e_m)`. The quartic
//! invariant is `λ(τ) = tr(K²)/6`; it is negative exactly when `τ` induces a
//! complex structure.
//!
//! The operator `K` depends on a choice of volume form. [`oriented_k`] uses
//! the orientation of `ω³` and the sign for which the standard pair
//! `ω = e¹²+e³⁴+e⁵⁶`, `ψ₋ = e¹³⁶+e¹⁴⁵+e²³⁵−e²⁴⁶` gives `ĥ = 2·Id` and
//! `ψ₊ = e¹³⁵−e¹⁴⁶−e²³⁶−e²⁴⁵`.

use alloc::vec::Vec;
use core::fmt;

use crate::exterior::Form;
use crate::mat::Mat;
use crate::quad::QuadExt;
use crate::scalar::{format_rat, frac, Field, OrderedField, Rat, Ring};

/// Failures of the SU(3) layer; a failed validation names the first
/// violated condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Su3Error {
    /// Inputs are not forms on six generators of the expected degrees.
    DimensionMismatch,
    /// `ω³ = 0`, so `ω` is degenerate.
    DegenerateOmega,
    /// `λ(ψ₋) ≥ 0`; carries the value.
    NonNegativeLambda(Rat),
    /// `ω ∧ ψ₋ ≠ 0`.
    OmegaWedgePsiMinus,
    /// The symmetrized `ĥ` is not positive definite.
    MetricNotPositive,
    /// `ω ∧ ψ₊ ≠ 0` for the computed `ψ₊`.
    OmegaWedgePsiPlus,
    /// `ψ₊ ∧ ψ₋` vanishes, so no multiple of `K*ψ₋` can be normalized.
    Unnormalizable,
}

impl fmt::Display for Su3Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Su3Error::DimensionMismatch => f.write_str("expected a 2-form and a 3-form on six generators"),
            Su3Error::DegenerateOmega => f.write_str("omega^3 = 0"),
            Su3Error::NonNegativeLambda(l) => write!(f, "lambda(psi-) = {} is not negative", format_rat(l)),
            Su3Error::OmegaWedgePsiMinus => f.write_str("omega ^ psi- != 0"),
            Su3Error::MetricNotPositive => f.write_str("induced metric h is not positive definite"),
            Su3Error::OmegaWedgePsiPlus => f.write_str("omega ^ psi+ != 0"),
            Su3Error::Unnormalizable => f.write_str("psi+ ^ psi- = 0"),
        }
    }
}

fn check6<C: Ring>(f: &Form<C>) -> Result<(), Su3Error> {
    if f.n() == 6 {
        Ok(())
    } else {
        Err(Su3Error::DimensionMismatch)
    }
}

/// `k_τ(v) = ι_vτ ∧ τ`.
pub fn k_map<C: Ring>(tau: &Form<C>, v: &[C]) -> Result<Form<C>, Su3Error> {
    check6(tau)?;
    let iv = tau.interior(v).map_err(|_| Su3Error::DimensionMismatch)?;
    Ok(iv.wedge(tau))
}

/// The matrix `κ_{ℓm}` relative to the volume `e^{1…6}`.
pub fn k_matrix<C: Ring>(tau: &Form<C>) -> Result<Mat<C>, Su3Error> {
    check6(tau)?;
    let cols: Vec<Form<C>> = (1..=6).map(|m| tau.interior_basis(m).wedge(tau)).collect();
    Ok(Mat::from_fn(6, 6, |l, m| Form::generator(6, l + 1).wedge(&cols[m]).top_coefficient()))
}

/// `λ(τ) = tr(K_τ²)/6`.
pub fn lambda<C: Ring>(tau: &Form<C>) -> Result<C, Su3Error> {
    let k = k_matrix(tau)?;
    let t = k.mul(&k).expect("square").trace();
    Ok(t.scale(&frac(1, 6)))
}

/// `λ(τ)` computed independently from the fully antisymmetric coefficient
/// tensor, `κ_{ℓm} = (1/12) Σ τ_{mij} τ_{pqr} ε_{ℓijpqr}`.
///
/// This reference path shares no code with [`k_matrix`] beyond reading the
/// coefficients of `τ`.
pub fn lambda_reference(tau: &Form<Rat>) -> Rat {
    let mut entries: Vec<([usize; 3], Rat)> = Vec::new();
    for (idx, c) in tau.sorted_terms() {
        if idx.len() != 3 {
            continue;
        }
        let [a, b, d] = [idx[0] - 1, idx[1] - 1, idx[2] - 1];
        let perms = [([a, b, d], 1), ([b, d, a], 1), ([d, a, b], 1), ([b, a, d], -1), ([a, d, b], -1), ([d, b, a], -1)];
        for (p, s) in perms {
            entries.push((p, if s > 0 { c.clone() } else { -c.clone() }));
        }
    }
    let perm_sign = |v: [usize; 6]| -> i32 {
        let mut seen = 0u32;
        for &x in &v {
            if seen >> x & 1 == 1 {
                return 0;
            }
            seen |= 1 << x;
        }
        let mut inv = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                if v[i] > v[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let mut k: Vec<Vec<Rat>> = alloc::vec![alloc::vec![Rat::zero(); 6]; 6];
    for (l, row) in k.iter_mut().enumerate() {
        for ([m, i, j], c1) in &entries {
            for ([p, q, r], c2) in &entries {
                let s = perm_sign([l, *i, *j, *p, *q, *r]);
                if s != 0 {
                    let v = c1 * c2 * Rat::from_integer(s.into());
                    row[*m] += v;
                }
            }
        }
    }
    let mut tr = Rat::zero();
    for (l, row) in k.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            tr += v * &k[m][l];
        }
    }
    tr / Rat::from_i64(12 * 12 * 6)
}

/// Applies the transpose of `k` to every covector slot: `eˡ ↦ Σ_m k_{ℓm} e^m`.
pub fn kstar<C: Ring>(tau: &Form<C>, k: &Mat<C>) -> Form<C> {
    let n = tau.n();
    let images: Vec<Form<C>> = (0..n)
        .map(|l| {
            let mut f = Form::zero(n);
            for m in 0..n {
                f.add_term(1 << m, k.get(l, m).clone());
            }
            f
        })
        .collect();
    let mut out = Form::zero(n);
    for (idx, c) in tau.sorted_terms() {
        let mut t = Form::scalar(n, c.clone());
        for i in idx {
            t = t.wedge(&images[i - 1]);
        }
        out = out.add(&t);
    }
    out
}

/// Sign of the `e^{1…6}` coefficient of `ω³`, or `0` if `ω` is degenerate.
pub fn orientation(omega: &Form<Rat>) -> i8 {
    omega.power(3).top_coefficient().signum()
}

/// `K` oriented by `ω³`: equal to `−sign(ω³)·κ`.
pub fn oriented_k(omega: &Form<Rat>, psi: &Form<Rat>) -> Result<Mat<Rat>, Su3Error> {
    check6(omega)?;
    let k = k_matrix(psi)?;
    Ok(if orientation(omega) > 0 { k.scale(&Rat::from_i64(-1)) } else { k })
}

fn eval_omega(omega: &Form<Rat>, u: &[Rat], v: &[Rat]) -> Rat {
    let iu = omega.interior(u).expect("vector dimension");
    iu.interior(v).expect("vector dimension").coefficient_mask(0)
}

/// The symmetrized matrix `H_{ij} = ½(ω(e_i, K e_j) + ω(e_j, K e_i))` with
/// `K` from [`oriented_k`] and `ω(u, v) = ι_v ι_u ω`.
pub fn hhat_matrix(omega: &Form<Rat>, psi: &Form<Rat>) -> Result<Mat<Rat>, Su3Error> {
    let k = oriented_k(omega, psi)?;
    let unit = |i: usize| -> Vec<Rat> { (0..6).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect() };
    let col = |j: usize| -> Vec<Rat> { (0..6).map(|l| k.get(l, j).clone()).collect() };
    Ok(Mat::from_fn(6, 6, |i, j| {
        let a = eval_omega(omega, &unit(i), &col(j));
        let b = eval_omega(omega, &unit(j), &col(i));
        (a + b) * frac(1, 2)
    }))
}

/// `|λ|^{−3/2}` as an element of `ℚ(√|λ|)`.
fn inverse_three_halves(lambda: &Rat) -> QuadExt {
    let abs = if lambda.signum() < 0 { -lambda.clone() } else { lambda.clone() };
    let root = QuadExt::sqrt(&abs).expect("nonnegative");
    root.scale(&abs).inv().expect("nonzero lambda")
}

/// `ψ₊ = −|λ|^{−3/2}·K*ψ₋` over `ℚ(√|λ|)`.
pub fn psi_plus(omega: &Form<Rat>, psi: &Form<Rat>) -> Result<Form<QuadExt>, Su3Error> {
    let l = lambda(psi)?;
    if l.signum() >= 0 {
        return Err(Su3Error::NonNegativeLambda(l));
    }
    let r = kstar(psi, &oriented_k(omega, psi)?);
    let c = inverse_three_halves(&l).neg();
    Ok(r.lift::<QuadExt>().scale(&c))
}

/// The rational multiple `c·K*ψ₋` normalized by `ψ₊ ∧ ψ₋ = (2/3)ω³`.
pub fn psi_plus_normalized(omega: &Form<Rat>, psi: &Form<Rat>) -> Result<(Form<Rat>, Rat), Su3Error> {
    let r = kstar(psi, &oriented_k(omega, psi)?);
    let p = r.wedge(psi).top_coefficient();
    let target = omega.power(3).top_coefficient() * frac(2, 3);
    let c = target.div(&p).ok_or(Su3Error::Unnormalizable)?;
    Ok((r.scale_rat(&c), c))
}

/// A validated SU(3)-structure together with its derived data.
#[derive(Debug, Clone, PartialEq)]
pub struct Su3Data {
    /// The 2-form `ω`.
    pub omega: Form<Rat>,
    /// The 3-form `ψ₋`.
    pub psi_minus: Form<Rat>,
    /// `λ(ψ₋)` relative to `(e^{1…6})⊗²`.
    pub lambda: Rat,
    /// Coefficient of `e^{1…6}` in `ω³`.
    pub omega_cubed: Rat,
    /// The oriented operator `K`.
    pub k: Mat<Rat>,
    /// Symmetrized `ĥ`, positive definite.
    pub hhat: Mat<Rat>,
    /// `ψ₊` scaled so that `ψ₊ ∧ ψ₋ = (2/3)ω³`.
    pub psi_plus: Form<Rat>,
    /// The scalar `c` with `ψ₊ = c·K*ψ₋`.
    pub psi_plus_scale: Rat,
    /// `−|λ|^{−3/2}·K*ψ₋` over `ℚ(√|λ|)`.
    pub psi_plus_definitional: Form<QuadExt>,
    /// `(ψ₊ ∧ ψ₋)/((2/3)ω³)` for the definitional `ψ₊`; one for a normalized pair.
    pub normalization_ratio: QuadExt,
}

impl Su3Data {
    /// Whether `(ω, ψ₋)` is normalized, so both versions of `ψ₊` agree.
    pub fn is_normalized(&self) -> bool {
        self.normalization_ratio == QuadExt::one()
    }

    /// The induced metric `h = |λ|^{−1/2}ĥ` over `ℚ(√|λ|)`.
    pub fn metric(&self) -> Mat<QuadExt> {
        let abs = -self.lambda.clone();
        let s = QuadExt::sqrt(&abs).expect("negative lambda").inv().expect("nonzero");
        self.hhat.map(|x| s.scale(x))
    }
}

/// Checks every condition of an SU(3)-structure and derives `ψ₊`.
pub fn validate_su3(omega: &Form<Rat>, psi: &Form<Rat>) -> Result<Su3Data, Su3Error> {
    check6(omega)?;
    check6(psi)?;
    if !(omega.is_zero() || omega.degree() == Some(2)) || !(psi.is_zero() || psi.degree() == Some(3)) {
        return Err(Su3Error::DimensionMismatch);
    }
    let omega_cubed = omega.power(3).top_coefficient();
    if omega_cubed.is_zero() {
        return Err(Su3Error::DegenerateOmega);
    }
    let l = lambda(psi)?;
    if l.signum() >= 0 {
        return Err(Su3Error::NonNegativeLambda(l));
    }
    if !omega.wedge(psi).is_zero() {
        return Err(Su3Error::OmegaWedgePsiMinus);
    }
    let hhat = hhat_matrix(omega, psi)?;
    if !hhat.is_positive_definite().expect("symmetrized") {
        return Err(Su3Error::MetricNotPositive);
    }
    let (plus, scale) = psi_plus_normalized(omega, psi)?;
    if !omega.wedge(&plus).is_zero() {
        return Err(Su3Error::OmegaWedgePsiPlus);
    }
    let definitional = psi_plus(omega, psi)?;
    let top = definitional.wedge(&psi.lift()).top_coefficient();
    let ratio = top.mul(&QuadExt::from_rat(&(omega_cubed.clone() * frac(2, 3))).inv().expect("nonzero"));
    Ok(Su3Data {
        omega: omega.clone(),
        psi_minus: psi.clone(),
        lambda: l,
        omega_cubed,
        k: oriented_k(omega, psi)?,
        hhat,
        psi_plus: plus,
        psi_plus_scale: scale,
        psi_plus_definitional: definitional,
        normalization_ratio: ratio,
    })
}

/// The standard pair `(e¹²+e³⁴+e⁵⁶, e¹³⁶+e¹⁴⁵+e²³⁵−e²⁴⁶)`.
pub fn standard_pair() -> (Form<Rat>, Form<Rat>) {
    let f = |s: &str| crate::parse::parse_form(s, 6).expect("literal");
    (f("e12+e34+e56"), f("e136+e145+e235-e246"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;
    use crate::scalar::rat;

    fn f6(s: &str) -> Form<Rat> {
        parse_form(s, 6).unwrap()
    }

    #[test]
    fn k_map_examples() {
        let e1: Vec<Rat> = (0..6).map(|i| if i == 0 { rat(1) } else { rat(0) }).collect();
        assert!(k_map(&f6("e123"), &e1).unwrap().is_zero());
        assert_eq!(k_map(&f6("e123+e456"), &e1).unwrap().to_text(), "e23456");
        assert!(k_map(&Form::zero(6), &e1).unwrap().is_zero());
    }

    #[test]
    fn standard_values() {
        let (w, p) = standard_pair();
        let k = k_matrix(&p).unwrap();
        assert_eq!(k.mul(&k).unwrap(), Mat::identity(6).scale(&rat(-4)));
        assert_eq!(lambda(&p).unwrap(), rat(-4));
        assert_eq!(hhat_matrix(&w, &p).unwrap(), Mat::identity(6).scale(&rat(2)));
        let expected = f6("e135-e146-e236-e245");
        assert_eq!(psi_plus(&w, &p).unwrap(), expected.lift::<QuadExt>());
        assert_eq!(psi_plus_normalized(&w, &p).unwrap().0, expected);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(k_matrix(&f6("e123")).unwrap().is_zero());
        assert_eq!(lambda(&f6("e123")).unwrap(), rat(0));
        let (w, p) = standard_pair();
        assert_eq!(validate_su3(&w, &f6("e123")), Err(Su3Error::NonNegativeLambda(rat(0))));
        assert_eq!(validate_su3(&f6("e12"), &p), Err(Su3Error::DegenerateOmega));
        assert!(hhat_matrix(&w, &Form::zero(6)).unwrap().is_zero());
    }

    #[test]
    fn homogeneity() {
        let tau = f6("e123+2*e145-e246+e356+3*e126");
        let two = rat(2);
        assert_eq!(k_matrix(&tau.scale(&two)).unwrap(), k_matrix(&tau).unwrap().scale(&rat(4)));
        assert_eq!(lambda(&tau.scale(&rat(3))).unwrap(), lambda(&tau).unwrap() * rat(81));
        assert_eq!(lambda_reference(&tau), lambda(&tau).unwrap());
        let (w, p) = standard_pair();
        assert_eq!(psi_plus(&w, &p.scale(&two)).unwrap(), psi_plus(&w, &p).unwrap().scale(&QuadExt::from_i64(2)));
    }

    #[test]
    fn standard_pair_validates() {
        let (w, p) = standard_pair();
        let d = validate_su3(&w, &p).unwrap();
        assert_eq!(d.lambda, rat(-4));
        assert!(d.is_normalized());
        assert_eq!(d.metric(), Mat::identity(6));
    }

    #[test]
    fn example_37b_quotient() {
        let d = validate_su3(&f6("e13+e24-e56"), &f6("e126-e145+e235-e346")).unwrap();
        assert_eq!(d.psi_plus, f6("-e125-e146+e236+e345"));
        assert!(d.is_normalized());
        assert_eq!(d.metric(), Mat::identity(6));
    }
}
