// SPDX-License-Identifier: MIT OR Apache-2.0
//! G₂-forms on 7-dimensional nilpotent Lie algebras and the purely
//! coclosed certificate checker.
//!
//! A certificate `(ω, ψ₋, η, X)` describes an SU(3)-structure on the
//! quotient `𝔥 = 𝔤/⟨X⟩` together with a 1-form `η` with `η(X) ≠ 0`. The
//! G₂-form is `φ = ω∧η + s·ψ₊` where `ψ₊` is normalized by
//! `ψ₊∧ψ₋ = (2/3)ω³` and `s = ±1` selects one of the two sign readings of
//! `ψ₊` (see [`Reading`]). For that form the conditions are
//!
//! 1. `dψ₋ = 0`,
//! 2. `ω∧dω = s·ψ₋∧dη`,
//! 3. `ω²∧dη = −2s·ψ₊∧dω`.
//!
//! A reading passes only if the conditions hold and an independent exact
//! Hodge-dual computation confirms that `φ` is coclosed and pure.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::exterior::{basis_masks, wedge_sign, Form};
use crate::lie_ce::NilpotentLieAlgebra;
use crate::mat::Mat;
use crate::parse::parse_form;
use crate::quad::QuadExt;
use crate::scalar::{frac, Field, Rat, Ring};
use crate::su3::{validate_su3, Su3Data, Su3Error};

/// Failures of the G₂ layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum G2Error {
    /// Forms of the wrong size or degree.
    DimensionMismatch,
    /// A certificate requirement is violated; the text names it.
    CertificateInvariantViolation(String),
    /// The metric passed to the Hodge star is not positive definite.
    NotPositiveDefinite,
}

impl fmt::Display for G2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            G2Error::DimensionMismatch => f.write_str("forms of the wrong size or degree"),
            G2Error::CertificateInvariantViolation(m) => write!(f, "certificate invariant violated: {m}"),
            G2Error::NotPositiveDefinite => f.write_str("metric is not positive definite"),
        }
    }
}

fn violation<T>(m: &str) -> Result<T, G2Error> {
    Err(G2Error::CertificateInvariantViolation(String::from(m)))
}

/// `B_{ij}`: the `e^{1…7}` coefficient of `(1/6) ι_{e_i}φ ∧ ι_{e_j}φ ∧ φ`.
pub fn b_matrix<C: Ring>(phi: &Form<C>) -> Result<Mat<C>, G2Error> {
    if phi.n() != 7 {
        return Err(G2Error::DimensionMismatch);
    }
    let contractions: Vec<Form<C>> = (1..=7).map(|i| phi.interior_basis(i)).collect();
    let sixth = frac(1, 6);
    let mut b = Mat::zeros(7, 7);
    for i in 0..7 {
        let left = contractions[i].wedge(phi);
        for (j, cj) in contractions.iter().enumerate().skip(i) {
            let v = cj.wedge(&left).top_coefficient().scale(&sixth);
            b.set(i, j, v.clone());
            b.set(j, i, v);
        }
    }
    Ok(b)
}

/// Whether `φ` is a positive 3-form, together with `det B`.
///
/// `φ` is positive exactly when `B` or `−B` is positive definite; the sign
/// of the ninth root `(det B)^{1/9}` then matches the definiteness branch.
pub fn is_positive_g2(phi: &Form<Rat>) -> Result<(bool, Rat), G2Error> {
    let b = b_matrix(phi)?;
    let det = b.det().expect("square");
    let pos = b.is_positive_definite().expect("symmetric") || b.scale(&Rat::from_i64(-1)).is_positive_definite().expect("symmetric");
    Ok((pos, det))
}

/// `φ₀ = e¹²⁷+e³⁴⁷+e⁵⁶⁷+e¹³⁵−e¹⁴⁶−e²³⁶−e²⁴⁵` and its Hodge dual.
pub fn standard_forms() -> (Form<Rat>, Form<Rat>) {
    (
        parse_form("e127+e347+e567+e135-e146-e236-e245", 7).expect("literal"),
        parse_form("e1234+e1256+e1367+e1457+e2357-e2467+e3456", 7).expect("literal"),
    )
}

/// `½ω² + ψ₋∧η`.
pub fn dual_four_form(omega: &Form<Rat>, psi_minus: &Form<Rat>, eta: &Form<Rat>) -> Form<Rat> {
    omega.wedge(omega).scale_rat(&frac(1, 2)).add(&psi_minus.wedge(eta))
}

/// Exact Hodge star for a positive definite rational metric.
///
/// Returns `(R, √det g)` with `*α = √det g · R`, where the coefficient of
/// `R` on `e^J` is `sign(I, J)·⟨e^I, α⟩` for the complement `I` of `J`,
/// paired with the inverse metric.
pub fn hodge_star(g: &Mat<Rat>, alpha: &Form<Rat>) -> Result<(Form<Rat>, QuadExt), G2Error> {
    let n = alpha.n();
    if g.rows() != n || g.cols() != n {
        return Err(G2Error::DimensionMismatch);
    }
    if !g.is_positive_definite().map_err(|_| G2Error::NotPositiveDefinite)? {
        return Err(G2Error::NotPositiveDefinite);
    }
    let ginv = g.inverse().expect("square").expect("definite matrices are invertible");
    let full = (1u32 << n) - 1;
    let mut out = Form::zero(n);
    for (kmask, c) in alpha.terms() {
        let k = kmask.count_ones() as usize;
        let kidx: Vec<usize> = crate::exterior::mask_indices(kmask).iter().map(|i| i - 1).collect();
        for imask in basis_masks(n, k) {
            let iidx: Vec<usize> = crate::exterior::mask_indices(imask).iter().map(|i| i - 1).collect();
            let pairing = ginv.submatrix(&iidx, &kidx).det().expect("square");
            if pairing.is_zero() {
                continue;
            }
            let jmask = full & !imask;
            let s = wedge_sign(imask, jmask);
            let v = c * &pairing;
            out.add_term(jmask, if s < 0 { -v } else { v });
        }
    }
    let factor = QuadExt::sqrt(&g.det().expect("square")).expect("positive determinant");
    Ok((out, factor))
}

/// `φ ∧ dφ`.
pub fn phi_wedge_dphi(g: &NilpotentLieAlgebra, phi: &Form<Rat>) -> Form<Rat> {
    phi.wedge(&g.differential(phi))
}

/// Data claiming a purely coclosed G₂-structure.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Certificate {
    /// The 2-form `ω` in ambient labels.
    pub omega: Form<Rat>,
    /// The 3-form `ψ₋` in ambient labels.
    pub psi_minus: Form<Rat>,
    /// The 1-form `η`.
    pub eta: Form<Rat>,
    /// Index of the central basis vector `X`; inferred when absent.
    pub x: Option<usize>,
}

/// Which sign of `ψ₊` enters `φ = ω∧η + s·ψ₊`.
///
/// The two readings differ in the sign of the normalization identity:
/// [`Reading::Minus`] corresponds to `ψ₋∧ψ₊ = (2/3)ω³` and is tried first,
/// [`Reading::Plus`] to `ψ₊∧ψ₋ = (2/3)ω³`, under which the standard pair
/// reproduces `φ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reading {
    /// `s = −1`.
    Minus,
    /// `s = +1`.
    Plus,
}

impl Reading {
    /// Both readings in the order they are tried.
    pub const ALL: [Reading; 2] = [Reading::Minus, Reading::Plus];

    /// The sign `s`.
    pub fn sign(self) -> Rat {
        match self {
            Reading::Minus => Rat::from_i64(-1),
            Reading::Plus => Rat::from_i64(1),
        }
    }

    /// Short label, `minus` or `plus`.
    pub fn label(self) -> &'static str {
        match self {
            Reading::Minus => "minus",
            Reading::Plus => "plus",
        }
    }
}

/// Infers `X` as the unique central basis vector outside the support of
/// `ω` and `ψ₋` with `η(X) ≠ 0`.
pub fn infer_x(g: &NilpotentLieAlgebra, cert: &G2Certificate) -> Result<usize, G2Error> {
    let support = cert.omega.support_mask() | cert.psi_minus.support_mask();
    let candidates: Vec<usize> =
        g.central_basis_vectors().into_iter().filter(|&x| support >> (x - 1) & 1 == 0 && !cert.eta.coefficient(&[x]).is_zero()).collect();
    match candidates.as_slice() {
        [x] => Ok(*x),
        [] => violation("no central basis vector X with i_X omega = i_X psi = 0 and eta(X) != 0"),
        _ => Err(G2Error::CertificateInvariantViolation(alloc::format!("X is ambiguous among {candidates:?}; give it explicitly"))),
    }
}

/// The G₂-form of a certificate under one reading.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    /// Central vector index used for the quotient.
    pub x: usize,
    /// Reading that fixed the sign of `ψ₊`.
    pub reading: Reading,
    /// SU(3) data on the quotient.
    pub su3: Su3Data,
    /// `s·ψ₊` in ambient labels.
    pub psi_plus: Form<Rat>,
    /// `φ = ω∧η + s·ψ₊`.
    pub phi: Form<Rat>,
    /// `g = h + ρ·η⊗η` over `ℚ(√|λ|)`, with `ρ` the normalization ratio.
    pub metric: Mat<QuadExt>,
}

fn check_shapes(cert: &G2Certificate) -> Result<(), G2Error> {
    let deg_ok = |f: &Form<Rat>, k: usize| f.n() == 7 && (f.is_zero() || f.degree() == Some(k));
    if !deg_ok(&cert.omega, 2) || !deg_ok(&cert.psi_minus, 3) || !deg_ok(&cert.eta, 1) {
        return Err(G2Error::DimensionMismatch);
    }
    Ok(())
}

/// Resolves `X` and checks the certificate bullets.
pub fn certificate_x(g: &NilpotentLieAlgebra, cert: &G2Certificate) -> Result<usize, G2Error> {
    check_shapes(cert)?;
    if g.dim() != 7 {
        return Err(G2Error::DimensionMismatch);
    }
    let x = match cert.x {
        Some(x) => x,
        None => infer_x(g, cert)?,
    };
    if x == 0 || x > 7 || !g.central_basis_vectors().contains(&x) {
        return violation("X is not a central basis vector");
    }
    if !cert.omega.interior_basis(x).is_zero() {
        return violation("i_X omega != 0");
    }
    if !cert.psi_minus.interior_basis(x).is_zero() {
        return violation("i_X psi- != 0");
    }
    if cert.eta.coefficient(&[x]).is_zero() {
        return violation("eta(X) = 0");
    }
    Ok(x)
}

/// Builds `φ` and the metric for one reading.
pub fn construct_phi(g: &NilpotentLieAlgebra, cert: &G2Certificate, reading: Reading) -> Result<Construction, G2Error> {
    let x = certificate_x(g, cert)?;
    let omega_q = cert.omega.drop_index(x).expect("i_X omega = 0");
    let psi_q = cert.psi_minus.drop_index(x).expect("i_X psi = 0");
    let su3 = validate_su3(&omega_q, &psi_q).map_err(|e| G2Error::CertificateInvariantViolation(alloc::format!("SU(3) condition: {e}")))?;
    let psi_plus = su3.psi_plus.insert_index(x).scale_rat(&reading.sign());
    let phi = cert.omega.wedge(&cert.eta).add(&psi_plus);
    let metric = ambient_metric(&su3, x, &cert.eta);
    Ok(Construction { x, reading, su3, psi_plus, phi, metric })
}

fn ambient_metric(su3: &Su3Data, x: usize, eta: &Form<Rat>) -> Mat<QuadExt> {
    let h = su3.metric();
    let ev = eta.to_vector(1);
    let rho = &su3.normalization_ratio;
    Mat::from_fn(7, 7, |i, j| {
        let hij = if i + 1 == x || j + 1 == x {
            QuadExt::zero()
        } else {
            let qi = if i + 1 > x { i - 1 } else { i };
            let qj = if j + 1 > x { j - 1 } else { j };
            h.get(qi, qj).clone()
        };
        hij.add(&rho.scale(&(&ev[i] * &ev[j])))
    })
}

/// Checks `B(φ) = c·g` for one scalar `c` with `c² = det g`.
pub fn metric_consistent(phi: &Form<Rat>, metric: &Mat<QuadExt>) -> bool {
    let b = match b_matrix(phi) {
        Ok(b) => b,
        Err(_) => return false,
    };
    let (i, j) = match (0..7).flat_map(|i| (0..7).map(move |j| (i, j))).find(|&(i, j)| !metric.get(i, j).is_zero()) {
        Some(p) => p,
        None => return false,
    };
    let c = match QuadExt::from_rat(b.get(i, j)).checked_mul(&metric.get(i, j).inv().expect("nonzero")) {
        Ok(c) => c,
        Err(_) => return false,
    };
    for r in 0..7 {
        for s in 0..7 {
            match metric.get(r, s).checked_mul(&c) {
                Ok(v) if v == QuadExt::from_rat(b.get(r, s)) => {}
                _ => return false,
            }
        }
    }
    match (c.checked_mul(&c), metric.det()) {
        (Ok(c2), Ok(d)) => c2 == d,
        _ => false,
    }
}

/// Flags for one sign reading.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadingReport {
    /// Which reading.
    pub reading: Reading,
    /// Condition (2) under this reading.
    pub cond2: bool,
    /// Condition (3) under this reading.
    pub cond3: bool,
    /// `φ` is a positive 3-form.
    pub phi_positive: bool,
    /// The exact Hodge dual of `φ` is closed.
    pub dual_closed: bool,
    /// The exact Hodge dual is proportional to `½ω² + s·ψ₋∧η`.
    pub dual_matches: bool,
    /// `φ ∧ dφ = 0`.
    pub pure: bool,
    /// `B(φ)` is a multiple of `h + ρη⊗η` with the right determinant.
    pub metric_consistent: bool,
    /// Residual of the first failing condition.
    pub residual: Option<String>,
}

impl ReadingReport {
    /// All required flags hold.
    pub fn pass(&self) -> bool {
        self.cond2 && self.cond3 && self.phi_positive && self.dual_closed && self.dual_matches && self.pure
    }
}

/// Result of [`check_purely_coclosed`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Central vector used.
    pub x: usize,
    /// `None` when the SU(3) conditions hold, else the first failure.
    pub su3_error: Option<Su3Error>,
    /// `λ(ψ₋)` on the quotient.
    pub lambda: Option<Rat>,
    /// Normalization ratio of the definitional `ψ₊`.
    pub normalization_ratio: Option<QuadExt>,
    /// Condition (1): `dψ₋ = 0`.
    pub cond1: bool,
    /// Per-reading flags, in [`Reading::ALL`] order.
    pub readings: Vec<ReadingReport>,
    /// Construction of the first passing reading.
    pub construction: Option<Construction>,
}

impl VerificationReport {
    /// Whether the SU(3) conditions hold.
    pub fn su3_valid(&self) -> bool {
        self.su3_error.is_none()
    }

    /// The first passing reading, if any.
    pub fn accepted(&self) -> Option<Reading> {
        if !self.su3_valid() || !self.cond1 {
            return None;
        }
        self.readings.iter().find(|r| r.pass()).map(|r| r.reading)
    }

    /// Overall verdict.
    pub fn pass(&self) -> bool {
        self.accepted().is_some()
    }

    /// The reading whose flags are reported: the accepted one, else the first.
    pub fn primary(&self) -> Option<&ReadingReport> {
        match self.accepted() {
            Some(a) => self.readings.iter().find(|r| r.reading == a),
            None => self.readings.first(),
        }
    }
}

fn proportional(a: &Form<Rat>, b: &Form<Rat>) -> bool {
    let (mask, ca) = match a.terms().next() {
        Some((m, c)) => (m, c.clone()),
        None => return b.is_zero(),
    };
    let cb = b.coefficient_mask(mask);
    if cb.is_zero() {
        return false;
    }
    b.scale_rat(&(ca / cb)) == *a
}

fn evaluate_reading(g: &NilpotentLieAlgebra, cert: &G2Certificate, c: &Construction) -> ReadingReport {
    let s = c.reading.sign();
    let d_omega = g.differential(&cert.omega);
    let d_eta = g.differential(&cert.eta);
    let r2 = cert.omega.wedge(&d_omega).sub(&cert.psi_minus.wedge(&d_eta).scale_rat(&s));
    let r3 = cert.omega.wedge(&cert.omega).wedge(&d_eta).add(&c.psi_plus.wedge(&d_omega).scale_rat(&Rat::from_i64(2)));
    let (positive, _) = is_positive_g2(&c.phi).unwrap_or((false, Rat::zero()));
    let (mut dual_closed, mut dual_matches) = (false, false);
    if positive {
        let b = b_matrix(&c.phi).expect("seven generators");
        let gm = if b.is_positive_definite().expect("symmetric") { b } else { b.scale(&Rat::from_i64(-1)) };
        if let Ok((r, _)) = hodge_star(&gm, &c.phi) {
            dual_closed = g.differential(&r).is_zero();
            let expected = dual_four_form(&cert.omega, &cert.psi_minus, &cert.eta.scale_rat(&s));
            dual_matches = proportional(&r, &expected);
        }
    }
    let pure = phi_wedge_dphi(g, &c.phi).is_zero();
    let residual = if !r2.is_zero() {
        Some(alloc::format!("condition 2 residual {}", r2))
    } else if !r3.is_zero() {
        Some(alloc::format!("condition 3 residual {}", r3))
    } else {
        None
    };
    ReadingReport {
        reading: c.reading,
        cond2: r2.is_zero(),
        cond3: r3.is_zero(),
        phi_positive: positive,
        dual_closed,
        dual_matches,
        pure,
        metric_consistent: metric_consistent(&c.phi, &c.metric),
        residual,
    }
}

/// Evaluates the purely coclosed conditions exactly under both readings.
pub fn check_purely_coclosed(g: &NilpotentLieAlgebra, cert: &G2Certificate) -> Result<VerificationReport, G2Error> {
    let x = certificate_x(g, cert)?;
    let cond1 = g.differential(&cert.psi_minus).is_zero();
    let omega_q = cert.omega.drop_index(x).expect("i_X omega = 0");
    let psi_q = cert.psi_minus.drop_index(x).expect("i_X psi = 0");
    let lambda = crate::su3::lambda(&psi_q).ok();
    let mut report =
        VerificationReport { x, su3_error: None, lambda, normalization_ratio: None, cond1, readings: Vec::new(), construction: None };
    if let Err(e) = validate_su3(&omega_q, &psi_q) {
        report.su3_error = Some(e);
        return Ok(report);
    }
    for reading in Reading::ALL {
        let c = construct_phi(g, cert, reading)?;
        report.normalization_ratio = Some(c.su3.normalization_ratio.clone());
        let rr = evaluate_reading(g, cert, &c);
        let accept = cond1 && rr.pass() && report.construction.is_none();
        report.readings.push(rr);
        if accept {
            report.construction = Some(c);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn f7(s: &str) -> Form<Rat> {
        parse_form(s, 7).unwrap()
    }

    #[test]
    fn standard_b_matrix() {
        let (phi, _) = standard_forms();
        assert_eq!(b_matrix(&phi).unwrap(), Mat::identity(7));
        assert_eq!(is_positive_g2(&phi).unwrap(), (true, rat(1)));
        assert!(b_matrix(&Form::<Rat>::zero(7)).unwrap().is_zero());
        assert_eq!(b_matrix(&phi.scale(&rat(2))).unwrap(), Mat::identity(7).scale(&rat(8)));
        assert!(!is_positive_g2(&f7("e127+e347+e567")).unwrap().0);
        assert!(is_positive_g2(&phi.neg()).unwrap().0);
    }

    #[test]
    fn standard_dual() {
        let (phi, star) = standard_forms();
        let omega = phi.interior_basis(7);
        let psi = f7("e136+e145+e235-e246");
        assert_eq!(psi, star.interior_basis(7).neg());
        assert_eq!(dual_four_form(&omega, &psi, &f7("e7")), star);
        let (r, factor) = hodge_star(&Mat::identity(7), &phi).unwrap();
        assert_eq!((r, factor), (star, QuadExt::one()));
    }

    #[test]
    fn hodge_examples() {
        let (r, _) = hodge_star(&Mat::identity(7), &f7("e123")).unwrap();
        assert_eq!(r, f7("e4567"));
        let mut g = Mat::identity(7);
        g.set(0, 0, rat(4));
        let (r, factor) = hodge_star(&g, &f7("e1")).unwrap();
        assert_eq!(factor, QuadExt::from_i64(2));
        assert_eq!(r, f7("1/4*e234567"));
        assert_eq!(hodge_star(&Mat::identity(7).scale(&rat(-1)), &f7("e1")), Err(G2Error::NotPositiveDefinite));
    }

    #[test]
    fn standard_data_on_abelian() {
        let g = NilpotentLieAlgebra::abelian(7);
        let cert = G2Certificate { omega: f7("e12+e34+e56"), psi_minus: f7("e136+e145+e235-e246"), eta: f7("e7"), x: None };
        let c = construct_phi(&g, &cert, Reading::Plus).unwrap();
        assert_eq!(c.phi, standard_forms().0);
        assert_eq!(c.metric, Mat::identity(7));
        let rep = check_purely_coclosed(&g, &cert).unwrap();
        assert!(rep.pass());
        assert!(rep.readings.iter().all(|r| r.metric_consistent));
    }

    #[test]
    fn example_37b() {
        let g = NilpotentLieAlgebra::from_structure("37B", "(0^4,12,23,34)").unwrap();
        let cert = G2Certificate { omega: f7("e13+e24-e67"), psi_minus: f7("e127-e146+e236-e347"), eta: f7("e5+e7"), x: None };
        let rep = check_purely_coclosed(&g, &cert).unwrap();
        assert_eq!(rep.x, 5);
        assert!(rep.pass());
        assert_eq!(rep.accepted(), Some(Reading::Minus));
        let c = rep.construction.unwrap();
        assert_eq!(c.psi_plus, f7("e126+e147-e346-e237"));
        let mut expected = Mat::identity(7);
        expected.set(6, 6, rat(2));
        expected.set(4, 6, rat(1));
        expected.set(6, 4, rat(1));
        assert_eq!(c.metric, expected.map(QuadExt::from_rat));
        assert!(phi_wedge_dphi(&g, &c.phi).is_zero());
    }

    #[test]
    fn certificate_violations() {
        let g = NilpotentLieAlgebra::from_structure("37B", "(0^4,12,23,34)").unwrap();
        let cert = G2Certificate { omega: f7("e13+e24-e67"), psi_minus: f7("e127-e146+e236-e347"), eta: f7("e7"), x: Some(5) };
        assert!(matches!(construct_phi(&g, &cert, Reading::Minus), Err(G2Error::CertificateInvariantViolation(_))));
        let cert = G2Certificate { eta: f7("e5"), x: None, ..cert };
        let rep = check_purely_coclosed(&g, &cert).unwrap();
        assert!(!rep.pass());
    }
}
