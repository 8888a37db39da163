// SPDX-License-Identifier: MIT OR Apache-2.0
//! Randomized identities for the exact kernels.

use g2cert_core::exterior::basis_masks;
use g2cert_core::g2::hodge_star;
use g2cert_core::lie_ce::NilpotentLieAlgebra;
use g2cert_core::scalar::{frac, rat, Field, OrderedField, Rat, Ring};
use g2cert_core::su3::{lambda, lambda_reference};
use g2cert_core::{Form, MPoly, Mat, QuadExt};
use proptest::prelude::*;

const ALGEBRAS: [&str; 5] = ["(0^4,12,23,34)", "(0^3,12,13,23,0)", "(0^2,12,13,23,15+24,16+34)", "(0^3,12,13,14,15+23)", "(0^7)"];

fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

fn form(n: usize, k: usize, max_terms: usize) -> impl Strategy<Value = Form<Rat>> {
    let masks = basis_masks(n, k);
    let len = masks.len();
    prop::collection::vec((0..len, small_rat()), 0..=max_terms).prop_map(move |terms| {
        let mut f = Form::zero(n);
        for (i, c) in terms {
            f.add_term(masks[i], c);
        }
        f
    })
}

fn graded(n: usize) -> impl Strategy<Value = (usize, Form<Rat>)> {
    (0..=n).prop_flat_map(move |k| form(n, k, 5).prop_map(move |f| (k, f)))
}

fn sign_of(p: usize) -> Rat {
    if p.is_multiple_of(2) {
        rat(1)
    } else {
        rat(-1)
    }
}

fn quad(d: i64) -> impl Strategy<Value = QuadExt> {
    (small_rat(), small_rat()).prop_map(move |(a, b)| QuadExt::new(a, b, &rat(d)).unwrap())
}

fn metric(n: usize) -> impl Strategy<Value = Mat<Rat>> {
    prop::collection::vec(-2i64..=2, n * n).prop_map(move |a| {
        let a = Mat::from_fn(n, n, |i, j| rat(a[i * n + j]));
        a.transpose().mul(&a).unwrap().add(&Mat::identity(n)).unwrap()
    })
}

fn gram(g: &Mat<Rat>, a: &Form<Rat>, b: &Form<Rat>) -> Rat {
    let ginv = g.inverse().unwrap().unwrap();
    let mut acc = rat(0);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if ma.count_ones() != mb.count_ones() {
                continue;
            }
            let ia: Vec<usize> = (0..32).filter(|i| ma >> i & 1 == 1).collect();
            let ib: Vec<usize> = (0..32).filter(|i| mb >> i & 1 == 1).collect();
            acc += ca * cb * ginv.submatrix(&ia, &ib).det().unwrap();
        }
    }
    acc
}

fn principal_minors_positive(m: &Mat<Rat>) -> bool {
    let n = m.rows();
    (1u32..1 << n).all(|s| {
        let idx: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        m.submatrix(&idx, &idx).det().unwrap() > rat(0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exterior_axioms((p, a) in graded(7), (q, b) in graded(7), (_, c) in graded(7), i in 1usize..=7, s in small_rat()) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_rat(&sign_of(p * q)));
        prop_assert_eq!(a.wedge(&b.add(&c)), a.wedge(&b).add(&a.wedge(&c)));
        prop_assert_eq!(a.scale_rat(&s).wedge(&b), a.wedge(&b).scale_rat(&s));
        let lhs = a.wedge(&b).interior_basis(i);
        let rhs = a.interior_basis(i).wedge(&b).add(&a.wedge(&b.interior_basis(i)).scale_rat(&sign_of(p)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.interior_basis(i).interior_basis(i).is_zero());
        if p % 2 == 1 {
            prop_assert!(a.wedge(&a).is_zero());
        }
    }

    #[test]
    fn differential_axioms(which in 0..ALGEBRAS.len(), (p, a) in graded(7), (_, b) in graded(7)) {
        let g = NilpotentLieAlgebra::from_structure("g", ALGEBRAS[which]).unwrap();
        let d = |f: &Form<Rat>| g.differential(f);
        prop_assert!(d(&d(&a)).is_zero());
        prop_assert_eq!(d(&a.wedge(&b)), d(&a).wedge(&b).add(&a.wedge(&d(&b)).scale_rat(&sign_of(p))));
        prop_assert_eq!(d(&a.add(&b)), d(&a).add(&d(&b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lambda_matches_reference(tau in form(6, 3, 6)) {
        prop_assert_eq!(lambda(&tau).unwrap(), lambda_reference(&tau));
    }

    #[test]
    fn lambda_is_quartic(tau in form(6, 3, 6), s in small_rat()) {
        let s4 = s.clone() * s.clone() * s.clone() * s.clone();
        prop_assert_eq!(lambda(&tau.scale_rat(&s)).unwrap(), lambda(&tau).unwrap() * s4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hodge_involution_and_pairing(g in metric(7), (a, b) in (0usize..=7).prop_flat_map(|k| (form(7, k, 5), form(7, k, 5)))) {
        let (ra, fa) = hodge_star(&g, &a).unwrap();
        let (rra, ffa) = hodge_star(&g, &ra).unwrap();
        prop_assert_eq!(&fa, &ffa);
        let det = g.det().unwrap();
        prop_assert_eq!(rra.scale_rat(&det), a.clone());
        let (rb, _) = hodge_star(&g, &b).unwrap();
        let ab = a.wedge(&rb).top_coefficient();
        prop_assert_eq!(&ab, &b.wedge(&ra).top_coefficient());
        prop_assert_eq!(&ab, &gram(&g, &a, &b));
        let aa = a.wedge(&ra).top_coefficient();
        prop_assert_eq!(aa > rat(0), !a.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn quadratic_field_axioms((x, y, z) in prop::sample::select(vec![2i64, 3, 5, 7, 12]).prop_flat_map(|d| (quad(d), quad(d), quad(d)))) {
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert!(x.sub(&x).is_zero());
        match x.inv() {
            Some(i) => prop_assert_eq!(x.mul(&i), QuadExt::one()),
            None => prop_assert!(x.is_zero()),
        }
        prop_assert_eq!(x.mul(&y).signum(), x.signum() * y.signum());
        prop_assert_eq!(x.sub(&y).signum(), -y.sub(&x).signum());
    }

    #[test]
    fn rref_is_idempotent(entries in prop::collection::vec(-3i64..=3, 20)) {
        let m = Mat::from_fn(4, 5, |i, j| rat(entries[i * 5 + j]));
        let (r, pivots) = m.rref();
        prop_assert_eq!(r.rref().0, r.clone());
        prop_assert_eq!(pivots.len(), m.rank());
        for v in m.kernel_basis() {
            prop_assert!(m.apply(&v).unwrap().iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(m.kernel_basis().len() + m.rank(), 5);
    }

    #[test]
    fn sylvester_matches_all_minors(entries in prop::collection::vec(-3i64..=3, 16)) {
        let a = Mat::from_fn(4, 4, |i, j| rat(entries[i * 4 + j]));
        let m = a.add(&a.transpose()).unwrap();
        prop_assert_eq!(m.is_positive_definite().unwrap(), principal_minors_positive(&m));
        let spd = a.transpose().mul(&a).unwrap();
        prop_assert_eq!(spd.is_positive_definite().unwrap(), spd.det().unwrap() != rat(0));
    }

    #[test]
    fn perfect_squares_are_recognized(terms in prop::collection::vec((prop::collection::vec(0u32..=2, 3), small_rat()), 1..4), c in 1i64..=5) {
        let q = MPoly::from_terms(terms);
        let p = q.mul(&q).scale(&rat(c));
        let (c2, q2) = p.perfect_square().expect("c*q^2 is a scaled square");
        prop_assert_eq!(q2.mul(&q2).scale(&c2), p.clone());
        if !p.is_zero() {
            prop_assert!(p.neg().perfect_square().is_none());
        }
    }
}
