// SPDX-License-Identifier: MIT OR Apache-2.0
use g2cert::catalog::{Catalog, CatalogError, Method, Status};
use g2cert_core::scalar::{frac, rat, Rat};

fn catalog() -> Catalog {
    Catalog::load_default().expect("shipped databases load")
}

#[test]
fn algebra_census() {
    let cat = catalog();
    assert_eq!(cat.algebras.len(), 139);
    assert_eq!(cat.group("decomposable").len(), 35);
    assert_eq!(cat.group("2-step").len(), 9);
    assert_eq!(cat.group("3-step").len(), 52);
    assert_eq!(cat.group("4-step").len(), 43);
}

#[test]
fn certificate_census() {
    let cat = catalog();
    let rows = |group: &str| cat.certificates.iter().filter(|c| cat.lookup(&c.name).unwrap().group() == group).count();
    assert_eq!(rows("decomposable"), 23);
    assert_eq!(rows("2-step"), 7);
    assert_eq!(rows("3-step"), 35);
    assert_eq!(rows("4-step"), 48);
}

#[test]
fn lookups() {
    let cat = catalog();
    let r = cat.lookup("37B").unwrap();
    assert_eq!((r.step, r.decomposable, r.status), (2, false, Status::Pure));
    assert_eq!(cat.certificates_for("37B").len(), 1);
    assert_eq!(cat.lookup("n2").unwrap().status, Status::CoclosedOnlyExternal);
    assert_eq!(cat.lookup("357B").unwrap().status, Status::NoCoclosed(Method::Ideal));
    assert_eq!(cat.lookup("147E₁").unwrap().name, "147E1");
    assert!(matches!(cat.lookup("99Z"), Err(CatalogError::NotFound(_))));
}

#[test]
fn family_instantiation() {
    let cat = catalog();
    assert!(cat.instantiate("147E", Some(&rat(2))).is_ok());
    assert!(matches!(cat.instantiate("147E", Some(&rat(1))), Err(CatalogError::RegimeViolation { .. })));
    assert!(matches!(cat.instantiate("147E", None), Err(CatalogError::Parameter(_))));
    assert!(matches!(cat.instantiate("37B", Some(&rat(1))), Err(CatalogError::Parameter(_))));
    let lam = rat(-3);
    assert!(cat.instantiate("1357N", Some(&lam)).is_ok());
    let row = cat.certificate_at("1357N", Some(&lam)).unwrap();
    assert_eq!(row.label(), "1357N@L<-2");
    assert!(row.instantiate(7, Some(&lam)).is_ok());
    assert!(row.instantiate(7, Some(&frac(-5, 2))).is_err());
}

#[test]
fn samples_respect_regimes() {
    let cat = catalog();
    for rec in cat.algebras.iter().filter(|r| r.is_family()) {
        let f = rec.family.as_ref().unwrap();
        for v in f.all_samples() {
            assert!(f.constraint.contains(&v), "{} at {v}", rec.name);
            if rec.status == Status::Pure {
                assert!(cat.certificate_at(&rec.name, Some(&v)).is_some());
            }
        }
    }
    let e1: Vec<Rat> = cat.lookup("147E1").unwrap().family.as_ref().unwrap().all_samples();
    assert_eq!(e1, vec![rat(2), rat(3), rat(5)]);
}

#[test]
fn tampered_database_is_rejected() {
    let dir = g2cert::catalog::default_db_dir();
    let algebras = std::fs::read_to_string(dir.join("algebras.db")).unwrap();
    let certificates = std::fs::read_to_string(dir.join("certificates.db")).unwrap();
    let tampered = algebras.replace("eq=(0^4,12,23,34)", "eq=(0^4,12,23,24)");
    assert!(matches!(Catalog::from_texts(&tampered, &certificates), Err(CatalogError::Checksum { .. })));
    let (_, body) = tampered.split_once('\n').unwrap();
    let resealed = g2cert::catalog::seal(body);
    assert!(Catalog::from_texts(&resealed, &certificates).is_ok());
    let (_, body) = algebras.split_once('\n').unwrap();
    let wrong_center = g2cert::catalog::seal(&body.replace("eq=(0^4,12,23,34) | center=5,6,7", "eq=(0^4,12,23,34) | center=4,6,7"));
    assert!(matches!(Catalog::from_texts(&wrong_center, &certificates), Err(CatalogError::Consistency(_))));
}
