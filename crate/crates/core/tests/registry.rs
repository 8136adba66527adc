use bpb_core::monotonicity::Property;
use bpb_core::norms::file::{export_space, parse_space};
use bpb_core::registry::{self, Expected};
use bpb_core::search::rng;
use bpb_core::Vector;
use rand::Rng;

#[test]
fn standard_spaces_verify_and_resolve() {
    for name in registry::standard_names() {
        let s = registry::lookup(&name).unwrap();
        assert_eq!(s.name, name);
        s.verify().unwrap();
        assert!(!s.expected.is_empty(), "{name}");
    }
    assert!(registry::lookup("lp-3-2").is_ok());
    assert!(registry::lookup("lp-x-2").is_err());
    assert!(registry::lookup("truncated-renorm-0").is_err());
}

#[test]
fn exported_files_rebuild_the_norm() {
    let mut g = rng(11);
    for s in registry::standard().unwrap() {
        let text = export_space(&s.name, &s.spec, true);
        let back = parse_space(&text).unwrap();
        assert_eq!(back.name, s.name);
        for _ in 0..50 {
            let x = Vector::new((0..s.spec.dim()).map(|_| g.gen_range(-1.0..1.0)).collect());
            let (a, b): (f64, f64) = (s.spec.norm(&x).unwrap(), back.spec.norm(&x).unwrap());
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{}: {a} vs {b}", s.name);
        }
    }
}

#[test]
fn random_generators_are_deterministic() {
    let a = registry::random_absolute_polytope(3, 5).unwrap();
    let b = registry::random_absolute_polytope(3, 5).unwrap();
    assert_eq!(export_space("a", &a.spec, true), export_space("a", &b.spec, true));
    let two = registry::random_absolute_2d(9).unwrap();
    assert_eq!(two.expected(Property::Hnap), Some(Expected::Holds));
    assert_eq!(two.expected(Property::Sm), Some(Expected::Holds));
}

#[test]
fn hnap_example_carries_the_five_quarters_pair() {
    let s = registry::example_hnap3d().unwrap();
    let w = s.witness("pair").unwrap();
    assert_eq!(w.x, Vector::from_f64(&[0.75, -0.75, 0.0]));
    assert_eq!(s.expected(Property::Hnap), Some(Expected::Fails));
    assert_eq!(s.expected(Property::Wm), Some(Expected::Holds));
}
