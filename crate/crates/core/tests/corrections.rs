use bpb_core::bpb::{bpb_pair, positive_bpb_pair, positive_supporting_functional, sm_hnap_correction};
use bpb_core::registry;
use bpb_core::{AbsoluteSpec, Error, NormSpec, Vector};

fn v(c: &[f64]) -> Vector<f64> {
    Vector::from_f64(c)
}

#[test]
fn attaining_pairs_come_back_unchanged() {
    let spec = NormSpec::lp(2.0, 3).unwrap();
    let x = v(&[0.6, 0.8, 0.0]);
    let c = bpb_pair(&spec, &x, &x, 0.1).unwrap();
    assert_eq!((c.y.clone(), c.dist_primal, c.dist_dual), (x.clone(), 0.0, 0.0));
    let abs = AbsoluteSpec::certify(spec).unwrap();
    let p = positive_bpb_pair(&abs, &x, &x, 0.1).unwrap();
    assert!(p.y_positive && p.f_positive && p.verify(&abs, 1e-9).unwrap());
}

#[test]
fn positive_functional_vanishes_on_a_disjoint_vector() {
    let spec = AbsoluteSpec::certify(NormSpec::lp(f64::INFINITY, 3).unwrap()).unwrap();
    let f = positive_supporting_functional(&spec, &v(&[1.0, 0.5, 0.0]), &v(&[0.0, 0.0, 2.0])).unwrap();
    assert_eq!(f, v(&[1.0, 0.0, 0.0]));
    assert!(matches!(
        positive_supporting_functional(&spec, &v(&[1.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0])),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn hnap_pair_leaves_a_residual_of_one_third() {
    let s = registry::example_hnap3d().unwrap();
    let w = s.witness("pair").unwrap();
    let r = sm_hnap_correction(&s.spec, &w.x, w.f.as_ref().unwrap(), 0.1, &|e| e).unwrap();
    assert!(r.hnap_violation);
    assert!((r.correction.residual - 1.0 / 3.0).abs() < 1e-12);
    assert!((r.b - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn classic_precondition_gate() {
    let spec = NormSpec::lp(1.0, 2).unwrap();
    let far = bpb_pair(&spec, &v(&[1.0, 0.0]), &v(&[0.99, 1.0]), 0.1);
    assert!(matches!(far, Err(Error::Precondition(_))));
}
