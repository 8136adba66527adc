use super::*;
use crate::norms::AbsoluteSpec;

fn lp(p: f64, n: usize) -> AbsoluteSpec {
    AbsoluteSpec::certify(NormSpec::lp(p, n).unwrap()).unwrap()
}

fn curve(r: &PropertyReport) -> Vec<(f64, f64)> {
    r.curve.as_ref().unwrap().samples.iter().map(|p| (p.eps, p.delta_hat)).collect()
}

fn sampled() -> CheckConfig {
    CheckConfig { method: Some(Method::Sampled), ..CheckConfig::default() }
}

#[test]
fn l1_moduli_are_identity() {
    let spec = lp(1.0, 3);
    for r in [um_modulus(&spec, &DEFAULT_EPS_GRID, &CheckConfig::default()).unwrap(),
              umoe_modulus(&spec, &DEFAULT_EPS_GRID, &CheckConfig::default()).unwrap()] {
        assert_eq!(r.verdict, Verdict::HoldsCertified);
        for (e, d) in curve(&r) {
            assert!((d - e).abs() < 1e-12, "{e} {d}");
        }
    }
}

#[test]
fn max_norm_witnesses() {
    let spec = lp(f64::INFINITY, 2);
    let cfg = CheckConfig::default();
    let r = umoe_modulus(&spec, &DEFAULT_EPS_GRID, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::FailsWitnessed);
    match r.witness.unwrap() {
        Witness::Umoe { x, .. } => assert!(x.approx_eq(&Vector::from_f64(&[1.0, -1.0]), &1e-12)),
        w => panic!("{w:?}"),
    }
    let r = um_modulus(&spec, &DEFAULT_EPS_GRID, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::FailsWitnessed);
    match r.witness.unwrap() {
        Witness::Um { x, y, .. } => {
            assert!(x.approx_eq(&Vector::from_f64(&[1.0, 0.0]), &1e-12), "{x:?} {y:?}");
            assert!(y.approx_eq(&Vector::from_f64(&[0.0, 1.0]), &1e-12));
        }
        w => panic!("{w:?}"),
    }
    let r = sm_check(&spec, &DEFAULT_EPS_GRID, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::HoldsSampled);
    for (e, d) in curve(&r) {
        assert_eq!(d, e);
    }
    assert!(hnap_check(&spec, &cfg).unwrap().verdict.holds());
}

#[test]
fn euclidean_um_curve() {
    let spec = lp(2.0, 2);
    let r = um_modulus(&spec, &DEFAULT_EPS_GRID, &CheckConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::HoldsSampled);
    for (e, d) in curve(&r) {
        let expected = (1.0 - (1.0 - e * e).sqrt()).min(e);
        assert!((d - expected).abs() < 1e-9, "{e}: {d} vs {expected}");
    }
    assert_eq!(hnap_check(&lp(2.0, 3), &CheckConfig::default()).unwrap().verdict, Verdict::HoldsSampled);
}

#[test]
fn exact_and_sampled_agree_on_polyhedra() {
    for spec in [lp(1.0, 2), lp(f64::INFINITY, 3), lp(1.0, 3)] {
        for f in [umoe_modulus, um_modulus] {
            let a = curve(&f(&spec, &DEFAULT_EPS_GRID, &CheckConfig::default()).unwrap());
            let b = curve(&f(&spec, &DEFAULT_EPS_GRID, &sampled()).unwrap());
            for ((_, x), (_, y)) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-6, "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn strict_examples() {
    let cfg = CheckConfig::default();
    let r = strict_monotonicity_check(&lp(1.0, 2), &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::HoldsSampled);
    let r = strict_monotonicity_check(&lp(f64::INFINITY, 2), &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert_eq!(strictly_monotone(&NormSpec::lp(f64::INFINITY, 2).unwrap()), Some(false));
    assert_eq!(strictly_monotone(&NormSpec::lp(3.0, 2).unwrap()), Some(true));
}

#[test]
fn grid_validation_and_formatting() {
    assert!(validate_grid(&[0.2, 0.1]).is_err());
    assert!(validate_grid(&[0.0, 0.1]).is_err());
    assert_eq!(report::fmt_sig(0.05), "0.05");
    assert_eq!(report::fmt_sig(1.25), "1.25");
    assert_eq!(report::fmt_sig(1.0 / 3.0), "0.333333333333");
    assert_eq!(best_delta(0.4, 0.15), Some(0.1));
    assert_eq!(best_delta(0.4, 1e-6), None);
}
