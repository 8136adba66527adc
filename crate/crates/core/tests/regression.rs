use bpb_core::monotonicity::{classify, csv_rows, render_reports, CheckConfig, DEFAULT_EPS_GRID};
use bpb_core::registry;
use bpb_core::regression::{fmt_fraction, render_table, run_space};

#[test]
fn fast_spaces_match_their_expectations() {
    for name in ["example-hnap-3d", "lp-inf-2", "lp-1-3", "random-absolute-2d-0", "truncated-renorm-3"] {
        let s = registry::lookup(name).unwrap();
        let out = run_space(&s, &CheckConfig::default()).unwrap();
        let bad: Vec<_> = out.rows.iter().filter(|r| !r.ok).collect();
        assert!(bad.is_empty(), "{}", render_table(&out.rows));
    }
}

#[test]
fn hnap_row_shows_the_fraction() {
    let s = registry::example_hnap3d().unwrap();
    let out = run_space(&s, &CheckConfig::default()).unwrap();
    let row = out.rows.iter().find(|r| r.check == "HNAp").unwrap();
    assert_eq!(row.observed, "FAIL (5/4)");
    assert!(render_table(&out.rows).contains("| FAIL (5/4) "));
    assert_eq!(fmt_fraction(0.5), "1/2");
    assert_eq!(fmt_fraction(2f64.sqrt()), "1.41421356237");
}

#[test]
fn classification_is_consistent_and_deterministic() {
    let s = registry::lp_space(f64::INFINITY, 2).unwrap();
    let cfg = s.check_config(&CheckConfig::default());
    let a = classify(&s.spec, &DEFAULT_EPS_GRID, &cfg).unwrap();
    let b = classify(&s.spec, &DEFAULT_EPS_GRID, &cfg).unwrap();
    assert!(a.inconsistencies.is_empty(), "{:?}", a.inconsistencies);
    let render = |c: &bpb_core::monotonicity::Classification| {
        (render_reports(&s.name, &s.spec, &c.reports).unwrap(), csv_rows(&s.name, &s.spec, &c.reports).unwrap())
    };
    assert_eq!(render(&a), render(&b));
}
