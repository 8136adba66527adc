//! Regression over registry spaces: stored witnesses, closed forms and
//! expected verdicts, collected into a table.

use rand::Rng;

use crate::error::Result;
use crate::monotonicity::{
    check_property, strict_monotonicity_check, strictly_monotone, wm_check, CheckConfig, Property,
    PropertyReport, Verdict, Witness, DEFAULT_EPS_GRID,
};
use crate::registry::{Expected, RegistrySpace, CLAIM_TOL};
use crate::riesz::Vector;
use crate::search::rng;

pub const DUAL_FORMULA_SAMPLES: usize = 1000;
pub const DUAL_FORMULA_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub space: String,
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct SpaceOutcome {
    pub rows: Vec<Row>,
    pub reports: Vec<PropertyReport>,
}

/// `p/q` with a small denominator when one matches, else 12 digits.
pub fn fmt_fraction(v: f64) -> String {
    for den in 1..=64u32 {
        let num = (v * den as f64).round();
        if (num / den as f64 - v).abs() < 1e-12 {
            return if den == 1 { format!("{num}") } else { format!("{num}/{den}") };
        }
    }
    crate::monotonicity::fmt_sig(v)
}

fn row(space: &RegistrySpace, check: impl Into<String>, expected: impl Into<String>, observed: String, ok: bool) -> Row {
    Row { space: space.name.clone(), check: check.into(), expected: expected.into(), observed, ok }
}

fn observed(r: &PropertyReport) -> String {
    match (&r.verdict, &r.witness) {
        (Verdict::FailsWitnessed, Some(Witness::Hnap { sum, .. })) => format!("FAIL ({})", fmt_fraction(*sum)),
        (Verdict::FailsWitnessed, _) => "FAIL".into(),
        (v, _) => v.to_string(),
    }
}

fn matches(e: Expected, v: Verdict) -> bool {
    match e {
        Expected::Holds => v.holds(),
        Expected::Fails => v == Verdict::FailsWitnessed,
        Expected::FailsInLimit => false,
    }
}

fn dual_formula_row(space: &RegistrySpace, seed: u64) -> Result<Option<Row>> {
    let Some(formula) = &space.dual_formula else { return Ok(None) };
    let n = space.spec.dim();
    let mut g = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..DUAL_FORMULA_SAMPLES {
        let f = Vector::new((0..n).map(|_| g.gen_range(-1.0..1.0)).collect());
        worst = worst.max((formula(&f) - space.spec.dual_norm(&f)?).abs());
    }
    Ok(Some(row(
        space,
        "dual formula",
        format!("deviation ≤ {DUAL_FORMULA_TOL:e}"),
        format!("max deviation {worst:.3e}"),
        worst <= DUAL_FORMULA_TOL,
    )))
}

/// WM in the limit: the stored `z` family is separated by `‖z⁻‖` from every
/// admissible vector (strict monotonicity forces admissible vectors to be
/// positive) and `δ̂(ε) ≤ 1 − ‖z⁺‖` along the family.
fn wm_limit_rows(space: &RegistrySpace, cfg: &CheckConfig, out: &mut SpaceOutcome) -> Result<()> {
    let strict = strictly_monotone(&space.spec) == Some(true);
    let gaps: Vec<f64> = space.witnesses.iter().map(|w| space.spec.norm(&w.x.neg_part())).collect::<Result<_>>()?;
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    out.rows.push(row(
        space,
        "WM gap",
        "≥ 1/2",
        format!("{} (strict: {strict})", fmt_fraction(min_gap)),
        strict && min_gap >= 0.5 - CLAIM_TOL,
    ));
    let report = wm_check(&space.spec, &DEFAULT_EPS_GRID, cfg)?;
    let best_plus = space
        .witnesses
        .iter()
        .map(|w| space.spec.norm(&w.x.pos_part()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let bound = 1.0 - best_plus;
    let curve = report.curve.as_ref();
    let worst = curve
        .map(|c| c.samples.iter().filter(|p| p.eps <= min_gap).map(|p| p.delta_hat).fold(0.0, f64::max))
        .unwrap_or(f64::INFINITY);
    out.rows.push(row(
        space,
        "WM",
        format!("{} (δ̂ ≤ {})", Expected::FailsInLimit, crate::monotonicity::fmt_sig(bound)),
        format!("max δ̂ {}", crate::monotonicity::fmt_sig(worst)),
        worst <= bound + 1e-12,
    ));
    out.reports.push(report);
    Ok(())
}

pub fn run_space(space: &RegistrySpace, base: &CheckConfig) -> Result<SpaceOutcome> {
    let cfg = space.check_config(base);
    let mut out = SpaceOutcome { rows: Vec::new(), reports: Vec::new() };
    if !space.witnesses.is_empty() {
        let bad: usize = space
            .witnesses
            .iter()
            .map(|w| w.mismatches(&space.spec, CLAIM_TOL).map(|m| m.len()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let total: usize = space.witnesses.iter().map(|w| w.claims.len()).sum();
        out.rows.push(row(space, "witnesses", format!("{total} claims"), format!("{} re-verified", total - bad), bad == 0));
    }
    if let Some(r) = dual_formula_row(space, cfg.seed)? {
        out.rows.push(r);
    }
    for &(p, e) in &space.expected {
        match (p, e) {
            (Property::Wm, Expected::FailsInLimit) => wm_limit_rows(space, &cfg, &mut out)?,
            (Property::StrictMono, _) if !space.blocks.is_empty() => {
                let verdicts = space
                    .blocks
                    .iter()
                    .map(|b| strict_monotonicity_check(b, &cfg).map(|r| r.verdict))
                    .collect::<Result<Vec<_>>>()?;
                let ok = verdicts.iter().all(|v| matches(e, *v));
                let seen: Vec<String> = verdicts.iter().map(|v| v.to_string()).collect();
                out.rows.push(row(space, "StrictMono per block", e.to_string(), seen.join(", "), ok));
            }
            _ => {
                let report = check_property(&space.spec, p, &DEFAULT_EPS_GRID, &cfg)?;
                out.rows.push(row(space, p.to_string(), e.to_string(), observed(&report), matches(e, report.verdict)));
                out.reports.push(report);
            }
        }
    }
    Ok(out)
}

pub fn render_table(rows: &[Row]) -> String {
    let header = ["space", "check", "expected", "observed", "status"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| [r.space.clone(), r.check.clone(), r.expected.clone(), r.observed.clone(), if r.ok { "ok" } else { "MISMATCH" }.into()])
        .collect();
    let width = |k: usize| cells.iter().map(|c| c[k].chars().count()).chain([header[k].len()]).max().unwrap_or(0);
    let widths: Vec<usize> = (0..5).map(width).collect();
    let line = |c: &[String]| {
        c.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}", w = *w)).collect::<Vec<_>>().join(" | ").trim_end().to_string()
    };
    let mut out = line(&header.map(String::from));
    out.push('\n');
    out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
    out.push('\n');
    for c in &cells {
        out.push_str(&line(c));
        out.push('\n');
    }
    out
}
