//! Strict monotonicity: a structural test for whole specs and a sampled
//! checker for two-dimensional normalized absolute norms.

use rand::Rng;

use super::{CheckConfig, Property, PropertyReport, Verdict, Witness};
use crate::error::{Error, Result};
use crate::norms::{AbsoluteSpec, Exponent, NormSpec};
use crate::riesz::Vector;
use crate::search::{bisect_right_endpoint, rng};

const SAMPLES: usize = 1000;
const PREMISE_TOL: f64 = 1e-9;
const STRICT_MARGIN: f64 = 1e-12;

/// `Some(true)` when `0 ≤ x ≤ y, x ≠ y` always gives `‖x‖ < ‖y‖`,
/// `Some(false)` when it provably does not, `None` when undecided.
pub fn strictly_monotone(spec: &NormSpec) -> Option<bool> {
    match spec {
        NormSpec::Lp { p: Exponent::Infinity, dim } => Some(*dim < 2),
        NormSpec::Lp { .. } => Some(true),
        NormSpec::Hull(_) => None,
        NormSpec::Sum(s) => {
            let mut verdict = strictly_monotone(s.outer());
            for b in s.parts() {
                verdict = match (verdict, strictly_monotone(&b.spec)) {
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                };
            }
            verdict
        }
        NormSpec::Dual(inner) if !inner.is_polyhedral() => match inner.as_ref() {
            NormSpec::Lp { .. } => Some(true),
            _ => None,
        },
        _ => {
            let poly = spec.polyhedron::<f64>().ok()?;
            Some(poly.facets.iter().all(|a| a.coords().iter().all(|c| *c != 0.0)))
        }
    }
}

/// `max{x ≥ 0 : ‖x·e_other + e_axis‖ ≤ 1}` by bisection.
fn premise_gap(spec: &NormSpec, axis: usize) -> Result<f64> {
    let point = |x: f64| {
        let mut c = [0.0; 2];
        c[axis] = 1.0;
        c[1 - axis] = x;
        Vector::new(c.to_vec())
    };
    let mut failed = None;
    let gap = bisect_right_endpoint(
        |x| match spec.norm(&point(x)) {
            Ok(v) => v <= 1.0 + 1e-12,
            Err(e) => {
                failed = Some(e);
                false
            }
        },
        0.0,
        1.0,
        60,
    );
    match failed {
        Some(e) => Err(e),
        None => Ok(gap),
    }
}

pub fn strict_monotonicity_check(spec: &AbsoluteSpec, cfg: &CheckConfig) -> Result<PropertyReport> {
    if spec.dim() != 2 {
        return Err(Error::InvalidSpec(format!("strict monotonicity check needs dimension 2, got {}", spec.dim())));
    }
    let mut report = PropertyReport::new(Property::StrictMono, Verdict::HoldsSampled);
    if !spec.normalized() {
        report.verdict = Verdict::Inconclusive;
        report.notes.push("premise fails: basis vectors are not unit vectors".into());
        return Ok(report);
    }
    for axis in [1, 0] {
        let gap = premise_gap(spec, axis)?;
        if gap > PREMISE_TOL {
            let (x, y) = if axis == 1 { (gap, 1.0) } else { (1.0, gap) };
            report.verdict = Verdict::Inconclusive;
            report.notes.push(format!("premise fails: ‖({x}, {y})‖ = 1"));
            return Ok(report);
        }
    }
    let norm = |a: f64, b: f64| spec.norm(&Vector::new(vec![a, b]));
    let mut g = rng(cfg.seed);
    let mut min_margin = f64::INFINITY;
    let mut witness = None;
    let mut evaluations = 0;
    // ∣s∣ < ∣t∣ ⇒ ‖(r, s)‖ < ‖(r, t)‖, in both coordinate orders
    for k in 0..SAMPLES {
        let r: f64 = g.gen_range(-1.0..1.0);
        let t: f64 = g.gen_range(-1.0..1.0);
        let s = t * g.gen_range(-0.95..0.95);
        let (lesser, greater) = if k % 2 == 0 { ([r, s], [r, t]) } else { ([s, r], [t, r]) };
        if t.abs() < 1e-6 {
            continue;
        }
        let margin = norm(greater[0], greater[1])? - norm(lesser[0], lesser[1])?;
        evaluations += 2;
        min_margin = min_margin.min(margin);
        if margin <= STRICT_MARGIN && witness.is_none() {
            witness = Some(Witness::StrictMono {
                lesser: Vector::new(lesser.to_vec()),
                greater: Vector::new(greater.to_vec()),
            });
        }
    }
    // coordinatewise strict domination
    for _ in 0..SAMPLES {
        let x = [g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)];
        let y: Vec<f64> = x.iter().map(|c: &f64| c.signum() * (c.abs() + g.gen_range(0.05..0.5))).collect();
        let margin = norm(y[0], y[1])? - norm(x[0], x[1])?;
        evaluations += 2;
        min_margin = min_margin.min(margin);
        if margin <= STRICT_MARGIN && witness.is_none() {
            witness = Some(Witness::StrictMono { lesser: Vector::new(x.to_vec()), greater: Vector::new(y) });
        }
    }
    // a unit vector is determined by its first coordinate c < 1
    let mut widest: f64 = 0.0;
    for _ in 0..SAMPLES / 10 {
        let c: f64 = g.gen_range(0.0..0.95);
        let top = bisect_right_endpoint(|y| norm(c, y).is_ok_and(|v| v <= 1.0), 0.0, 1.0, 60);
        let bottom = bisect_right_endpoint(|y| norm(c, y).is_ok_and(|v| v < 1.0 - 1e-12), 0.0, 1.0, 60);
        evaluations += 120;
        widest = widest.max(top - bottom);
        if top - bottom > 1e-7 && witness.is_none() {
            witness = Some(Witness::StrictMono {
                lesser: Vector::new(vec![c, bottom + 0.25 * (top - bottom)]),
                greater: Vector::new(vec![c, top]),
            });
        }
    }
    report.effort.evaluations = evaluations;
    report.notes.push(format!("minimum strictness margin {min_margin:.3e}"));
    report.notes.push(format!("widest level segment at fixed first coordinate {widest:.3e}"));
    if let Some(w) = witness {
        if w.reverify(spec)? {
            report.verdict = Verdict::FailsWitnessed;
        } else {
            report.verdict = Verdict::Inconclusive;
            report.notes.push("near-tie found but not re-verified".into());
        }
        report.witness = Some(w);
    }
    Ok(report)
}
