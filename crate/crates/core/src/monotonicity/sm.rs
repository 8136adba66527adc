//! SM check. For a direction `w` with unit parts `u = w⁺/‖w⁺‖`,
//! `v = w⁻/‖w⁻‖`, let `g(r) = ‖u − r·v‖` and `r₀` the last `r` with
//! `g(r) ≤ 1 + tol`. Any `x = s·u − t·v` with `t > ε + r₀` violates SM:
//! a correction with `‖b·x⁻ − x⁻‖ < ε` needs `b·t > r₀`, which leaves the
//! sphere. The scalarized modulus is the largest grid δ below
//! `1 − sup s` over those violators.

use rand_chacha::ChaCha8Rng;

use super::moduli::FAIL_THRESHOLD;
use super::{
    best_delta, crossing, search_for, sign_patterns, to_box, unit_parts, validate_grid, CheckConfig, CurvePoint,
    Method, ModulusCurve, Property, PropertyReport, Verdict, Witness, DELTA_STEPS, MAX_MODULI_DIM,
};
use crate::error::Result;
use crate::norms::{AbsoluteSpec, NormSpec};
use crate::riesz::Vector;
use crate::search::{maximize_box, rng, SearchConfig};

/// Separation demanded between `g` and the sphere at a violation.
const VIOLATION_MARGIN: f64 = 2e-9;

/// One point of the violating family: `x` with `‖x⁺‖ = s`.
#[derive(Clone, Debug)]
pub(crate) struct Violator {
    pub s: f64,
    pub x: Vector<f64>,
}

pub(crate) struct Scan {
    pub eps: f64,
    /// Violators ordered by decreasing `s`, pairwise distinct directions.
    pub violators: Vec<Violator>,
}

fn violator(spec: &NormSpec, eps: f64, w: &[f64], tol: f64) -> Option<Violator> {
    let (u, v) = unit_parts(spec, &Vector::new(w.to_vec()))?;
    let reach = 1.0 - eps;
    let g = |r: f64| spec.norm(&(&u - &v.scale(&r))).ok();
    if g(reach)? <= 1.0 + tol + VIOLATION_MARGIN {
        return None;
    }
    let r0 = crossing(spec, &u, &-&v, 0.0, reach, 1.0 + tol).ok()?;
    let mut eta = 1e-9;
    let r1 = loop {
        let r = r0 + eta;
        if r > reach {
            return None;
        }
        if g(r)? > 1.0 + tol + VIOLATION_MARGIN {
            break r;
        }
        eta *= 4.0;
    };
    let t = eps + r1;
    let base = v.scale(&-t);
    let s = crossing(spec, &base, &u, 0.0, 1.0, 1.0).ok()?;
    if s <= 0.0 {
        return None;
    }
    Some(Violator { s, x: &u.scale(&s) + &base })
}

fn distinct(mut all: Vec<Violator>, keep: usize) -> Vec<Violator> {
    all.sort_by(|a, b| b.s.total_cmp(&a.s));
    let mut out: Vec<Violator> = Vec::new();
    for c in all {
        if out.len() >= keep {
            break;
        }
        let far = out.iter().all(|o| (&o.x - &c.x).max_abs() > 1e-4);
        if far {
            out.push(c);
        }
    }
    out
}

pub(crate) fn scan(
    spec: &NormSpec,
    grid: &[f64],
    cfg: &CheckConfig,
    scfg: &SearchConfig,
    g: &mut ChaCha8Rng,
    keep: usize,
) -> Vec<Scan> {
    let n = spec.dim();
    let mut seeds: Vec<Vec<f64>> =
        sign_patterns(n).into_iter().filter(|w| w.iter().any(|c| *c > 0.0) && w.iter().any(|c| *c < 0.0)).collect();
    seeds.extend(cfg.seeds.iter().filter(|s| s.dim() == n).map(to_box));
    let bounds = vec![(-1.0, 1.0); n];
    let mut out = Vec::new();
    for &eps in grid.iter().rev() {
        let mut seen: Vec<Violator> = Vec::new();
        let best = maximize_box(
            &bounds,
            |w| {
                let v = violator(spec, eps, w, cfg.tol)?;
                let s = v.s;
                seen.push(v);
                Some(s)
            },
            g,
            scfg,
            &seeds,
        );
        if let Some((w, _)) = best {
            seeds.push(w);
        }
        out.push(Scan { eps, violators: distinct(seen, keep) });
    }
    out.reverse();
    out
}

pub fn sm_check(spec: &AbsoluteSpec, grid: &[f64], cfg: &CheckConfig) -> Result<PropertyReport> {
    validate_grid(grid)?;
    let n = spec.dim();
    if n > MAX_MODULI_DIM {
        return Ok(PropertyReport::guarded(Property::Sm, n));
    }
    let scfg = search_for(spec, cfg);
    let mut g = rng(cfg.seed);
    let scans = scan(spec, grid, cfg, &scfg, &mut g, 1);
    let mut report = PropertyReport::new(Property::Sm, Verdict::HoldsSampled);
    report.effort.evaluations = grid.len() * (scfg.samples + scfg.refine_top * scfg.max_refine_evals);
    report.notes.push("δ̂ is the largest grid δ below 1 − sup ‖x⁺‖ over SM violators".into());
    let mut samples = Vec::new();
    let mut failure: Option<Witness> = None;
    for sc in &scans {
        let top = sc.violators.first();
        let delta_hat = match top {
            None => sc.eps,
            Some(v) => best_delta(sc.eps, 1.0 - v.s).unwrap_or(0.0),
        };
        if delta_hat <= FAIL_THRESHOLD {
            let v = top.expect("failure needs a violator");
            let delta = sc.eps * 2f64.powi(-DELTA_STEPS);
            let w = Witness::Sm { x: v.x.clone(), eps: sc.eps, delta };
            if w.reverify(spec)? {
                failure = Some(w);
            }
        }
        let witness_norms = match top {
            Some(v) => Some((spec.norm(&v.x.pos_part())?, spec.norm(&v.x.neg_part())?)),
            None => None,
        };
        samples.push(CurvePoint { eps: sc.eps, delta_hat, witness_norms });
    }
    for i in (0..samples.len().saturating_sub(1)).rev() {
        samples[i].delta_hat = samples[i].delta_hat.min(samples[i + 1].delta_hat);
    }
    let any_zero = samples.iter().any(|p| p.delta_hat <= FAIL_THRESHOLD);
    report.verdict = match (&failure, any_zero) {
        (Some(_), _) => Verdict::FailsWitnessed,
        (None, true) => {
            report.notes.push("δ̂ vanishes but no violator re-verifies".into());
            Verdict::Inconclusive
        }
        (None, false) => Verdict::HoldsSampled,
    };
    report.witness = failure;
    report.curve = Some(ModulusCurve { property: Property::Sm, samples, method: Method::Sampled });
    Ok(report)
}
