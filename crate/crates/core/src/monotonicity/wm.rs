//! WM check.
//!
//! On strictly monotone specs `‖y‖ = ‖y⁺‖` forces `y ≥ 0`, so every
//! admissible `y` is at least `‖x⁻‖` away from `x`. There WM reduces to the
//! UMOE extremal value and failures are rigorous.
//!
//! Otherwise the SM violators are the candidates, and each is cleared by
//! finding an admissible `y = u − c·v` (`‖y‖ = ‖y⁺‖ = 1`) within ε. That
//! search can only clear candidates, so this route never reports a failure.

use rand_chacha::ChaCha8Rng;

use super::moduli::{pick_method, umoe_exact, umoe_sampled, Pick, FAIL_THRESHOLD};
use super::sm::{scan, Violator};
use super::{
    best_delta, crossing, search_for, sign_patterns, strictly_monotone, to_box, unit_parts, validate_grid,
    CheckConfig, CurvePoint, Method, ModulusCurve, Property, PropertyReport, Verdict, Witness, DELTA_STEPS,
    MAX_MODULI_DIM,
};
use crate::error::Result;
use crate::norms::{AbsoluteSpec, NormSpec};
use crate::riesz::Vector;
use crate::search::{golden_min, maximize_box, rng, SearchConfig};

/// SM violators kept per ε on the general route.
const CANDIDATES: usize = 200;
/// Admissible-vector searches per ε; the other candidates must be cleared
/// by an admissible vector already found.
const SEARCHES: usize = 12;

pub fn wm_check(spec: &AbsoluteSpec, grid: &[f64], cfg: &CheckConfig) -> Result<PropertyReport> {
    validate_grid(grid)?;
    let n = spec.dim();
    if n > MAX_MODULI_DIM {
        return Ok(PropertyReport::guarded(Property::Wm, n));
    }
    if strictly_monotone(spec) == Some(true) {
        strict_route(spec, grid, cfg)
    } else {
        general_route(spec, grid, cfg)
    }
}

fn strict_route(spec: &AbsoluteSpec, grid: &[f64], cfg: &CheckConfig) -> Result<PropertyReport> {
    let n = spec.dim();
    let mut values: Vec<(f64, f64, Option<Vector<f64>>)> = Vec::new();
    let method = match pick_method(spec, cfg)? {
        Pick::Exact(pf) => {
            for &eps in grid {
                let (phi, x) = umoe_exact(&pf, n, eps).map_or((0.0, None), |(p, x)| (p, Some(x)));
                values.push((eps, phi, x));
            }
            Method::OrthantExact
        }
        Pick::Sampled => {
            let scfg = search_for(spec, cfg);
            let mut g = rng(cfg.seed);
            let mut seeds: Vec<Vec<f64>> = sign_patterns(n)
                .into_iter()
                .filter(|w| w.iter().any(|c| *c > 0.0) && w.iter().any(|c| *c < 0.0))
                .collect();
            seeds.extend(cfg.seeds.iter().filter(|s| s.dim() == n).map(to_box));
            for &eps in grid.iter().rev() {
                match umoe_sampled(spec, eps, &seeds, &scfg, &mut g)? {
                    Some((phi, x, w)) => {
                        seeds.push(w);
                        values.push((eps, phi, Some(x)));
                    }
                    None => values.push((eps, 0.0, None)),
                }
            }
            values.reverse();
            Method::Sampled
        }
    };
    let mut report = PropertyReport::new(Property::Wm, Verdict::HoldsSampled);
    report.notes.push("strictly monotone: admissible y are positive".into());
    let mut samples = Vec::new();
    let mut failure = None;
    for (eps, phi, x) in values {
        let delta_hat = best_delta(eps, 1.0 - phi).unwrap_or(0.0);
        if delta_hat <= FAIL_THRESHOLD {
            if let Some(x) = &x {
                let w = Witness::Wm { x: x.clone(), eps, delta: eps * 2f64.powi(-DELTA_STEPS) };
                if w.reverify(spec)? {
                    failure = Some(w);
                }
            }
        }
        let witness_norms = match &x {
            Some(x) => Some((spec.norm(&x.pos_part())?, spec.norm(&x.neg_part())?)),
            None => None,
        };
        samples.push(CurvePoint { eps, delta_hat, witness_norms });
    }
    for i in (0..samples.len().saturating_sub(1)).rev() {
        samples[i].delta_hat = samples[i].delta_hat.min(samples[i + 1].delta_hat);
    }
    report.verdict = match (&failure, method) {
        (Some(_), _) => Verdict::FailsWitnessed,
        (None, _) if samples.iter().any(|p| p.delta_hat <= FAIL_THRESHOLD) => Verdict::Inconclusive,
        (None, Method::OrthantExact) => Verdict::HoldsCertified,
        (None, Method::Sampled) => Verdict::HoldsSampled,
    };
    report.witness = failure;
    report.curve = Some(ModulusCurve { property: Property::Wm, samples, method });
    Ok(report)
}

/// Smallest distance from `x` to an admissible vector found by the search,
/// stopping early once it drops below `eps`.
pub(crate) fn nearest_admissible(
    spec: &NormSpec,
    x: &Vector<f64>,
    eps: f64,
    scfg: &SearchConfig,
    g: &mut ChaCha8Rng,
) -> Option<(f64, Vector<f64>)> {
    let candidate = |w: &[f64]| -> Option<(f64, Vector<f64>)> {
        let w = Vector::new(w.to_vec());
        if w.pos_part().is_zero() {
            return None;
        }
        let (u, v) = match unit_parts(spec, &w) {
            Some(p) => p,
            None => {
                let p = w.pos_part();
                let u = p.scale(&(1.0 / spec.norm(&p).ok()?));
                let d = spec.norm(&(&u - x)).ok()?;
                return Some((d, u));
            }
        };
        let c_max = crossing(spec, &u, &-&v, 0.0, 1.0, 1.0).ok()?;
        let dist = |c: f64| spec.norm(&(&(&u - &v.scale(&c)) - x)).unwrap_or(f64::INFINITY);
        let (c, d) = golden_min(dist, 0.0, c_max, 50);
        let (c, d) = [(0.0, dist(0.0)), (c_max, dist(c_max))].into_iter().fold((c, d), |b, p| if p.1 < b.1 { p } else { b });
        Some((d, &u - &v.scale(&c)))
    };
    let n = x.dim();
    let mut seeds = vec![to_box(x), to_box(&x.pos_part())];
    seeds.extend(sign_patterns(n).into_iter().filter(|w| w.iter().any(|c| *c > 0.0)));
    let mut best: Option<(f64, Vector<f64>)> = None;
    for s in &seeds {
        if let Some((d, y)) = candidate(s) {
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, y));
            }
        }
    }
    if best.as_ref().is_some_and(|b| b.0 < eps) {
        return best;
    }
    let bounds = vec![(-1.0, 1.0); n];
    let found = maximize_box(&bounds, |w| candidate(w).map(|(d, _)| -d), g, scfg, &seeds);
    if let Some((w, _)) = found {
        if let Some((d, y)) = candidate(&w) {
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, y));
            }
        }
    }
    best
}

fn general_route(spec: &AbsoluteSpec, grid: &[f64], cfg: &CheckConfig) -> Result<PropertyReport> {
    let scfg = search_for(spec, cfg);
    let inner = SearchConfig {
        samples: scfg.samples / 4,
        refine_top: 2,
        max_refine_evals: scfg.max_refine_evals / 4,
        min_step: scfg.min_step.max(1e-9),
    };
    let mut g = rng(cfg.seed);
    let scans = scan(spec, grid, cfg, &scfg, &mut g, CANDIDATES);
    let mut report = PropertyReport::new(Property::Wm, Verdict::HoldsSampled);
    report.notes.push("SM violators cleared by admissible vectors within ε; failures are not certified".into());
    let mut samples = Vec::new();
    let mut cleared = 0;
    for sc in &scans {
        let mut open: Option<&Violator> = None;
        let mut found: Vec<Vector<f64>> = Vec::new();
        let mut searches = 0;
        for v in &sc.violators {
            let mut near = false;
            for y in &found {
                if spec.norm(&(&v.x - y))? < sc.eps {
                    near = true;
                    break;
                }
            }
            if !near && searches < SEARCHES {
                searches += 1;
                if let Some((d, y)) = nearest_admissible(spec, &v.x, sc.eps, &inner, &mut g) {
                    if d < sc.eps {
                        found.push(y);
                        near = true;
                    }
                }
            }
            if !near {
                open = Some(v);
                break;
            }
            cleared += 1;
        }
        let delta_hat = match open {
            None => sc.eps,
            Some(v) => best_delta(sc.eps, 1.0 - v.s).unwrap_or(0.0),
        };
        let witness_norms = match open {
            Some(v) => Some((spec.norm(&v.x.pos_part())?, spec.norm(&v.x.neg_part())?)),
            None => None,
        };
        samples.push(CurvePoint { eps: sc.eps, delta_hat, witness_norms });
    }
    for i in (0..samples.len().saturating_sub(1)).rev() {
        samples[i].delta_hat = samples[i].delta_hat.min(samples[i + 1].delta_hat);
    }
    report.effort.pairs = cleared;
    if samples.iter().any(|p| p.delta_hat <= FAIL_THRESHOLD) {
        report.verdict = Verdict::Inconclusive;
    }
    report.curve = Some(ModulusCurve { property: Property::Wm, samples, method: Method::Sampled });
    Ok(report)
}
