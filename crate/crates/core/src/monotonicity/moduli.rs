//! UM and UMOE moduli. Both reduce to a one-parameter extremal value
//! `ψ(m)` and `δ̂(ε) = min(ε, 1 − ψ(ε))`:
//!
//! * UMOE: `ψ(m) = sup{‖x⁺‖ : ‖x‖ ≤ 1, ‖x⁻‖ ≥ m}`
//! * UM: `ψ(m) = sup{‖x‖ : x, y ≥ 0, ‖x + y‖ ≤ 1, ‖y‖ ≥ m}`
//!
//! For polyhedral norms `‖z‖ = max ⟨|a|, |z|⟩` over the facets, so after
//! fixing the sign pattern, the active lower-bound facet and the objective
//! facet every problem is a linear program.

use rand_chacha::ChaCha8Rng;

use super::{
    crossing, search_for, sign_patterns, to_box, unit_parts, validate_grid, CheckConfig,
    CurvePoint, Method, ModulusCurve, Property, PropertyReport, Verdict, Witness, MAX_MODULI_DIM,
};
use crate::error::{Error, Result};
use crate::lp::{minimize, LpOutcome};
use crate::norms::{AbsoluteSpec, NormSpec};
use crate::riesz::Vector;
use crate::search::{maximize_box, rng, SearchConfig};

/// `δ̂ ≤ FAIL_THRESHOLD` counts as a failure of the property at that ε.
pub(crate) const FAIL_THRESHOLD: f64 = 1e-9;
const MAX_EXACT_DIM: usize = 4;
const MAX_EXACT_LPS: usize = 200_000;

/// Absolute facet normals with dominated rows removed.
pub(crate) fn positive_facets(spec: &NormSpec) -> Result<Vec<Vec<f64>>> {
    let poly = spec.polyhedron::<f64>()?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for a in &poly.facets {
        let v: Vec<f64> = a.coords().iter().map(|c| c.abs()).collect();
        if !rows.iter().any(|r| same(r, &v)) {
            rows.push(v);
        }
    }
    let keep: Vec<bool> = rows
        .iter()
        .map(|r| !rows.iter().any(|o| !same(o, r) && o.iter().zip(r).all(|(p, q)| *p >= *q - 1e-12)))
        .collect();
    Ok(rows.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect())
}

fn same(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(p, q)| (p - q).abs() <= 1e-12)
}

fn masked(v: &[f64], mask: usize) -> Vec<f64> {
    v.iter().enumerate().map(|(i, c)| if mask >> i & 1 == 1 { *c } else { 0.0 }).collect()
}

fn distinct_nonzero(rows: impl Iterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        if r.iter().any(|c| *c != 0.0) && !out.iter().any(|o| same(o, &r)) {
            out.push(r);
        }
    }
    out
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|c| -c).collect()
}

fn solve(c: &[f64], ub: &[Vec<f64>], b_ub: &[f64]) -> Option<(f64, Vec<f64>)> {
    match minimize(c, ub, b_ub, &[], &[]) {
        LpOutcome::Optimal { value, z } => Some((value, z)),
        _ => None,
    }
}

/// Lexicographic second stage: keep the objective near its optimum and
/// push the lower-bound functional as far as possible.
fn second_stage(obj: &[f64], best: f64, push: &[f64], ub: &[Vec<f64>], b_ub: &[f64], first: Vec<f64>) -> Vec<f64> {
    let mut ub = ub.to_vec();
    let mut b = b_ub.to_vec();
    ub.push(neg(obj));
    b.push(-best);
    match solve(&neg(push), &ub, &b) {
        Some((_, z)) if dot(obj, &z) >= best - 1e-15 => z,
        _ => first,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Exact UMOE value `ψ(m)` with an extremal `x`.
pub(crate) fn umoe_exact(pf: &[Vec<f64>], n: usize, m: f64) -> Option<(f64, Vector<f64>)> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in (1..(1usize << n)).rev() {
        let full = (1usize << n) - 1;
        let pos = full & !mask;
        if pos == 0 {
            continue;
        }
        let cs = distinct_nonzero(pf.iter().map(|r| masked(r, mask)));
        let objs = distinct_nonzero(pf.iter().map(|r| masked(r, pos)));
        for c in &cs {
            let mut ub = pf.to_vec();
            let mut b_ub = vec![1.0; pf.len()];
            ub.push(neg(c));
            b_ub.push(-m);
            for a in &objs {
                let Some((value, z)) = solve(&neg(a), &ub, &b_ub) else { continue };
                let phi = -value;
                if best.as_ref().is_none_or(|(b, _)| phi > b + 1e-12) {
                    let z = second_stage(a, phi, c, &ub, &b_ub, z);
                    let x: Vec<f64> = z.iter().enumerate().map(|(i, v)| if mask >> i & 1 == 1 { -v } else { *v }).collect();
                    best = Some((phi, x));
                }
            }
        }
    }
    best.map(|(phi, x)| (phi, Vector::new(x)))
}

/// Exact UM value `ψ(m)` with extremal `(x, y)`.
pub(crate) fn um_exact(pf: &[Vec<f64>], n: usize, m: f64) -> Option<(f64, Vector<f64>, Vector<f64>)> {
    let glue = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().chain(y).copied().collect() };
    let zero = vec![0.0; n];
    let ub_base: Vec<Vec<f64>> = pf.iter().map(|b| glue(b, b)).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for c in pf.iter().rev() {
        let mut ub = ub_base.clone();
        let mut b_ub = vec![1.0; pf.len()];
        ub.push(neg(&glue(&zero, c)));
        b_ub.push(-m);
        for a in pf {
            let obj = glue(a, &zero);
            let Some((value, z)) = solve(&neg(&obj), &ub, &b_ub) else { continue };
            let psi = -value;
            if best.as_ref().is_none_or(|(b, _)| psi > b + 1e-12) {
                let z = second_stage(&obj, psi, &glue(&zero, c), &ub, &b_ub, z);
                best = Some((psi, z));
            }
        }
    }
    best.map(|(psi, z)| (psi, Vector::new(z[..n].to_vec()), Vector::new(z[n..].to_vec())))
}

fn exact_available(spec: &NormSpec, pf_len: usize, pairs_per_mask: usize) -> bool {
    let n = spec.dim();
    n <= MAX_EXACT_DIM && (1usize << n) * pf_len * pairs_per_mask <= MAX_EXACT_LPS
}

pub(crate) enum Pick {
    Exact(Vec<Vec<f64>>),
    Sampled,
}

pub(crate) fn pick_method(spec: &NormSpec, cfg: &CheckConfig) -> Result<Pick> {
    let exact = if spec.is_polyhedral() && spec.dim() <= MAX_EXACT_DIM {
        let pf = positive_facets(spec)?;
        exact_available(spec, pf.len(), pf.len()).then_some(pf)
    } else {
        None
    };
    match (cfg.method, exact) {
        (Some(Method::Sampled), _) => Ok(Pick::Sampled),
        (Some(Method::OrthantExact), None) => Err(Error::NotPolyhedral),
        (_, Some(pf)) => Ok(Pick::Exact(pf)),
        (None, None) => Ok(Pick::Sampled),
    }
}

/// Sampled UMOE value; the search runs over `w ∈ [−1, 1]ⁿ` with
/// `x = s·w⁺/‖w⁺‖ − m·w⁻/‖w⁻‖` and `s` maximal on the ball.
pub(crate) fn umoe_sampled(
    spec: &NormSpec,
    m: f64,
    seeds: &[Vec<f64>],
    scfg: &SearchConfig,
    g: &mut ChaCha8Rng,
) -> Result<Option<(f64, Vector<f64>, Vec<f64>)>> {
    let shape = |w: &[f64]| -> Option<(Vector<f64>, Vector<f64>, f64)> {
        let (u, v) = unit_parts(spec, &Vector::new(w.to_vec()))?;
        let base = v.scale(&-m);
        let s = crossing(spec, &base, &u, 0.0, 1.0, 1.0).ok()?;
        Some((u, base, s))
    };
    let bounds = vec![(-1.0, 1.0); spec.dim()];
    let found = maximize_box(&bounds, |w| shape(w).map(|(_, _, s)| s), g, scfg, seeds);
    Ok(found.and_then(|(w, _)| {
        let (u, base, s) = shape(&w)?;
        Some((s, &u.scale(&s) + &base, w))
    }))
}

/// Sampled UM value over `w ∈ [0, 1]^{2n}`.
fn um_sampled(
    spec: &NormSpec,
    m: f64,
    seeds: &[Vec<f64>],
    scfg: &SearchConfig,
    g: &mut ChaCha8Rng,
) -> Result<Option<(f64, Vector<f64>, Vector<f64>, Vec<f64>)>> {
    let n = spec.dim();
    let shape = |w: &[f64]| -> Option<(Vector<f64>, Vector<f64>, f64)> {
        let x = Vector::new(w[..n].to_vec());
        let y = Vector::new(w[n..].to_vec());
        if x.is_zero() || y.is_zero() {
            return None;
        }
        let x = x.scale(&(1.0 / spec.norm(&x).ok()?));
        let y = y.scale(&(m / spec.norm(&y).ok()?));
        let s = crossing(spec, &y, &x, 0.0, 1.0, 1.0).ok()?;
        Some((x, y, s))
    };
    let bounds = vec![(0.0, 1.0); 2 * n];
    let found = maximize_box(&bounds, |w| shape(w).map(|(_, _, s)| s), g, scfg, seeds);
    Ok(found.and_then(|(w, _)| {
        let (x, y, s) = shape(&w)?;
        Some((s, x.scale(&s), y, w))
    }))
}

fn zero_one(n: usize) -> Vec<Vec<f64>> {
    (1..(1usize << n)).map(|mask| (0..n).map(|i| (mask >> i & 1) as f64).collect()).collect()
}

fn um_seeds(n: usize, extra: &[Vector<f64>]) -> Vec<Vec<f64>> {
    let halves: Vec<Vec<f64>> = if n <= 3 {
        zero_one(n)
    } else {
        let mut h: Vec<Vec<f64>> = (0..n).map(|i| Vector::<f64>::basis(n, i).into_coords()).collect();
        h.push(vec![1.0; n]);
        h
    };
    let mut out: Vec<Vec<f64>> = Vec::new();
    for x in &halves {
        for y in &halves {
            out.push(x.iter().chain(y).copied().collect());
        }
    }
    for e in extra.iter().filter(|e| e.dim() == n) {
        let p = to_box(&e.pos_part());
        let q = to_box(&e.neg_part());
        out.push(p.into_iter().chain(q).collect());
    }
    out
}

/// Shared ε loop: evaluates `ψ` from the largest ε down, feeding each
/// optimum forward as a seed, and converts the values into a curve.
struct Evaluation {
    eps: f64,
    psi: f64,
    witness: Option<Witness>,
}

fn finish(
    spec: &AbsoluteSpec,
    property: Property,
    method: Method,
    mut evals: Vec<Evaluation>,
    effort: usize,
) -> Result<PropertyReport> {
    evals.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    let mut samples: Vec<CurvePoint> = Vec::with_capacity(evals.len());
    for e in &evals {
        let delta_hat = (1.0 - e.psi).min(e.eps).max(0.0);
        let witness_norms = match &e.witness {
            Some(w) => Some(w.part_norms(spec)?),
            None => None,
        };
        samples.push(CurvePoint { eps: e.eps, delta_hat, witness_norms });
    }
    for i in (0..samples.len().saturating_sub(1)).rev() {
        samples[i].delta_hat = samples[i].delta_hat.min(samples[i + 1].delta_hat);
    }
    let mut report = PropertyReport::new(property, Verdict::HoldsSampled);
    report.effort.evaluations = effort;
    let failing = samples.iter().zip(&evals).rev().find(|(p, _)| p.delta_hat <= FAIL_THRESHOLD);
    report.verdict = match failing {
        Some((p, e)) => match &e.witness {
            Some(w) if w.reverify(spec)? => {
                report.witness = Some(w.clone());
                report.notes.push(format!("fails at ε = {}", p.eps));
                Verdict::FailsWitnessed
            }
            _ => {
                report.notes.push(format!("δ̂ vanishes at ε = {} but the extremal vector does not re-verify", p.eps));
                Verdict::Inconclusive
            }
        },
        None if method == Method::OrthantExact => Verdict::HoldsCertified,
        None => Verdict::HoldsSampled,
    };
    report.curve = Some(ModulusCurve { property, samples, method });
    Ok(report)
}

pub fn umoe_modulus(spec: &AbsoluteSpec, grid: &[f64], cfg: &CheckConfig) -> Result<PropertyReport> {
    validate_grid(grid)?;
    let n = spec.dim();
    if n > MAX_MODULI_DIM {
        return Ok(PropertyReport::guarded(Property::Umoe, n));
    }
    let mut evals = Vec::new();
    let (method, effort) = match pick_method(spec, cfg)? {
        Pick::Exact(pf) => {
            for &eps in grid {
                let (psi, x) = umoe_exact(&pf, n, eps).map_or((0.0, None), |(p, x)| (p, Some(x)));
                evals.push(Evaluation { eps, psi, witness: x.map(|x| Witness::Umoe { x, eps }) });
            }
            (Method::OrthantExact, grid.len() * (1 << n) * pf.len() * pf.len())
        }
        Pick::Sampled => {
            let scfg = search_for(spec, cfg);
            let mut g = rng(cfg.seed);
            let mut seeds: Vec<Vec<f64>> =
                sign_patterns(n).into_iter().filter(|w| w.iter().any(|c| *c > 0.0) && w.iter().any(|c| *c < 0.0)).collect();
            seeds.extend(cfg.seeds.iter().filter(|s| s.dim() == n).map(to_box));
            let mut last_psi = 0.0f64;
            for &eps in grid.iter().rev() {
                let found = umoe_sampled(spec, eps, &seeds, &scfg, &mut g)?;
                let (psi, witness) = match found {
                    Some((s, x, w)) => {
                        seeds.push(w);
                        (s, Some(Witness::Umoe { x, eps }))
                    }
                    None => (0.0, None),
                };
                last_psi = last_psi.max(psi);
                evals.push(Evaluation { eps, psi: last_psi, witness });
            }
            (Method::Sampled, grid.len() * (scfg.samples + scfg.refine_top * scfg.max_refine_evals))
        }
    };
    finish(spec, Property::Umoe, method, evals, effort)
}

pub fn um_modulus(spec: &AbsoluteSpec, grid: &[f64], cfg: &CheckConfig) -> Result<PropertyReport> {
    validate_grid(grid)?;
    let n = spec.dim();
    if n > MAX_MODULI_DIM {
        return Ok(PropertyReport::guarded(Property::Um, n));
    }
    let mut evals = Vec::new();
    let (method, effort) = match pick_method(spec, cfg)? {
        Pick::Exact(pf) => {
            for &eps in grid {
                let (psi, witness) = match um_exact(&pf, n, eps) {
                    Some((p, x, y)) => (p, Some(Witness::Um { x, y, eps })),
                    None => (0.0, None),
                };
                evals.push(Evaluation { eps, psi, witness });
            }
            (Method::OrthantExact, grid.len() * pf.len() * pf.len())
        }
        Pick::Sampled => {
            let scfg = search_for(spec, cfg);
            let mut g = rng(cfg.seed);
            let mut seeds = um_seeds(n, &cfg.seeds);
            let mut last_psi = 0.0f64;
            for &eps in grid.iter().rev() {
                let (psi, witness) = match um_sampled(spec, eps, &seeds, &scfg, &mut g)? {
                    Some((s, x, y, w)) => {
                        seeds.push(w);
                        (s, Some(Witness::Um { x, y, eps }))
                    }
                    None => (0.0, None),
                };
                last_psi = last_psi.max(psi);
                evals.push(Evaluation { eps, psi: last_psi, witness });
            }
            (Method::Sampled, grid.len() * (scfg.samples + scfg.refine_top * scfg.max_refine_evals))
        }
    };
    finish(spec, Property::Um, method, evals, effort)
}
