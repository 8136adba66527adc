//! HNAp check through the attaining-pair sum
//! `S(x, f) = ‖f⁺‖*‖x⁺‖ + ‖f⁻‖*‖x⁻‖`, which equals 1 exactly when both
//! parts of the pair attain.
//!
//! For polyhedral norms `S` is convex in `x` on the exposed face of `f`
//! and convex in `f` on the exposed dual face of `x`, so its maximum over
//! all attaining pairs is reached at a vertex–facet pair. Enumerating those
//! pairs in exact arithmetic certifies the verdict.

use rand::Rng;

use super::{contains_hull, sign_patterns, CheckConfig, Property, PropertyReport, Verdict, Witness};
use crate::error::Result;
use crate::norms::{enumerate_attaining_pairs, AbsoluteSpec, NormSpec, PairKind, MAX_ENUMERATION_DIM};
use crate::riesz::Vector;
use crate::scalar::{Rational, Scalar};
use crate::search::rng;

const SAMPLES: usize = 2000;
const HULL_SAMPLES: usize = 400;

fn pair_sum<S: Scalar>(spec: &NormSpec, x: &Vector<S>, f: &Vector<S>) -> Result<S> {
    Ok(spec.dual_norm(&f.pos_part())? * spec.norm(&x.pos_part())?
        + spec.dual_norm(&f.neg_part())? * spec.norm(&x.neg_part())?)
}

fn attaining(spec: &NormSpec, x: &Vector<f64>, f: &Vector<f64>, tol: f64) -> Result<bool> {
    Ok((spec.norm(x)? - 1.0).abs() <= tol && (spec.dual_norm(f)? - 1.0).abs() <= tol && (f.dot(x) - 1.0).abs() <= tol)
}

pub fn hnap_check(spec: &AbsoluteSpec, cfg: &CheckConfig) -> Result<PropertyReport> {
    let mut report = PropertyReport::new(Property::Hnap, Verdict::HoldsSampled);
    let tol = cfg.tol;
    let mut witness: Option<Witness> = None;
    for (x, f) in &cfg.seed_pairs {
        if x.dim() != spec.dim() || !attaining(spec, x, f, tol)? {
            continue;
        }
        report.effort.seeds += 1;
        let sum = pair_sum(spec, x, f)?;
        if sum > 1.0 + tol && witness.is_none() {
            witness = Some(Witness::Hnap { x: x.clone(), f: f.clone(), sum });
        }
    }
    let certified = spec.is_exact() && spec.dim() <= MAX_ENUMERATION_DIM;
    if certified {
        let pairs = enumerate_attaining_pairs::<Rational>(spec)?;
        let one = <Rational as num_traits::One>::one();
        let mut worst_exact = one.clone();
        for p in &pairs {
            let sum = pair_sum(spec, &p.x, &p.f)?;
            report.effort.pairs += 1;
            if sum > one && witness.is_none() {
                witness = Some(Witness::Hnap { x: p.x.to_f64(), f: p.f.to_f64(), sum: sum.to_f64() });
            }
            if sum > worst_exact && p.kind == PairKind::Vertex {
                worst_exact = sum;
            }
        }
        report.notes.push(format!("maximum vertex-pair sum {}", worst_exact));
    } else {
        let n = spec.dim();
        let mut g = rng(cfg.seed);
        let mut worst = 1.0f64;
        let budget = if contains_hull(spec) { HULL_SAMPLES } else { SAMPLES };
        let mut points: Vec<Vector<f64>> = sign_patterns(n).into_iter().map(Vector::new).collect();
        points.extend((0..budget).map(|_| Vector::new((0..n).map(|_| g.gen_range(-1.0..1.0)).collect())));
        for p in points {
            if p.is_zero() {
                continue;
            }
            let x = p.scale(&(1.0 / spec.norm(&p)?));
            let f = spec.supporting_functional(&x)?;
            let sum = pair_sum(spec, &x, &f)?;
            report.effort.pairs += 1;
            worst = worst.max(sum);
            if sum > 1.0 + tol && witness.is_none() && attaining(spec, &x, &f, tol)? {
                witness = Some(Witness::Hnap { x, f, sum });
            }
        }
        report.notes.push(format!("maximum sampled sum {worst:.12}"));
    }
    report.verdict = match &witness {
        Some(w) if w.reverify(spec)? => Verdict::FailsWitnessed,
        Some(_) => Verdict::Inconclusive,
        None if certified => Verdict::HoldsCertified,
        None => Verdict::HoldsSampled,
    };
    report.witness = witness;
    Ok(report)
}
