//! Property checkers and moduli estimators for the lattice monotonicity
//! properties UM, UMOE, SM, WM, HNAp and strict monotonicity.
//!
//! Every checker takes an [`AbsoluteSpec`] and returns a
//! [`PropertyReport`]. Moduli are estimated on an ε grid; `δ̂(ε)` is the
//! largest δ for which no violating vector was found. A failing verdict
//! always carries a [`Witness`] that re-verifies from the spec alone.

mod classify;
mod hnap;
mod moduli;
mod report;
mod sm;
mod strict;
mod wm;

use std::fmt;

use crate::error::{Error, Result};
use crate::norms::NormSpec;
use crate::riesz::Vector;
use crate::search::SearchConfig;

pub use classify::{check_property, classify, classify_properties, Classification};
pub use hnap::hnap_check;
pub use moduli::{um_modulus, umoe_modulus};
pub use report::{csv_header, csv_rows, fmt_sig, fmt_vec, render_reports};
pub use sm::sm_check;
pub use strict::{strict_monotonicity_check, strictly_monotone};
pub use wm::wm_check;

pub const DEFAULT_EPS_GRID: [f64; 5] = [0.05, 0.1, 0.2, 0.4, 0.8];
/// Candidate δ values are `ε·2^{-k}` for `k = 0..=DELTA_STEPS`.
pub const DELTA_STEPS: i32 = 10;
/// Moduli are not estimated above this dimension.
pub const MAX_MODULI_DIM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Um,
    Umoe,
    Sm,
    Wm,
    Hnap,
    StrictMono,
}

impl Property {
    pub const ALL: [Property; 6] =
        [Property::Hnap, Property::Um, Property::Umoe, Property::Sm, Property::Wm, Property::StrictMono];

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "um" => Self::Um,
            "umoe" => Self::Umoe,
            "sm" => Self::Sm,
            "wm" => Self::Wm,
            "hnap" => Self::Hnap,
            "strictmono" | "strict" => Self::StrictMono,
            _ => return None,
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Um => "UM",
            Self::Umoe => "UMOE",
            Self::Sm => "SM",
            Self::Wm => "WM",
            Self::Hnap => "HNAp",
            Self::StrictMono => "StrictMono",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    HoldsCertified,
    HoldsSampled,
    FailsWitnessed,
    Inconclusive,
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Self::HoldsCertified | Self::HoldsSampled)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::HoldsCertified => "holds-certified",
            Self::HoldsSampled => "holds-sampled",
            Self::FailsWitnessed => "fails-witnessed",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    OrthantExact,
    Sampled,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OrthantExact => "orthant-exact",
            Self::Sampled => "sampled",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub eps: f64,
    pub delta_hat: f64,
    /// `(‖x⁺‖, ‖x⁻‖)` of the extremal vector found at this ε.
    pub witness_norms: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModulusCurve {
    pub property: Property,
    pub samples: Vec<CurvePoint>,
    pub method: Method,
}

impl ModulusCurve {
    pub fn delta_at(&self, eps: f64) -> Option<f64> {
        self.samples.iter().find(|p| p.eps == eps).map(|p| p.delta_hat)
    }
}

/// Evidence that a property fails, checkable against the spec alone.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Attaining pair with `‖f⁺‖*‖x⁺‖ + ‖f⁻‖*‖x⁻‖ = sum > 1`.
    Hnap { x: Vector<f64>, f: Vector<f64>, sum: f64 },
    /// `‖x‖ ≤ 1`, `‖x⁺‖ = 1` and `‖x⁻‖ ≥ eps`.
    Umoe { x: Vector<f64>, eps: f64 },
    /// `x, y ≥ 0`, `‖x + y‖ ≤ 1`, `‖x‖ = 1` and `‖y‖ ≥ eps`.
    Um { x: Vector<f64>, y: Vector<f64>, eps: f64 },
    /// `‖x‖ ≤ 1`, `‖x⁺‖ > 1 − delta` and no `b ∈ [0, 1]` keeps
    /// `x⁺/‖x⁺‖ − b·x⁻` on the sphere with `‖b·x⁻ − x⁻‖ < eps`.
    Sm { x: Vector<f64>, eps: f64, delta: f64 },
    /// Strictly monotone space, `‖x⁺‖ > 1 − delta` and
    /// `‖x⁻‖ ≥ eps`, so every admissible `y` is at least `eps` away.
    Wm { x: Vector<f64>, eps: f64, delta: f64 },
    /// `|lesser| ≤ |greater|` with a strict gap where required, yet
    /// `‖lesser‖ ≥ ‖greater‖`.
    StrictMono { lesser: Vector<f64>, greater: Vector<f64> },
}

const WITNESS_TOL: f64 = 1e-9;

impl Witness {
    /// The vector whose positive and negative parts are reported.
    pub fn primary(&self) -> &Vector<f64> {
        match self {
            Self::Hnap { x, .. } | Self::Umoe { x, .. } | Self::Sm { x, .. } | Self::Wm { x, .. } => x,
            Self::Um { x, .. } => x,
            Self::StrictMono { lesser, .. } => lesser,
        }
    }

    pub fn part_norms(&self, spec: &NormSpec) -> Result<(f64, f64)> {
        match self {
            Self::Um { x, y, .. } => Ok((spec.norm(x)?, spec.norm(y)?)),
            other => {
                let x = other.primary();
                Ok((spec.norm(&x.pos_part())?, spec.norm(&x.neg_part())?))
            }
        }
    }

    /// Re-checks the violated inequality from scratch.
    pub fn reverify(&self, spec: &NormSpec) -> Result<bool> {
        let t = WITNESS_TOL;
        Ok(match self {
            Self::Hnap { x, f, sum } => {
                let s = spec.dual_norm(&f.pos_part())? * spec.norm(&x.pos_part())?
                    + spec.dual_norm(&f.neg_part())? * spec.norm(&x.neg_part())?;
                (spec.norm(x)? - 1.0).abs() <= t
                    && (spec.dual_norm(f)? - 1.0).abs() <= t
                    && (f.dot(x) - 1.0).abs() <= t
                    && (s - sum).abs() <= t
                    && s > 1.0 + t
            }
            Self::Umoe { x, eps } => {
                spec.norm(x)? <= 1.0 + t
                    && spec.norm(&x.pos_part())? >= 1.0 - t
                    && spec.norm(&x.neg_part())? >= eps - t
            }
            Self::Um { x, y, eps } => {
                x.is_nonneg()
                    && y.is_nonneg()
                    && spec.norm(&(x + y))? <= 1.0 + t
                    && spec.norm(x)? >= 1.0 - t
                    && spec.norm(y)? >= eps - t
            }
            Self::Sm { x, eps, delta } => {
                let np = spec.norm(&x.pos_part())?;
                let nn = spec.norm(&x.neg_part())?;
                let needed = 1.0 - eps / nn;
                let u = x.pos_part().scale(&(1.0 / np));
                spec.norm(x)? <= 1.0 + t
                    && np > 1.0 - delta
                    && needed > 0.0
                    && spec.norm(&(&u - &x.neg_part().scale(&needed)))? > 1.0 + t
            }
            Self::Wm { x, eps, delta } => {
                strictly_monotone(spec) == Some(true)
                    && spec.norm(x)? <= 1.0 + t
                    && spec.norm(&x.pos_part())? > 1.0 - delta
                    && spec.norm(&x.neg_part())? >= *eps
            }
            Self::StrictMono { lesser, greater } => {
                lesser.abs().le(&greater.abs())
                    && lesser.abs() != greater.abs()
                    && spec.norm(lesser)? >= spec.norm(greater)? - 1e-12
            }
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Effort {
    pub evaluations: usize,
    pub pairs: usize,
    pub seeds: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub curve: Option<ModulusCurve>,
    pub effort: Effort,
    pub notes: Vec<String>,
}

impl PropertyReport {
    fn new(property: Property, verdict: Verdict) -> Self {
        Self { property, verdict, witness: None, curve: None, effort: Effort::default(), notes: Vec::new() }
    }

    fn guarded(property: Property, dim: usize) -> Self {
        let mut r = Self::new(property, Verdict::Inconclusive);
        r.notes.push(format!("dimension {dim} exceeds the moduli limit {MAX_MODULI_DIM}"));
        r
    }
}

/// Shared settings of the checkers.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub tol: f64,
    pub search: SearchConfig,
    /// Force a moduli method; `None` picks orthant-exact where available.
    pub method: Option<Method>,
    /// Extra starting vectors for the sampled searches.
    pub seeds: Vec<Vector<f64>>,
    /// Attaining pairs checked first by the HNAp checker.
    pub seed_pairs: Vec<(Vector<f64>, Vector<f64>)>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tol: 1e-9,
            search: SearchConfig::default(),
            method: None,
            seeds: Vec::new(),
            seed_pairs: Vec::new(),
        }
    }
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    let ok = !grid.is_empty()
        && grid.iter().all(|e| *e > 0.0 && *e < 1.0)
        && grid.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSpec("ε grid must be strictly increasing inside (0, 1)".into()))
    }
}

/// Largest candidate `ε·2^{-k}` not above `limit`.
pub(crate) fn best_delta(eps: f64, limit: f64) -> Option<f64> {
    (0..=DELTA_STEPS).map(|k| eps * 2f64.powi(-k)).find(|d| *d <= limit + 1e-12)
}

/// Largest `s ∈ [lo, hi]` with `‖base + s·dir‖ ≤ level`, for
/// `‖base + lo·dir‖ ≤ level`. Newton steps from the right using the
/// supporting functional as derivative; convexity keeps them to the right
/// of the crossing.
pub(crate) fn crossing(
    spec: &NormSpec,
    base: &Vector<f64>,
    dir: &Vector<f64>,
    lo: f64,
    hi: f64,
    level: f64,
) -> Result<f64> {
    let point = |s: f64| base + &dir.scale(&s);
    let mut s = hi;
    for _ in 0..60 {
        let p = point(s);
        if p.is_zero() {
            return Ok(s);
        }
        let (v, f) = spec.norm_and_functional(&p)?;
        if v <= level + CROSSING_SLACK {
            return Ok(s);
        }
        let slope = f.dot(dir);
        if slope <= 0.0 {
            return Ok(lo);
        }
        let next = s - (v - level) / slope;
        if next <= lo {
            return Ok(lo);
        }
        if s - next <= 1e-15 * s.abs().max(1.0) {
            // stalled just right of the crossing
            return Ok(crate::search::bisect_right_endpoint(
                |t| spec.norm(&point(t)).is_ok_and(|v| v <= level),
                lo.max(next - 1e-12),
                s,
                50,
            ));
        }
        s = next;
    }
    Ok(crate::search::bisect_right_endpoint(|t| spec.norm(&point(t)).is_ok_and(|v| v <= level), lo, s, 60))
}

/// Accepted overshoot of [`crossing`]; covers the accuracy of iterative
/// gauges.
const CROSSING_SLACK: f64 = 1e-13;

/// `{1, −1, 0}ⁿ` without the zero vector, positive patterns first.
pub(crate) fn sign_patterns(n: usize) -> Vec<Vec<f64>> {
    const DIGITS: [f64; 3] = [1.0, -1.0, 0.0];
    let total = 3usize.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = vec![0.0; n];
        let mut r = code;
        for k in (0..n).rev() {
            c[k] = DIGITS[r % 3];
            r /= 3;
        }
        if c.iter().any(|v| *v != 0.0) {
            out.push(c);
        }
    }
    out
}

/// `u = w⁺/‖w⁺‖` and `v = w⁻/‖w⁻‖`, or `None` when a part vanishes.
pub(crate) fn unit_parts(spec: &NormSpec, w: &Vector<f64>) -> Option<(Vector<f64>, Vector<f64>)> {
    let p = w.pos_part();
    let n = w.neg_part();
    if p.is_zero() || n.is_zero() {
        return None;
    }
    let np = spec.norm(&p).ok()?;
    let nn = spec.norm(&n).ok()?;
    Some((p.scale(&(1.0 / np)), n.scale(&(1.0 / nn))))
}

#[cfg(test)]
mod tests;

fn contains_hull(spec: &NormSpec) -> bool {
    match spec {
        NormSpec::Hull(_) => true,
        NormSpec::Sum(s) => contains_hull(s.outer()) || s.parts().iter().any(|b| contains_hull(&b.spec)),
        NormSpec::Dual(inner) => contains_hull(inner),
        _ => false,
    }
}

/// Hull gauges cost an interior-point solve each, so their searches are
/// budgeted down.
fn search_for(spec: &NormSpec, cfg: &CheckConfig) -> SearchConfig {
    let mut s = cfg.search.clone();
    if contains_hull(spec) {
        s.samples = s.samples.min(120);
        s.refine_top = s.refine_top.min(2);
        s.max_refine_evals = s.max_refine_evals.min(200);
        s.min_step = s.min_step.max(1e-10);
    }
    s
}

/// Scales a seed vector into the `[−1, 1]` search box.
fn to_box(v: &Vector<f64>) -> Vec<f64> {
    let m = v.max_abs();
    if m == 0.0 {
        v.coords().to_vec()
    } else {
        v.coords().iter().map(|c| c / m).collect()
    }
}
