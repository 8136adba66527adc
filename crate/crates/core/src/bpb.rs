//! Constructive Bishop–Phelps–Bollobás corrections.
//!
//! All corrections work in `f64`. Distances and residuals in the returned
//! [`Correction`] are recomputed from the inputs, never taken from the
//! search.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lp::{minimize, LpOutcome};
use crate::norms::{AbsoluteSpec, NormSpec, Polyhedron, MAX_ENUMERATION_DIM};
use crate::riesz::{check_dims, Vector};
use crate::scalar::Scalar;
use crate::search::{bisect_right_endpoint, golden_min};

/// Slack on the strict precondition `f(x) > 1 − ε²/2`, so that inputs
/// sitting on the boundary up to rounding are accepted.
pub const PRECONDITION_SLACK: f64 = 1e-12;
const TOL: f64 = 1e-9;
const INTERPOLATION_STEPS: usize = 24;

/// An attaining pair `(y, f)` near the input pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Correction {
    pub y: Vector<f64>,
    pub f: Vector<f64>,
    /// `‖y − x‖`
    pub dist_primal: f64,
    /// `‖f − x*‖*`
    pub dist_dual: f64,
    /// `|f(y) − 1|`
    pub residual: f64,
    pub y_positive: bool,
    pub f_positive: bool,
    /// Guaranteed bounds on the two distances.
    pub bound_primal: f64,
    pub bound_dual: f64,
}

impl Correction {
    fn measure(spec: &NormSpec, x: &Vector<f64>, xs: &Vector<f64>, y: Vector<f64>, f: Vector<f64>) -> Result<Self> {
        Ok(Self {
            dist_primal: spec.norm(&(&y - x))?,
            dist_dual: spec.dual_norm(&(&f - xs))?,
            residual: (f.dot(&y) - 1.0).abs(),
            y_positive: y.is_nonneg(),
            f_positive: f.is_nonneg(),
            y,
            f,
            bound_primal: f64::INFINITY,
            bound_dual: f64::INFINITY,
        })
    }

    fn with_bounds(mut self, primal: f64, dual: f64) -> Self {
        self.bound_primal = primal;
        self.bound_dual = dual;
        self
    }

    /// Unit norms, residual within `tol` and both distance bounds met.
    pub fn verify(&self, spec: &NormSpec, tol: f64) -> Result<bool> {
        Ok((spec.norm(&self.y)? - 1.0).abs() <= tol
            && (spec.dual_norm(&self.f)? - 1.0).abs() <= tol
            && self.residual <= tol
            && self.meets_bounds())
    }

    pub fn meets_bounds(&self) -> bool {
        self.dist_primal < self.bound_primal && self.dist_dual < self.bound_dual
    }

    fn score(&self) -> f64 {
        self.dist_primal.max(self.dist_dual)
    }
}

fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

fn check_pair(spec: &NormSpec, x: &Vector<f64>, f: &Vector<f64>, threshold: f64) -> Result<(f64, f64)> {
    check_dims(spec.dim(), x.dim())?;
    check_dims(spec.dim(), f.dim())?;
    let nx = spec.norm(x)?;
    let nf = spec.dual_norm(f)?;
    precondition(nx <= 1.0 + TOL, || format!("‖x‖ = {nx} exceeds 1"))?;
    precondition((nf - 1.0).abs() <= TOL, || format!("‖f‖* = {nf} is not 1"))?;
    let fx = f.dot(x);
    precondition(fx > threshold - PRECONDITION_SLACK, || format!("f(x) = {fx} is not above {threshold}"))?;
    Ok((nx, fx))
}

/// An attaining pair within `ε` of a pair with `f(x) > 1 − ε²/2`.
pub fn bpb_pair(spec: &NormSpec, x: &Vector<f64>, f: &Vector<f64>, eps: f64) -> Result<Correction> {
    precondition(eps > 0.0 && eps < 1.0, || format!("ε = {eps} must lie in (0, 1)"))?;
    let (nx, fx) = check_pair(spec, x, f, 1.0 - eps * eps / 2.0)?;
    if (nx - 1.0).abs() <= TOL && (fx - 1.0).abs() <= TOL {
        return Ok(Correction::measure(spec, x, f, x.clone(), f.clone())?.with_bounds(eps, eps));
    }
    let mut best: Option<Correction> = None;
    let mut consider = |c: Correction| {
        // earlier candidates win near-ties
        if c.residual <= TOL && best.as_ref().is_none_or(|b| c.score() < b.score() - 1e-12) {
            best = Some(c);
        }
    };
    if spec.is_polyhedral() && spec.dim() <= MAX_ENUMERATION_DIM {
        let poly = spec.polyhedron::<f64>()?;
        for (y, g) in face_candidates(&poly, x, f) {
            consider(Correction::measure(spec, x, f, y, g)?);
        }
    }
    for (y, g) in interpolation_candidates(spec, x, f)? {
        consider(Correction::measure(spec, x, f, y, g)?);
    }
    let best = best.ok_or(Error::NotFound { dist_primal: f64::INFINITY, dist_dual: f64::INFINITY })?;
    let best = best.with_bounds(eps, eps);
    if best.meets_bounds() {
        Ok(best)
    } else {
        Err(Error::NotFound { dist_primal: best.dist_primal, dist_dual: best.dist_dual })
    }
}

/// Pairs `(attaining_point(g), g)` for `g` on the segment from `f` to a
/// supporting functional of `x`, plus `x/‖x‖` with its own support.
fn interpolation_candidates(
    spec: &NormSpec,
    x: &Vector<f64>,
    f: &Vector<f64>,
) -> Result<Vec<(Vector<f64>, Vector<f64>)>> {
    let mut out = Vec::new();
    if x.is_zero() {
        out.push((spec.attaining_point(f)?, f.clone()));
        return Ok(out);
    }
    let nx = spec.norm(x)?;
    let xu = x.scale(&(1.0 / nx));
    let s = spec.supporting_functional(&xu)?;
    out.push((xu, s.clone()));
    let pair_at = |t: f64| -> Result<Option<(Vector<f64>, Vector<f64>)>> {
        let g = &f.scale(&(1.0 - t)) + &s.scale(&t);
        let d = spec.dual_norm(&g)?;
        if d <= 0.0 {
            return Ok(None);
        }
        let g = g.scale(&(1.0 / d));
        Ok(Some((spec.attaining_point(&g)?, g)))
    };
    let score = |t: f64| -> f64 {
        match pair_at(t) {
            Ok(Some((y, g))) => {
                let dp = spec.norm(&(&y - x)).unwrap_or(f64::INFINITY);
                let dd = spec.dual_norm(&(&g - f)).unwrap_or(f64::INFINITY);
                dp.max(dd)
            }
            _ => f64::INFINITY,
        }
    };
    let mut best_t = 0.0;
    let mut best_v = f64::INFINITY;
    for k in 0..=INTERPOLATION_STEPS {
        let t = k as f64 / INTERPOLATION_STEPS as f64;
        let v = score(t);
        if v < best_v {
            best_v = v;
            best_t = t;
        }
        if let Some(p) = pair_at(t)? {
            out.push(p);
        }
    }
    let h = 1.0 / INTERPOLATION_STEPS as f64;
    let (t, _) = golden_min(score, (best_t - h).max(0.0), (best_t + h).min(1.0), 50);
    if let Some(p) = pair_at(t)? {
        out.push(p);
    }
    Ok(out)
}

/// Faces of a polytope as (vertex indices, indices of facets containing
/// the face), from intersections of facet vertex sets.
pub(crate) fn faces(poly: &Polyhedron<f64>) -> Vec<(Vec<usize>, Vec<usize>)> {
    let incidence: Vec<BTreeSet<usize>> = poly
        .facets
        .iter()
        .map(|a| (0..poly.vertices.len()).filter(|&k| (a.dot(&poly.vertices[k]) - 1.0).abs() <= TOL).collect())
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: VecDeque<BTreeSet<usize>> = incidence.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some(face) = queue.pop_front() {
        let key: Vec<usize> = face.iter().copied().collect();
        if face.is_empty() || !seen.insert(key.clone()) {
            continue;
        }
        let active: Vec<usize> = (0..incidence.len()).filter(|&j| face.is_subset(&incidence[j])).collect();
        for set in &incidence {
            let meet: BTreeSet<usize> = face.intersection(set).copied().collect();
            if meet.len() < face.len() {
                queue.push_back(meet);
            }
        }
        out.push((key, active));
    }
    out
}

/// Nearest point of `conv(points)` to `target` in the polyhedral norm
/// `max_{a ∈ norm_rows} ⟨a, ·⟩`, by linear programming.
fn nearest_in_hull(points: &[&Vector<f64>], norm_rows: &[Vector<f64>], target: &Vector<f64>) -> Option<Vector<f64>> {
    let k = points.len();
    if k == 1 {
        return Some(points[0].clone());
    }
    let mut c = vec![0.0; k + 1];
    c[k] = 1.0;
    let ub: Vec<Vec<f64>> = norm_rows
        .iter()
        .map(|a| {
            let mut row: Vec<f64> = points.iter().map(|p| a.dot(p)).collect();
            row.push(-1.0);
            row
        })
        .collect();
    let b_ub: Vec<f64> = norm_rows.iter().map(|a| a.dot(target)).collect();
    let mut eq = vec![1.0; k + 1];
    eq[k] = 0.0;
    match minimize(&c, &ub, &b_ub, &[eq], &[1.0]) {
        LpOutcome::Optimal { z, .. } => {
            let mut y = Vector::zeros(target.dim());
            for (p, w) in points.iter().zip(&z) {
                y = &y + &p.scale(&w.max(0.0));
            }
            Some(y)
        }
        _ => None,
    }
}

fn face_candidates(poly: &Polyhedron<f64>, x: &Vector<f64>, f: &Vector<f64>) -> Vec<(Vector<f64>, Vector<f64>)> {
    let mut out = Vec::new();
    for (verts, active) in faces(poly) {
        let vs: Vec<&Vector<f64>> = verts.iter().map(|&k| &poly.vertices[k]).collect();
        let fs: Vec<&Vector<f64>> = active.iter().map(|&k| &poly.facets[k]).collect();
        let (Some(y), Some(g)) = (nearest_in_hull(&vs, &poly.facets, x), nearest_in_hull(&fs, &poly.vertices, f))
        else {
            continue;
        };
        out.push((y, g));
    }
    out
}

fn require_positive(v: &Vector<f64>, what: &str) -> Result<()> {
    precondition(v.is_nonneg(), || format!("{what} must be positive"))
}

/// [`bpb_pair`] followed by taking absolute values of both outputs.
pub fn positive_bpb_pair(spec: &AbsoluteSpec, x: &Vector<f64>, f: &Vector<f64>, eps: f64) -> Result<Correction> {
    require_positive(x, "x")?;
    require_positive(f, "f")?;
    let nx = spec.norm(x)?;
    precondition((nx - 1.0).abs() <= TOL, || format!("‖x‖ = {nx} is not 1"))?;
    let c = bpb_pair(spec, x, f, eps)?;
    Ok(Correction::measure(spec, x, f, c.y.abs(), c.f.abs())?.with_bounds(eps, eps))
}

/// A positive norming functional of `x` vanishing on `y`, for positive
/// disjoint `x` and `y`.
pub fn positive_supporting_functional<S: Scalar>(spec: &AbsoluteSpec, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
    check_dims(spec.dim(), y.dim())?;
    precondition(x.is_nonneg() && y.is_nonneg(), || "x and y must be positive".into())?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    precondition(x.meet(y)?.is_zero(), || "x and y must be disjoint".into())?;
    spec.supporting_functional(x)?.abs().project(&x.support())
}

/// Outcome of [`sm_hnap_correction`]. `hnap_violation` marks a residual
/// `f̂(z) ≠ 1` beyond tolerance, which witnesses a failure of HNAp.
#[derive(Clone, Debug, PartialEq)]
pub struct SmHnapCorrection {
    pub correction: Correction,
    pub b: f64,
    /// `‖b·y⁻ − y⁻‖`
    pub defect: f64,
    /// The attaining pair produced by the first stage.
    pub stage: (Vector<f64>, Vector<f64>),
    pub hnap_violation: bool,
}

/// The construction applied to an attaining pair `(y, y*)`:
/// `z = y⁺/‖y⁺‖ − b·y⁻` with maximal `b ∈ [0, 1]` and `f̂ = y*⁺/‖y*⁺‖*`.
/// Distances are measured against `(x, f)`.
pub fn sm_hnap_step(
    spec: &NormSpec,
    y: &Vector<f64>,
    ystar: &Vector<f64>,
    x: &Vector<f64>,
    f: &Vector<f64>,
) -> Result<SmHnapCorrection> {
    let yp = y.pos_part();
    let yn = y.neg_part();
    let np = spec.norm(&yp)?;
    precondition(np > 0.0, || "y⁺ = 0".into())?;
    let u = yp.scale(&(1.0 / np));
    let at = |b: f64| &u - &yn.scale(&b);
    let b = bisect_right_endpoint(|b| spec.norm(&at(b)).is_ok_and(|v| v <= 1.0), 0.0, 1.0, 60);
    let z = at(b);
    let fp = ystar.pos_part();
    let nf = spec.dual_norm(&fp)?;
    precondition(nf > 0.0, || "y*⁺ = 0".into())?;
    let fhat = fp.scale(&(1.0 / nf));
    let defect = spec.norm(&yn.scale(&(1.0 - b)))?;
    let correction = Correction::measure(spec, x, f, z, fhat)?;
    let hnap_violation = correction.residual > TOL;
    Ok(SmHnapCorrection { correction, b, defect, stage: (y.clone(), ystar.clone()), hnap_violation })
}

/// [`bpb_pair`] at `δ(ε)` followed by [`sm_hnap_step`]. A pair that is
/// already attaining goes straight to the step, so HNAp counterexamples
/// with non-positive `f` can be fed in directly.
pub fn sm_hnap_correction(
    spec: &AbsoluteSpec,
    x: &Vector<f64>,
    f: &Vector<f64>,
    eps: f64,
    delta: &dyn Fn(f64) -> f64,
) -> Result<SmHnapCorrection> {
    let d = delta(eps);
    let (nx, fx) = check_pair(spec, x, f, 1.0 - d * d / 2.0)?;
    let attaining = (nx - 1.0).abs() <= TOL && (fx - 1.0).abs() <= TOL;
    if !attaining {
        require_positive(f, "f")?;
        precondition((nx - 1.0).abs() <= TOL, || format!("‖x‖ = {nx} is not 1"))?;
    }
    let (y, ystar) = if attaining {
        (x.clone(), f.clone())
    } else {
        let c = bpb_pair(spec, x, f, d)?;
        (c.y, c.f)
    };
    let mut out = sm_hnap_step(spec, &y, &ystar, x, f)?;
    out.correction = out.correction.with_bounds(3.0 * eps, 3.0 * eps);
    Ok(out)
}

/// [`bpb_pair`] at `ε` followed by absolute values; the primal guarantee
/// is `3ε`.
pub fn umoe_strong_correction(
    spec: &AbsoluteSpec,
    x: &Vector<f64>,
    f: &Vector<f64>,
    eps: f64,
    delta: &dyn Fn(f64) -> f64,
) -> Result<Correction> {
    require_positive(f, "f")?;
    let threshold = 1.0 - (eps * eps / 2.0).min(delta(eps));
    let (nx, _) = check_pair(spec, x, f, threshold)?;
    precondition((nx - 1.0).abs() <= TOL, || format!("‖x‖ = {nx} is not 1"))?;
    let c = bpb_pair(spec, x, f, eps)?;
    Ok(Correction::measure(spec, x, f, c.y.abs(), c.f.abs())?.with_bounds(3.0 * eps, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vector64;

    fn v(c: &[f64]) -> Vector64 {
        Vector64::from_f64(c)
    }

    #[test]
    fn cross_polytope_example() {
        let spec = NormSpec::lp(1.0, 2).unwrap();
        let c = bpb_pair(&spec, &v(&[1.0, 0.0]), &v(&[0.995, 1.0]), 0.1).unwrap();
        assert_eq!(c.y, v(&[1.0, 0.0]));
        assert!(c.f.approx_eq(&v(&[1.0, 1.0]), &1e-12));
        assert!(c.dist_primal < 1e-12 && (c.dist_dual - 0.005).abs() < 1e-12);
    }

    #[test]
    fn identity_and_square_cases() {
        let spec = NormSpec::lp(f64::INFINITY, 2).unwrap();
        let x = v(&[1.0, 0.5]);
        let f = v(&[1.0, 0.0]);
        let c = bpb_pair(&spec, &x, &f, 0.1).unwrap();
        assert_eq!((c.y.clone(), c.f.clone(), c.dist_primal, c.dist_dual), (x, f.clone(), 0.0, 0.0));
        let c = bpb_pair(&spec, &v(&[1.0, 1.0 - 1e-4]), &f, 0.1).unwrap();
        assert!(c.verify(&spec, 1e-9).unwrap());
    }

    #[test]
    fn preconditions() {
        let spec = NormSpec::lp(2.0, 2).unwrap();
        let far = bpb_pair(&spec, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 0.1);
        assert!(matches!(far, Err(Error::Precondition(_))));
        let big = bpb_pair(&spec, &v(&[2.0, 0.0]), &v(&[1.0, 0.0]), 0.1);
        assert!(matches!(big, Err(Error::Precondition(_))));
    }

    #[test]
    fn faces_of_the_square() {
        let spec = NormSpec::lp(f64::INFINITY, 2).unwrap();
        let poly = spec.polyhedron::<f64>().unwrap();
        assert_eq!(faces(&poly).len(), 8);
    }

    #[test]
    fn positive_pairs_on_the_plane() {
        let spec = AbsoluteSpec::certify(NormSpec::lp(2.0, 2).unwrap()).unwrap();
        let th: f64 = 0.01;
        let c = positive_bpb_pair(&spec, &v(&[1.0, 0.0]), &v(&[th.cos(), th.sin()]), 0.2).unwrap();
        assert!(c.verify(&spec, 1e-9).unwrap() && c.y_positive && c.f_positive);
        let l1 = AbsoluteSpec::certify(NormSpec::lp(1.0, 3).unwrap()).unwrap();
        let c = positive_bpb_pair(&l1, &v(&[1.0, 0.0, 0.0]), &v(&[1.0, 1.0 - 1e-3, 0.0]), 0.1).unwrap();
        assert!(c.verify(&l1, 1e-9).unwrap() && c.f_positive && c.dist_dual < 0.1);
    }

    #[test]
    fn disjoint_positive_functionals() {
        let linf = AbsoluteSpec::certify(NormSpec::lp(f64::INFINITY, 2).unwrap()).unwrap();
        let g = positive_supporting_functional(&linf, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert_eq!(g, v(&[1.0, 0.0]));
        let overlap = positive_supporting_functional(&linf, &v(&[1.0, 1.0]), &v(&[0.0, 1.0]));
        assert!(matches!(overlap, Err(Error::Precondition(_))));
    }

    #[test]
    fn b_selection() {
        let linf = NormSpec::lp(f64::INFINITY, 2).unwrap();
        let y = v(&[1.0, -0.5]);
        let ys = v(&[1.0, 0.0]);
        let s = sm_hnap_step(&linf, &y, &ys, &y, &ys).unwrap();
        assert_eq!(s.b, 1.0);
        assert!(s.correction.y.approx_eq(&y, &1e-15) && s.defect == 0.0);
        let l1 = NormSpec::lp(1.0, 2).unwrap();
        let y = v(&[0.5, -0.5]);
        let s = sm_hnap_step(&l1, &y, &v(&[1.0, -1.0]), &y, &ys).unwrap();
        assert!(s.b < 1e-15);
    }
}
