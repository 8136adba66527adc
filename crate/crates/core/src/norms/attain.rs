use crate::error::{Error, Result};
use crate::riesz::{check_dims, Vector};
use crate::scalar::Scalar;

use super::{embed, restrict, Exponent, NormSpec};

/// Attaining-pair enumeration is brute force; it refuses larger spaces.
pub const MAX_ENUMERATION_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `x` is a vertex of the unit ball.
    Vertex,
    /// `x` is the midpoint of two vertices of the exposed face of `f`.
    Midpoint,
    /// `x` is a grid point inside the exposed face of `f`.
    Face,
}

/// `x ∈ S_X` and `f ∈ S_X*` with `f(x) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AttainingPair<S> {
    pub x: Vector<S>,
    pub f: Vector<S>,
    pub residual: S,
    pub kind: PairKind,
}

fn sign<S: Scalar>(c: &S) -> S {
    if c.is_negative() {
        -S::one()
    } else {
        S::one()
    }
}

/// Index of the first maximum, so ties resolve to the lowest index.
fn argmax<S: Scalar>(vals: impl Iterator<Item = S>) -> Option<(usize, S)> {
    let mut best: Option<(usize, S)> = None;
    for (k, v) in vals.enumerate() {
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((k, v));
        }
    }
    best
}

fn float_only<S: Scalar>(f: impl FnOnce() -> Result<Vector<f64>>) -> Result<Vector<S>> {
    if S::EXACT {
        return Err(Error::NotExact);
    }
    Ok(f()?.convert())
}

fn holder<S: Scalar>(p: f64, x: &Vector<S>) -> Vector<S> {
    let x = x.to_f64();
    let m = x.max_abs();
    let y: Vec<f64> = x.coords().iter().map(|c| (c.abs() / m).powf(p - 1.0) * c.signum()).collect();
    let q = p / (p - 1.0);
    let nq = y.iter().map(|c| c.abs().powf(q)).sum::<f64>().powf(1.0 / q);
    Vector::new(y.into_iter().map(|c| S::from_f64(c / nq)).collect())
}

impl NormSpec {
    /// `‖x‖` together with a supporting functional at a nonzero `x`; hull
    /// gauges get both from one solve.
    pub fn norm_and_functional(&self, x: &Vector<f64>) -> Result<(f64, Vector<f64>)> {
        check_dims(self.dim(), x.dim())?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        match self {
            Self::Hull(h) => h.gauge_and_functional(x)?.ok_or(Error::ZeroVector),
            _ => Ok((self.norm(x)?, self.supporting_functional(x)?)),
        }
    }

    /// A functional `f` with `‖f‖* = 1` and `f(x) = ‖x‖`.
    pub fn supporting_functional<S: Scalar>(&self, x: &Vector<S>) -> Result<Vector<S>> {
        check_dims(self.dim(), x.dim())?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        match self {
            Self::Lp { p: Exponent::One, .. } => Ok(x.map(|c| if c.is_zero() { S::zero() } else { sign(c) })),
            Self::Lp { p: Exponent::Infinity, dim } => {
                let (k, _) = argmax(x.coords().iter().map(|c| c.abs())).unwrap();
                Ok(Vector::<S>::basis(*dim, k).scale(&sign(&x[k])))
            }
            Self::Lp { p: Exponent::Finite(p), .. } => float_only(|| Ok(holder(*p, &x.to_f64()))),
            Self::Facet(f) => {
                let gens = f.functionals.get::<S>();
                let ax = x.abs();
                let vals = gens.iter().map(|g| if f.sign_closed { g.abs().dot(&ax) } else { g.dot(x).abs() });
                let (k, _) = argmax(vals).unwrap();
                let g = &gens[k];
                Ok(if f.sign_closed {
                    g.abs().zip_with(x, |a, c| a.clone() * sign(c))?
                } else {
                    g.scale(&sign(&g.dot(x)))
                })
            }
            Self::Polytope(_) => {
                let poly = self.polyhedron::<S>()?;
                let (k, _) = argmax(poly.facets.iter().map(|a| a.dot(x))).unwrap();
                Ok(poly.facets[k].clone())
            }
            Self::Hull(h) => float_only(|| Ok(h.gauge_and_functional(&x.to_f64())?.unwrap().1)),
            Self::Sum(s) => {
                let blocks: Vec<Vector<S>> = s.parts.iter().map(|b| restrict(x, &b.coords)).collect();
                let radii = blocks.iter().zip(&s.parts).map(|(v, b)| b.spec.norm(v)).collect::<Result<Vec<S>>>()?;
                let w = s.outer.supporting_functional(&Vector::new(radii))?.abs();
                let mut out = vec![S::zero(); s.dim];
                for (j, (v, b)) in blocks.iter().zip(&s.parts).enumerate() {
                    if v.is_zero() || w[j].is_zero() {
                        continue;
                    }
                    let g = b.spec.supporting_functional(v)?.scale(&w[j]);
                    embed(s.dim, &b.coords, &g, &mut out);
                }
                Ok(Vector::new(out))
            }
            Self::Dual(inner) => inner.attaining_point(x),
        }
    }

    /// A unit vector `x` with `f(x) = ‖f‖*`.
    pub fn attaining_point<S: Scalar>(&self, f: &Vector<S>) -> Result<Vector<S>> {
        check_dims(self.dim(), f.dim())?;
        if f.is_zero() {
            return Err(Error::ZeroVector);
        }
        match self {
            Self::Lp { p: Exponent::One, dim } => {
                let (k, _) = argmax(f.coords().iter().map(|c| c.abs())).unwrap();
                Ok(Vector::<S>::basis(*dim, k).scale(&sign(&f[k])))
            }
            Self::Lp { p: Exponent::Infinity, .. } => Ok(f.map(sign)),
            Self::Lp { p: Exponent::Finite(p), .. } => {
                let q = p / (p - 1.0);
                float_only(|| Ok(holder(q, &f.to_f64())))
            }
            Self::Facet(_) => {
                let poly = self.polyhedron::<S>()?;
                let (k, _) = argmax(poly.vertices.iter().map(|v| v.dot(f))).unwrap();
                Ok(poly.vertices[k].clone())
            }
            Self::Polytope(p) => {
                let gens = p.vertices.get::<S>();
                let af = f.abs();
                let vals = gens.iter().map(|g| if p.sign_closed { g.abs().dot(&af) } else { g.dot(f).abs() });
                let (k, _) = argmax(vals).unwrap();
                let g = &gens[k];
                Ok(if p.sign_closed {
                    g.abs().zip_with(f, |a, c| a.clone() * sign(c))?
                } else {
                    g.scale(&sign(&g.dot(f)))
                })
            }
            Self::Hull(h) => float_only(|| Ok(h.attaining(&f.to_f64()))),
            Self::Sum(s) => {
                let blocks: Vec<Vector<S>> = s.parts.iter().map(|b| restrict(f, &b.coords)).collect();
                let radii =
                    blocks.iter().zip(&s.parts).map(|(v, b)| b.spec.dual_norm(v)).collect::<Result<Vec<S>>>()?;
                let w = s.outer.attaining_point(&Vector::new(radii))?.abs();
                let mut out = vec![S::zero(); s.dim];
                for (j, (v, b)) in blocks.iter().zip(&s.parts).enumerate() {
                    if w[j].is_zero() {
                        continue;
                    }
                    let u = if v.is_zero() {
                        let e = Vector::<S>::basis(b.coords.len(), 0);
                        let n = b.spec.norm(&e)?;
                        e.map(|c| c.clone() / n.clone())
                    } else {
                        b.spec.attaining_point(v)?
                    };
                    embed(s.dim, &b.coords, &u.scale(&w[j]), &mut out);
                }
                Ok(Vector::new(out))
            }
            Self::Dual(inner) => inner.supporting_functional(f),
        }
    }
}

/// Every vertex–facet attaining pair of a polyhedral norm, then midpoints
/// of vertex pairs sharing a facet, then a grid of points inside each
/// facet, each paired with that facet.
pub fn enumerate_attaining_pairs<S: Scalar>(spec: &NormSpec) -> Result<Vec<AttainingPair<S>>> {
    let dim = spec.dim();
    if dim > MAX_ENUMERATION_DIM {
        return Err(Error::DimensionGuard { dim, max: MAX_ENUMERATION_DIM, what: "attaining-pair enumeration" });
    }
    if !spec.is_polyhedral() {
        return Err(Error::NotPolyhedral);
    }
    let poly = spec.polyhedron::<S>()?;
    let one = S::one();
    let mut pairs = Vec::new();
    for a in &poly.facets {
        for v in poly.face_vertices(a) {
            let residual = (a.dot(v) - one.clone()).abs();
            pairs.push(AttainingPair { x: v.clone(), f: a.clone(), residual, kind: PairKind::Vertex });
        }
    }
    let two = S::from_int(2);
    for a in &poly.facets {
        let face = poly.face_vertices(a);
        for (i, u) in face.iter().enumerate() {
            for v in &face[i + 1..] {
                let x = (*u + *v).map(|c| c.clone() / two.clone());
                let residual = (a.dot(&x) - one.clone()).abs();
                pairs.push(AttainingPair { x, f: a.clone(), residual, kind: PairKind::Midpoint });
            }
        }
    }
    let six = S::from_int(6);
    for a in &poly.facets {
        let face = poly.face_vertices(a);
        let m = S::from_int(face.len() as i64);
        let centroid = face.iter().fold(Vector::zeros(dim), |acc, v| &acc + *v).map(|c| c.clone() / m.clone());
        for k in 1..=5 {
            let t = S::from_int(k) / six.clone();
            for j in 0..dim.saturating_sub(1).max(1) {
                let v = face[j % face.len()];
                let x = &centroid.scale(&(one.clone() - t.clone())) + &v.scale(&t);
                let residual = (a.dot(&x) - one.clone()).abs();
                pairs.push(AttainingPair { x, f: a.clone(), residual, kind: PairKind::Face });
            }
        }
    }
    Ok(pairs)
}
