//! Norm combinators on ℝⁿ: evaluation of the norm and of its dual norm,
//! supporting functionals, attaining points and the attaining structure of
//! polyhedral norms.
//!
//! Polyhedral leaves store their generators as exact rationals so the same
//! spec can be evaluated in `f64` or exactly. Generators are symmetrized
//! under `±` always, and under all coordinate sign flips when the leaf is
//! `sign_closed` (the user asserted absoluteness).

mod absolute;
mod attain;
pub mod file;
mod hull;
mod polyhedron;

use std::any::Any;
use std::borrow::Cow;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::riesz::{check_dims, Vector};
use crate::scalar::{Rational, Scalar};

pub use absolute::{absolute_check, AbsoluteReport, AbsoluteSpec};
pub use attain::{enumerate_attaining_pairs, AttainingPair, PairKind, MAX_ENUMERATION_DIM};
pub use hull::Piece;
pub use polyhedron::Polyhedron;

/// Exponent of an ℓp atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    One,
    /// `1 < p < ∞`.
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Self::One)
        } else if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p > 1.0 && p.is_finite() {
            Ok(Self::Finite(p))
        } else {
            Err(Error::InvalidSpec(format!("ℓp exponent must lie in [1, ∞], got {p}")))
        }
    }

    pub fn conjugate(self) -> Self {
        match self {
            Self::One => Self::Infinity,
            Self::Infinity => Self::One,
            Self::Finite(p) => Self::Finite(p / (p - 1.0)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }
}

/// Generators kept in both exact and float form.
#[derive(Clone, Debug)]
pub(crate) struct Generators {
    exact: Vec<Vector<Rational>>,
    float: Vec<Vector<f64>>,
}

impl Generators {
    fn new(exact: Vec<Vector<Rational>>) -> Self {
        let float = exact.iter().map(Vector::to_f64).collect();
        Self { exact, float }
    }

    pub(crate) fn get<S: Scalar>(&self) -> Cow<'_, [Vector<S>]> {
        if let Some(v) = (&self.float as &dyn Any).downcast_ref::<Vec<Vector<S>>>() {
            return Cow::Borrowed(v);
        }
        if let Some(v) = (&self.exact as &dyn Any).downcast_ref::<Vec<Vector<S>>>() {
            return Cow::Borrowed(v);
        }
        Cow::Owned(self.exact.iter().map(Vector::to_scalar).collect())
    }

    pub(crate) fn exact(&self) -> &[Vector<Rational>] {
        &self.exact
    }
}

/// Lazily enumerated polyhedron, shared by clones of the spec.
#[derive(Clone, Debug, Default)]
pub(crate) struct PolyCache {
    exact: OnceLock<Result<Polyhedron<Rational>>>,
    float: OnceLock<Polyhedron<f64>>,
}

impl PolyCache {
    fn get<S: Scalar>(&self, build: impl FnOnce() -> Result<Polyhedron<Rational>>) -> Result<Cow<'_, Polyhedron<S>>> {
        let exact = self.exact.get_or_init(build).as_ref().map_err(Clone::clone)?;
        if let Some(p) = (exact as &dyn Any).downcast_ref::<Polyhedron<S>>() {
            return Ok(Cow::Borrowed(p));
        }
        let float = self.float.get_or_init(|| exact.convert());
        if let Some(p) = (float as &dyn Any).downcast_ref::<Polyhedron<S>>() {
            return Ok(Cow::Borrowed(p));
        }
        Ok(Cow::Owned(exact.convert()))
    }
}

/// `‖x‖ = max` over the symmetrized functional set of `⟨f, x⟩`.
#[derive(Clone, Debug)]
pub struct FacetNorm {
    dim: usize,
    functionals: Generators,
    sign_closed: bool,
    cache: PolyCache,
}

/// Gauge of the convex hull of the symmetrized vertex set.
#[derive(Clone, Debug)]
pub struct PolytopeBall {
    dim: usize,
    vertices: Generators,
    sign_closed: bool,
    cache: PolyCache,
}

/// Gauge of the convex hull of a union of convex pieces.
#[derive(Clone, Debug)]
pub struct HullOfPieces {
    dim: usize,
    pieces: Vec<Piece>,
}

#[derive(Clone, Debug)]
pub struct Block {
    pub coords: Vec<usize>,
    pub spec: NormSpec,
}

/// `‖x‖ = outer(‖x_B1‖_1, …, ‖x_Bk‖_k)` over a partition of the coordinates.
#[derive(Clone, Debug)]
pub struct DirectSum {
    dim: usize,
    parts: Vec<Block>,
    outer: Box<NormSpec>,
    cache: PolyCache,
}

#[derive(Clone, Debug)]
pub enum NormSpec {
    Lp { p: Exponent, dim: usize },
    Facet(FacetNorm),
    Polytope(PolytopeBall),
    Hull(HullOfPieces),
    Sum(DirectSum),
    Dual(Box<NormSpec>),
}

fn exact_generators(dim: usize, gens: Vec<Vec<Rational>>, what: &str) -> Result<Vec<Vector<Rational>>> {
    if gens.is_empty() {
        return Err(Error::InvalidSpec(format!("{what}: empty generating set")));
    }
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        check_dims(dim, g.len())?;
        let v = Vector::new(g);
        if v.is_zero() {
            return Err(Error::InvalidSpec(format!("{what}: zero generator")));
        }
        out.push(v);
    }
    let rows: Vec<Vec<Rational>> = out.iter().map(|v| v.coords().to_vec()).collect();
    if crate::linalg::rank(&rows, &Rational::from_integer(0.into())) < dim {
        return Err(Error::NonSpanning);
    }
    Ok(out)
}

impl NormSpec {
    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        Ok(Self::Lp { p: Exponent::new(p)?, dim })
    }

    pub fn facet(dim: usize, functionals: Vec<Vec<Rational>>, sign_closed: bool) -> Result<Self> {
        let functionals = exact_generators(dim, functionals, "facet norm")?;
        Ok(Self::Facet(FacetNorm {
            dim,
            functionals: Generators::new(functionals),
            sign_closed,
            cache: PolyCache::default(),
        }))
    }

    pub fn polytope(dim: usize, vertices: Vec<Vec<Rational>>, sign_closed: bool) -> Result<Self> {
        let vertices = exact_generators(dim, vertices, "polytope ball")?;
        Ok(Self::Polytope(PolytopeBall {
            dim,
            vertices: Generators::new(vertices),
            sign_closed,
            cache: PolyCache::default(),
        }))
    }

    pub fn hull(dim: usize, pieces: Vec<Piece>) -> Result<Self> {
        hull::validate(dim, &pieces)?;
        Ok(Self::Hull(HullOfPieces { dim, pieces }))
    }

    pub fn direct_sum(parts: Vec<Block>, outer: NormSpec) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("direct sum without parts".into()));
        }
        check_dims(parts.len(), outer.dim())?;
        let dim: usize = parts.iter().map(|b| b.coords.len()).sum();
        let mut seen = vec![false; dim];
        for b in &parts {
            check_dims(b.coords.len(), b.spec.dim())?;
            for &c in &b.coords {
                if c >= dim || seen[c] {
                    return Err(Error::InvalidSpec("direct sum blocks must partition the coordinates".into()));
                }
                seen[c] = true;
            }
        }
        Ok(Self::Sum(DirectSum { dim, parts, outer: Box::new(outer), cache: PolyCache::default() }))
    }

    pub fn dual_of(inner: NormSpec) -> Self {
        Self::Dual(Box::new(inner))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Lp { dim, .. } => *dim,
            Self::Facet(f) => f.dim,
            Self::Polytope(p) => p.dim,
            Self::Hull(h) => h.dim,
            Self::Sum(s) => s.dim,
            Self::Dual(inner) => inner.dim(),
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        match self {
            Self::Lp { p, .. } => !matches!(p, Exponent::Finite(_)),
            Self::Facet(_) | Self::Polytope(_) => true,
            Self::Hull(_) => false,
            Self::Sum(s) => s.outer.is_polyhedral() && s.parts.iter().all(|b| b.spec.is_polyhedral()),
            Self::Dual(inner) => inner.is_polyhedral(),
        }
    }

    /// `true` when every value this spec produces is available exactly.
    pub fn is_exact(&self) -> bool {
        self.is_polyhedral()
    }

    pub fn norm<S: Scalar>(&self, x: &Vector<S>) -> Result<S> {
        check_dims(self.dim(), x.dim())?;
        match self {
            Self::Lp { p, .. } => lp_norm(*p, x),
            Self::Facet(f) => {
                let gens = f.functionals.get::<S>();
                let ax = x.abs();
                Ok(gens.iter().fold(S::zero(), |m, g| {
                    let v = if f.sign_closed { g.abs().dot(&ax) } else { g.dot(x).abs() };
                    S::max_of(m, v)
                }))
            }
            Self::Polytope(_) => {
                let poly = self.polyhedron::<S>()?;
                Ok(poly.facets.iter().fold(S::zero(), |m, a| S::max_of(m, a.dot(x))))
            }
            Self::Hull(h) => float_only(|| h.gauge(&x.to_f64())),
            Self::Sum(s) => {
                let radii = s.block_values(x, |spec, v| spec.norm(v))?;
                s.outer.norm(&radii)
            }
            Self::Dual(inner) => inner.dual_norm(x),
        }
    }

    pub fn dual_norm<S: Scalar>(&self, f: &Vector<S>) -> Result<S> {
        check_dims(self.dim(), f.dim())?;
        match self {
            Self::Lp { p, .. } => lp_norm(p.conjugate(), f),
            Self::Facet(_) => {
                let poly = self.polyhedron::<S>()?;
                Ok(poly.vertices.iter().fold(S::zero(), |m, v| S::max_of(m, v.dot(f))))
            }
            Self::Polytope(p) => {
                let gens = p.vertices.get::<S>();
                let af = f.abs();
                Ok(gens.iter().fold(S::zero(), |m, g| {
                    let v = if p.sign_closed { g.abs().dot(&af) } else { g.dot(f).abs() };
                    S::max_of(m, v)
                }))
            }
            Self::Hull(h) => float_only(|| Ok(h.support(&f.to_f64()))),
            Self::Sum(s) => {
                let radii = s.block_values(f, |spec, v| spec.dual_norm(v))?;
                s.outer.dual_norm(&radii)
            }
            Self::Dual(inner) => inner.norm(f),
        }
    }

    /// Vertices and facet functionals of the unit ball of a polyhedral spec.
    pub fn polyhedron<S: Scalar>(&self) -> Result<Cow<'_, Polyhedron<S>>> {
        match self {
            Self::Lp { p: Exponent::One, dim } => Ok(Cow::Owned(Polyhedron::cross_polytope(*dim)?.convert())),
            Self::Lp { p: Exponent::Infinity, dim } => {
                Ok(Cow::Owned(Polyhedron::cross_polytope(*dim)?.polar().convert()))
            }
            Self::Lp { .. } | Self::Hull(_) => Err(Error::NotPolyhedral),
            Self::Facet(f) => f.cache.get(|| {
                let facets = polyhedron::symmetric_closure(f.functionals.exact(), f.sign_closed);
                let vertices = polyhedron::hull_facets(f.dim, &facets)?;
                Ok(Polyhedron::new(f.dim, vertices, facets).pruned())
            }),
            Self::Polytope(p) => p.cache.get(|| {
                let vertices = polyhedron::symmetric_closure(p.vertices.exact(), p.sign_closed);
                let facets = polyhedron::hull_facets(p.dim, &vertices)?;
                Ok(Polyhedron::new(p.dim, vertices, facets).pruned())
            }),
            Self::Sum(s) => s.cache.get(|| s.build_polyhedron()),
            Self::Dual(inner) => Ok(Cow::Owned(inner.polyhedron::<S>()?.into_owned().polar())),
        }
    }
}

fn float_only<S: Scalar>(f: impl FnOnce() -> Result<f64>) -> Result<S> {
    if S::EXACT {
        return Err(Error::NotExact);
    }
    f().map(S::from_f64)
}

fn lp_norm<S: Scalar>(p: Exponent, x: &Vector<S>) -> Result<S> {
    match p {
        Exponent::One => Ok(x.coords().iter().fold(S::zero(), |a, c| a + c.abs())),
        Exponent::Infinity => Ok(x.max_abs()),
        Exponent::Finite(p) => float_only(|| {
            let x = x.to_f64();
            let m = x.max_abs();
            if m == 0.0 {
                return Ok(0.0);
            }
            // scaled to avoid overflow for large p
            Ok(m * x.coords().iter().map(|c| (c.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p))
        }),
    }
}

impl DirectSum {
    pub fn parts(&self) -> &[Block] {
        &self.parts
    }

    pub fn outer(&self) -> &NormSpec {
        &self.outer
    }

    fn block_values<S: Scalar>(
        &self,
        x: &Vector<S>,
        f: impl Fn(&NormSpec, &Vector<S>) -> Result<S>,
    ) -> Result<Vector<S>> {
        let vals = self
            .parts
            .iter()
            .map(|b| f(&b.spec, &restrict(x, &b.coords)))
            .collect::<Result<Vec<S>>>()?;
        Ok(Vector::new(vals))
    }

    fn build_polyhedron(&self) -> Result<Polyhedron<Rational>> {
        let outer = self.outer.polyhedron::<Rational>()?.into_owned();
        let blocks = self
            .parts
            .iter()
            .map(|b| b.spec.polyhedron::<Rational>().map(Cow::into_owned))
            .collect::<Result<Vec<_>>>()?;
        let vertices = polyhedron::combine_blocks(
            self.dim,
            &outer.vertices,
            &self.parts.iter().map(|b| b.coords.as_slice()).collect::<Vec<_>>(),
            &blocks.iter().map(|p| p.vertices.as_slice()).collect::<Vec<_>>(),
        )?;
        let facets = polyhedron::combine_blocks(
            self.dim,
            &outer.facets,
            &self.parts.iter().map(|b| b.coords.as_slice()).collect::<Vec<_>>(),
            &blocks.iter().map(|p| p.facets.as_slice()).collect::<Vec<_>>(),
        )?;
        Ok(Polyhedron::new(self.dim, vertices, facets).pruned())
    }
}

impl FacetNorm {
    pub fn functionals(&self) -> &[Vector<Rational>] {
        self.functionals.exact()
    }
    pub fn sign_closed(&self) -> bool {
        self.sign_closed
    }
}

impl PolytopeBall {
    pub fn vertices(&self) -> &[Vector<Rational>] {
        self.vertices.exact()
    }
    pub fn sign_closed(&self) -> bool {
        self.sign_closed
    }
}

impl HullOfPieces {
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }
}

pub(crate) fn restrict<S: Scalar>(x: &Vector<S>, coords: &[usize]) -> Vector<S> {
    Vector::new(coords.iter().map(|&c| x[c].clone()).collect())
}

pub(crate) fn embed<S: Scalar>(dim: usize, coords: &[usize], block: &Vector<S>, into: &mut Vec<S>) {
    debug_assert_eq!(into.len(), dim);
    for (k, &c) in coords.iter().enumerate() {
        into[c] = block[k].clone();
    }
}
