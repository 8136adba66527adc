use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{binomial, for_each_subset, rank, solve};
use crate::riesz::Vector;
use crate::scalar::{Rational, Scalar};

/// Largest number of candidate subsets the brute-force hull enumeration
/// will visit.
const MAX_SUBSETS: u128 = 5_000_000;
/// Largest vertex or facet list a direct sum may produce.
const MAX_PRODUCT: usize = 200_000;

/// A centrally symmetric polytope `{x : ⟨a, x⟩ ≤ 1 for every facet a}`
/// together with its vertex list. Both lists are closed under negation.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron<S> {
    pub dim: usize,
    pub vertices: Vec<Vector<S>>,
    pub facets: Vec<Vector<S>>,
}

impl<S: Scalar> Polyhedron<S> {
    pub fn new(dim: usize, vertices: Vec<Vector<S>>, facets: Vec<Vector<S>>) -> Self {
        Self { dim, vertices, facets }
    }

    /// The polar polytope: the unit ball of the dual norm.
    pub fn polar(self) -> Self {
        Self { dim: self.dim, vertices: self.facets, facets: self.vertices }
    }

    /// Vertices `v` with `⟨a, v⟩ = 1`.
    pub fn face_vertices(&self, a: &Vector<S>) -> Vec<&Vector<S>> {
        let one = S::one();
        let tol = S::tol();
        self.vertices.iter().filter(|v| a.dot(v).approx_eq(&one, &tol)).collect()
    }
}

impl Polyhedron<Rational> {
    pub fn convert<T: Scalar>(&self) -> Polyhedron<T> {
        Polyhedron {
            dim: self.dim,
            vertices: self.vertices.iter().map(Vector::to_scalar).collect(),
            facets: self.facets.iter().map(Vector::to_scalar).collect(),
        }
    }

    /// Unit ball of ℓ1: vertices `±e_i`, facets all sign vectors.
    pub fn cross_polytope(dim: usize) -> Result<Self> {
        if dim > 16 {
            return Err(Error::DimensionGuard { dim, max: 16, what: "sign-vector enumeration" });
        }
        let mut vertices = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let e = Vector::<Rational>::basis(dim, i);
            vertices.push(-&e);
            vertices.push(e);
        }
        let ones = Vector::new(vec![Rational::from_int(1); dim]);
        let facets = sign_flips(&ones);
        Ok(Self { dim, vertices, facets })
    }

    /// Drops points that are not vertices and functionals that do not
    /// define facets.
    pub fn pruned(self) -> Self {
        let zero = Rational::from_int(0);
        let one = Rational::from_int(1);
        let on = |a: &Vector<Rational>, v: &Vector<Rational>| a.dot(v) == one;
        let full = |rows: Vec<Vec<Rational>>| rows.len() >= self.dim && rank(&rows, &zero) == self.dim;
        let vertices = self
            .vertices
            .iter()
            .filter(|v| full(self.facets.iter().filter(|a| on(a, v)).map(|a| a.coords().to_vec()).collect()))
            .cloned()
            .collect();
        let facets = self
            .facets
            .iter()
            .filter(|a| full(self.vertices.iter().filter(|v| on(a, v)).map(|v| v.coords().to_vec()).collect()))
            .cloned()
            .collect();
        Self { dim: self.dim, vertices, facets }
    }
}

fn sign_flips(v: &Vector<Rational>) -> Vec<Vector<Rational>> {
    let mut out = vec![v.abs()];
    for i in 0..v.dim() {
        if v[i] == Rational::from_int(0) {
            continue;
        }
        let flipped: Vec<_> = out
            .iter()
            .map(|w| {
                let mut c = w.coords().to_vec();
                c[i] = -c[i].clone();
                Vector::new(c)
            })
            .collect();
        out.extend(flipped);
    }
    out
}

fn dedup(list: Vec<Vector<Rational>>) -> Vec<Vector<Rational>> {
    let mut seen = HashSet::new();
    list.into_iter().filter(|v| seen.insert(v.coords().to_vec())).collect()
}

/// Closure of a generating set under negation, and under all coordinate
/// sign flips when `sign_closed`.
pub(crate) fn symmetric_closure(gens: &[Vector<Rational>], sign_closed: bool) -> Vec<Vector<Rational>> {
    let mut out = Vec::new();
    for g in gens {
        if sign_closed {
            out.extend(sign_flips(g));
        } else {
            out.push(g.clone());
            out.push(-g);
        }
    }
    dedup(out)
}

/// Facet functionals of the convex hull of a symmetric point set, by
/// brute force over `dim`-subsets.
pub(crate) fn hull_facets(dim: usize, points: &[Vector<Rational>]) -> Result<Vec<Vector<Rational>>> {
    let zero = Rational::from_int(0);
    let one = Rational::from_int(1);
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| p.coords().to_vec()).collect();
    if rank(&rows, &zero) < dim {
        return Err(Error::NonSpanning);
    }
    if binomial(points.len(), dim) > MAX_SUBSETS {
        return Err(Error::DimensionGuard { dim, max: 4, what: "facet enumeration" });
    }
    let float: Vec<Vec<f64>> = points.iter().map(|p| p.to_f64().into_coords()).collect();
    let mut found = Vec::new();
    let mut seen = HashSet::new();
    for_each_subset(points.len(), dim, |idx| {
        let sub: Vec<Vec<f64>> = idx.iter().map(|&i| float[i].clone()).collect();
        let Some(a) = solve(&sub, &vec![1.0; dim], &1e-12) else { return };
        let dot = |p: &[f64]| a.iter().zip(p).map(|(x, y)| x * y).sum::<f64>();
        if float.iter().any(|p| dot(p).abs() > 1.0 + 1e-7) {
            return;
        }
        let sub: Vec<Vec<Rational>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let Some(a) = solve(&sub, &vec![one.clone(); dim], &zero) else { return };
        let a = Vector::new(a);
        if points.iter().all(|p| a.dot(p) <= one) && seen.insert(a.coords().to_vec()) {
            found.push(a);
        }
    });
    Ok(found)
}

/// Vertices (or facets) of a direct sum from those of the outer norm and
/// the blocks: `⊕_j |w_j| u_j` over outer elements `w` and block elements
/// `u_j`. Requires an absolute outer norm.
pub(crate) fn combine_blocks(
    dim: usize,
    outer: &[Vector<Rational>],
    coords: &[&[usize]],
    blocks: &[&[Vector<Rational>]],
) -> Result<Vec<Vector<Rational>>> {
    let zero = Rational::from_int(0);
    let weights = dedup(outer.iter().map(Vector::abs).collect());
    let mut out: Vec<Vector<Rational>> = Vec::new();
    for w in &weights {
        let mut partial = vec![vec![zero.clone(); dim]];
        for (j, list) in blocks.iter().enumerate() {
            if w[j] == zero {
                continue;
            }
            let mut next = Vec::with_capacity(partial.len() * list.len());
            for p in &partial {
                for u in list.iter() {
                    let mut c = p.clone();
                    for (k, &i) in coords[j].iter().enumerate() {
                        c[i] = w[j].clone() * u[k].clone();
                    }
                    next.push(c);
                }
            }
            if out.len() + next.len() > MAX_PRODUCT {
                return Err(Error::DimensionGuard { dim, max: MAX_PRODUCT, what: "direct sum enumeration" });
            }
            partial = next;
        }
        out.extend(partial.into_iter().map(Vector::new));
    }
    Ok(dedup(out))
}
