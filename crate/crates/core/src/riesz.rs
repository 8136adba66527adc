//! Coordinatewise Riesz-space arithmetic on ℝⁿ.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// A point of ℝⁿ ordered coordinatewise.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    /// Panics on an empty coordinate list; dimension is always at least one.
    pub fn new(coords: Vec<S>) -> Self {
        assert!(!coords.is_empty(), "vector dimension must be at least 1");
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![S::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[i] = S::one();
        v
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Self::new(coords.iter().map(|&c| S::from_f64(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self { coords: self.coords.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector { coords: self.coords.iter().map(Scalar::to_f64).collect() }
    }

    pub fn convert<T: Scalar>(&self) -> Vector<T> {
        Vector { coords: self.coords.iter().map(|c| T::from_f64(c.to_f64())).collect() }
    }

    pub fn dot(&self, other: &Self) -> S {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// `x ≥ 0` in the coordinatewise order.
    pub fn is_nonneg(&self) -> bool {
        self.coords.iter().all(|c| *c >= S::zero())
    }

    pub fn le(&self, other: &Self) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    pub fn pos_part(&self) -> Self {
        self.map(|c| S::max_of(c.clone(), S::zero()))
    }

    pub fn neg_part(&self) -> Self {
        self.map(|c| S::max_of(-c.clone(), S::zero()))
    }

    pub fn abs(&self) -> Self {
        self.map(|c| c.abs())
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| S::min_of(a.clone(), b.clone()))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| S::max_of(a.clone(), b.clone()))
    }

    /// Zeroes every coordinate outside `set`.
    pub fn project(&self, set: &IndexSet) -> Result<Self> {
        set.check(self.dim())?;
        let coords = (0..self.dim())
            .map(|i| if set.contains(i) { self.coords[i].clone() } else { S::zero() })
            .collect();
        Ok(Self { coords })
    }

    /// Coordinates with nonzero entries.
    pub fn support(&self) -> IndexSet {
        IndexSet::from_iter((0..self.dim()).filter(|&i| !self.coords[i].is_zero()))
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn max_abs(&self) -> S {
        self.coords.iter().fold(S::zero(), |m, c| S::max_of(m, c.abs()))
    }

    pub fn approx_eq(&self, other: &Self, tol: &S) -> bool {
        self.dim() == other.dim()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.approx_eq(b, tol))
    }
}

impl Vector<Rational> {
    /// Exact conversion into any scalar type.
    pub fn to_scalar<T: Scalar>(&self) -> Vector<T> {
        Vector { coords: self.coords.iter().map(T::from_rational).collect() }
    }
}

impl Vector<f64> {
    pub fn norm2(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.coords[i]
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;
    fn add(self, rhs: Self) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() + b.clone()).collect() }
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;
    fn sub(self, rhs: Self) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() - b.clone()).collect() }
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;
    fn neg(self) -> Vector<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Mul<&Vector<S>> for f64 {
    type Output = Vector<S>;
    fn mul(self, rhs: &Vector<S>) -> Vector<S> {
        rhs.scale(&S::from_f64(self))
    }
}

impl<S: Scalar> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subset of coordinate indices (0-based).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(dim: usize) -> Self {
        Self { indices: (0..dim).collect() }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn complement(&self, dim: usize) -> Self {
        Self { indices: (0..dim).filter(|i| !self.contains(*i)).collect() }
    }

    fn check(&self, dim: usize) -> Result<()> {
        match self.indices.last() {
            Some(&index) if index >= dim => Err(Error::IndexOutOfRange { index, dim }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut indices: Vec<usize> = iter.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }
}

/// Which lattice identity failed, with the offending coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityViolation {
    pub identity: &'static str,
    pub coord: usize,
    pub deviation: f64,
}

/// Checks the standard Riesz identities coordinatewise.
///
/// The disjoint-sum identity `|s x + t y| = |s| x + |t| y` is only checked
/// when `x, y ≥ 0` and `x ∧ y = 0`.
pub fn riesz_identity_check<S: Scalar>(
    x: &Vector<S>,
    y: &Vector<S>,
    s: &S,
    t: &S,
    tol: &S,
) -> Result<std::result::Result<(), IdentityViolation>> {
    check_dims(x.dim(), y.dim())?;
    let half = S::one() / (S::one() + S::one());
    let xp = x.pos_part();
    let xm = x.neg_part();
    let xa = x.abs();
    let meet = x.meet(y)?;
    let join = x.join(y)?;
    let diff = (x - y).abs();
    let sum = x + y;
    let sum_abs = sum.abs();

    let mut checks: Vec<(&'static str, Vector<S>, Vector<S>)> = vec![
        ("x = x+ - x-", x.clone(), &xp - &xm),
        ("|x| = x+ + x-", xa.clone(), &xp + &xm),
        ("x+ meet x- = 0", xp.meet(&xm)?, Vector::zeros(x.dim())),
        ("|x-y| = x join y - x meet y", diff.clone(), &join - &meet),
        ("x meet y = (x+y-|x-y|)/2", meet.clone(), (&sum - &diff).scale(&half)),
        ("x join y = (x+y+|x-y|)/2", join.clone(), (&sum + &diff).scale(&half)),
        (
            "|x| meet |y| = ||x+y|-|x-y||/2",
            xa.meet(&y.abs())?,
            (&sum_abs - &diff).abs().scale(&half),
        ),
        (
            "|x| join |y| = ||x+y|+|x-y||/2",
            xa.join(&y.abs())?,
            (&sum_abs + &diff).abs().scale(&half),
        ),
    ];
    if x.is_nonneg() && y.is_nonneg() && meet.is_zero() {
        let lhs = (&x.scale(s) + &y.scale(t)).abs();
        let rhs = &x.scale(&s.abs()) + &y.scale(&t.abs());
        checks.push(("|sx+ty| = |s|x + |t|y", lhs, rhs));
    }
    for (identity, lhs, rhs) in checks {
        for i in 0..lhs.dim() {
            let dev = (lhs[i].clone() - rhs[i].clone()).abs();
            if dev > *tol {
                return Ok(Err(IdentityViolation { identity, coord: i, deviation: dev.to_f64() }));
            }
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> Vector<f64> {
        Vector::from_f64(c)
    }

    #[test]
    fn parts_of_the_hnap_witness() {
        let x = v(&[0.75, -0.75, 0.0]);
        assert_eq!(x.pos_part(), v(&[0.75, 0.0, 0.0]));
        assert_eq!(x.neg_part(), v(&[0.0, 0.75, 0.0]));
        let z = v(&[0.0, 0.0]);
        assert_eq!(z.pos_part(), z);
        assert_eq!(z.neg_part(), z);
        assert_eq!(v(&[-2.0, 5.0]).abs(), v(&[2.0, 5.0]));
    }

    #[test]
    fn meet_join_and_projection() {
        let a = v(&[1.0, 2.0]);
        let b = v(&[2.0, 1.0]);
        assert_eq!(a.meet(&b).unwrap(), v(&[1.0, 1.0]));
        assert_eq!(a.join(&b).unwrap(), v(&[2.0, 2.0]));
        let x = v(&[3.0, -4.0]);
        assert!(x.pos_part().meet(&x.neg_part()).unwrap().is_zero());
        assert!(a.meet(&v(&[1.0])).is_err());

        let y = v(&[1.0, 2.0, 3.0]);
        assert_eq!(y.project(&IndexSet::from_iter([0, 2])).unwrap(), v(&[1.0, 0.0, 3.0]));
        assert_eq!(y.project(&IndexSet::full(3)).unwrap(), y);
        assert!(y.project(&IndexSet::empty()).unwrap().is_zero());
        assert!(y.project(&IndexSet::from_iter([3])).is_err());

        let w = v(&[0.75, -0.75, 0.0]);
        let positive = IndexSet::from_iter((0..3).filter(|&i| w[i] > 0.0));
        assert_eq!(w.project(&positive).unwrap(), w.pos_part());
    }

    #[test]
    fn identities_on_simple_inputs() {
        let tol = 1e-12;
        let r = riesz_identity_check(&v(&[1.0, -2.0]), &v(&[3.0, 1.0]), &1.0, &1.0, &tol).unwrap();
        assert!(r.is_ok());
        let x = v(&[1.0, 0.0]);
        let y = v(&[0.0, 2.0]);
        assert!(riesz_identity_check(&x, &y, &-3.0, &2.0, &tol).unwrap().is_ok());
        assert_eq!((&x.scale(&-3.0) + &y.scale(&2.0)).abs(), v(&[3.0, 4.0]));
    }

    #[test]
    fn identities_hold_exactly_in_rational_mode() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let x = Vector::new(vec![q(3, 4), q(-3, 4), q(0, 1)]);
        let y = Vector::new(vec![q(2, 3), q(-2, 3), q(1, 1)]);
        let r = riesz_identity_check(&x, &y, &q(1, 2), &q(-5, 3), &Rational::from_integer(0.into()));
        assert!(r.unwrap().is_ok());
    }

    proptest! {
        #[test]
        fn decomposition_is_exact(c in proptest::collection::vec(-1e6f64..1e6, 1..6)) {
            let x = Vector::new(c);
            prop_assert_eq!(&x.pos_part() - &x.neg_part(), x.clone());
            prop_assert_eq!(&x.pos_part() + &x.neg_part(), x.abs());
            prop_assert!(x.pos_part().meet(&x.neg_part()).unwrap().is_zero());
        }

        #[test]
        fn projection_is_idempotent_and_linear(
            a in proptest::collection::vec(-10.0f64..10.0, 4),
            b in proptest::collection::vec(-10.0f64..10.0, 4),
            mask in proptest::collection::vec(any::<bool>(), 4),
            s in -3.0f64..3.0,
            t in -3.0f64..3.0,
        ) {
            let set = IndexSet::from_iter((0..4).filter(|&i| mask[i]));
            let x = Vector::new(a);
            let y = Vector::new(b);
            let px = x.project(&set).unwrap();
            prop_assert_eq!(px.project(&set).unwrap(), px.clone());
            let lhs = (&x.scale(&s) + &y.scale(&t)).project(&set).unwrap();
            let rhs = &px.scale(&s) + &y.project(&set).unwrap().scale(&t);
            prop_assert!(lhs.approx_eq(&rhs, &1e-12));
        }
    }
}
