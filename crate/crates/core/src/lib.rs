//! Finite-dimensional Banach lattices on ℝⁿ: norm combinators, lattice
//! monotonicity moduli and Bishop–Phelps–Bollobás style corrections.

pub mod bpb;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod monotonicity;
pub mod norms;
pub mod registry;
pub mod regression;
pub mod riesz;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use norms::{AbsoluteSpec, Exponent, NormSpec};
pub use riesz::{IndexSet, Vector};
pub use scalar::{Rational, Scalar};

pub type Vector64 = Vector<f64>;
pub type Vector32 = Vector<f32>;
pub type VectorQ = Vector<Rational>;
