use std::ops::Deref;

use rand::Rng;

use crate::error::{Error, Result};
use crate::riesz::Vector;
use crate::search::rng;

use super::NormSpec;

/// Outcome of [`absolute_check`]. `witness` is the first vector found with
/// `‖x‖ ≠ ‖|x|‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsoluteReport {
    pub absolute: bool,
    pub normalized: bool,
    pub witness: Option<Vector<f64>>,
    pub checked: usize,
}

const SIGN_GRID_MAX_DIM: usize = 6;

/// Tests `‖x‖ = ‖|x|‖` on the `{1, −1, 0}` grid and on seeded random
/// vectors, and `‖e_i‖ = 1` on the basis.
pub fn absolute_check(spec: &NormSpec, samples: usize, seed: u64) -> Result<AbsoluteReport> {
    let n = spec.dim();
    let mut checked = 0;
    let mut normalized = true;
    for i in 0..n {
        let e = Vector::<f64>::basis(n, i);
        normalized &= (spec.norm(&e)? - 1.0).abs() <= 1e-9;
    }
    let mut test = |x: Vector<f64>| -> Result<Option<Vector<f64>>> {
        checked += 1;
        let a = spec.norm(&x)?;
        let b = spec.norm(&x.abs())?;
        Ok(((a - b).abs() > 1e-9 * a.max(1.0)).then_some(x))
    };
    let mut witness = None;
    if n <= SIGN_GRID_MAX_DIM {
        const DIGITS: [f64; 3] = [1.0, -1.0, 0.0];
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut c = vec![0.0; n];
            let mut r = code;
            for k in (0..n).rev() {
                c[k] = DIGITS[r % 3];
                r /= 3;
            }
            if let Some(w) = test(Vector::new(c))? {
                witness = Some(w);
                break;
            }
        }
    }
    if witness.is_none() {
        let mut g = rng(seed);
        for _ in 0..samples {
            let c: Vec<f64> = (0..n).map(|_| g.gen_range(-1.0..1.0)).collect();
            if let Some(w) = test(Vector::new(c))? {
                witness = Some(w);
                break;
            }
        }
    }
    Ok(AbsoluteReport { absolute: witness.is_none(), normalized, witness, checked })
}

/// A spec that passed [`absolute_check`]; the lattice-property checkers
/// only accept this type.
#[derive(Clone, Debug)]
pub struct AbsoluteSpec {
    spec: NormSpec,
    normalized: bool,
}

impl AbsoluteSpec {
    pub const DEFAULT_SAMPLES: usize = 2000;

    pub fn certify(spec: NormSpec) -> Result<Self> {
        Self::certify_with(spec, Self::DEFAULT_SAMPLES, 0)
    }

    pub fn certify_with(spec: NormSpec, samples: usize, seed: u64) -> Result<Self> {
        let report = absolute_check(&spec, samples, seed)?;
        match report.witness {
            Some(w) => Err(Error::NotAbsolute { witness: w.into_coords() }),
            None => Ok(Self { spec, normalized: report.normalized }),
        }
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn into_inner(self) -> NormSpec {
        self.spec
    }
}

impl Deref for AbsoluteSpec {
    type Target = NormSpec;
    fn deref(&self) -> &NormSpec {
        &self.spec
    }
}
