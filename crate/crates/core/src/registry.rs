//! Built-in spaces with their known classifications and stored witnesses.
//!
//! Names: `example-hnap-3d`, `example-sm3d`, `truncated-renorm-N`,
//! `random-absolute-2d-SEED`, `random-absolute-polytope-DIM-SEED` and
//! `lp-P-N` (`P` an exponent or `inf`).

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::monotonicity::{CheckConfig, Property};
use crate::norms::{AbsoluteSpec, Block, Exponent, NormSpec, Piece};
use crate::riesz::Vector;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::search::rng;

/// Tolerance of the load-time claim checks.
pub const CLAIM_TOL: f64 = 1e-9;
/// `r` values of the `z` family of `example-sm3d`.
pub const SM3D_RADII: [f64; 5] = [0.5, 0.6, 0.69, 0.7, 0.707];
pub const DEFAULT_TRUNCATION: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Holds,
    Fails,
    /// Fails only in the infinite-dimensional limit; at finite size the
    /// witness gap and a vanishing modulus bound are checked instead.
    FailsInLimit,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
            Self::FailsInLimit => "fails in the limit",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Norm,
    PosNorm,
    NegNorm,
    /// Dual norm of the functional.
    DualNorm,
    /// `f(x)`.
    Pairing,
    /// `‖f⁺‖*‖x⁺‖ + ‖f⁻‖*‖x⁻‖`.
    HnapSum,
}

/// A named vector, optionally with a functional, and its stated values.
#[derive(Clone, Debug)]
pub struct Stated {
    pub name: String,
    pub x: Vector<f64>,
    pub f: Option<Vector<f64>>,
    pub claims: Vec<(Quantity, f64)>,
}

impl Stated {
    pub fn measure(&self, spec: &NormSpec, q: Quantity) -> Result<f64> {
        let f = || self.f.as_ref().ok_or_else(|| Error::InvalidSpec(format!("{} has no functional", self.name)));
        Ok(match q {
            Quantity::Norm => spec.norm(&self.x)?,
            Quantity::PosNorm => spec.norm(&self.x.pos_part())?,
            Quantity::NegNorm => spec.norm(&self.x.neg_part())?,
            Quantity::DualNorm => spec.dual_norm(f()?)?,
            Quantity::Pairing => f()?.dot(&self.x),
            Quantity::HnapSum => {
                let f = f()?;
                spec.dual_norm(&f.pos_part())? * spec.norm(&self.x.pos_part())?
                    + spec.dual_norm(&f.neg_part())? * spec.norm(&self.x.neg_part())?
            }
        })
    }

    /// Claims that are off by more than `tol`, as `(quantity, stated, measured)`.
    pub fn mismatches(&self, spec: &NormSpec, tol: f64) -> Result<Vec<(Quantity, f64, f64)>> {
        let mut out = Vec::new();
        for &(q, want) in &self.claims {
            let got = self.measure(spec, q)?;
            if (got - want).abs() > tol {
                out.push((q, want, got));
            }
        }
        Ok(out)
    }
}

pub type DualFormula = Arc<dyn Fn(&Vector<f64>) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct RegistrySpace {
    pub name: String,
    pub spec: AbsoluteSpec,
    pub expected: Vec<(Property, Expected)>,
    pub witnesses: Vec<Stated>,
    /// Closed-form dual norm, when one is known.
    pub dual_formula: Option<DualFormula>,
    /// Two-dimensional factors for per-block strictness checks.
    pub blocks: Vec<AbsoluteSpec>,
}

impl fmt::Debug for RegistrySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegistrySpace")
            .field("name", &self.name)
            .field("expected", &self.expected)
            .field("witnesses", &self.witnesses.len())
            .finish()
    }
}

impl RegistrySpace {
    fn new(name: impl Into<String>, spec: AbsoluteSpec) -> Self {
        Self { name: name.into(), spec, expected: Vec::new(), witnesses: Vec::new(), dual_formula: None, blocks: Vec::new() }
    }

    pub fn expected(&self, p: Property) -> Option<Expected> {
        self.expected.iter().find(|(q, _)| *q == p).map(|(_, e)| *e)
    }

    pub fn witness(&self, name: &str) -> Option<&Stated> {
        self.witnesses.iter().find(|w| w.name == name)
    }

    /// Re-checks every stated value; the constructors call this.
    pub fn verify(&self) -> Result<()> {
        for w in &self.witnesses {
            if let Some((q, want, got)) = w.mismatches(&self.spec, CLAIM_TOL)?.into_iter().next() {
                return Err(Error::InvalidSpec(format!(
                    "{}: witness {} has {q:?} = {got}, stated {want}",
                    self.name, w.name
                )));
            }
        }
        if let Some(formula) = &self.dual_formula {
            let n = self.spec.dim();
            for i in 0..n {
                let e = Vector::basis(n, i);
                let (a, b) = (formula(&e), self.spec.dual_norm(&e)?);
                if (a - b).abs() > 1e-6 {
                    return Err(Error::InvalidSpec(format!("{}: dual formula gives {a} at e{i}, norm {b}", self.name)));
                }
            }
        }
        Ok(())
    }

    /// The base configuration seeded with this space's witnesses.
    pub fn check_config(&self, base: &CheckConfig) -> CheckConfig {
        let mut cfg = base.clone();
        cfg.seeds.extend(self.witnesses.iter().map(|w| w.x.clone()));
        cfg.seed_pairs.extend(self.witnesses.iter().filter_map(|w| w.f.clone().map(|f| (w.x.clone(), f))));
        cfg
    }

    fn verified(self) -> Result<Self> {
        self.verify()?;
        Ok(self)
    }
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal rational")
}

fn stated(name: &str, x: &[f64], f: Option<&[f64]>, claims: &[(Quantity, f64)]) -> Stated {
    Stated { name: name.into(), x: Vector::new(x.to_vec()), f: f.map(|f| Vector::new(f.to_vec())), claims: claims.to_vec() }
}

/// The two-dimensional factor `max{|r|, |s|, (2/3)(|r| + |s|)}`.
pub fn octagon_factor() -> Result<NormSpec> {
    NormSpec::facet(2, vec![vec![q("1"), q("0")], vec![q("0"), q("1")], vec![q("2/3"), q("2/3")]], true)
}

/// Octagon factor on coordinates 0, 1 plus `|t|`, added.
pub fn example_hnap3d() -> Result<RegistrySpace> {
    let spec = NormSpec::direct_sum(
        vec![
            Block { coords: vec![0, 1], spec: octagon_factor()? },
            Block { coords: vec![2], spec: NormSpec::lp(f64::INFINITY, 1)? },
        ],
        NormSpec::lp(1.0, 2)?,
    )?;
    let mut r = RegistrySpace::new("example-hnap-3d", AbsoluteSpec::certify(spec)?);
    r.expected = vec![(Property::Hnap, Expected::Fails), (Property::Wm, Expected::Holds)];
    r.witnesses.push(stated(
        "pair",
        &[0.75, -0.75, 0.0],
        Some(&[2.0 / 3.0, -2.0 / 3.0, 1.0]),
        &[(Quantity::Norm, 1.0), (Quantity::DualNorm, 1.0), (Quantity::Pairing, 1.0), (Quantity::HnapSum, 1.25)],
    ));
    r.blocks.push(AbsoluteSpec::certify(octagon_factor()?)?);
    r.verified()
}

/// `max{‖(f_i, f_j)‖₂ over coordinate planes, ‖f‖₁/√2}`.
pub fn sm3d_dual_formula(f: &Vector<f64>) -> f64 {
    let c = f.coords();
    let planes = [(0, 1), (0, 2), (1, 2)];
    let disk = planes.iter().map(|&(i, j)| c[i].hypot(c[j])).fold(0.0, f64::max);
    disk.max(c.iter().map(|v| v.abs()).sum::<f64>() / 2f64.sqrt())
}

pub(crate) fn sm3d_spec() -> Result<NormSpec> {
    let h = 1.0 / 2f64.sqrt();
    let mut corners = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for s3 in [1.0, -1.0] {
                corners.push(Vector::new(vec![s1 * h, s2 * h, s3 * h]));
            }
        }
    }
    NormSpec::hull(
        3,
        vec![
            Piece::Disk { axes: (0, 1), radii: (1.0, 1.0) },
            Piece::Disk { axes: (0, 2), radii: (1.0, 1.0) },
            Piece::Disk { axes: (1, 2), radii: (1.0, 1.0) },
            Piece::Points(corners),
        ],
    )
}

/// `z = ((r, √(1 − r²), 0) + (1, 1, −1)/√2) / 2`.
pub fn sm3d_z(r: f64) -> Vector<f64> {
    let h = 1.0 / 2f64.sqrt();
    Vector::new(vec![(r + h) / 2.0, ((1.0 - r * r).sqrt() + h) / 2.0, -h / 2.0])
}

/// Convex hull of the three coordinate-plane unit disks and the cube
/// corners scaled by `1/√2`.
pub fn example_sm3d() -> Result<RegistrySpace> {
    let spec = AbsoluteSpec::certify_with(sm3d_spec()?, 200, 0)?;
    let mut r = RegistrySpace::new("example-sm3d", spec);
    r.expected = vec![(Property::Sm, Expected::Fails), (Property::Umoe, Expected::Fails)];
    for (k, &rad) in SM3D_RADII.iter().enumerate() {
        let z = sm3d_z(rad);
        let plus = z.pos_part().norm2();
        r.witnesses.push(Stated {
            name: format!("z{}", k + 1),
            x: z,
            f: None,
            claims: vec![
                (Quantity::Norm, 1.0),
                (Quantity::NegNorm, 1.0 / (2.0 * 2f64.sqrt())),
                (Quantity::PosNorm, plus),
            ],
        });
    }
    r.dual_formula = Some(Arc::new(sm3d_dual_formula));
    r.verified()
}

/// `α_n = 1 − 2^{−n−1}` for `n = 1..=count`.
pub fn default_alphas(count: usize) -> Vec<f64> {
    (1..=count).map(|n| 1.0 - 2f64.powi(-(n as i32) - 1)).collect()
}

/// `conv{±e₁, ±e₂, (±α, ±1/2)}`.
pub fn renorm_block(alpha: f64) -> Result<NormSpec> {
    let a = <Rational as Scalar>::from_f64(alpha);
    NormSpec::polytope(2, vec![vec![q("1"), q("0")], vec![q("0"), q("1")], vec![a, q("1/2")]], true)
}

/// `N` blocks `B_n` glued by the Euclidean norm; `alphas` defaults to
/// [`default_alphas`].
pub fn truncated_renorm(count: usize, alphas: Option<Vec<f64>>) -> Result<RegistrySpace> {
    if count == 0 {
        return Err(Error::InvalidSpec("truncation needs at least one block".into()));
    }
    let alphas = alphas.unwrap_or_else(|| default_alphas(count));
    let valid = alphas.len() == count
        && alphas.iter().all(|a| *a > 0.0 && *a < 1.0)
        && alphas.windows(2).all(|w| w[0] < w[1]);
    if !valid {
        return Err(Error::InvalidSpec(format!("need {count} strictly increasing α values in (0, 1)")));
    }
    let blocks = alphas.iter().map(|a| renorm_block(*a)).collect::<Result<Vec<_>>>()?;
    let parts = blocks.iter().enumerate().map(|(k, s)| Block { coords: vec![2 * k, 2 * k + 1], spec: s.clone() }).collect();
    let spec = NormSpec::direct_sum(parts, NormSpec::lp(2.0, count)?)?;
    let mut r = RegistrySpace::new(format!("truncated-renorm-{count}"), AbsoluteSpec::certify_with(spec, 500, 0)?);
    r.expected = vec![(Property::StrictMono, Expected::Holds), (Property::Wm, Expected::FailsInLimit)];
    for (k, a) in alphas.iter().enumerate() {
        let mut z = vec![0.0; 2 * count];
        z[2 * k] = *a;
        z[2 * k + 1] = -0.5;
        r.witnesses.push(stated(
            &format!("z{}", k + 1),
            &z,
            None,
            &[(Quantity::Norm, 1.0), (Quantity::PosNorm, *a), (Quantity::NegNorm, 0.5)],
        ));
    }
    r.blocks = blocks.into_iter().map(AbsoluteSpec::certify).collect::<Result<_>>()?;
    r.verified()
}

/// Symmetrized polytope ball through `points`; every `e_i` is added.
pub fn absolute_polytope(dim: usize, points: &[Vec<Rational>]) -> Result<NormSpec> {
    let mut verts: Vec<Vec<Rational>> = (0..dim).map(|i| Vector::<Rational>::basis(dim, i).into_coords()).collect();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        let abs: Vec<Rational> = p.iter().map(<Rational as num_traits::Signed>::abs).collect();
        if !verts.contains(&abs) {
            verts.push(abs);
        }
    }
    NormSpec::polytope(dim, verts, true)
}

/// Seeded random absolute polytope norm with vertices in `[0.05, 0.95]^dim`
/// (in steps of 1/100) and the basis vectors.
pub fn random_absolute_polytope(dim: usize, seed: u64) -> Result<RegistrySpace> {
    if !(2..=4).contains(&dim) {
        return Err(Error::DimensionGuard { dim, max: 4, what: "random polytope generator" });
    }
    let mut g = rng(seed);
    let count = if dim == 4 { g.gen_range(1..=2) } else { g.gen_range(1..=4) };
    let points: Vec<Vec<Rational>> = (0..count)
        .map(|_| (0..dim).map(|_| Rational::new(g.gen_range(5..=95).into(), 100.into())).collect())
        .collect();
    let spec = AbsoluteSpec::certify(absolute_polytope(dim, &points)?)?;
    let name = if dim == 2 { format!("random-absolute-2d-{seed}") } else { format!("random-absolute-polytope-{dim}-{seed}") };
    let mut r = RegistrySpace::new(name, spec);
    r.expected = if dim == 2 {
        vec![(Property::Hnap, Expected::Holds), (Property::Sm, Expected::Holds)]
    } else {
        vec![(Property::Wm, Expected::Holds)]
    };
    r.verified()
}

pub fn random_absolute_2d(seed: u64) -> Result<RegistrySpace> {
    random_absolute_polytope(2, seed)
}

fn exponent_label(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

pub fn lp_space(p: f64, n: usize) -> Result<RegistrySpace> {
    let spec = AbsoluteSpec::certify(NormSpec::lp(p, n)?)?;
    let mut r = RegistrySpace::new(format!("lp-{}-{n}", exponent_label(p)), spec);
    r.expected = match Exponent::new(p)? {
        Exponent::Infinity if n >= 2 => vec![
            (Property::Hnap, Expected::Holds),
            (Property::Sm, Expected::Holds),
            (Property::Um, Expected::Fails),
            (Property::Umoe, Expected::Fails),
        ],
        _ => vec![
            (Property::Hnap, Expected::Holds),
            (Property::Um, Expected::Holds),
            (Property::Umoe, Expected::Holds),
            (Property::Sm, Expected::Holds),
            (Property::Wm, Expected::Holds),
        ],
    };
    if p.is_infinite() && n == 2 {
        r.witnesses.push(stated("corner", &[1.0, -1.0], None, &[(Quantity::Norm, 1.0), (Quantity::PosNorm, 1.0), (Quantity::NegNorm, 1.0)]));
    }
    r.verified()
}

/// Resolves a registry name.
pub fn lookup(name: &str) -> Result<RegistrySpace> {
    let unknown = || Error::InvalidSpec(format!("unknown registry space {name:?}"));
    match name {
        "example-hnap-3d" => return example_hnap3d(),
        "example-sm3d" => return example_sm3d(),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("truncated-renorm-") {
        return truncated_renorm(rest.parse().map_err(|_| unknown())?, None);
    }
    if let Some(rest) = name.strip_prefix("random-absolute-2d-") {
        return random_absolute_2d(rest.parse().map_err(|_| unknown())?);
    }
    if let Some(rest) = name.strip_prefix("random-absolute-polytope-") {
        let (d, s) = rest.split_once('-').ok_or_else(unknown)?;
        return random_absolute_polytope(d.parse().map_err(|_| unknown())?, s.parse().map_err(|_| unknown())?);
    }
    if let Some(rest) = name.strip_prefix("lp-") {
        let (p, n) = rest.rsplit_once('-').ok_or_else(unknown)?;
        let p = if p == "inf" { f64::INFINITY } else { p.parse().map_err(|_| unknown())? };
        return lp_space(p, n.parse().map_err(|_| unknown())?);
    }
    Err(unknown())
}

/// The regression set.
pub fn standard_names() -> Vec<String> {
    let mut names: Vec<String> = ["example-hnap-3d", "example-sm3d"].iter().map(|s| s.to_string()).collect();
    names.push(format!("truncated-renorm-{DEFAULT_TRUNCATION}"));
    names.extend(["lp-1-2", "lp-1-3", "lp-2-2", "lp-2-3", "lp-inf-2", "lp-inf-3"].iter().map(|s| s.to_string()));
    names.extend((0..3).map(|s| format!("random-absolute-2d-{s}")));
    names.push("random-absolute-polytope-3-0".into());
    names
}

pub fn standard() -> Result<Vec<RegistrySpace>> {
    standard_names().iter().map(|n| lookup(n)).collect()
}
