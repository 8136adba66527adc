//! JSON space files.
//!
//! ```json
//! {
//!   "name": "octagon-plus-line",
//!   "dim": 3,
//!   "asserted_absolute": true,
//!   "spec": {
//!     "type": "direct_sum",
//!     "outer": { "type": "lp", "p": 1 },
//!     "parts": [
//!       { "coords": [0, 1], "spec": { "type": "facet_norm",
//!         "functionals": [[1, 0], [0, 1], ["2/3", "2/3"]] } },
//!       { "coords": [2], "spec": { "type": "lp", "p": "inf" } }
//!     ]
//!   }
//! }
//! ```
//!
//! Numbers may be JSON numbers or strings holding `p/q`, an integer or a
//! decimal; the ℓp exponent also accepts `"inf"`. Coordinate indices are
//! 0-based. Node types: `lp`, `facet_norm`, `polytope_ball`, `hull`,
//! `direct_sum`, `dual`. A hull piece is `{"disk": {"axes": [i, j],
//! "radii": [a, b]}}` or `{"points": [[…], …]}`. Facet and polytope nodes
//! take an optional `sign_closed` that defaults to `asserted_absolute`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::riesz::Vector;
use crate::scalar::{parse_rational, Rational, Scalar};

use super::{Block, Exponent, NormSpec, Piece};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Num(f64),
    Text(String),
}

impl Number {
    fn rational(&self) -> Result<Rational> {
        match self {
            Number::Num(v) if v.is_finite() => Ok(Rational::from_f64(*v)),
            Number::Text(s) => parse_rational(s).ok_or_else(|| bad(format!("not a number: {s:?}"))),
            Number::Num(v) => Err(bad(format!("not a finite number: {v}"))),
        }
    }

    fn float(&self) -> Result<f64> {
        Ok(self.rational()?.to_f64())
    }

    fn exponent(&self) -> Result<Exponent> {
        match self {
            Number::Text(s) if s.eq_ignore_ascii_case("inf") || s == "∞" => Ok(Exponent::Infinity),
            other => Exponent::new(other.float()?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecNode {
    Lp {
        p: Number,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    FacetNorm {
        functionals: Vec<Vec<Number>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sign_closed: Option<bool>,
    },
    PolytopeBall {
        vertices: Vec<Vec<Number>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sign_closed: Option<bool>,
    },
    Hull {
        pieces: Vec<PieceNode>,
    },
    DirectSum {
        parts: Vec<PartNode>,
        outer: Box<SpecNode>,
    },
    Dual {
        inner: Box<SpecNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceNode {
    Disk { axes: [usize; 2], radii: [Number; 2] },
    Points(Vec<Vec<Number>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartNode {
    pub coords: Vec<usize>,
    pub spec: SpecNode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub asserted_absolute: bool,
    pub spec: SpecNode,
}

/// A space read from a file.
#[derive(Clone, Debug)]
pub struct LoadedSpace {
    pub name: String,
    pub spec: NormSpec,
    pub asserted_absolute: bool,
}

fn bad(msg: String) -> Error {
    Error::SpaceFile(msg)
}

pub fn parse_space(text: &str) -> Result<LoadedSpace> {
    let file: SpaceFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let spec = build(&file.spec, file.dim, file.asserted_absolute)?;
    Ok(LoadedSpace { name: file.name, spec, asserted_absolute: file.asserted_absolute })
}

fn rows(list: &[Vec<Number>]) -> Result<Vec<Vec<Rational>>> {
    list.iter().map(|r| r.iter().map(Number::rational).collect()).collect()
}

fn build(node: &SpecNode, dim: usize, absolute: bool) -> Result<NormSpec> {
    match node {
        SpecNode::Lp { p, dim: d } => {
            if d.is_some_and(|d| d != dim) {
                return Err(Error::DimensionMismatch { expected: dim, got: d.unwrap() });
            }
            NormSpec::lp(p.exponent()?.value(), dim)
        }
        SpecNode::FacetNorm { functionals, sign_closed } => {
            NormSpec::facet(dim, rows(functionals)?, sign_closed.unwrap_or(absolute))
        }
        SpecNode::PolytopeBall { vertices, sign_closed } => {
            NormSpec::polytope(dim, rows(vertices)?, sign_closed.unwrap_or(absolute))
        }
        SpecNode::Hull { pieces } => {
            let pieces = pieces
                .iter()
                .map(|p| match p {
                    PieceNode::Disk { axes, radii } => Ok(Piece::Disk {
                        axes: (axes[0], axes[1]),
                        radii: (radii[0].float()?, radii[1].float()?),
                    }),
                    PieceNode::Points(ps) => Ok(Piece::Points(
                        ps.iter()
                            .map(|r| r.iter().map(Number::float).collect::<Result<Vec<_>>>().map(Vector::new))
                            .collect::<Result<_>>()?,
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            NormSpec::hull(dim, pieces)
        }
        SpecNode::DirectSum { parts, outer } => {
            let blocks = parts
                .iter()
                .map(|p| Ok(Block { coords: p.coords.clone(), spec: build(&p.spec, p.coords.len(), absolute)? }))
                .collect::<Result<Vec<_>>>()?;
            let outer = build(outer, parts.len(), absolute)?;
            let spec = NormSpec::direct_sum(blocks, outer)?;
            crate::riesz::check_dims(dim, spec.dim())?;
            Ok(spec)
        }
        SpecNode::Dual { inner } => Ok(NormSpec::dual_of(build(inner, dim, absolute)?)),
    }
}

fn exact_rows(list: &[Vector<Rational>]) -> Vec<Vec<Number>> {
    list.iter().map(|v| v.coords().iter().map(|c| Number::Text(c.to_string())).collect()).collect()
}

fn float_rows(list: &[Vector<f64>]) -> Vec<Vec<Number>> {
    list.iter().map(|v| v.coords().iter().map(|c| Number::Num(*c)).collect()).collect()
}

/// The file node describing `spec`; `parse_space` of the exported file
/// rebuilds an equivalent spec.
pub fn to_node(spec: &NormSpec) -> SpecNode {
    match spec {
        NormSpec::Lp { p, .. } => SpecNode::Lp {
            p: match p {
                Exponent::One => Number::Num(1.0),
                Exponent::Finite(p) => Number::Num(*p),
                Exponent::Infinity => Number::Text("inf".into()),
            },
            dim: None,
        },
        NormSpec::Facet(f) => {
            SpecNode::FacetNorm { functionals: exact_rows(f.functionals()), sign_closed: Some(f.sign_closed()) }
        }
        NormSpec::Polytope(p) => {
            SpecNode::PolytopeBall { vertices: exact_rows(p.vertices()), sign_closed: Some(p.sign_closed()) }
        }
        NormSpec::Hull(h) => SpecNode::Hull {
            pieces: h
                .pieces()
                .iter()
                .map(|p| match p {
                    Piece::Disk { axes, radii } => PieceNode::Disk {
                        axes: [axes.0, axes.1],
                        radii: [Number::Num(radii.0), Number::Num(radii.1)],
                    },
                    Piece::Points(ps) => PieceNode::Points(float_rows(ps)),
                })
                .collect(),
        },
        NormSpec::Sum(s) => SpecNode::DirectSum {
            parts: s.parts().iter().map(|b| PartNode { coords: b.coords.clone(), spec: to_node(&b.spec) }).collect(),
            outer: Box::new(to_node(s.outer())),
        },
        NormSpec::Dual(inner) => SpecNode::Dual { inner: Box::new(to_node(inner)) },
    }
}

pub fn export_space(name: &str, spec: &NormSpec, asserted_absolute: bool) -> String {
    let file = SpaceFile { name: name.to_string(), dim: spec.dim(), asserted_absolute, spec: to_node(spec) };
    serde_json::to_string_pretty(&file).expect("space files always serialize")
}
