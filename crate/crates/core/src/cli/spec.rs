//! Problem description files (TOML) and their translation into the exact
//! domain types.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::exact_numbers::{ComplexScalar, Interval, NumberField, QPoly, Rational, Rect};
use crate::flats_and_varieties::{
    BaseSetDescriptor, Coordinate, CurveBase, Flat, GraphPiece, GraphPoly, ParametricBranch, Piece, VarietyInput,
};
use crate::flow_engine::{FlowComponent, FlowDescription, Provenance};
use crate::lattice_algebra::{realify, FieldMarker, KVector, Lattice, Subspace};
use crate::numeric_verifier::SampleConfig;

use super::expr::{
    integer_monomials, parse, parse_scalar, univariate_coeffs, univariate_monomials,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub lattice: LatticeSpec,
    pub variety: VarietySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<PredictedSpec>,
    #[serde(default)]
    pub verify: SampleConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// Monic polynomial in `x` with rational coefficients.
    #[serde(default = "default_min_poly")]
    pub min_poly: String,
    /// Real isolating interval `[lo, hi]` for the chosen root.
    #[serde(default = "default_root")]
    pub root: [String; 2],
    /// Imaginary part of the isolating rectangle; a field with a non-real
    /// root is rejected by the lattice algebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_im: Option<[String; 2]>,
    pub mode: FieldMarker,
}

fn default_min_poly() -> String {
    "x".into()
}

fn default_root() -> [String; 2] {
    ["-1".into(), "1".into()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// Number of (real or complex) coordinates.
    pub ambient_dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub declared_dim: usize,
    pub pieces: Vec<PieceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordSpec {
    Expr(String),
    Ratio { num: String, den: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PieceSpec {
    /// `t ↦ (coords(t))` for `t` on the listed rays towards infinity.
    Branch { coords: Vec<CoordSpec>, rays: Vec<String> },
    /// `point + span(directions)`, a ℂ-span in complex mode.
    Affine { point: Vec<String>, directions: Vec<Vec<String>> },
    /// Image of a polynomial map in `vars`.
    Graph { vars: Vec<String>, coords: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictedSpec {
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub base: BaseSpec,
    /// Real spanning vectors of `V` (realified in complex mode).
    pub v: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BaseSpec {
    Points { points: Vec<Vec<String>> },
    /// `point + real span(directions)`.
    Affine { point: Vec<String>, directions: Vec<Vec<String>> },
    /// Curve in the parameter `t` over real `ranges`, plus a real thickening.
    Curve { coords: Vec<CoordSpec>, ranges: Vec<[f64; 2]>, thickening: Vec<Vec<String>> },
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("{at}: {msg}")]
    Invalid { at: String, msg: String },
}

fn invalid(at: impl Into<String>, msg: impl std::fmt::Display) -> SpecError {
    SpecError::Invalid { at: at.into(), msg: msg.to_string() }
}

fn rational(s: &str, at: &str) -> Result<Rational, SpecError> {
    let k = NumberField::rationals();
    parse_scalar(s, &k)
        .ok()
        .and_then(|c| c.re.as_rational().filter(|_| c.is_real()))
        .ok_or_else(|| invalid(at, format!("'{s}' is not a rational number")))
}

/// The problem after parsing and validation.
pub struct Problem {
    pub spec: ProblemSpec,
    pub field: Arc<NumberField>,
    pub lattice: Lattice,
    pub variety: VarietyInput,
    pub predicted: Option<FlowDescription>,
}

impl ProblemSpec {
    pub fn from_toml(src: &str) -> Result<Self, SpecError> {
        Ok(toml::from_str(src)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn build(self) -> Result<Problem, SpecError> {
        let field = self.build_field()?;
        let marker = self.field.mode;
        let n = self.lattice.ambient_dim;
        let ctx = Ctx { field: &field, marker, n };
        let rows = self
            .lattice
            .basis
            .iter()
            .enumerate()
            .map(|(i, r)| ctx.vector(r, &format!("lattice.basis[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let lattice = Lattice::new(&field, n, marker, rows).map_err(|e| invalid("lattice", e))?;

        let pieces = self
            .variety
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| ctx.piece(p, &format!("variety.pieces[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let variety = VarietyInput::new(&field, n, marker, self.variety.declared_dim, pieces)
            .map_err(|e| invalid("variety", e))?;

        let predicted = match &self.predicted {
            None => None,
            Some(p) => {
                let comps = p
                    .components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| ctx.component(c, &lattice, &format!("predicted.components[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let flow = FlowDescription::assemble(comps, &lattice, Provenance::UserSuppliedPredicted, variety.declared_dim())
                    .map_err(|e| invalid("predicted", e))?;
                Some(flow)
            }
        };
        self.verify.validate().map_err(|e| invalid("verify", e))?;
        Ok(Problem { spec: self, field, lattice, variety, predicted })
    }

    fn build_field(&self) -> Result<Arc<NumberField>, SpecError> {
        let q = NumberField::rationals();
        let e = parse(&self.field.min_poly, &q, &["x"]).map_err(|e| invalid("field.min_poly", e))?;
        let coeffs = univariate_coeffs(&e, &q)
            .and_then(|cs| cs.iter().map(|c| c.re.as_rational().filter(|_| c.is_real())).collect::<Option<Vec<_>>>())
            .ok_or_else(|| invalid("field.min_poly", "expected a polynomial in x with rational coefficients"))?;
        let re = Interval::new(rational(&self.field.root[0], "field.root")?, rational(&self.field.root[1], "field.root")?);
        let im = match &self.field.root_im {
            None => Interval::zero(),
            Some([a, b]) => Interval::new(rational(a, "field.root_im")?, rational(b, "field.root_im")?),
        };
        let is_complex = !im.contains_zero();
        NumberField::new(QPoly::new(coeffs), Rect { re, im }, is_complex).map_err(|e| invalid("field", e))
    }
}

struct Ctx<'a> {
    field: &'a Arc<NumberField>,
    marker: FieldMarker,
    n: usize,
}

impl Ctx<'_> {
    fn scalar(&self, s: &str, at: &str) -> Result<ComplexScalar, SpecError> {
        parse_scalar(s, self.field).map_err(|e| invalid(at, e))
    }

    fn vector(&self, row: &[String], at: &str) -> Result<KVector, SpecError> {
        if row.len() != self.n {
            return Err(invalid(at, format!("expected {} entries, found {}", self.n, row.len())));
        }
        let c = row.iter().map(|s| self.scalar(s, at)).collect::<Result<Vec<_>, _>>()?;
        realify(&c, self.marker).map_err(|e| invalid(at, e))
    }

    fn vectors(&self, rows: &[Vec<String>], at: &str) -> Result<Vec<KVector>, SpecError> {
        rows.iter().enumerate().map(|(i, r)| self.vector(r, &format!("{at}[{i}]"))).collect()
    }

    fn coordinate(&self, c: &CoordSpec, at: &str) -> Result<Coordinate, SpecError> {
        let p = |s: &str| parse(s, self.field, &["t"]).map_err(|e| invalid(at, e));
        match c {
            CoordSpec::Expr(s) => {
                let e = p(s)?;
                Ok(match univariate_coeffs(&e, self.field) {
                    Some(cs) => Coordinate::polynomial(cs, self.field),
                    None => Coordinate::monomials(univariate_monomials(&e)),
                })
            }
            CoordSpec::Ratio { num, den } => {
                let poly = |s: &str| {
                    univariate_coeffs(&p(s)?, self.field)
                        .ok_or_else(|| invalid(at, "num and den must be polynomials in t"))
                };
                Coordinate::rational(poly(num)?, poly(den)?).map_err(|e| invalid(at, e))
            }
        }
    }

    fn coordinates(&self, cs: &[CoordSpec], at: &str) -> Result<Vec<Coordinate>, SpecError> {
        if cs.len() != self.n {
            return Err(invalid(at, format!("expected {} coordinates, found {}", self.n, cs.len())));
        }
        cs.iter().enumerate().map(|(i, c)| self.coordinate(c, &format!("{at}.coords[{i}]"))).collect()
    }

    fn piece(&self, p: &PieceSpec, at: &str) -> Result<Piece, SpecError> {
        match p {
            PieceSpec::Branch { coords, rays } => {
                let coords = self.coordinates(coords, at)?;
                let rays = rays.iter().map(|r| self.scalar(r, at)).collect::<Result<Vec<_>, _>>()?;
                ParametricBranch::new(coords, rays, self.marker).map(Piece::Branch).map_err(|e| invalid(at, e))
            }
            PieceSpec::Affine { point, directions } => {
                let base = self.vector(point, at)?;
                let dirs = self.vectors(directions, &format!("{at}.directions"))?;
                let span = Subspace::span(self.field, self.marker.real_dim(self.n), self.marker, &dirs);
                Ok(Piece::Affine(Flat::new(base, span)))
            }
            PieceSpec::Graph { vars, coords } => {
                if coords.len() != self.n {
                    return Err(invalid(at, format!("expected {} coordinates", self.n)));
                }
                let names: Vec<&str> = vars.iter().map(String::as_str).collect();
                let polys = coords
                    .iter()
                    .map(|s| {
                        let e = parse(s, self.field, &names).map_err(|e| invalid(at, e))?;
                        integer_monomials(&e)
                            .map(|terms| GraphPoly { terms })
                            .ok_or_else(|| invalid(at, "graph coordinates must be polynomials"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Piece::Graph(GraphPiece { vars: vars.clone(), coords: polys }))
            }
        }
    }

    fn real_span(&self, rows: &[Vec<String>], at: &str) -> Result<Subspace, SpecError> {
        let vs = self.vectors(rows, at)?;
        Ok(Subspace::real_span(self.field, self.marker.real_dim(self.n), self.marker, &vs))
    }

    fn component(&self, c: &ComponentSpec, lattice: &Lattice, at: &str) -> Result<FlowComponent, SpecError> {
        let base = match &c.base {
            BaseSpec::Points { points } => BaseSetDescriptor::Points(self.vectors(points, &format!("{at}.base"))?),
            BaseSpec::Affine { point, directions } => BaseSetDescriptor::Affine(Flat::new(
                self.vector(point, &format!("{at}.base.point"))?,
                self.real_span(directions, &format!("{at}.base.directions"))?,
            )),
            BaseSpec::Curve { coords, ranges, thickening } => {
                let coords = self.coordinates(coords, &format!("{at}.base"))?;
                let one = ComplexScalar::one(self.field);
                let curve = ParametricBranch::new(coords, vec![one], self.marker).map_err(|e| invalid(at, e))?;
                if ranges.iter().any(|[a, b]| a.partial_cmp(b) != Some(std::cmp::Ordering::Less)) {
                    return Err(invalid(at, "curve ranges need lo < hi"));
                }
                BaseSetDescriptor::Curve(CurveBase {
                    curve,
                    thickening: self.real_span(thickening, &format!("{at}.base.thickening"))?,
                    ranges: ranges.iter().map(|[a, b]| (*a, *b)).collect(),
                })
            }
        };
        let v = self.real_span(&c.v, &format!("{at}.v"))?;
        FlowComponent::new(base, v, lattice).map_err(|e| invalid(at, e))
    }
}
