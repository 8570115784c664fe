//! Assembly of the flow set `Fl(X) = ⋃ π(Cᵢ) + 𝕋ᵢ` from asymptotic flats.

mod component;

use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{variety_asymptotic_flats, AsymptoticsError, ScalarMode};
use crate::flats_and_varieties::{family_linear_span, BaseSetDescriptor, FlatFamily, VarietyInput};
use crate::lattice_algebra::{multiply_by_i, FieldMarker, Lattice, LatticeError};

pub use component::{ComponentSummary, FlowComponent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("symbolically unsupported: {0}")]
    SymbolicUnsupported(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl From<AsymptoticsError> for FlowError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::SymbolicUnsupported(m) => FlowError::SymbolicUnsupported(m),
            AsymptoticsError::Lattice(l) => FlowError::Lattice(l),
        }
    }
}

/// Which structure theorem governs the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanCondition {
    /// Real input.
    RealSetting,
    /// Complex input with `ℝΛ = ℂΛ`.
    ComplexTheoremApplies,
    /// Complex input with `ℝΛ ≠ ℂΛ`; handled by restriction of scalars.
    RealOnly,
}

/// Whether `ℝΛ` is closed under multiplication by `i`.
pub fn check_span_condition(lattice: &Lattice) -> SpanCondition {
    if lattice.marker() == FieldMarker::Real {
        return SpanCondition::RealSetting;
    }
    let span = lattice.span();
    if span.basis().iter().all(|b| span.contains_vector(&multiply_by_i(b))) {
        SpanCondition::ComplexTheoremApplies
    } else {
        SpanCondition::RealOnly
    }
}

impl SpanCondition {
    pub fn scalar_mode(self) -> ScalarMode {
        match self {
            SpanCondition::ComplexTheoremApplies => ScalarMode::Complex,
            _ => ScalarMode::Real,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ComputedSymbolic,
    UserSuppliedPredicted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowDescription {
    pub components: Vec<FlowComponent>,
    pub lattice: Lattice,
    pub span_condition: SpanCondition,
    pub provenance: Provenance,
    /// Dimension of `X` over the ground field.
    pub declared_dim: usize,
}

impl FlowDescription {
    /// Sorts, prunes covered components and checks the output contract.
    pub fn assemble(
        mut components: Vec<FlowComponent>,
        lattice: &Lattice,
        provenance: Provenance,
        declared_dim: usize,
    ) -> Result<Self, FlowError> {
        components.sort_by(|a, b| a.canonical_cmp(b));
        components.dedup();
        let mut keep = vec![true; components.len()];
        for i in 0..components.len() {
            for j in 0..components.len() {
                if i != j && keep[j] && components[i].is_covered_by(&components[j]) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let components = components.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect();
        let flow = FlowDescription {
            components,
            lattice: lattice.clone(),
            span_condition: check_span_condition(lattice),
            provenance,
            declared_dim,
        };
        flow.check_invariants()?;
        Ok(flow)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn check_invariants(&self) -> Result<(), FlowError> {
        let real_dim_x = self.declared_dim * self.lattice.marker().real_factor();
        for (k, c) in self.components.iter().enumerate() {
            if !c.torus.is_compact() {
                return Err(FlowError::Invariant(format!("component {k}: rank(Λ∩W) ≠ dim W")));
            }
            if !c.torus.w.contains(&c.v) {
                return Err(FlowError::Invariant(format!("component {k}: V ⊄ W")));
            }
            if c.dim_c >= real_dim_x {
                return Err(FlowError::Invariant(format!("component {k}: dim C = {} ≥ dim X", c.dim_c)));
            }
        }
        Ok(())
    }
}

/// Finite sets become singletons; point-based translate families split per point.
pub fn group_neat(families: Vec<FlatFamily>) -> Vec<FlatFamily> {
    let mut out = Vec::new();
    for f in families {
        match f {
            FlatFamily::Finite(flats) => out.extend(flats.into_iter().map(|a| FlatFamily::Finite(vec![a]))),
            FlatFamily::Translate { base: BaseSetDescriptor::Points(ps), direction } => {
                out.extend(ps.into_iter().map(|p| FlatFamily::Translate {
                    base: BaseSetDescriptor::Points(vec![p]),
                    direction: direction.clone(),
                }));
            }
            other => out.push(other),
        }
    }
    out
}

fn component_of(family: &FlatFamily, lattice: &Lattice) -> Result<Option<FlowComponent>, FlowError> {
    let Some(v) = family_linear_span(family) else { return Ok(None) };
    let base = match family {
        FlatFamily::Finite(flats) => BaseSetDescriptor::Points(flats.iter().map(|a| a.base_point().clone()).collect()),
        FlatFamily::Translate { base, .. } => base.clone(),
    };
    FlowComponent::new(base, v, lattice).map(Some)
}

/// `Fl(X)` for symbolic input.
pub fn flow_set(x: &VarietyInput, lattice: &Lattice) -> Result<FlowDescription, FlowError> {
    if x.ambient_dim() != lattice.ambient_dim() || x.marker() != lattice.marker() {
        return Err(FlowError::Invariant("variety and lattice live in different spaces".into()));
    }
    let condition = check_span_condition(lattice);
    let l = lattice.span();
    let families = if lattice.is_trivial() {
        Vec::new()
    } else {
        variety_asymptotic_flats(x, l, condition.scalar_mode())?
    };
    let mut components = Vec::new();
    for fam in group_neat(families) {
        if let Some(lin) = family_linear_span(&fam) {
            if !l.contains(&lin) {
                return Err(FlowError::Invariant("flat with linear part outside ℝΛ".into()));
            }
        }
        if let Some(c) = component_of(&fam, lattice)? {
            components.push(c);
        }
    }
    FlowDescription::assemble(components, lattice, Provenance::ComputedSymbolic, x.declared_dim())
}

/// `π(X)` together with `Fl(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub flow: FlowDescription,
    /// `Fl(X) = ∅`, so `π(X)` is closed.
    pub pi_x_closed: bool,
    pub notes: Vec<String>,
}

pub fn closure_description(x: &VarietyInput, lattice: &Lattice) -> Result<ClosureReport, FlowError> {
    let flow = flow_set(x, lattice)?;
    Ok(closure_from_flow(flow))
}

pub fn closure_from_flow(flow: FlowDescription) -> ClosureReport {
    let mut notes = Vec::new();
    let pi_x_closed = flow.is_empty();
    if pi_x_closed {
        notes.push("π(X) closed; Fl = ∅".to_string());
    } else {
        notes.push(format!("closure of π(X) = π(X) ∪ {} component(s)", flow.components.len()));
    }
    if flow.lattice.is_trivial() {
        notes.push("trivial lattice".to_string());
    }
    if flow.span_condition == SpanCondition::RealOnly {
        notes.push("ℝΛ ≠ ℂΛ: complex structure theorem does not apply; computed in the realification".to_string());
    }
    ClosureReport { flow, pi_x_closed, notes }
}
