use std::cmp::Ordering;

use serde::Serialize;

use crate::flats_and_varieties::{BaseSetDescriptor, CurveBase, Flat};
use crate::lattice_algebra::{canonical_cmp_vec, torus_closure, ClosedSubgroupDescriptor, Lattice, Subspace};

use super::FlowError;

/// One piece `π(C) + 𝕋` of the flow set, with `𝕋 = π(W)` the closure of `π(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowComponent {
    pub base: BaseSetDescriptor,
    pub v: Subspace,
    pub torus: ClosedSubgroupDescriptor,
    /// Real dimension of `C`.
    pub dim_c: usize,
}

impl FlowComponent {
    /// Builds the torus for `v` and moves `base` into `W^⊥`, which leaves
    /// `C + W` unchanged. Curve bases are kept as given.
    pub fn new(base: BaseSetDescriptor, v: Subspace, lattice: &Lattice) -> Result<Self, FlowError> {
        if !lattice.span().contains(&v) {
            return Err(FlowError::Invariant("V is not contained in the span of the lattice".into()));
        }
        let torus = torus_closure(&v, lattice)?;
        let base = project_base(base, &torus.w);
        let dim_c = base.real_dim();
        Ok(FlowComponent { base, v, torus, dim_c })
    }

    pub fn w(&self) -> &Subspace {
        &self.torus.w
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.torus
            .w
            .canonical_cmp(&other.torus.w)
            .then_with(|| self.base.canonical_cmp(&other.base))
            .then_with(|| self.v.canonical_cmp(&other.v))
    }

    /// `π(C) + π(W)` is contained in `other`'s, judged on exact bases only.
    pub fn is_covered_by(&self, other: &Self) -> bool {
        if !other.w().contains(self.w()) {
            return false;
        }
        let (Some(mine), Some(theirs)) = (base_flats(&self.base, self.w(), false), base_flats(&other.base, other.w(), true)) else {
            return false;
        };
        mine.iter().all(|f| theirs.iter().any(|g| f.is_subset_of(g)))
    }

    pub fn summary(&self) -> ComponentSummary {
        ComponentSummary {
            base_kind: match &self.base {
                BaseSetDescriptor::Affine(_) => "affine",
                BaseSetDescriptor::Points(_) => "points",
                BaseSetDescriptor::Curve(_) => "curve",
            },
            dim_c: self.dim_c,
            dim_v: self.v.dim(),
            dim_w: self.torus.w.dim(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentSummary {
    pub base_kind: &'static str,
    pub dim_c: usize,
    pub dim_v: usize,
    pub dim_w: usize,
}

/// `C`, or `C + W` when `widen`, as a finite union of flats; `None` for curves.
fn base_flats(base: &BaseSetDescriptor, w: &Subspace, widen: bool) -> Option<Vec<Flat>> {
    let grow = |d: &Subspace| if widen { d.sum(w) } else { d.clone() };
    match base {
        BaseSetDescriptor::Affine(f) => Some(vec![Flat::new(f.base_point().clone(), grow(f.directions()))]),
        BaseSetDescriptor::Points(ps) => {
            let zero = Subspace::zero(w.field(), w.ambient(), w.marker());
            Some(ps.iter().map(|p| Flat::new(p.clone(), grow(&zero))).collect())
        }
        BaseSetDescriptor::Curve(_) => None,
    }
}

fn project_base(base: BaseSetDescriptor, w: &Subspace) -> BaseSetDescriptor {
    match base {
        BaseSetDescriptor::Affine(f) => {
            let dirs: Vec<_> = f.directions().basis().iter().map(|d| w.reject(d)).collect();
            let dirs = Subspace::real_span(f.field(), f.ambient(), f.marker(), &dirs);
            BaseSetDescriptor::Affine(Flat::new(w.reject(f.base_point()), dirs))
        }
        BaseSetDescriptor::Points(ps) => {
            let mut out: Vec<_> = ps.iter().map(|p| w.reject(p)).collect();
            out.sort_by(|a, b| canonical_cmp_vec(a, b));
            out.dedup();
            BaseSetDescriptor::Points(out)
        }
        c @ BaseSetDescriptor::Curve(CurveBase { .. }) => c,
    }
}
