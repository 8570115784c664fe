//! Distance from a reduced point to `π(C) + π(W)`.

use nalgebra::{DMatrix, DVector};

use crate::flats_and_varieties::{BaseSetDescriptor, CurveBase};
use crate::flow_engine::{FlowComponent, FlowDescription};
use crate::lattice_algebra::{complement_basis, orthonormal_complement, Lattice};

/// Precomputed evaluator for one component.
///
/// With `S = W` plus the directions of `C`, the distance to `C + W + Λ` is
/// the distance, in `S^⊥`, from the projected point to the projected base
/// shifted by the projection of `Λ`. Only a complement of `Λ ∩ W` survives
/// the projection.
pub struct ComponentDistance {
    proj: DMatrix<f64>,
    lattice: DMatrix<f64>,
    pinv: DMatrix<f64>,
    search: bool,
    base: Base,
}

enum Base {
    Points(Vec<DVector<f64>>),
    Curve { curve: CurveBase, params: Vec<f64>, nodes: Vec<DVector<f64>> },
}

fn columns(rows: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, rows.len(), |i, j| rows[j][i])
}

impl ComponentDistance {
    pub fn new(c: &FlowComponent, lattice: &Lattice, curve_nodes: usize) -> Self {
        let n = lattice.ambient_dim();
        let mut killed = c.w().basis_f64();
        match &c.base {
            BaseSetDescriptor::Affine(f) => killed.extend(f.directions().basis_f64()),
            BaseSetDescriptor::Curve(cb) => killed.extend(cb.thickening.basis_f64()),
            BaseSetDescriptor::Points(_) => {}
        }
        let s = columns(&killed, n);
        let proj = orthonormal_complement(&s, n).transpose();

        let comp = complement_basis(&c.torus.lattice_points, lattice.rank());
        let lb = lattice.basis_f64();
        let vecs: Vec<Vec<f64>> = comp
            .iter()
            .map(|m| {
                let mut v = vec![0.0; n];
                for (mi, b) in m.iter().zip(&lb) {
                    let mf: f64 = mi.to_string().parse().unwrap_or(0.0);
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += mf * bi;
                    }
                }
                v
            })
            .collect();
        let lattice_m = &proj * columns(&vecs, n);
        let pinv = if lattice_m.ncols() == 0 || lattice_m.nrows() == 0 {
            DMatrix::zeros(lattice_m.ncols(), lattice_m.nrows())
        } else {
            lattice_m.clone().pseudo_inverse(1e-10).expect("nonnegative epsilon")
        };
        let search = lattice_m.ncols() <= 4;

        let base = match &c.base {
            BaseSetDescriptor::Affine(f) => Base::Points(vec![&proj * DVector::from_vec(f.base_f64())]),
            BaseSetDescriptor::Points(ps) => Base::Points(
                ps.iter().map(|p| &proj * DVector::from_vec(crate::lattice_algebra::vec_to_f64(p))).collect(),
            ),
            BaseSetDescriptor::Curve(cb) => {
                let params: Vec<f64> =
                    cb.nodes(curve_nodes).into_iter().filter(|m| cb.point(*m).iter().all(|v| v.is_finite())).collect();
                let nodes = params.iter().map(|&m| &proj * DVector::from_vec(cb.point(m))).collect();
                Base::Curve { curve: cb.clone(), params, nodes }
            }
        };
        ComponentDistance { proj, lattice: lattice_m, pinv, search, base }
    }

    /// Distance from `y` (already projected) to the projected lattice.
    fn to_lattice(&self, y: &DVector<f64>) -> f64 {
        let r = self.lattice.ncols();
        if r == 0 {
            return y.norm();
        }
        let a = &self.pinv * y;
        let centre: Vec<f64> = a.iter().map(|v| v.round()).collect();
        let mut best = f64::INFINITY;
        let radius: i64 = if self.search { 1 } else { 0 };
        let width = (2 * radius + 1) as usize;
        let total = width.pow(r as u32);
        for code in 0..total {
            let mut c = code;
            let m = DVector::from_fn(r, |i, _| {
                let d = (c % width) as i64 - radius;
                c /= width;
                centre[i] + d as f64
            });
            best = best.min((y - &self.lattice * m).norm());
        }
        best
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        let px = &self.proj * DVector::from_column_slice(x);
        match &self.base {
            Base::Points(ps) => ps.iter().map(|p| self.to_lattice(&(&px - p))).fold(f64::INFINITY, f64::min),
            Base::Curve { curve, params, nodes } => {
                if nodes.is_empty() {
                    return f64::INFINITY;
                }
                let ds: Vec<f64> = nodes.iter().map(|p| self.to_lattice(&(&px - p))).collect();
                let mut order: Vec<usize> = (0..ds.len()).collect();
                order.sort_by(|&a, &b| ds[a].total_cmp(&ds[b]));
                let mut best = ds[order[0]];
                let f = |m: f64| {
                    let p = curve.point(m);
                    if p.iter().all(|v| v.is_finite()) {
                        self.to_lattice(&(&px - &self.proj * DVector::from_vec(p)))
                    } else {
                        f64::INFINITY
                    }
                };
                for &j in order.iter().take(4) {
                    let lo = params[j.saturating_sub(1)];
                    let hi = params[(j + 1).min(params.len() - 1)];
                    best = best.min(golden_min(&f, lo, hi, 60));
                }
                best
            }
        }
    }
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.min(fd);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
    }
    best
}

/// Evaluators for every component of a prediction.
pub struct PredictedSet {
    pub components: Vec<ComponentDistance>,
}

impl PredictedSet {
    pub fn new(flow: &FlowDescription, curve_nodes: usize) -> Self {
        PredictedSet {
            components: flow.components.iter().map(|c| ComponentDistance::new(c, &flow.lattice, curve_nodes)).collect(),
        }
    }

    /// Distance to the union; `∞` for an empty prediction.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.components.iter().map(|c| c.distance(x)).fold(f64::INFINITY, f64::min)
    }
}
