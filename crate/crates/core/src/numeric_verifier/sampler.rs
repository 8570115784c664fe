//! Deterministic far-point sampling of every piece type.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::flats_and_varieties::{GraphPiece, Piece, VarietyInput, C64};
use crate::lattice_algebra::{FieldMarker, LatticeReducer};

use super::config::SampleConfig;
use super::VerifyError;

const CHUNK: usize = 256;
const ATTEMPT_CAP: usize = 1_000_000;

/// One reduced far point.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub shell: usize,
    pub piece: usize,
    pub params: Vec<f64>,
    pub raw: Vec<f64>,
    pub reduced: Vec<f64>,
    /// Fractional Λ-coordinates.
    pub frac: Vec<f64>,
    /// Coordinates in `L^⊥`.
    pub transverse: Vec<f64>,
    pub residual: f64,
}

impl Sample {
    pub fn in_window(&self, window: f64) -> bool {
        self.transverse.iter().all(|t| t.abs() <= window)
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..=hi.ln()).exp()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Shared per-run data.
struct Ctx<'a> {
    x: &'a VarietyInput,
    reducer: &'a LatticeReducer,
    window: f64,
}

impl Ctx<'_> {
    fn target<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.reducer.transverse_dim()).map(|_| rng.random_range(-self.window..=self.window)).collect()
    }

    /// One attempt; `None` on rejection.
    fn attempt<R: Rng>(&self, rng: &mut R, radius: f64, scale: f64) -> Option<(usize, Vec<f64>, Vec<f64>)> {
        let k = rng.random_range(0..self.x.pieces().len());
        let marker = self.x.marker();
        let (params, point) = match &self.x.pieces()[k] {
            Piece::Branch(b) => {
                let ray = rng.random_range(0..b.rays().len());
                let s = log_uniform(rng, scale, scale * 1e3);
                (vec![s, ray as f64], b.eval_on_ray(s, ray, marker))
            }
            Piece::Affine(flat) => {
                let dirs = flat.directions().basis_f64();
                let base = flat.base_f64();
                let d = dirs.len();
                let p = DMatrix::from_fn(base.len(), d, |i, j| dirs[j][i]);
                let mut u = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
                let un = u.norm();
                if un > 0.0 {
                    u *= log_uniform(rng, scale, scale * 10.0) / un;
                }
                let mut x = DVector::from_column_slice(&base) + &p * &u;
                if self.reducer.transverse_dim() > 0 && d > 0 {
                    let t = self.reducer.transverse_matrix().transpose();
                    let tau = DVector::from_vec(self.target(rng));
                    let tp = &t * &p;
                    let delta = tp.clone().pseudo_inverse(1e-12).ok()? * (tau - &t * &x);
                    u += &delta;
                    x += &p * delta;
                }
                (u.iter().copied().collect(), x.iter().copied().collect())
            }
            Piece::Graph(g) => {
                let vars = self.graph_slice(g, rng, scale)?;
                let z = g.eval(&vars);
                let params = match marker {
                    FieldMarker::Real => vars.iter().map(|v| v.re).collect(),
                    FieldMarker::Complex => vars.iter().flat_map(|v| [v.re, v.im]).collect(),
                };
                (params, crate::flats_and_varieties::realify_f64(&z, marker))
            }
        };
        (point.iter().all(|v| v.is_finite()) && norm(&point) >= radius).then_some((k, params, point))
    }

    /// Gauss–Newton from a random start onto the slice with prescribed
    /// transverse coordinates.
    fn graph_slice<R: Rng>(&self, g: &GraphPiece, rng: &mut R, scale: f64) -> Option<Vec<C64>> {
        let marker = self.x.marker();
        let complex = marker == FieldMarker::Complex;
        let mut vars: Vec<C64> = (0..g.vars.len())
            .map(|_| {
                let m = log_uniform(rng, 1.0, scale * 10.0);
                if complex {
                    C64::from_polar(m, rng.random_range(0.0..std::f64::consts::TAU))
                } else if rng.random::<bool>() {
                    C64::new(m, 0.0)
                } else {
                    C64::new(-m, 0.0)
                }
            })
            .collect();
        let k = self.reducer.transverse_dim();
        if k == 0 {
            return Some(vars);
        }
        let tau = DVector::from_vec(self.target(rng));
        let t = self.reducer.transverse_matrix().transpose();
        let f = marker.real_factor();
        let unknowns = g.vars.len() * f;
        for _ in 0..80 {
            let z = crate::flats_and_varieties::realify_f64(&g.eval(&vars), marker);
            let r = &t * DVector::from_vec(z) - &tau;
            if r.norm() <= 1e-10 * (1.0 + tau.norm()) {
                return Some(vars);
            }
            let jc = g.jacobian(&vars);
            let n = jc.len() * f;
            let jg = DMatrix::from_fn(n, unknowns, |row, col| {
                let (out, part) = (row / f, row % f);
                let (var, vpart) = (col / f, col % f);
                let d = jc[out][var];
                match (complex, part, vpart) {
                    (false, _, _) => d.re,
                    (true, 0, 0) => d.re,
                    (true, 0, _) => -d.im,
                    (true, _, 0) => d.im,
                    (true, _, _) => d.re,
                }
            });
            let jr = &t * jg;
            let step = jr.pseudo_inverse(1e-14).ok()? * r;
            if !step.iter().all(|v| v.is_finite()) {
                return None;
            }
            for (j, v) in vars.iter_mut().enumerate() {
                if complex {
                    *v -= C64::new(step[2 * j], step[2 * j + 1]);
                } else {
                    *v -= C64::new(step[j], 0.0);
                }
            }
        }
        None
    }
}

fn stream_rng(seed: u64, shell: usize, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((shell as u64) << 32) | chunk as u64);
    rng
}

/// `cfg.count` points per shell with `‖x‖ ≥ R_k`, reduced modulo Λ.
///
/// Branch parameters are log-uniform in `[R, 10³R]`; affine and graph pieces
/// are steered onto random transverse targets inside the window. A shell
/// that needs more than 10⁶ attempts fails with `ShellStarved`.
pub fn sample_far_points(
    x: &VarietyInput,
    reducer: &LatticeReducer,
    cfg: &SampleConfig,
) -> Result<Vec<Sample>, VerifyError> {
    if x.pieces().is_empty() {
        return Err(VerifyError::ShellStarved { shell: 0, radius: cfg.radius });
    }
    let ctx = Ctx { x, reducer, window: cfg.window };
    let chunks = cfg.count.div_ceil(CHUNK);
    let cap = ATTEMPT_CAP.div_ceil(chunks);
    let mut out = Vec::with_capacity(cfg.count * cfg.shells);
    for (shell, &radius) in cfg.radius_schedule().iter().enumerate() {
        let parts: Vec<Result<Vec<Sample>, VerifyError>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let want = CHUNK.min(cfg.count - c * CHUNK);
                let mut rng = stream_rng(cfg.seed, shell, c);
                let mut got = Vec::with_capacity(want);
                let mut attempts = 0;
                while got.len() < want {
                    if attempts >= cap {
                        return Err(VerifyError::ShellStarved { shell, radius });
                    }
                    // Widen the parameter scale when a piece grows slowly.
                    let scale = radius * 10f64.powi((attempts * 8 / cap.max(1)) as i32);
                    attempts += 1;
                    if let Some((piece, params, raw)) = ctx.attempt(&mut rng, radius, scale) {
                        let red = reducer.reduce(&raw);
                        got.push(Sample {
                            shell,
                            piece,
                            params,
                            raw,
                            reduced: red.reduced,
                            frac: red.frac,
                            transverse: red.transverse,
                            residual: red.residual,
                        });
                    }
                }
                Ok(got)
            })
            .collect();
        for p in parts {
            out.extend(p?);
        }
    }
    Ok(out)
}
