//! Containment, coverage and shell-stability metrics on reduced samples.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::lattice_algebra::LatticeReducer;

use super::config::SampleConfig;
use super::distance::PredictedSet;
use super::sampler::Sample;

/// Grid of `eps`-cells over `[0,1)^r × [-M, M]^k` in (fractional, transverse)
/// coordinates.
pub struct CellGrid {
    eps: f64,
    window: f64,
    rank: usize,
    transverse: usize,
    per_frac: usize,
    per_trans: usize,
}

pub type Cell = Vec<u32>;

impl CellGrid {
    pub fn new(reducer: &LatticeReducer, eps: f64, window: f64) -> Self {
        CellGrid {
            eps,
            window,
            rank: reducer.rank(),
            transverse: reducer.transverse_dim(),
            per_frac: (1.0 / eps).ceil() as usize,
            per_trans: ((2.0 * window / eps).ceil() as usize).max(1),
        }
    }

    /// Total number of cells, saturating.
    pub fn len(&self) -> usize {
        let mut n: usize = 1;
        for _ in 0..self.rank {
            n = n.saturating_mul(self.per_frac);
        }
        for _ in 0..self.transverse {
            n = n.saturating_mul(self.per_trans);
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell of a sample, or `None` outside the window.
    pub fn cell(&self, s: &Sample) -> Option<Cell> {
        let mut out = Vec::with_capacity(self.rank + self.transverse);
        for &f in &s.frac {
            out.push(((f / self.eps) as usize).min(self.per_frac - 1) as u32);
        }
        for &t in &s.transverse {
            if t.abs() > self.window {
                return None;
            }
            out.push((((t + self.window) / self.eps) as usize).min(self.per_trans - 1) as u32);
        }
        Some(out)
    }

    /// Cell centre as (fractional, transverse) coordinates.
    pub fn centre(&self, c: &[u32]) -> (Vec<f64>, Vec<f64>) {
        let f = c[..self.rank].iter().map(|&i| (f64::from(i) + 0.5) * self.eps).collect();
        let t = c[self.rank..].iter().map(|&i| -self.window + (f64::from(i) + 0.5) * self.eps).collect();
        (f, t)
    }

    fn decode(&self, mut idx: usize) -> Cell {
        let mut out = Vec::with_capacity(self.rank + self.transverse);
        for d in 0..self.rank + self.transverse {
            let base = if d < self.rank { self.per_frac } else { self.per_trans };
            out.push((idx % base) as u32);
            idx /= base;
        }
        out
    }
}

/// Worst sample seen by the containment check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstSample {
    pub index: usize,
    pub shell: usize,
    pub piece: usize,
    pub params: Vec<f64>,
    pub reduced: Vec<f64>,
    /// `None` when the prediction is empty.
    pub distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    /// Distance per sample; `∞` outside the window or for an empty prediction.
    pub distances: Vec<f64>,
    /// Samples inside the transverse window.
    pub windowed: usize,
    /// Max over windowed samples; `∞` if some windowed sample is unexplained.
    pub max_distance: f64,
    pub worst: Option<WorstSample>,
}

fn finite(d: f64) -> Option<f64> {
    d.is_finite().then_some(d)
}

/// Distance of each windowed sample to the predicted set.
pub fn containment_check(samples: &[Sample], predicted: &PredictedSet, cfg: &SampleConfig) -> Containment {
    let distances: Vec<f64> = samples
        .par_iter()
        .map(|s| if s.in_window(cfg.window) { predicted.distance(&s.reduced) } else { f64::INFINITY })
        .collect();
    let mut windowed = 0;
    let mut max_distance = 0.0f64;
    let mut worst = None;
    for (i, (s, &d)) in samples.iter().zip(&distances).enumerate() {
        if !s.in_window(cfg.window) {
            continue;
        }
        windowed += 1;
        if worst.is_none() || d > max_distance {
            max_distance = d;
            worst = Some(WorstSample {
                index: i,
                shell: s.shell,
                piece: s.piece,
                params: s.params.clone(),
                reduced: s.reduced.clone(),
                distance: finite(d),
            });
        }
    }
    Containment { distances, windowed, max_distance, worst }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentCoverage {
    /// Cells whose centre lies within `eps/2` of the component.
    pub predicted_cells: usize,
    pub hit_cells: usize,
    /// `hit / predicted`; `None` when the grid was too large or nothing is predicted.
    pub fraction: Option<f64>,
    pub skipped: bool,
}

/// Fraction of each component's cells that contain a windowed sample.
pub fn coverage_check(
    predicted: &PredictedSet,
    samples: &[Sample],
    reducer: &LatticeReducer,
    cfg: &SampleConfig,
) -> Vec<ComponentCoverage> {
    let grid = CellGrid::new(reducer, cfg.eps, cfg.window);
    let total = grid.len();
    if total > cfg.max_cells {
        return predicted
            .components
            .iter()
            .map(|_| ComponentCoverage { predicted_cells: 0, hit_cells: 0, fraction: None, skipped: true })
            .collect();
    }
    let hit: HashSet<Cell> = samples.iter().filter_map(|s| grid.cell(s)).collect();
    let radius = cfg.eps / 2.0 + 1e-12;
    predicted
        .components
        .iter()
        .map(|c| {
            let (pred, hits) = (0..total)
                .into_par_iter()
                .map(|idx| {
                    let cell = grid.decode(idx);
                    let (f, t) = grid.centre(&cell);
                    let x = reducer.assemble(&f, &t);
                    if c.distance(&x) <= radius {
                        (1usize, usize::from(hit.contains(&cell)))
                    } else {
                        (0, 0)
                    }
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            ComponentCoverage {
                predicted_cells: pred,
                hit_cells: hits,
                fraction: (pred > 0).then(|| hits as f64 / pred as f64),
                skipped: false,
            }
        })
        .collect()
}

/// Windowed cells hit per shell and how many of them no earlier shell hit.
pub fn shell_stability(samples: &[Sample], reducer: &LatticeReducer, cfg: &SampleConfig) -> Vec<(usize, usize)> {
    let grid = CellGrid::new(reducer, cfg.eps, cfg.window);
    let mut seen: HashSet<Cell> = HashSet::new();
    (0..cfg.shells)
        .map(|k| {
            let shell: HashSet<Cell> = samples.iter().filter(|s| s.shell == k).filter_map(|s| grid.cell(s)).collect();
            let new = shell.iter().filter(|c| !seen.contains(*c)).count();
            let hit = shell.len();
            seen.extend(shell);
            (hit, new)
        })
        .collect()
}
