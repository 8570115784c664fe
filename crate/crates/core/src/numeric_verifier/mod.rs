//! Far-point sampling of `X`, reduction modulo Λ, and comparison with a
//! predicted flow set.

mod config;
mod distance;
mod metrics;
mod sampler;

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::flats_and_varieties::VarietyInput;
use crate::flow_engine::{FlowDescription, SpanCondition};
use crate::lattice_algebra::LatticeReducer;

pub use config::SampleConfig;
pub use distance::{ComponentDistance, PredictedSet};
pub use metrics::{
    containment_check, coverage_check, shell_stability, CellGrid, ComponentCoverage, Containment, WorstSample,
};
pub use sampler::{sample_far_points, Sample};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("shell {shell} (radius {radius}) exhausted its attempt budget; the input may be bounded")]
    ShellStarved { shell: usize, radius: f64 },
    #[error("invalid sample configuration: {0}")]
    Config(String),
    #[error("prediction and variety live in different ambient dimensions")]
    DimensionMismatch,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellStats {
    pub index: usize,
    pub radius: f64,
    pub samples: usize,
    pub windowed: usize,
    pub max_distance: Option<f64>,
    pub cells_hit: usize,
    pub new_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub containment_passed: bool,
    pub coverage_passed: bool,
    pub span_condition: SpanCondition,
    /// Max over windowed samples; `None` if some windowed sample is at infinite
    /// distance (empty prediction) or no sample landed in the window.
    pub max_containment_distance: Option<f64>,
    pub total_samples: usize,
    pub windowed_samples: usize,
    /// Fraction of samples whose transverse coordinates leave the window.
    pub escaped_mass: f64,
    pub coverage: Vec<ComponentCoverage>,
    /// Set when the prediction is empty yet samples accumulate in the window.
    pub coverage_undefined: bool,
    pub worst_sample: Option<WorstSample>,
    pub max_residual: f64,
    pub shells: Vec<ShellStats>,
    pub config: SampleConfig,
}

/// Everything a verification run produces.
pub struct VerificationRun {
    pub report: VerificationReport,
    pub samples: Vec<Sample>,
    /// Per-sample distance to the prediction (`∞` outside the window).
    pub distances: Vec<f64>,
}

/// Samples `x`, reduces modulo the prediction's lattice and runs both
/// containment and coverage checks.
pub fn verify(x: &VarietyInput, predicted: &FlowDescription, cfg: &SampleConfig) -> Result<VerificationRun, VerifyError> {
    cfg.validate().map_err(VerifyError::Config)?;
    let lattice = &predicted.lattice;
    if lattice.ambient_dim() != x.ambient_dim() {
        return Err(VerifyError::DimensionMismatch);
    }
    let reducer = LatticeReducer::new(lattice);
    let samples = sample_far_points(x, &reducer, cfg)?;
    let set = PredictedSet::new(predicted, cfg.curve_nodes);
    let cont = containment_check(&samples, &set, cfg);
    let coverage = coverage_check(&set, &samples, &reducer, cfg);
    let stability = shell_stability(&samples, &reducer, cfg);

    let shells = cfg
        .radius_schedule()
        .iter()
        .enumerate()
        .map(|(k, &radius)| {
            let mut n = 0;
            let mut windowed = 0;
            let mut max = 0.0f64;
            for (s, d) in samples.iter().zip(&cont.distances) {
                if s.shell != k {
                    continue;
                }
                n += 1;
                if s.in_window(cfg.window) {
                    windowed += 1;
                    max = max.max(*d);
                }
            }
            ShellStats {
                index: k,
                radius,
                samples: n,
                windowed,
                max_distance: (windowed > 0 && max.is_finite()).then_some(max),
                cells_hit: stability[k].0,
                new_cells: stability[k].1,
            }
        })
        .collect();

    let empty = predicted.components.is_empty();
    let containment_passed = cont.windowed == 0 || cont.max_distance <= cfg.tol;
    let coverage_passed = coverage.iter().all(|c| {
        if c.skipped {
            cfg.coverage_threshold == 0.0
        } else {
            c.fraction.unwrap_or(0.0) >= cfg.coverage_threshold
        }
    });
    let total = samples.len();
    let report = VerificationReport {
        passed: containment_passed && coverage_passed,
        containment_passed,
        coverage_passed,
        span_condition: predicted.span_condition,
        max_containment_distance: (cont.windowed > 0 && cont.max_distance.is_finite()).then_some(cont.max_distance),
        total_samples: total,
        windowed_samples: cont.windowed,
        escaped_mass: if total == 0 { 0.0 } else { (total - cont.windowed) as f64 / total as f64 },
        coverage,
        coverage_undefined: empty && cont.windowed > 0,
        worst_sample: cont.worst,
        max_residual: samples.iter().map(|s| s.residual).fold(0.0, f64::max),
        shells,
        config: cfg.clone(),
    };
    Ok(VerificationRun { report, samples, distances: cont.distances })
}

/// CSV dump: `shell_index, param_*, raw_*, reduced_*, min_distance`.
/// Missing parameters are left blank; infinite distances are written as `inf`.
pub fn write_samples_csv<W: Write>(out: W, samples: &[Sample], distances: &[f64]) -> Result<(), VerifyError> {
    let params = samples.iter().map(|s| s.params.len()).max().unwrap_or(0);
    let n = samples.first().map_or(0, |s| s.raw.len());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["shell_index".to_string()];
    header.extend((0..params).map(|i| format!("param_{i}")));
    header.extend((0..n).map(|i| format!("raw_{i}")));
    header.extend((0..n).map(|i| format!("reduced_{i}")));
    header.push("min_distance".into());
    w.write_record(&header)?;
    for (s, d) in samples.iter().zip(distances) {
        let mut row = vec![s.shell.to_string()];
        row.extend((0..params).map(|i| s.params.get(i).map_or(String::new(), |v| v.to_string())));
        row.extend(s.raw.iter().map(f64::to_string));
        row.extend(s.reduced.iter().map(f64::to_string));
        row.push(d.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
