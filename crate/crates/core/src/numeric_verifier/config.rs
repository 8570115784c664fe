use serde::{Deserialize, Serialize};

/// Sampling and acceptance knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleConfig {
    /// Innermost shell radius `R`.
    pub radius: f64,
    /// Samples per shell.
    pub count: usize,
    /// Number of shells `R, 2R, 4R, …`.
    pub shells: usize,
    pub seed: u64,
    /// Grid cell size.
    pub eps: f64,
    /// Containment tolerance.
    pub tol: f64,
    /// Half-width of the window on transverse coordinates.
    pub window: f64,
    pub coverage_threshold: f64,
    /// Cells beyond this count are not enumerated for coverage.
    pub max_cells: usize,
    /// Parameter nodes per range for curve bases.
    pub curve_nodes: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            radius: 100.0,
            count: 10_000,
            shells: 1,
            seed: 0,
            eps: 0.05,
            tol: 1e-2,
            window: 1.0,
            coverage_threshold: 0.95,
            max_cells: 1_000_000,
            curve_nodes: 10_000,
        }
    }
}

impl SampleConfig {
    pub fn radius_schedule(&self) -> Vec<f64> {
        (0..self.shells).map(|k| self.radius * 2f64.powi(k as i32)).collect()
    }

    // Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), String> {
        if !(self.radius > 0.0) {
            return Err("radius must be positive".into());
        }
        if self.count == 0 || self.shells == 0 {
            return Err("count and shells must be positive".into());
        }
        if !(self.eps > 0.0) || !(self.tol > 0.0) || !(self.window >= 0.0) {
            return Err("eps and tol must be positive, window nonnegative".into());
        }
        if !(0.0..=1.0).contains(&self.coverage_threshold) {
            return Err("coverage_threshold must lie in [0, 1]".into());
        }
        Ok(())
    }
}
