use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::glsi::detect::{detect_from_correlators, detect_violation, DetectionOptions};
use crate::glsi::inequality::{usual_lsi_bound, usual_lsi_value, Correlators, ALL_SIGNS};
use crate::glsi::optimize::linspace;
use crate::qcore::state::{make_state, Family, PureState, StateFamilySpec};

/// One `(α, V)` grid point. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub family: Family,
    pub alpha: f64,
    pub visibility: f64,
    /// Usual LSI value, maximized over Alice's orientation.
    pub usual_value: f64,
    pub usual_bound: f64,
    pub usual_detected: bool,
    pub glsi_theta_star: f64,
    pub glsi_violation: f64,
    pub glsi_detected: bool,
}

/// Scan results, α-major: `cells[i * v_grid.len() + j]` is `(alpha_grid[i], v_grid[j])`.
#[derive(Debug, Clone, Serialize)]
pub struct RegionTable {
    pub family: Family,
    pub alpha_grid: Vec<f64>,
    pub v_grid: Vec<f64>,
    pub cells: Vec<RegionCell>,
}

impl RegionTable {
    pub fn cell(&self, i: usize, j: usize) -> &RegionCell {
        &self.cells[i * self.v_grid.len() + j]
    }

    fn matrix<T>(&self, f: impl Fn(&RegionCell) -> T) -> Vec<Vec<T>> {
        self.cells.chunks(self.v_grid.len()).map(|row| row.iter().map(&f).collect()).collect()
    }

    pub fn detected_usual(&self) -> Vec<Vec<bool>> {
        self.matrix(|c| c.usual_detected)
    }

    pub fn detected_glsi(&self) -> Vec<Vec<bool>> {
        self.matrix(|c| c.glsi_detected)
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        self.matrix(|c| c.glsi_violation)
    }
}

/// `π/4 · i/n` for `i = 1..=n`.
pub fn alpha_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| FRAC_PI_4 * i as f64 / n as f64).collect()
}

/// `n` points covering `[0, 1]`.
pub fn v_grid(n: usize) -> Vec<f64> {
    linspace(0.0, 1.0, n)
}

fn spec(family: Family, alpha: f64, v: f64) -> Result<StateFamilySpec> {
    match family {
        Family::Werner => Ok(StateFamilySpec::werner(alpha, v)),
        Family::Asymmetric => Ok(StateFamilySpec::asymmetric(alpha, v)),
        other => Err(Error::Unsupported(format!("region scans need werner or asymmetric, got {other}"))),
    }
}

pub fn evaluate_cell(family: Family, alpha: f64, visibility: f64) -> Result<RegionCell> {
    // The asymmetric family maps V → 1 − V under an outcome relabeling on
    // Alice's side, which the orientation search already covers.
    let v = if family == Family::Asymmetric && visibility > 0.5 { 1.0 - visibility } else { visibility };
    let corr = Correlators::of(&make_state(&spec(family, alpha, v)?)?)?;
    let usual_value = ALL_SIGNS.iter().map(|&s| corr.usual_lsi(s)).fold(f64::NEG_INFINITY, f64::max);
    let d = detect_from_correlators(&corr, &DetectionOptions::default());
    Ok(RegionCell {
        family,
        alpha,
        visibility,
        usual_value,
        usual_bound: usual_lsi_bound(),
        usual_detected: usual_value > usual_lsi_bound(),
        glsi_theta_star: d.theta_star,
        glsi_violation: d.violation,
        glsi_detected: d.detected(),
    })
}

/// Detection flags and violations on an `alpha_steps × v_steps` grid.
/// Rows are evaluated in parallel on the current rayon pool.
pub fn region_scan(family: Family, alpha_steps: usize, v_steps: usize) -> Result<RegionTable> {
    if alpha_steps < 2 || v_steps < 2 {
        return Err(Error::OutOfRange {
            name: "grid size",
            value: alpha_steps.min(v_steps) as f64,
            range: "≥ 2",
        });
    }
    spec(family, FRAC_PI_4, 1.0)?;
    let alphas = alpha_grid(alpha_steps);
    let vs = v_grid(v_steps);
    let rows = alphas
        .par_iter()
        .map(|&a| vs.iter().map(|&v| evaluate_cell(family, a, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionTable { family, alpha_grid: alphas, v_grid: vs, cells: rows.into_iter().flatten().collect() })
}

/// Pure-state comparison of the usual LSI with the optimized family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub usual_value: f64,
    pub usual_bound: f64,
    pub glsi_violation: f64,
    pub theta_star: f64,
}

pub fn pure_state_curves(alpha_grid: &[f64]) -> Result<Vec<CurveRow>> {
    alpha_grid
        .par_iter()
        .map(|&alpha| {
            if !(alpha > 0.0 && alpha <= FRAC_PI_4) {
                return Err(Error::OutOfRange { name: "alpha", value: alpha, range: "(0, π/4]" });
            }
            let rho = PureState::schmidt_form(alpha, 0.0).density();
            let d = detect_violation(&rho, &DetectionOptions::default())?;
            Ok(CurveRow {
                alpha,
                usual_value: usual_lsi_value(&rho)?,
                usual_bound: usual_lsi_bound(),
                glsi_violation: d.violation,
                theta_star: d.theta_star,
            })
        })
        .collect()
}
