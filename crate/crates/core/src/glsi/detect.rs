//! Steering detection by optimizing the inequality family over `(θ, φ)` and
//! Alice's orientation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::glsi::bound::c_lhs_prime_analytic;
use crate::glsi::inequality::{sprime3_value_signed, Correlators, InequalityReport, Signs, ALL_SIGNS, UNSIGNED};
use crate::glsi::optimize::grid_then_golden;
use crate::qcore::matrix::ComplexMatrix;

/// Lower end of the θ search interval.
pub const THETA_MIN: f64 = 0.001;
/// Upper end of the θ search interval.
pub const THETA_MAX: f64 = FRAC_PI_2 - 0.001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionOptions {
    pub phi_grid: Vec<f64>,
    pub sign_flips: bool,
    pub grid_points: usize,
    pub theta_tol: f64,
}

impl Default for DetectionOptions {
    fn default() -> Self {
        Self { phi_grid: vec![0.0], sign_flips: true, grid_points: 200, theta_tol: 1e-8 }
    }
}

impl DetectionOptions {
    pub fn with_phi_grid(mut self, phi_grid: Vec<f64>) -> Self {
        self.phi_grid = phi_grid;
        self
    }

    pub fn with_sign_flips(mut self, sign_flips: bool) -> Self {
        self.sign_flips = sign_flips;
        self
    }
}

/// `n` uniformly spaced phases in `[0, 2π)`.
pub fn uniform_phi_grid(n: usize) -> Vec<f64> {
    (0..n.max(1)).map(|i| TAU * i as f64 / n.max(1) as f64).collect()
}

/// Optimum of `S′₃ − C′_LHS`. A positive `violation` certifies steering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub theta_star: f64,
    pub phi_star: f64,
    pub signs: Signs,
    pub violation: f64,
    pub s3_prime: f64,
    pub c_lhs_prime: f64,
}

impl Detection {
    pub fn detected(&self) -> bool {
        self.violation > 0.0
    }
}

pub fn detect_violation(rho: &ComplexMatrix, options: &DetectionOptions) -> Result<Detection> {
    Ok(detect_from_correlators(&Correlators::of(rho)?, options))
}

/// Detection given precomputed correlators.
pub fn detect_from_correlators(corr: &Correlators, options: &DetectionOptions) -> Detection {
    let signs_set: &[Signs] = if options.sign_flips { &ALL_SIGNS } else { &[UNSIGNED] };
    let phis: &[f64] = if options.phi_grid.is_empty() { &[0.0] } else { &options.phi_grid };
    let mut best: Option<Detection> = None;
    for &phi in phis {
        for &signs in signs_set {
            let objective = |theta: f64| corr.sprime3(theta, phi, signs) - c_lhs_prime_analytic(theta);
            // θ = π/4 is the kink of C′_LHS and the usual-LSI point; always test it.
            let (theta, violation) =
                grid_then_golden(objective, THETA_MIN, THETA_MAX, options.grid_points, options.theta_tol, &[FRAC_PI_4]);
            let candidate = Detection {
                theta_star: theta,
                phi_star: phi,
                signs,
                violation,
                s3_prime: corr.sprime3(theta, phi, signs),
                c_lhs_prime: c_lhs_prime_analytic(theta),
            };
            best = Some(match best {
                Some(b) if b.violation > candidate.violation => b,
                Some(b) if b.violation == candidate.violation && b.theta_star <= candidate.theta_star => b,
                _ => candidate,
            });
        }
    }
    best.expect("non-empty search")
}

/// Full inequality report at the detection optimum.
pub fn report_at_optimum(rho: &ComplexMatrix, detection: &Detection) -> Result<InequalityReport> {
    sprime3_value_signed(rho, detection.theta_star, detection.phi_star, detection.signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::state::{make_state, PureState, StateFamilySpec};
    use std::f64::consts::PI;

    #[test]
    fn small_alpha_pure_state_violates() {
        let rho = PureState::schmidt_form(PI / 20.0, 0.0).density();
        let d = detect_violation(&rho, &DetectionOptions::default()).unwrap();
        assert!(d.violation > 0.0, "{d:?}");
        let usual = 1.0 + 2.0 * (PI / 10.0).sin();
        assert!(usual < 3f64.sqrt());
    }

    #[test]
    fn maximally_mixed_never_violates() {
        let rho = ComplexMatrix::identity(4).scale(0.25);
        let opts = DetectionOptions::default().with_phi_grid(uniform_phi_grid(16));
        assert!(detect_violation(&rho, &opts).unwrap().violation <= 0.0);
    }

    #[test]
    fn werner_bell_threshold() {
        let vmin = 3f64.sqrt() / 3.0;
        let above = make_state(&StateFamilySpec::werner(FRAC_PI_4, vmin + 1e-6)).unwrap();
        let below = make_state(&StateFamilySpec::werner(FRAC_PI_4, vmin - 1e-6)).unwrap();
        let opts = DetectionOptions::default();
        assert!(detect_violation(&above, &opts).unwrap().violation > 0.0);
        assert!(detect_violation(&below, &opts).unwrap().violation <= 0.0);
    }

    #[test]
    fn optimum_report_is_consistent() {
        let rho = make_state(&StateFamilySpec::asymmetric(0.3, 0.1)).unwrap();
        let d = detect_violation(&rho, &DetectionOptions::default()).unwrap();
        let r = report_at_optimum(&rho, &d).unwrap();
        assert!((r.violation - d.violation).abs() < 1e-12);
        assert!((r.s3_prime - (2.0 * r.s3 - 3.0)).abs() < 1e-12);
        assert_eq!(r.signs, d.signs);
    }

    #[test]
    fn phi_grid_helper() {
        let g = uniform_phi_grid(4);
        assert_eq!(g.len(), 4);
        assert!((g[1] - FRAC_PI_2).abs() < 1e-15);
    }
}
