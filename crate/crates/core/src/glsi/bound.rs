//! Exact LHS bound by enumerating deterministic strategies.
//!
//! The LHS value of the inequality is linear in the hidden-state ensemble, so
//! its maximum sits on a single hidden state paired with a deterministic
//! response `a ∈ {0,1}ᵏ`. For fixed `a` the best hidden state is the top
//! eigenvector of `Σⱼ Πʲ_{aⱼ}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::glsi::instance::GlsiInstance;
use crate::qcore::eig::top_eigenvalue2;
use crate::qcore::matrix::ComplexMatrix;
use crate::steering::direction::Outcome;

/// Largest `k` accepted by [`classical_bound`].
pub const MAX_ENUMERATED_SETTINGS: usize = 16;
/// Strategies within this distance of the optimum are reported as maximizing.
pub const MAXIMIZER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct LhsStrategy {
    pub assignment: Vec<Outcome>,
    pub aggregate: ComplexMatrix,
    pub max_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalBound {
    pub c_lhs: f64,
    pub maximizing: Vec<LhsStrategy>,
}

pub fn classical_bound(instance: &GlsiInstance) -> Result<ClassicalBound> {
    let k = instance.k();
    if k > MAX_ENUMERATED_SETTINGS {
        return Err(Error::TooManySettings { k, limit: MAX_ENUMERATED_SETTINGS });
    }
    let strategies: Vec<LhsStrategy> = (0u32..1 << k)
        .map(|mask| {
            let assignment: Vec<Outcome> =
                (0..k).map(|j| if mask >> j & 1 == 0 { Outcome::Zero } else { Outcome::One }).collect();
            let aggregate = assignment
                .iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(2), |acc, (j, a)| &acc + instance.bob_projector(j, *a));
            let max_eigenvalue = top_eigenvalue2(&aggregate);
            LhsStrategy { assignment, aggregate, max_eigenvalue }
        })
        .collect();
    let c_lhs = strategies.iter().map(|s| s.max_eigenvalue).fold(f64::NEG_INFINITY, f64::max);
    let maximizing = strategies.into_iter().filter(|s| s.max_eigenvalue >= c_lhs - MAXIMIZER_TOL).collect();
    Ok(ClassicalBound { c_lhs, maximizing })
}

/// `(C₊, C₋)` with `C± = √(4 ± 4 cos 2θ + cos 4θ)`.
pub fn c_pm(theta: f64) -> (f64, f64) {
    let c2 = (2.0 * theta).cos();
    let c4 = (4.0 * theta).cos();
    ((4.0 + 4.0 * c2 + c4).max(0.0).sqrt(), (4.0 - 4.0 * c2 + c4).max(0.0).sqrt())
}

/// `max(C₊, C₋)`, the bound of the correlator form for settings `x̂, ŷ, ẑ`.
pub fn c_lhs_prime_analytic(theta: f64) -> f64 {
    let (p, m) = c_pm(theta);
    p.max(m)
}

/// `max{(3 + C₊)/2, (3 + C₋)/2}`.
pub fn c_lhs_analytic(theta: f64) -> f64 {
    (3.0 + c_lhs_prime_analytic(theta)) / 2.0
}

/// Bound `2·C_LHS − k` of the linear form `Σⱼ Aⱼ⟨m̂ⱼ·σ⃗⟩` obtained at θ = π/4.
pub fn lsi_from_glsi_bound(k: usize, c_lhs: f64) -> f64 {
    2.0 * c_lhs - k as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn bell_reference_bound() {
        let inst = GlsiInstance::xyz(FRAC_PI_4, 0.0).unwrap();
        let bound = classical_bound(&inst).unwrap();
        assert!((bound.c_lhs - (3.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);
        // At θ = π/4 all eight strategies reach the same value.
        assert_eq!(bound.maximizing.len(), 8);
        for s in &bound.maximizing {
            assert!((s.max_eigenvalue - top_eigenvalue2(&s.aggregate)).abs() < 1e-12);
        }
    }

    #[test]
    fn c_pm_values() {
        let (p, m) = c_pm(FRAC_PI_4);
        assert!((p - 3f64.sqrt()).abs() < 1e-15 && (m - 3f64.sqrt()).abs() < 1e-15);
        let (p, m) = c_pm(1e-9);
        assert!((p - 3.0).abs() < 1e-12 && (m - 1.0).abs() < 1e-12);
        let (p, m) = c_pm(std::f64::consts::PI / 8.0);
        assert!((p - (4.0 + 2.0 * 2f64.sqrt()).sqrt()).abs() < 1e-14);
        assert!((m - (4.0 - 2.0 * 2f64.sqrt()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bound_approaches_three_near_zero() {
        let inst = GlsiInstance::xyz(1e-4, 0.3).unwrap();
        let c = classical_bound(&inst).unwrap().c_lhs;
        assert!(c < 3.0 && 3.0 - c < 1e-6);
    }

    #[test]
    fn lsi_reduction() {
        let c = (3.0 + 3f64.sqrt()) / 2.0;
        assert!((lsi_from_glsi_bound(3, c) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(lsi_from_glsi_bound(4, 4.0), 4.0);
    }

    #[test]
    fn enumeration_limit() {
        let dirs: Vec<_> = (0..17)
            .map(|i| crate::steering::direction::MeasurementDirection::from_angles(0.1 + 0.05 * i as f64, 0.3 * i as f64))
            .collect();
        let inst = GlsiInstance::new(0.5, 0.0, &dirs).unwrap();
        assert!(matches!(classical_bound(&inst), Err(Error::TooManySettings { k: 17, .. })));
    }
}
