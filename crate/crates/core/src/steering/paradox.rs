//! The "k = 1" steering paradox.
//!
//! For a pure entangled state and `k` projective settings every normalized
//! conditional state of Bob is pure, so projecting each unnormalized branch
//! onto its own normalized state recovers its full weight and the sum over
//! all `2k` branches is `k`. An LHS ensemble reproducing `2k` distinct pure
//! conditional states must place each on a single hidden state, and the
//! same sum then collapses to `Σ ℘_ξ = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::eig::eig_herm;
use crate::qcore::matrix::ComplexMatrix;
use crate::qcore::state::PureState;
use crate::steering::assemblage::{build_assemblage, Assemblage};
use crate::steering::direction::{MeasurementDirection, Outcome};

/// Schmidt angle below which a state counts as a product state.
pub const ENTANGLEMENT_EPS: f64 = 1e-6;
/// Conditional states with purity below `1 − PURITY_TOL` are mixed.
pub const PURITY_TOL: f64 = 1e-10;
/// Two conditional states with fidelity at or above `1 − DISTINCT_TOL` coincide.
pub const DISTINCT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct ParadoxTerm {
    pub setting: usize,
    pub direction: MeasurementDirection,
    pub outcome: Outcome,
    /// `tr[ρ̃ʲₐ · ρʲₐ]`
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParadoxReport {
    pub quantum_total: f64,
    pub lhs_prediction: f64,
    pub settings_count: usize,
    pub per_term: Vec<ParadoxTerm>,
}

/// Quantum side of the paradox for a pure two-qubit state.
pub fn paradox_value(psi: &PureState, directions: &[MeasurementDirection]) -> Result<ParadoxReport> {
    let schmidt_angle = psi.schmidt_angle()?;
    if schmidt_angle <= ENTANGLEMENT_EPS {
        return Err(Error::NotEntangled { schmidt_angle });
    }
    let assemblage = build_assemblage(&psi.density(), directions)?;
    evaluate(&assemblage)
}

/// Same as [`paradox_value`] for a density matrix. Mixed inputs fail with
/// the first conditional state that is not pure.
pub fn paradox_value_density(rho: &ComplexMatrix, directions: &[MeasurementDirection]) -> Result<ParadoxReport> {
    let assemblage = build_assemblage(rho, directions)?;
    if rho.purity() < 1.0 - PURITY_TOL {
        check_purity(&assemblage)?;
    }
    let top = eig_herm(rho)?;
    let psi = PureState::new(top.vectors[0].clone())?;
    paradox_value(&psi, directions)
}

fn check_purity(assemblage: &Assemblage) -> Result<()> {
    for (setting, branches) in assemblage.states.iter().enumerate() {
        for (outcome, branch) in Outcome::ALL.iter().zip(branches) {
            let normalized = branch
                .normalized
                .as_ref()
                .ok_or(Error::ZeroProbabilityBranch { setting, outcome: *outcome as u8 })?;
            let purity = normalized.purity();
            if purity < 1.0 - PURITY_TOL {
                return Err(Error::ImpureConditionalState { setting, outcome: *outcome as u8, purity });
            }
        }
    }
    Ok(())
}

fn evaluate(assemblage: &Assemblage) -> Result<ParadoxReport> {
    check_purity(assemblage)?;

    let labelled: Vec<((usize, u8), &ComplexMatrix)> = assemblage
        .states
        .iter()
        .enumerate()
        .flat_map(|(j, branches)| {
            Outcome::ALL
                .iter()
                .zip(branches)
                .map(move |(a, b)| ((j, *a as u8), b.normalized.as_ref().expect("checked above")))
        })
        .collect();
    for (i, (first, rho_i)) in labelled.iter().enumerate() {
        for (second, rho_j) in &labelled[i + 1..] {
            let fidelity = rho_i.trace_product(rho_j).re;
            if fidelity >= 1.0 - DISTINCT_TOL {
                return Err(Error::CoincidentConditionalStates { first: *first, second: *second, fidelity });
            }
        }
    }

    let mut per_term = Vec::with_capacity(2 * assemblage.len());
    for (setting, (direction, branches)) in assemblage.directions.iter().zip(&assemblage.states).enumerate() {
        for (outcome, branch) in Outcome::ALL.iter().zip(branches) {
            let own = branch.normalized.as_ref().expect("checked above");
            per_term.push(ParadoxTerm {
                setting,
                direction: *direction,
                outcome: *outcome,
                probability: branch.unnormalized.trace_product(own).re,
            });
        }
    }
    Ok(ParadoxReport {
        quantum_total: per_term.iter().map(|t| t.probability).sum(),
        lhs_prediction: 1.0,
        settings_count: assemblage.len(),
        per_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn two_setting_terms() {
        let alpha = PI / 6.0;
        let psi = PureState::schmidt_form(alpha, 0.0);
        let report = paradox_value(&psi, &[MeasurementDirection::z(), MeasurementDirection::x()]).unwrap();
        let probs: Vec<f64> = report.per_term.iter().map(|t| t.probability).collect();
        let expected = [alpha.cos().powi(2), alpha.sin().powi(2), 0.5, 0.5];
        for (p, e) in probs.iter().zip(expected) {
            assert!((p - e).abs() < 1e-14, "{probs:?}");
        }
        assert!((report.quantum_total - 2.0).abs() < 1e-12);
        assert_eq!(report.lhs_prediction, 1.0);
        assert_eq!(report.settings_count, 2);
    }

    #[test]
    fn three_settings_on_bell_state() {
        let psi = PureState::schmidt_form(FRAC_PI_4, 0.0);
        let dirs = [MeasurementDirection::x(), MeasurementDirection::y(), MeasurementDirection::z()];
        let report = paradox_value(&psi, &dirs).unwrap();
        assert!((report.quantum_total - 3.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_rejected() {
        let psi = PureState::schmidt_form(0.0, 0.0);
        let err = paradox_value(&psi, &[MeasurementDirection::z(), MeasurementDirection::x()]).unwrap_err();
        assert!(matches!(err, Error::NotEntangled { .. }));
    }

    #[test]
    fn mixed_state_rejected_as_impure() {
        let rho = crate::qcore::state::make_state(&crate::qcore::state::StateFamilySpec::werner(0.5, 0.9)).unwrap();
        let err = paradox_value_density(&rho, &[MeasurementDirection::z(), MeasurementDirection::x()]).unwrap_err();
        assert!(matches!(err, Error::ImpureConditionalState { setting: 0, outcome: 0, .. }));
    }

    #[test]
    fn density_input_of_pure_state() {
        let rho = PureState::schmidt_form(0.9, 1.3).density();
        let report = paradox_value_density(&rho, &[MeasurementDirection::z(), MeasurementDirection::y()]).unwrap();
        assert!((report.quantum_total - 2.0).abs() < 1e-10);
    }

    #[test]
    fn coincident_conditional_states_rejected() {
        // For the Bell state, x̂ and a direction 1e-5 rad away give almost identical branches.
        let psi = PureState::schmidt_form(FRAC_PI_4, 0.0);
        let near_x = MeasurementDirection::from_angles(PI / 2.0, 1e-5);
        let err = paradox_value(&psi, &[MeasurementDirection::x(), near_x]).unwrap_err();
        assert!(matches!(err, Error::CoincidentConditionalStates { first: (0, 0), second: (1, 0), .. }));
    }
}
