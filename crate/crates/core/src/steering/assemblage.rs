use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::matrix::{kron, trace_out_alice, ComplexMatrix};
use crate::steering::direction::{MeasurementDirection, Outcome};

/// Probabilities at or below this are treated as zero-probability branches.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// Minimum angular separation between two of Alice's settings (antipodes identified).
pub const MIN_SEPARATION: f64 = 1e-6;

/// Bob's state conditioned on Alice's outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionalState {
    /// `ρ̃ⁿₐ = tr_A[(P̂ₐⁿ ⊗ 𝟙) ρ_AB]`
    pub unnormalized: ComplexMatrix,
    /// `tr ρ̃ⁿₐ`
    pub probability: f64,
    /// `ρ̃ⁿₐ / tr ρ̃ⁿₐ`; `None` on a zero-probability branch.
    pub normalized: Option<ComplexMatrix>,
}

pub(crate) fn conditional_state_unchecked(rho_ab: &ComplexMatrix, n: &MeasurementDirection, a: Outcome) -> ConditionalState {
    let lifted = kron(&n.projector(a), &ComplexMatrix::identity(2));
    let unnormalized = trace_out_alice(&(&lifted * rho_ab));
    let probability = unnormalized.trace().re;
    let normalized = (probability > ZERO_PROBABILITY).then(|| unnormalized.scale(1.0 / probability));
    ConditionalState { unnormalized, probability, normalized }
}

/// Bob's conditional state after Alice measures along `n` and obtains `a`.
pub fn conditional_state(rho_ab: &ComplexMatrix, n: &MeasurementDirection, a: Outcome) -> Result<ConditionalState> {
    rho_ab.require_dim(4)?;
    rho_ab.validate_density()?;
    Ok(conditional_state_unchecked(rho_ab, n, a))
}

/// All conditional states for a set of Alice settings.
#[derive(Debug, Clone, Serialize)]
pub struct Assemblage {
    pub directions: Vec<MeasurementDirection>,
    /// `states[j][a]`
    pub states: Vec<[ConditionalState; 2]>,
    pub rho_b: ComplexMatrix,
}

impl Assemblage {
    pub fn get(&self, setting: usize, a: Outcome) -> &ConditionalState {
        &self.states[setting][a.index()]
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Largest entrywise deviation of `Σₐ ρ̃ʲₐ` from `ρ_B` over all settings.
    pub fn no_signaling_deviation(&self) -> f64 {
        self.states
            .iter()
            .map(|[s0, s1]| (&s0.unnormalized + &s1.unnormalized).max_abs_diff(&self.rho_b))
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `Σₐ pʲₐ` from 1.
    pub fn probability_deviation(&self) -> f64 {
        self.states
            .iter()
            .map(|[s0, s1]| (s0.probability + s1.probability - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Rejects settings that coincide as measurements (including `n̂` vs `−n̂`).
pub fn check_distinct(directions: &[MeasurementDirection]) -> Result<()> {
    for (i, a) in directions.iter().enumerate() {
        for (j, b) in directions.iter().enumerate().skip(i + 1) {
            let separation = a.measurement_separation(b);
            if separation <= MIN_SEPARATION {
                return Err(Error::DuplicateDirections { first: i, second: j, separation });
            }
        }
    }
    Ok(())
}

/// Builds the assemblage `{ρ̃ʲₐ}` of `rho_ab` for Alice's settings.
pub fn build_assemblage(rho_ab: &ComplexMatrix, directions: &[MeasurementDirection]) -> Result<Assemblage> {
    if directions.is_empty() {
        return Err(Error::Empty("no measurement directions"));
    }
    rho_ab.require_dim(4)?;
    rho_ab.validate_density()?;
    check_distinct(directions)?;
    let states = directions
        .iter()
        .map(|n| Outcome::ALL.map(|a| conditional_state_unchecked(rho_ab, n, a)))
        .collect();
    let assemblage = Assemblage { directions: directions.to_vec(), states, rho_b: trace_out_alice(rho_ab) };
    debug_assert!(assemblage.no_signaling_deviation() <= 1e-10);
    Ok(assemblage)
}
