use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::glsi::bound::{c_lhs_prime_analytic, classical_bound, LhsStrategy};
use crate::glsi::instance::GlsiInstance;
use crate::qcore::matrix::{kron, pauli_x, pauli_y, pauli_z, ComplexMatrix};
use crate::steering::direction::Outcome;

/// Orientation `(s_x, s_y, s_z)` applied to Alice's observables `A_x, A_y, A_z`.
pub type Signs = [i8; 3];

pub const UNSIGNED: Signs = [1, 1, 1];

/// All eight orientations, `(+,+,+)` first.
pub const ALL_SIGNS: [Signs; 8] = [
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [1, -1, -1],
    [-1, 1, 1],
    [-1, 1, -1],
    [-1, -1, 1],
    [-1, -1, -1],
];

/// The six two-qubit expectation values entering the correlator form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
    pub yx: f64,
    pub zz: f64,
    /// `⟨𝟙 ⊗ σ_z⟩`
    pub iz: f64,
}

impl Correlators {
    pub fn of(rho: &ComplexMatrix) -> Result<Self> {
        rho.require_dim(4)?;
        let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
        let e = |a: &ComplexMatrix, b: &ComplexMatrix| rho.expectation(&kron(a, b));
        Ok(Self {
            xx: e(&x, &x),
            yy: e(&y, &y),
            xy: e(&x, &y),
            yx: e(&y, &x),
            zz: e(&z, &z),
            iz: e(&ComplexMatrix::identity(2), &z),
        })
    }

    /// Correlator form of the three-setting inequality at `(θ, φ)` with
    /// Alice's observables reoriented by `signs`.
    pub fn sprime3(&self, theta: f64, phi: f64, signs: Signs) -> f64 {
        let (s2, c2) = (2.0 * theta).sin_cos();
        let (sp, cp) = phi.sin_cos();
        let [sx, sy, sz] = signs.map(f64::from);
        s2 * cp * (sx * self.xx - sy * self.yy) + s2 * sp * (sx * self.xy + sy * self.yx) + sz * self.zz + 2.0 * c2 * self.iz
    }

    /// `⟨A_xσ_x⟩ − ⟨A_yσ_y⟩ + ⟨A_zσ_z⟩` with the given orientation.
    pub fn usual_lsi(&self, signs: Signs) -> f64 {
        self.sprime3(FRAC_PI_4, 0.0, signs)
    }
}

/// Values of both forms of the three-setting inequality at one `(θ, φ)`.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub s3: f64,
    pub s3_prime: f64,
    pub c_lhs: f64,
    pub c_lhs_prime: f64,
    pub violation: f64,
    pub theta_star: f64,
    pub phi: f64,
    pub signs: Signs,
    pub correlators: Correlators,
    pub maximizing_strategies: Vec<LhsStrategy>,
}

/// `S_k = Σⱼ Σₐ tr[(P̂ₐ^{n̂ⱼ} ⊗ Πʲₐ) ρ]`.
pub fn glsi_value(rho: &ComplexMatrix, instance: &GlsiInstance) -> Result<f64> {
    glsi_value_signed(rho, instance, &vec![1; instance.k()])
}

/// [`glsi_value`] with Alice's outcome labels swapped on settings whose sign is negative.
pub fn glsi_value_signed(rho: &ComplexMatrix, instance: &GlsiInstance, signs: &[i8]) -> Result<f64> {
    rho.require_dim(4)?;
    let mut total = 0.0;
    for (j, n) in instance.directions.iter().enumerate() {
        let flip = signs.get(j).copied().unwrap_or(1) < 0;
        for a in Outcome::ALL {
            let alice_outcome = match (a, flip) {
                (Outcome::Zero, true) => Outcome::One,
                (Outcome::One, true) => Outcome::Zero,
                (a, false) => a,
            };
            let joint = kron(&n.projector(alice_outcome), instance.bob_projector(j, a));
            total += rho.expectation(&joint);
        }
    }
    Ok(total)
}

/// Evaluates both three-setting forms and their bounds at `(θ, φ)`.
pub fn sprime3_value(rho: &ComplexMatrix, theta: f64, phi: f64) -> Result<InequalityReport> {
    sprime3_value_signed(rho, theta, phi, UNSIGNED)
}

pub fn sprime3_value_signed(rho: &ComplexMatrix, theta: f64, phi: f64, signs: Signs) -> Result<InequalityReport> {
    let instance = GlsiInstance::xyz(theta, phi)?;
    let correlators = Correlators::of(rho)?;
    let s3 = glsi_value_signed(rho, &instance, &signs)?;
    let s3_prime = correlators.sprime3(theta, phi, signs);
    let bound = classical_bound(&instance)?;
    let c_lhs_prime = c_lhs_prime_analytic(theta);
    Ok(InequalityReport {
        s3,
        s3_prime,
        c_lhs: bound.c_lhs,
        c_lhs_prime,
        violation: s3_prime - c_lhs_prime,
        theta_star: theta,
        phi,
        signs,
        correlators,
        maximizing_strategies: bound.maximizing,
    })
}

/// Usual three-setting LSI value `S′₃(π/4, 0)`.
pub fn usual_lsi_value(rho: &ComplexMatrix) -> Result<f64> {
    Ok(Correlators::of(rho)?.usual_lsi(UNSIGNED))
}

/// Usual LSI bound `√3`.
pub fn usual_lsi_bound() -> f64 {
    3f64.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::state::{make_state, PureState, StateFamilySpec};

    #[test]
    fn matched_pure_state_saturates_at_three() {
        for &(alpha, phi) in &[(0.2, 0.0), (0.7, 1.3), (1.3, 4.0)] {
            let rho = PureState::schmidt_form(alpha, phi).density();
            let inst = GlsiInstance::xyz(alpha, phi).unwrap();
            assert!((glsi_value(&rho, &inst).unwrap() - 3.0).abs() < 1e-12);
            let report = sprime3_value(&rho, alpha, phi).unwrap();
            assert!((report.s3_prime - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_values() {
        let rho = ComplexMatrix::identity(4).scale(0.25);
        let inst = GlsiInstance::xyz(0.4, 0.9).unwrap();
        assert!((glsi_value(&rho, &inst).unwrap() - 1.5).abs() < 1e-15);
        let report = sprime3_value(&rho, 0.4, 0.9).unwrap();
        assert!(report.s3_prime.abs() < 1e-15);
        assert!(usual_lsi_value(&rho).unwrap().abs() < 1e-15);
    }

    #[test]
    fn usual_lsi_on_schmidt_states() {
        for alpha in [0.1, 0.5, FRAC_PI_4] {
            let rho = PureState::schmidt_form(alpha, 0.0).density();
            let expected = 1.0 + 2.0 * (2.0 * alpha).sin();
            assert!((usual_lsi_value(&rho).unwrap() - expected).abs() < 1e-14);
            let report = sprime3_value(&rho, FRAC_PI_4, 0.0).unwrap();
            assert!((report.s3_prime - expected).abs() < 1e-14);
            for v in [0.0, 0.3, 0.8] {
                let w = make_state(&StateFamilySpec::werner(alpha, v)).unwrap();
                assert!((usual_lsi_value(&w).unwrap() - v * expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn report_invariants() {
        let rho = make_state(&StateFamilySpec::asymmetric(0.3, 0.2)).unwrap();
        for signs in ALL_SIGNS {
            let r = sprime3_value_signed(&rho, 0.6, 0.4, signs).unwrap();
            assert!((r.s3_prime - (2.0 * r.s3 - 3.0)).abs() < 1e-12);
            assert!((r.c_lhs_prime - (2.0 * r.c_lhs - 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_setting_value_matches_paradox_total() {
        use crate::steering::{paradox_value, MeasurementDirection};
        let dirs = [MeasurementDirection::z(), MeasurementDirection::x()];
        let psi = PureState::schmidt_form(0.4, 0.0);
        let inst = GlsiInstance::new(0.4, 0.0, &dirs).unwrap();
        let s2 = glsi_value(&psi.density(), &inst).unwrap();
        assert!((s2 - 2.0).abs() < 1e-12);
        assert!((s2 - paradox_value(&psi, &dirs).unwrap().quantum_total).abs() < 1e-12);
    }

    #[test]
    fn report_serializes_fixed_fields() {
        let rho = ComplexMatrix::identity(4).scale(0.25);
        let json = serde_json::to_value(sprime3_value(&rho, 0.5, 0.0).unwrap()).unwrap();
        for key in ["s3", "s3_prime", "c_lhs", "c_lhs_prime", "theta_star", "signs", "violation", "correlators"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["correlators"].as_object().unwrap().len(), 6);
    }
}
