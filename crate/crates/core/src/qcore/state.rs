use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::eig::eig_herm;
use crate::qcore::matrix::{ComplexMatrix, ONE, ZERO};

const NORM_TOL: f64 = 1e-12;
/// Tolerance used when validating user-supplied raw density matrices.
pub const RAW_MATRIX_TOL: f64 = 1e-8;

/// Normalized state vector of one or two qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Normalizes `amplitudes`. Fails on a zero vector or a length other than 2 or 4.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 2 && amplitudes.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: "2 or 4 amplitudes".into(),
                found: format!("{}", amplitudes.len()),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < NORM_TOL {
            return Err(Error::Empty("zero state vector"));
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    /// `cos α|00⟩ + e^{iφ} sin α|11⟩`.
    pub fn schmidt_form(alpha: f64, phi: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self { amplitudes: vec![Complex64::new(c, 0.0), ZERO, ZERO, Complex64::from_polar(s, phi)] }
    }

    /// `sin α|01⟩ + cos α|10⟩`, the admixed component of the asymmetric family.
    pub fn flipped_schmidt_form(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self { amplitudes: vec![ZERO, Complex64::new(s, 0.0), Complex64::new(c, 0.0), ZERO] }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::projector_onto(&self.amplitudes)
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        let f = Complex64::from_polar(1.0, phase);
        Self { amplitudes: self.amplitudes.iter().map(|z| z * f).collect() }
    }

    /// Schmidt coefficients `(s₁ ≥ s₂)` of a two-qubit state.
    pub fn schmidt_coefficients(&self) -> Result<(f64, f64)> {
        if self.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: "two-qubit state".into(), found: format!("dim {}", self.dim()) });
        }
        // Singular values of the 2×2 coefficient matrix M via eig(M M†).
        let m = ComplexMatrix::new(2, self.amplitudes.clone())?;
        let gram = &m * &m.adjoint();
        let e = eig_herm(&gram)?;
        Ok((e.values[0].max(0.0).sqrt(), e.values[1].max(0.0).sqrt()))
    }

    /// Local-unitary invariant Schmidt angle `atan(s₂/s₁) ∈ [0, π/4]`.
    pub fn schmidt_angle(&self) -> Result<f64> {
        let (s1, s2) = self.schmidt_coefficients()?;
        Ok(s2.atan2(s1))
    }

    /// `(α, φ)` with `α ∈ [0, π/2]`, `φ ∈ [0, 2π)` when the state has the
    /// form `c₀₀|00⟩ + c₁₁|11⟩` up to global phase; `None` otherwise.
    pub fn schmidt_params(&self) -> Option<(f64, f64)> {
        if self.dim() != 4 {
            return None;
        }
        let a = &self.amplitudes;
        if a[1].norm() > NORM_TOL || a[2].norm() > NORM_TOL {
            return None;
        }
        let alpha = a[3].norm().atan2(a[0].norm());
        let phi = if a[0].norm() < NORM_TOL || a[3].norm() < NORM_TOL {
            0.0
        } else {
            (a[3].arg() - a[0].arg()).rem_euclid(TAU)
        };
        Some((alpha, phi))
    }
}

/// Named state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pure,
    Werner,
    Asymmetric,
    Raw,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pure" => Ok(Family::Pure),
            "werner" => Ok(Family::Werner),
            "asymmetric" | "asym" => Ok(Family::Asymmetric),
            "raw" => Ok(Family::Raw),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Family::Pure => "pure",
            Family::Werner => "werner",
            Family::Asymmetric => "asymmetric",
            Family::Raw => "raw",
        };
        f.write_str(name)
    }
}

/// Parameters selecting one two-qubit state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFamilySpec {
    pub family: Family,
    pub alpha: f64,
    pub phase: f64,
    pub visibility: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_matrix: Option<ComplexMatrix>,
}

impl StateFamilySpec {
    pub fn pure(alpha: f64, phase: f64) -> Self {
        Self { family: Family::Pure, alpha, phase, visibility: 1.0, raw_matrix: None }
    }

    pub fn werner(alpha: f64, visibility: f64) -> Self {
        Self { family: Family::Werner, alpha, phase: 0.0, visibility: visibility.clamp(0.0, 1.0), raw_matrix: None }
    }

    pub fn asymmetric(alpha: f64, visibility: f64) -> Self {
        Self { family: Family::Asymmetric, alpha, phase: 0.0, visibility: visibility.clamp(0.0, 1.0), raw_matrix: None }
    }

    pub fn raw(matrix: ComplexMatrix) -> Self {
        Self { family: Family::Raw, alpha: 0.0, phase: 0.0, visibility: 1.0, raw_matrix: Some(matrix) }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }
}

/// Builds the density matrix for `spec`.
///
/// * pure: `|Ψ(α,φ)⟩⟨Ψ(α,φ)|`
/// * werner: `V|Ψ⟩⟨Ψ| + (1−V)𝟙⊗𝟙/4`
/// * asymmetric: `V|Ψ⟩⟨Ψ| + (1−V)|Φ⟩⟨Φ|` with `|Φ⟩ = sin α|01⟩ + cos α|10⟩`
/// * raw: validated copy of the supplied matrix
pub fn make_state(spec: &StateFamilySpec) -> Result<ComplexMatrix> {
    if spec.family == Family::Raw {
        let m = spec.raw_matrix.as_ref().ok_or(Error::Empty("raw family without matrix"))?;
        m.require_dim(4)?;
        m.validate_density_with(RAW_MATRIX_TOL)?;
        return Ok(m.clone());
    }
    if !(0.0..=FRAC_PI_2).contains(&spec.alpha) {
        return Err(Error::OutOfRange { name: "alpha", value: spec.alpha, range: "[0, π/2]" });
    }
    let v = spec.visibility.clamp(0.0, 1.0);
    let target = PureState::schmidt_form(spec.alpha, spec.phase).density();
    Ok(match spec.family {
        Family::Pure => target,
        Family::Werner => &target.scale(v) + &ComplexMatrix::identity(4).scale((1.0 - v) / 4.0),
        Family::Asymmetric => &target.scale(v) + &PureState::flipped_schmidt_form(spec.alpha).density().scale(1.0 - v),
        Family::Raw => unreachable!(),
    })
}

/// Convex combination `Σ pᵢ ρᵢ` of density matrices.
pub fn mix(components: &[(f64, ComplexMatrix)]) -> Result<ComplexMatrix> {
    let (_, first) = components.first().ok_or(Error::Empty("no mixture components"))?;
    if let Some((p, _)) = components.iter().find(|(p, _)| *p < 0.0 || !p.is_finite()) {
        return Err(Error::InvalidProbabilities { reason: format!("negative or non-finite weight {p}") });
    }
    let total: f64 = components.iter().map(|(p, _)| p).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbabilities { reason: format!("weights sum to {total}") });
    }
    let dim = first.dim();
    let mut acc = ComplexMatrix::zeros(dim);
    for (p, rho) in components {
        rho.require_dim(dim)?;
        acc = &acc + &rho.scale(*p);
    }
    Ok(acc)
}

/// Computational-basis projector `|ab⟩⟨ab|` on two qubits.
pub fn basis_projector(a: usize, b: usize) -> ComplexMatrix {
    let mut ket = vec![ZERO; 4];
    ket[2 * a + b] = ONE;
    ComplexMatrix::projector_onto(&ket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn werner_endpoints() {
        let full = make_state(&StateFamilySpec::werner(FRAC_PI_4, 1.0)).unwrap();
        assert!(full.approx_eq(&PureState::schmidt_form(FRAC_PI_4, 0.0).density(), 1e-15));
        for alpha in [0.0, 0.3, FRAC_PI_4] {
            let mixed = make_state(&StateFamilySpec::werner(alpha, 0.0)).unwrap();
            assert!(mixed.approx_eq(&ComplexMatrix::identity(4).scale(0.25), 1e-15));
        }
    }

    #[test]
    fn visibility_is_clamped() {
        assert_eq!(StateFamilySpec::werner(0.2, 1.7).visibility, 1.0);
        assert_eq!(StateFamilySpec::asymmetric(0.2, -0.1).visibility, 0.0);
    }

    #[test]
    fn alpha_out_of_range() {
        let err = make_state(&StateFamilySpec::pure(2.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { name: "alpha", .. }));
    }

    #[test]
    fn raw_matrix_validation() {
        let bad = ComplexMatrix::from_diagonal(&[0.5, 0.5, 0.5, -0.5]);
        let err = make_state(&StateFamilySpec::raw(bad)).unwrap_err();
        assert!(matches!(err, Error::NotPositive { .. }));
        let good = ComplexMatrix::from_diagonal(&[0.25; 4]);
        assert_eq!(make_state(&StateFamilySpec::raw(good.clone())).unwrap(), good);
    }

    #[test]
    fn equal_mix_of_basis_states_is_maximally_mixed() {
        let parts: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(a, b)| (0.25, basis_projector(a, b))).collect();
        assert!(mix(&parts).unwrap().approx_eq(&ComplexMatrix::identity(4).scale(0.25), 1e-15));
    }

    #[test]
    fn singleton_mix() {
        let rho = make_state(&StateFamilySpec::werner(0.4, 0.6)).unwrap();
        assert_eq!(mix(&[(1.0, rho.clone())]).unwrap(), rho);
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let rho = ComplexMatrix::identity(4).scale(0.25);
        assert!(matches!(mix(&[(0.7, rho.clone()), (0.2, rho.clone())]), Err(Error::InvalidProbabilities { .. })));
        assert!(matches!(mix(&[(1.2, rho.clone()), (-0.2, rho)]), Err(Error::InvalidProbabilities { .. })));
        assert!(matches!(mix(&[]), Err(Error::Empty(_))));
    }

    #[test]
    fn asymmetric_matches_two_component_mix() {
        for &(alpha, v) in &[(0.1, 0.3), (0.5, 0.77), (FRAC_PI_4, 0.5)] {
            let direct = make_state(&StateFamilySpec::asymmetric(alpha, v)).unwrap();
            let mixed = mix(&[
                (v, PureState::schmidt_form(alpha, 0.0).density()),
                (1.0 - v, PureState::flipped_schmidt_form(alpha).density()),
            ])
            .unwrap();
            assert!(direct.max_abs_diff(&mixed) <= 1e-12);
        }
    }

    #[test]
    fn asymmetric_half_visibility_has_positive_partial_transpose() {
        // At V = 1/2 the state is separable; check the partial transpose is PSD.
        for alpha in [0.1, 0.4, FRAC_PI_4] {
            let rho = make_state(&StateFamilySpec::asymmetric(alpha, 0.5)).unwrap();
            let mut pt = ComplexMatrix::zeros(4);
            for a in 0..2 {
                for b in 0..2 {
                    for a2 in 0..2 {
                        for b2 in 0..2 {
                            pt.set(2 * a + b, 2 * a2 + b2, rho.get(2 * a + b2, 2 * a2 + b));
                        }
                    }
                }
            }
            let vals = crate::qcore::eig::eigenvalues_herm(&pt).unwrap();
            assert!(vals[3] >= -1e-12, "alpha {alpha}: {vals:?}");
            // Away from V = 1/2 it is entangled (NPT).
            let rho = make_state(&StateFamilySpec::asymmetric(alpha, 0.9)).unwrap();
            for a in 0..2 {
                for b in 0..2 {
                    for a2 in 0..2 {
                        for b2 in 0..2 {
                            pt.set(2 * a + b, 2 * a2 + b2, rho.get(2 * a + b2, 2 * a2 + b));
                        }
                    }
                }
            }
            assert!(crate::qcore::eig::eigenvalues_herm(&pt).unwrap()[3] < -1e-3);
        }
    }

    #[test]
    fn schmidt_params_recovered() {
        let psi = PureState::schmidt_form(1.1, 5.0);
        let (alpha, phi) = psi.schmidt_params().unwrap();
        assert!((alpha - 1.1).abs() < 1e-12 && (phi - 5.0).abs() < 1e-12);
        assert!((psi.schmidt_angle().unwrap() - (FRAC_PI_2 - 1.1)).abs() < 1e-10);
        let phased = psi.with_global_phase(2.0);
        let (_, phi2) = phased.schmidt_params().unwrap();
        assert!((phi2 - 5.0).abs() < 1e-12);
        assert!(PureState::flipped_schmidt_form(0.3).schmidt_params().is_none());
    }

    #[test]
    fn pure_state_normalization() {
        let psi = PureState::new(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]).unwrap();
        assert!((psi.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!(PureState::new(vec![ZERO; 4]).is_err());
        assert!(PureState::new(vec![ONE; 3]).is_err());
    }
}
