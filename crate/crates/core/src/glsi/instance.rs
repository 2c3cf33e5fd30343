use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::matrix::{pauli_dot, ComplexMatrix};
use crate::qcore::state::PureState;
use crate::steering::assemblage::conditional_state_unchecked;
use crate::steering::direction::{MeasurementDirection, Outcome};

const PROJECTOR_TOL: f64 = 1e-10;

/// One member of the inequality family: the reference state `|Ψ(θ,φ)⟩`,
/// Alice's settings and Bob's projectors onto the reference conditional states.
#[derive(Debug, Clone, Serialize)]
pub struct GlsiInstance {
    pub theta: f64,
    pub phi: f64,
    pub directions: Vec<MeasurementDirection>,
    /// `bob_projectors[j][a]` projects onto `|χʲ±⟩` (`a = 0` ↔ `+`).
    pub bob_projectors: Vec<[ComplexMatrix; 2]>,
    /// Bloch vectors `m̂ʲ±` of the projectors.
    pub bloch_vectors: Vec<[[f64; 3]; 2]>,
}

impl GlsiInstance {
    pub fn new(theta: f64, phi: f64, directions: &[MeasurementDirection]) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::Empty("no measurement directions"));
        }
        let mut bob = Vec::with_capacity(directions.len());
        let mut bloch = Vec::with_capacity(directions.len());
        for (j, n) in directions.iter().enumerate() {
            let (plus, minus) = bob_projectors(theta, phi, n).map_err(|e| match e {
                Error::DegenerateReference { norm, .. } => Error::DegenerateReference { setting: j, norm },
                other => other,
            })?;
            bloch.push([bloch_vector(&plus)?, bloch_vector(&minus)?]);
            bob.push([plus, minus]);
        }
        Ok(Self { theta, phi, directions: directions.to_vec(), bob_projectors: bob, bloch_vectors: bloch })
    }

    /// Alice measures `x̂`, `ŷ`, `ẑ`.
    pub fn xyz(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta, phi, &[MeasurementDirection::x(), MeasurementDirection::y(), MeasurementDirection::z()])
    }

    pub fn k(&self) -> usize {
        self.directions.len()
    }

    pub fn bob_projector(&self, setting: usize, a: Outcome) -> &ComplexMatrix {
        &self.bob_projectors[setting][a.index()]
    }
}

/// Bob's projectors `(|χ₊⟩⟨χ₊|, |χ₋⟩⟨χ₋|)` for Alice's setting `n`, built from
/// the reference state `|Ψ(θ,φ)⟩ = cos θ|00⟩ + e^{iφ} sin θ|11⟩`.
pub fn bob_projectors(theta: f64, phi: f64, n: &MeasurementDirection) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::OutOfRange { name: "theta", value: theta, range: "(0, π/2)" });
    }
    let reference = PureState::schmidt_form(theta, phi).density();
    let [plus, minus] = Outcome::ALL.map(|a| conditional_state_unchecked(&reference, n, a));
    match (plus.normalized, minus.normalized) {
        (Some(p), Some(m)) => Ok((p, m)),
        _ => Err(Error::DegenerateReference { setting: 0, norm: plus.probability.min(minus.probability).max(0.0).sqrt() }),
    }
}

/// Bloch vector `m̂` of a rank-1 qubit projector `p = (𝟙 + m̂·σ⃗)/2`.
pub fn bloch_vector(p: &ComplexMatrix) -> Result<[f64; 3]> {
    p.require_dim(2)?;
    let deviation = p.hermitian_deviation();
    if deviation > PROJECTOR_TOL {
        return Err(Error::NotProjector { reason: format!("not Hermitian (deviation {deviation:.3e})") });
    }
    let trace = p.trace().re;
    if (trace - 1.0).abs() > PROJECTOR_TOL {
        return Err(Error::NotProjector { reason: format!("trace {trace} is not 1") });
    }
    let idempotency = (&(p * p) - p).max_abs_diff(&ComplexMatrix::zeros(2));
    if idempotency > PROJECTOR_TOL {
        return Err(Error::NotProjector { reason: format!("P² ≠ P (deviation {idempotency:.3e})") });
    }
    let lower = p.get(1, 0);
    let m = [2.0 * lower.re, 2.0 * lower.im, p.get(0, 0).re - p.get(1, 1).re];
    let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    if (norm - 1.0).abs() > PROJECTOR_TOL {
        return Err(Error::NotProjector { reason: format!("Bloch vector norm {norm}") });
    }
    Ok(m)
}

/// `(𝟙 + m̂·σ⃗)/2`.
pub fn bloch_projector(m: [f64; 3]) -> ComplexMatrix {
    &ComplexMatrix::identity(2).scale(0.5) + &pauli_dot(m).scale(0.5)
}
