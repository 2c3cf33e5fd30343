//! State preparation through the asymmetric-loss interferometer.
//!
//! Starting from the maximally entangled pair (after the phase switch and
//! Bob's polarization flip) `(|HH⟩ + |VV⟩)/√2`, Bob's photon passes a loss
//! element `diag(sin β, 1)`. Renormalizing leaves
//! `sin α|HH⟩ + cos α|VV⟩` with `sin α = sin β / √(sin²β + 1)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_1_SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::matrix::{kron, ComplexMatrix, ZERO};
use crate::qcore::state::PureState;

/// HWP1 angle (phase gate), degrees.
pub const HWP1_DEG: f64 = 0.0;
/// HWP3 angle (polarization flip), degrees.
pub const HWP3_DEG: f64 = 45.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticsPrep {
    pub beta: f64,
    pub alpha: f64,
    pub state: PureState,
    pub hwp1_deg: f64,
    /// HWP2 is rotated by β/2.
    pub hwp2_deg: f64,
    pub hwp3_deg: f64,
}

/// Bob's loss operator `diag(sin β, 1)`.
pub fn loss_matrix(beta: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[beta.sin(), 1.0])
}

/// Runs the preparation for loss parameter `β ∈ [0, π/2]`.
pub fn optics_prep(beta: f64) -> Result<OpticsPrep> {
    if !(0.0..=FRAC_PI_2).contains(&beta) {
        return Err(Error::OutOfRange { name: "beta", value: beta, range: "[0, π/2]" });
    }
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let source = [h, ZERO, ZERO, h];
    let op = kron(&ComplexMatrix::identity(2), &loss_matrix(beta));
    let lossy: Vec<Complex64> = (0..4).map(|r| (0..4).map(|c| op.get(r, c) * source[c]).sum()).collect();
    let state = PureState::new(lossy)?;
    let alpha = beta.sin().atan();
    Ok(OpticsPrep {
        beta,
        alpha,
        state,
        hwp1_deg: HWP1_DEG,
        hwp2_deg: (beta / 2.0).to_degrees(),
        hwp3_deg: HWP3_DEG,
    })
}

/// Loss parameter producing Schmidt angle `α ∈ [0, π/4]`: `β = arcsin(tan α)`.
pub fn beta_for_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_4 + 1e-15).contains(&alpha) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, range: "[0, π/4]" });
    }
    Ok(alpha.tan().min(1.0).asin())
}
