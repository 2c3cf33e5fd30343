//! EPR steering for two-qubit states.
//!
//! * [`qcore`]: dense 2×2/4×4 complex algebra, Hermitian spectra, the state
//!   families and the interferometric preparation model.
//! * [`steering`]: projective measurements, assemblages and the "k = 1"
//!   steering paradox.
//! * [`glsi`]: the generalized linear steering inequality, its exact LHS
//!   bound and violation search.
//! * [`scans`]: visibility thresholds and region scans.
//! * [`shotsim`]: finite-shot simulation of the measurements.

pub mod error;
pub mod glsi;
pub mod qcore;
pub mod scans;
pub mod shotsim;
pub mod steering;

pub use error::{Error, Result};
