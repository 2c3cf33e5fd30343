//! Small-dimension complex linear algebra and the two-qubit states used
//! throughout the crate.

pub mod eig;
pub mod matrix;
pub mod optics;
pub mod state;

pub use eig::{eig_herm, eigenvalues_herm, HermitianEigen};
pub use matrix::{partial_trace_alice, pauli_dot, pauli_x, pauli_y, pauli_z, tensor, ComplexMatrix};
pub use optics::{beta_for_alpha, optics_prep, OpticsPrep};
pub use state::{make_state, mix, Family, PureState, StateFamilySpec};
