//! Generalized linear steering inequalities: construction, quantum values,
//! exact classical bounds and violation search.

pub mod bound;
pub mod detect;
pub mod inequality;
pub mod instance;
pub mod optimize;

pub use bound::{c_lhs_analytic, c_lhs_prime_analytic, c_pm, classical_bound, lsi_from_glsi_bound, ClassicalBound, LhsStrategy};
pub use detect::{detect_from_correlators, detect_violation, report_at_optimum, uniform_phi_grid, Detection, DetectionOptions};
pub use inequality::{
    glsi_value, glsi_value_signed, sprime3_value, sprime3_value_signed, usual_lsi_bound, usual_lsi_value, Correlators,
    InequalityReport, Signs, ALL_SIGNS, UNSIGNED,
};
pub use instance::{bloch_projector, bloch_vector, bob_projectors, GlsiInstance};
