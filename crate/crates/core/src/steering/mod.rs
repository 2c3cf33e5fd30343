//! Alice's projective measurements, Bob's assemblages and the steering paradox.

pub mod assemblage;
pub mod direction;
pub mod paradox;

pub use assemblage::{build_assemblage, conditional_state, Assemblage, ConditionalState};
pub use direction::{parse_angle, parse_direction_list, projector, MeasurementDirection, Outcome};
pub use paradox::{paradox_value, paradox_value_density, ParadoxReport, ParadoxTerm};
