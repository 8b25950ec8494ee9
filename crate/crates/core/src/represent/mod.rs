//! Representability over finite fields.

mod field;
mod pattern;
mod search;

pub use field::{default_battery, parse_battery, FieldError, FieldSpec};
pub use pattern::{first_basis, projective_pattern, Entry, RepresentError, RepresentationProblem};
pub use search::{
    check_representation, find_representation, find_representation_with_basis, representability_summary,
    FieldMatrix, Outcome, RepresentabilitySummary, RepresentationResult,
};
