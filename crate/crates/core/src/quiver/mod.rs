//! Graded and translation quivers.

mod ade;
mod canonical;
mod export;
pub mod fixtures;
mod parse;
mod types;
mod validate;

pub use ade::{ade_translation_quiver, dynkin_types, is_dynkin, Family};
pub use canonical::canonical_form;
pub(crate) use export::to_json_value;
pub use export::{export_quiver, export_translation_quiver, Format};
pub use parse::parse_quiver;
pub(crate) use parse::parse_value;
pub use types::{Arrow, GradedQuiver, TranslationQuiver, Vertex};
pub use validate::{validate_translation_quiver, ValidationReport, Violation};
