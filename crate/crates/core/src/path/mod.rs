//! Truncated path algebras over exact fields, quotients and corners.

mod algebra;
mod element;
mod quotient;
mod word;

pub use algebra::{cartan_matrix, corner_algebra, restrict_module, FinDimAlgebra, Module};
pub(crate) use element::same_quiver;
pub use element::{Relation, RelationSet, TruncatedElement};
pub(crate) use quotient::stabilize;
pub use quotient::{
    minimal_relations_defect, quotient_algebra, quotient_algebra_with_budget, truncated_block_dims,
    DEFAULT_WORD_BUDGET,
};
pub use word::{IndexedQuiver, Word};
