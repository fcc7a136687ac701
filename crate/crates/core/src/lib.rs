//! dg Auslander algebras of simple singularities, computed exactly.
//!
//! Paths are written right to left: the word `a b` applies `b` first, so it
//! is defined when `tgt(b) == src(a)`. This convention is used by every
//! text format in the crate.
//!
//! All algebraic types are generic over an exact [`Field`]; the aliases
//! below fix the default big-rational scalars.

pub mod complexes;
pub mod dg;
pub mod error;
pub mod homology;
pub mod koszul;
pub mod linalg;
pub mod path;
pub mod quiver;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Field;

/// Arbitrary-precision rationals, the default scalar type.
pub type Rational = num_rational::BigRational;
/// Machine-word rationals; faster, but conversions can overflow.
pub type SmallRational = num_rational::Ratio<i64>;

pub type Element = path::TruncatedElement<Rational>;
pub type Algebra = path::FinDimAlgebra<Rational>;
pub type Relations = path::RelationSet<Rational>;
pub type Dg = dg::DgPresentation<Rational>;
pub type Cx = complexes::Complex<Rational>;
pub type Auslander = homology::AuslanderPresentation<Rational>;
pub type AugmentedAlgebra = koszul::AugmentedDgAlgebra<Rational>;
pub type Koszul = koszul::KoszulPresentation<Rational>;
