//! Finite groupoids and their convolution *-algebras with exact arithmetic.
//!
//! The crate builds quotient groupoids `G/H`, the abelianization
//! `G^ab = G_fix / [G_fix, G_fix]`, dual bundles of abelian group bundles, and checks
//! at finite scale that the one-dimensional representations of `ℂG` are exactly the
//! functionals `φ_{x,χ}` obtained from fixed points and characters of `G^ab`.

pub mod abelian;
pub mod algebra;
pub mod check;
pub mod document;
pub mod functional;
pub mod generators;
pub mod group;
pub mod groupoid;
pub mod ideal;
pub mod linalg;
pub mod quotient;
pub mod scalar;
pub mod snf;

pub use abelian::{Character, DualBundle, FiniteAbelianGroup, RootOfUnity};
pub use algebra::{AlgebraElement, AlgebraHom};
pub use functional::{CharacterFunctional, GelfandMatrix};
pub use group::FiniteGroup;
pub use groupoid::{ElementSubset, FiniteGroupoid, ValidationReport, Violation};
pub use ideal::IdealBasis;
pub use quotient::{NormalSubgroupoid, QuotientResult};
pub use scalar::GaussRat;
