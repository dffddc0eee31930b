//! Symmetry-adapted structure of constitutive tensors.
//!
//! Given a tensor space (index-permutation symmetries) and a material
//! symmetry group, this crate computes the dimension of the invariant
//! subspace from the trace formula, the averaged projector onto it, and a
//! labelled Voigt-style matrix showing which entries are free, zero or tied.

pub mod characters;
pub mod error;
pub mod groups;
pub mod projector;
pub mod spaces;
pub mod tensor;
pub mod verify;
pub mod voigt;

pub use error::{Error, Result};
pub use groups::{resolve_group, SymmetryGroup};
pub use projector::{fixed_basis, project, structure_report, StructureReport};
pub use spaces::{catalog_space, TensorSpace};
pub use tensor::{FlatOperator, FlatTensor, TolerancePolicy};
