//! Exact equivariant homology of finite G-posets with presheaf coefficients,
//! and the group-theoretic inductions it realizes.

pub mod algebra;
pub mod error;
pub mod gmodule;
pub mod gposet;
pub mod presheaf;
pub mod group;
pub mod homology;
pub mod inductions;

pub use error::{Error, Result};
pub use algebra::{Field, Matrix, Scalar};
pub use gmodule::GModule;
pub use gposet::{GPoset, PSubgroupVariant};
pub use group::{CharacterTable, ClassFunction, PermGroup, Subgroup};
pub use homology::{EquivariantComplex, HomologyResult};
pub use inductions::VirtualClass;
pub use presheaf::GPresheaf;
