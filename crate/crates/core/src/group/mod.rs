//! Permutation groups, subgroups, class functions and character tables.

pub mod fixtures;
mod class_function;
mod perm;
mod perm_group;
mod subgroup;
mod table;

pub use class_function::{induce_class_function, tolerance, CharValue, ClassFunction};
pub use perm::Perm;
pub use perm_group::{PermGroup, DEFAULT_ORDER_BOUND};
pub use subgroup::{all_p_subgroups, all_subgroups, o_p, p_elements, subgroups_up_to_conjugacy, sylow_p, Subgroup};
pub use table::{decompose, CharacterTable, TABLE_SCHEMA_VERSION};
