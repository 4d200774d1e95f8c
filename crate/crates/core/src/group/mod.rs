//! Finite matrix groups over F_{q^k}: closed-form orders, realized group
//! laws, enumerated tables, conjugacy classes and morphisms.

mod classes;
mod descriptor;
mod law;
mod morphism;
pub mod rcf;
mod table;

pub use classes::{rcf_agrees_with_orbits, rcf_labels, ConjugacyClassSet};
pub use descriptor::{gl_order, group_order, GroupDescriptor};
pub use law::{Factor, FactorKind, GroupLaw};
pub use morphism::{apply_rule, inclusion_matching, GroupMorphism, MorphismRule};
pub use table::{build_group, Distinguished, GroupTable, Subgroup, ENUMERATION_CAP};
