//! Exact arithmetic in F_{p^k}, compatible towers, and dense matrices.

mod field;
pub mod matrix;
pub(crate) mod poly;
mod tower;

pub use field::{field_for, make_field, prime_power, Elem, Field, FieldDescriptor, FIELD_CAP};
pub use matrix::{mat_ops, MatOp, MatResult, MatrixFq};
pub use tower::FieldTower;
