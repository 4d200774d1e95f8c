//! Character theory of enumerated groups with all values in a prime field F_ℓ.

mod classfn;
mod dixon;
mod ell;

pub use classfn::{induce, inner_product, inner_product_residue, pullback, restrict, ClassFunction};
pub use dixon::{character_table, class_mult_coefficients, CharTableModEll};
pub use ell::{choose_ell, choose_ell_for, EllContext, ELL_SEARCH_CAP};
