pub mod error;
pub mod fq;
pub mod group;
pub mod chars;
pub mod scenario;
pub mod rational;
pub mod mult;
pub mod estimator;
pub mod periodicity;
pub mod reduction;

pub use error::{Error, Result};
pub mod report;
