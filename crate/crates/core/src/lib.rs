//! Polynomials in three calibrated bicategories: spans of finite sets,
//! relations of finite sets, and profunctors between finite categories.

mod algebra;
pub mod check;
pub mod commands;
pub mod document;
pub mod error;
pub mod fincat;
pub mod finset;
pub mod modpoly;
pub mod poly;
pub mod random;
pub mod rel;
pub mod span;

pub use error::{Error, Result};
