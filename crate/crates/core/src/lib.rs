//! Binary extended formulations of bounded mixed-integer sets: exact polyhedral
//! kernel, binarization schemes, split closures and branch-and-bound trees.

pub mod error;
pub mod kernel;
pub mod polyhedra;
pub mod binarization;
pub mod extension;
pub mod splits;
pub mod bnb;

pub use error::{Error, Result};
