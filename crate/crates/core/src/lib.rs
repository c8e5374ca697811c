pub mod commands;
pub mod complex;
pub mod config;
pub mod corpus;
mod error;
pub mod generators;
pub mod helly;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod nerve;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use report::Status;
