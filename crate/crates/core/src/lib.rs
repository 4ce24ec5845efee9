pub mod assembly;
pub mod error;
pub mod experiments;
pub mod functional;
pub mod hho;
pub mod mesh;
pub mod physics;
pub mod solvers;

pub use error::{Error, Result};
