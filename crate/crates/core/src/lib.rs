pub mod cli;
pub mod error;
pub mod exceptional;
pub mod gauge;
pub mod hamiltonian;
pub mod models;
pub mod numerics;
pub mod spectral;
pub mod two_level;

pub use error::{Error, Result};
