//! Analysis on the basilica Julia set: cell structure, resistance forms,
//! spectral decimation and spectral dimensions.

pub mod cells;
pub mod checks;
pub mod decimation;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod graphdir;
pub mod numerics;
pub mod spectra;

pub use error::{Error, Result};
