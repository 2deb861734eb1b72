//! Finite-precision workbench for perfectoid fields and their tilts.

pub mod acceptance;
pub mod charp;
pub mod config;
pub mod error;
pub mod gauss;
pub mod par;
pub mod report;
pub mod ring;
pub mod rings;
pub mod spectra;
pub mod tilt;
pub mod values;
pub mod untilt;
pub mod witt;
pub mod zariski;

pub use error::{Error, Result};
