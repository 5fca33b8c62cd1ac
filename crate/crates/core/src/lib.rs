//! Modular data, modular invariants and extensions for rational `c = 1`
//! bosons, their orbifolds and `SO(N)` at level 2.

pub mod characters;
pub mod cli;
pub mod error;
pub mod extension;
pub mod fusion;
pub mod invariants;
pub mod io;
pub mod lie_data;
pub mod numerics;
pub mod spectra;

pub use error::{Error, Result};
