//! Numerical core for the microtubule kink-soliton model and its open-system
//! extensions.
//!
//! Everything is SI internally unless a type says otherwise. Quantum modules
//! use ħ = 1 and take energies in the units of the supplied Hamiltonian.

pub mod blackhole;
pub mod decoherence;
pub mod error;
pub mod kink;
pub mod numerics;
pub mod rg;
pub mod tdva;
pub mod units;

pub use error::{Error, Result};
