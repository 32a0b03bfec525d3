//! Spectral networks of polynomial cubic differentials on the Riemann sphere.
//!
//! The engine traces real trajectories of `e^{-3iθ} φ`, grows the iterative
//! network of newborn trajectories, assembles spectral cores, detects saddle
//! connections and critical tripods, classifies the chambers of the normalized
//! degree-three family and checks wall-crossing identities in exact arithmetic.

pub mod bps;
pub mod config;
pub mod degeneration;
pub mod differential;
pub mod error;
pub mod geometry;
pub mod io;
mod par;
pub mod poly;
pub mod quadrature;
pub mod render;
pub mod spectralcore;
pub mod trajectory;
pub mod twisted;
pub mod walls;
pub mod network;

pub use config::Tolerances;
pub use differential::{CubicDifferential, Phase, Sign};
pub use error::{Error, Result};

/// Complex double used throughout the engine.
pub type C64 = num_complex::Complex64;
