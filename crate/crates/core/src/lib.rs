//! Correlation transfer between two uncoupled phase oscillators driven by
//! partially correlated white noise.
//!
//! Analytic side: the PRC family ([`prc`]), the stationary phase-difference
//! density ([`density`]), long-window ([`longtime`]) and short-window
//! ([`shorttime`]) output correlations. Simulation side: [`montecarlo`].

pub mod density;
pub mod error;
pub mod longtime;
pub mod montecarlo;
pub mod prc;
pub mod quadrature;
pub mod shorttime;

pub use error::{Error, Result};
pub use prc::PrcShape;
