//! Minimum-guesswork discrimination of finite quantum-state ensembles.
//!
//! The crate evaluates guesswork and error probability for a given
//! measurement, computes the optimal values by semidefinite programming,
//! certifies candidate measurements, and checks the analytic bounds that
//! relate guesswork to entropic quantities.

pub mod bounds;
pub mod criteria;
pub mod ensemble;
pub mod error;
pub mod fixtures;
pub mod geo_uniform;
pub mod guesswork;
pub mod hermitian;
pub mod io;
pub mod optim;
pub mod par;
pub mod repro;
pub mod sdp;
pub mod search;

pub use ensemble::{Distribution, Ensemble, Povm};
pub use error::{Error, Result};
pub use guesswork::GuessStrategy;
pub use hermitian::HermitianOperator;
