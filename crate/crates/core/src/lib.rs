//! Eigenvalue-cutoff topological conformal field theories on flat tori.
//!
//! Cutoff heat kernels label the edges of metrized ribbon graphs; vertices
//! wedge and trace, and integrating over cubical chains of metrics gives
//! finite operators on the truncated eigenform space. The [`verify`] module
//! machine-checks the functor, chain-map and additivity identities.

pub mod engine;
pub mod error;
pub mod expsum;
pub mod graph;
pub mod kernel;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
