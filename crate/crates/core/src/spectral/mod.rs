//! Differential forms on the flat torus in an explicit Laplacian eigenbasis:
//! `d`, `d*`, `⋆`, `H`, wedge, trace and the `L²` inner product.

mod basis;
mod form;

pub use basis::{
    enumerate_basis, is_realized, torus_volume, Basis, BasisForm, CovectorSet, EigenvalueSet, FourierMode, Phase,
    MAX_DIM,
};
pub use form::SpectralForm;

/// Numerical tolerances shared by the engine and the checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Coefficients below this are treated as zero.
    pub drop: f64,
    /// Relative tolerance for comparing computed quantities.
    pub compare: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            drop: 1e-12,
            compare: 1e-9,
        }
    }
}
