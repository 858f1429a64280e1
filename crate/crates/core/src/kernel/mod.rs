//! Cutoff heat kernels and propagators as multi-leg forms with
//! exponential-sum coefficients and anticommuting `dt_e` generators.

mod heat;
mod metform;

pub use heat::{convolve, cutoff_kernel, l_kernel, propagator, Propagator, TwoPointForm, X, Y};
pub(crate) use metform::{koszul_sign, parity_sign};
pub use metform::{DtSet, Leg, MetForm, PointId, Term};
