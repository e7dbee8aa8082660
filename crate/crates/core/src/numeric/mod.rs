//! Low-level numeric kernels: special functions and quadrature.

pub mod quad;
pub mod special;

pub use quad::{adaptive_integrate, tanh_sinh, QuadratureSpec};
pub use special::{
    inverse_regularized_incomplete_beta, ln_gamma, log_beta_fn, regularized_incomplete_beta,
};
