//! Berezin-Toeplitz quantization of trigonometric symbols and kernel diagnostics.

pub mod checks;
pub mod kernel;
pub mod symbol;
pub mod toeplitz;

pub use checks::{
    linearity_defect, norm_limit_check, successive_ratios, symbol_residual, NormLimitReport, NormRow, ResidualRow,
};
pub use kernel::{
    kernel_decay_check, kernel_gaussian_check, kernel_trace, ls_slope, projector_kernel_log_norm_mp,
    projector_kernel_norm, DecayReport, GaussianReport, GaussianRow, KernelSample, GAUSSIAN_BASE, NEAR_DIAGONAL,
};
pub use symbol::TrigSymbol;
pub use toeplitz::{expected_trace, toeplitz_family, toeplitz_matrix, toeplitz_matrix_alt};
pub use crate::operator::operator_norm;
