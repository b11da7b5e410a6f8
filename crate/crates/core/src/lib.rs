//! SO(3) geometric quantization of the torus.
//!
//! The crate realizes the level-`r` quantum Hilbert space of the torus in its
//! theta basis `(Ψ_l)` and the alternating subspace spanned by
//! `Φ_l = (Ψ_l − Ψ_{−l})/√2`, together with:
//!
//! - translation and curve operators as explicit matrices ([`torus`]),
//! - exact arithmetic in the quantum torus and its representation on curve
//!   operators ([`algebra`]),
//! - Berezin-Toeplitz quantization of trigonometric symbols, Szegő kernel
//!   diagnostics and symbol/norm asymptotics ([`bt`]),
//! - A-polynomials, colored Jones values, knot states, annihilation residuals,
//!   volume sequences and Mahler measures ([`knot`]).
//!
//! Everything is a pure function of its inputs. Level sweeps and quadrature
//! rows run on rayon but reductions happen in index order, so results do not
//! depend on the thread count.

pub mod algebra;
pub mod bt;
pub mod error;
pub mod knot;
pub mod level;
pub mod mp;
pub mod operator;
pub mod report;
pub mod torus;

pub use error::{Error, Result};
pub use level::{ComplexStructure, LatticeVector, ModuliPoint, QuantizationLevel};
pub use operator::{Basis, OperatorMatrix};

pub use num_complex::Complex64;
