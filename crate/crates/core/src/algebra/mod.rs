//! Exact quantum torus arithmetic and its realization by curve operators.

pub mod laurent;
pub mod qt;
pub mod represent;
pub mod span;

pub use laurent::LaurentA;
pub use qt::{qt_multiply, QTElement, SigmaInvariantElement};
pub use represent::{isomorphism_defect, represent, represent_element, verify_isomorphism, IsomorphismReport};
pub use span::span_closure;
