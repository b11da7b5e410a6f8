use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::qt::{QTElement, SigmaInvariantElement};
use crate::error::{Error, Result};
use crate::level::QuantizationLevel;
use crate::operator::{Basis, OperatorMatrix};
use crate::torus::{compress_alternating, translation_entries};

/// Realize an invariant element on the alternating space.
///
/// `e_{a,b} + e_{−a,−b}` goes to `−T_{r+1/2}(λ_{a,b})`, which is the same as
/// sending `e_{a,b}` to the translation `T(a,b)` on the full space and
/// compressing; the coefficients are specialized at `A = exp(iπ/(2r+1))`.
/// Products come out reversed: `represent(x∗y) = represent(y)·represent(x)`.
pub fn represent(level: QuantizationLevel, x: &SigmaInvariantElement) -> OperatorMatrix {
    let n = level.dim();
    let mut full = DMatrix::<Complex64>::zeros(n, n);
    for (v, c) in x.as_element().terms() {
        let c = c.evaluate(level);
        for (row, col, val) in translation_entries(level, v) {
            full[(row, col)] += c * val;
        }
    }
    OperatorMatrix::from_parts(level, Basis::Alternating, compress_alternating(&full, level.alt_dim()))
}

/// [`represent`] for an element not yet known to be invariant.
pub fn represent_element(level: QuantizationLevel, x: &QTElement) -> Result<OperatorMatrix> {
    let x = SigmaInvariantElement::new(x.clone())?;
    Ok(represent(level, &x))
}

/// Largest entry of `represent(x∗y) − represent(y)·represent(x)`.
pub fn isomorphism_defect(level: QuantizationLevel, x: &SigmaInvariantElement, y: &SigmaInvariantElement) -> f64 {
    let xy = represent(level, &(x * y));
    let rx = represent(level, x);
    let ry = represent(level, y);
    xy.max_abs_diff(&(&ry * &rx))
}

#[derive(Debug, Clone, Serialize)]
pub struct IsomorphismReport {
    pub r: u32,
    pub trials: usize,
    pub support_bound: i64,
    pub max_deviation: f64,
}

/// Tolerance on `‖represent(x∗y) − represent(y)·represent(x)‖_max`.
pub const ISOMORPHISM_TOL: f64 = 1e-10;

/// Check the reversed-product law on `trials` seeded random pairs.
pub fn verify_isomorphism(
    level: QuantizationLevel,
    trials: usize,
    support_bound: i64,
    seed: u64,
) -> Result<IsomorphismReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if support_bound < 0 {
        return Err(Error::InvalidArgument("support bound must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let x = SigmaInvariantElement::random(&mut rng, support_bound);
        let y = SigmaInvariantElement::random(&mut rng, support_bound);
        let d = isomorphism_defect(level, &x, &y);
        if !(d < ISOMORPHISM_TOL) {
            return Err(Error::IsomorphismViolation {
                x: Box::new(x.into_element()),
                y: Box::new(y.into_element()),
                deviation: d,
            });
        }
        worst = worst.max(d);
    }
    Ok(IsomorphismReport {
        r: level.r(),
        trials,
        support_bound,
        max_deviation: worst,
    })
}
