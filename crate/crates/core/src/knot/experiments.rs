use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::laurent_ml::LaurentML;
use super::presets::KnotPreset;
use super::state::{knot_state, KnotState, StateOptions};
use crate::bt::{toeplitz_matrix_alt, TrigSymbol};
use crate::error::{Error, Result};
use crate::level::{ComplexStructure, LatticeVector, QuantizationLevel};
use crate::torus::default_grid;

/// Symbol `−(P(e^{−2πiq}, e^{−2πip}) + P(e^{2πiq}, e^{2πip}))`: the monomial
/// `m^α l^β` becomes `χ_{α,β}`, and each coefficient `c` lands as `−c` on
/// both `χ_{±(α,β)}`.
pub fn apoly_to_symbol(p: &LaurentML) -> TrigSymbol {
    TrigSymbol::from_terms(p.terms().flat_map(|(a, b, c)| {
        let v = LatticeVector::new(a, b);
        let w = Complex64::new(-(c as f64), 0.0);
        [(v, w), (-v, w)]
    }))
}

/// `‖T(f)·Z‖ / (‖T(f)‖·‖Z‖)` for the symbol `f` of `p`.
pub fn annihilation_residual(
    p: &LaurentML,
    state: &KnotState,
    cs: ComplexStructure,
    grid_n: Option<usize>,
) -> Result<f64> {
    let level = state.level();
    let f = apoly_to_symbol(p);
    let g = grid_n.unwrap_or_else(|| default_grid(level, f.max_frequency()));
    let t = toeplitz_matrix_alt(level, cs, &f, g)?;
    let tz = t.apply(state.coords()).norm();
    let denom = t.operator_norm() * state.norm();
    if denom == 0.0 {
        return Err(Error::InvalidArgument("zero operator or zero state".into()));
    }
    Ok((tz / denom).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AjOptions {
    /// Multiply the A-polynomial by `l − 1`.
    pub abelian_factor: bool,
    #[serde(flatten)]
    pub state: StateOptions,
}

impl Default for AjOptions {
    fn default() -> Self {
        Self {
            abelian_factor: true,
            state: StateOptions::default(),
        }
    }
}

/// Annihilation residual of a preset's A-polynomial symbol on its own knot state.
pub fn aj_residual(
    preset: KnotPreset,
    level: QuantizationLevel,
    cs: ComplexStructure,
    grid_n: Option<usize>,
    opts: AjOptions,
) -> Result<f64> {
    if level.r() < 2 {
        return Err(Error::InvalidArgument("annihilation residual needs r >= 2".into()));
    }
    let state = knot_state(preset, level, opts.state);
    annihilation_residual(&preset.a_polynomial(opts.abelian_factor), &state, cs, grid_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lv(r: u32) -> QuantizationLevel {
        QuantizationLevel::new(r).unwrap()
    }

    #[test]
    fn unknot_symbol() {
        let f = apoly_to_symbol(&"l-1".parse().unwrap());
        assert_eq!(f.coeff(LatticeVector::ZERO), Complex64::new(2.0, 0.0));
        assert_eq!(f.coeff(LatticeVector::new(0, 1)), Complex64::new(-1.0, 0.0));
        assert_eq!(f.coeff(LatticeVector::new(0, -1)), Complex64::new(-1.0, 0.0));
        assert_eq!(f.terms().count(), 3);
        let pt = crate::level::ModuliPoint::new(0.3, 0.7);
        assert!((f.evaluate(pt) - (2.0 - 2.0 * (2.0 * PI * 0.3).cos())).norm() < 1e-14);
    }

    #[test]
    fn constant_and_meridian() {
        assert_eq!(apoly_to_symbol(&LaurentML::constant(1)), TrigSymbol::constant(-2.0));
        assert_eq!(apoly_to_symbol(&LaurentML::m()), TrigSymbol::curve(LatticeVector::MU));
    }

    #[test]
    fn unknot_residual_closed_form() {
        // T(2 − 2cos 2πp) = 2 − e^{−π/2N}(L + L⁻¹) at τ = i, and the unknot state
        // is an eigenvector of L + L⁻¹ with eigenvalue 2cos(2π/N)
        let level = lv(10);
        let n = level.dim() as f64;
        let res = aj_residual(KnotPreset::Unknot, level, ComplexStructure::square(), None, AjOptions::default()).unwrap();
        let d = (-PI / (2.0 * n)).exp();
        let eig = 2.0 - 2.0 * d * (2.0 * PI / n).cos();
        let norm = 2.0 + 2.0 * d * (PI / n).cos();
        assert!((res - eig / norm).abs() < 1e-9, "{res} vs {}", eig / norm);
    }

    #[test]
    fn residual_is_normalized() {
        for k in KnotPreset::ALL {
            let r = aj_residual(k, lv(6), ComplexStructure::new(0.2, 1.1).unwrap(), None, AjOptions::default()).unwrap();
            assert!((0.0..=1.0).contains(&r));
        }
        assert!(aj_residual(KnotPreset::Unknot, lv(1), ComplexStructure::square(), None, AjOptions::default()).is_err());
    }
}
