use num_complex::Complex64;

use super::symbol::TrigSymbol;
use crate::error::{Error, Result};
use crate::level::{ComplexStructure, QuantizationLevel};
use crate::operator::{Basis, OperatorMatrix};
use crate::torus::{min_grid, restrict_alternating, ThetaGrid};

/// Toeplitz operator `Π M_f` in the full basis, by trapezoid quadrature on a
/// `grid_n × grid_n` grid.
pub fn toeplitz_matrix(
    level: QuantizationLevel,
    cs: ComplexStructure,
    f: &TrigSymbol,
    grid_n: usize,
) -> Result<OperatorMatrix> {
    let min = min_grid(level, f.max_frequency());
    if grid_n < min {
        return Err(Error::GridTooCoarse { grid_n, min });
    }
    let terms: Vec<_> = f.terms().collect();
    let m = ThetaGrid::new(level, cs, grid_n).integrate(&terms);
    OperatorMatrix::new(level, Basis::Full, m)
}

/// Toeplitz operator of an involution-even symbol on the alternating space.
pub fn toeplitz_matrix_alt(
    level: QuantizationLevel,
    cs: ComplexStructure,
    f: &TrigSymbol,
    grid_n: usize,
) -> Result<OperatorMatrix> {
    if !f.is_even() {
        return Err(Error::SymbolNotEven);
    }
    restrict_alternating(&toeplitz_matrix(level, cs, f, grid_n)?)
}

/// Several Toeplitz operators sharing one theta grid.
pub fn toeplitz_family(
    level: QuantizationLevel,
    cs: ComplexStructure,
    symbols: &[TrigSymbol],
    grid_n: usize,
) -> Result<Vec<OperatorMatrix>> {
    let maxf = symbols.iter().map(TrigSymbol::max_frequency).max().unwrap_or(0);
    let min = min_grid(level, maxf);
    if grid_n < min {
        return Err(Error::GridTooCoarse { grid_n, min });
    }
    let grid = ThetaGrid::new(level, cs, grid_n);
    symbols
        .iter()
        .map(|f| {
            let terms: Vec<_> = f.terms().collect();
            OperatorMatrix::new(level, Basis::Full, grid.integrate(&terms))
        })
        .collect()
}

/// `(N/4π)·∫ f ω = N·mean(f)`, what the trace of the Toeplitz operator should approach.
pub fn expected_trace(level: QuantizationLevel, f: &TrigSymbol) -> Complex64 {
    f.mean() * level.dim() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::level::LatticeVector;
    use crate::torus::{curve_operator_full, default_grid, translation_matrix};

    fn lv(r: u32) -> QuantizationLevel {
        QuantizationLevel::new(r).unwrap()
    }

    #[test]
    fn constant_symbol_is_identity() {
        let cs = ComplexStructure::square();
        for r in [1, 5, 10] {
            let level = lv(r);
            let t = toeplitz_matrix(level, cs, &TrigSymbol::constant(1.0), 8 * level.dim()).unwrap();
            assert!(t.max_abs_diff(&OperatorMatrix::identity(level, Basis::Full)) < 1e-8);
        }
        let alt = toeplitz_matrix_alt(lv(4), cs, &TrigSymbol::constant(1.0), 128).unwrap();
        assert!(alt.max_abs_diff(&OperatorMatrix::identity(lv(4), Basis::Alternating)) < 1e-8);
    }

    #[test]
    fn meridian_character_is_damped_clock() {
        // at τ = i the quantized character is exactly e^{−π/2N}·M
        let level = lv(3);
        let cs = ComplexStructure::square();
        let t = toeplitz_matrix(level, cs, &TrigSymbol::chi(LatticeVector::new(1, 0)), 128).unwrap();
        let m = translation_matrix(level, LatticeVector::new(1, 0));
        let damp = (-PI / (2.0 * level.dim() as f64)).exp();
        assert!(t.max_abs_diff(&m.scale(Complex64::new(damp, 0.0))) < 1e-10);
        for l in 0..7 {
            let diag = t.get(l, l).norm();
            let off = (0..7).filter(|&k| k != l).map(|k| t.get(k, l).norm()).fold(0.0, f64::max);
            assert!(diag >= 10.0 * off.max(1e-300));
        }
    }

    #[test]
    fn longitude_character_is_damped_shift() {
        let level = lv(4);
        let cs = ComplexStructure::new(0.0, 1.7).unwrap();
        let t = toeplitz_matrix(level, cs, &TrigSymbol::chi(LatticeVector::new(0, 1)), 128).unwrap();
        let l = translation_matrix(level, LatticeVector::new(0, 1));
        let damp = (-PI * 1.7 / (2.0 * level.dim() as f64)).exp();
        assert!(t.max_abs_diff(&l.scale(Complex64::new(damp, 0.0))) < 1e-10);
    }

    #[test]
    fn curve_symbol_near_curve_operator() {
        let cs = ComplexStructure::square();
        let level = lv(1);
        let t = toeplitz_matrix_alt(level, cs, &TrigSymbol::curve(LatticeVector::new(1, 0)), 64).unwrap();
        assert!((t.get(0, 0).re - 1.0).abs() < 0.5);
        let level = lv(2);
        let t = toeplitz_matrix_alt(level, cs, &TrigSymbol::curve(LatticeVector::new(0, 1)), 64).unwrap();
        let want = crate::torus::restrict_alternating(&curve_operator_full(level, LatticeVector::new(0, 1))).unwrap();
        assert!(t.max_abs_diff(&want) < 0.5);
    }

    #[test]
    fn preconditions() {
        let cs = ComplexStructure::square();
        let level = lv(5);
        let f = TrigSymbol::curve(LatticeVector::new(3, 0));
        assert!(matches!(
            toeplitz_matrix(level, cs, &f, 49),
            Err(Error::GridTooCoarse { grid_n: 49, min: 50 })
        ));
        assert!(toeplitz_matrix(level, cs, &f, 50).is_ok());
        assert!(matches!(
            toeplitz_matrix_alt(level, cs, &TrigSymbol::chi(LatticeVector::new(1, 0)), 128),
            Err(Error::SymbolNotEven)
        ));
        assert_eq!(default_grid(level, 3), 134);
    }
}
