use rayon::prelude::*;
use serde::Serialize;

use super::symbol::TrigSymbol;
use super::toeplitz::{toeplitz_family, toeplitz_matrix_alt};
use crate::error::{Error, Result};
use crate::level::{ComplexStructure, LatticeVector, QuantizationLevel};
use crate::operator::OperatorMatrix;
use crate::torus::{curve_operator_full, default_grid, restrict_alternating};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormRow {
    pub r: u32,
    pub norm: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormLimitReport {
    pub sup: f64,
    pub rows: Vec<NormRow>,
}

impl NormLimitReport {
    pub fn gaps(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.gap).collect()
    }
}

/// `|‖T(f)‖ − sup|f||` on the alternating space at each level. The grid is
/// the default `max(128, 8N) + 2·freq` unless given.
pub fn norm_limit_check(
    cs: ComplexStructure,
    f: &TrigSymbol,
    levels: &[QuantizationLevel],
    grid_n: Option<usize>,
) -> Result<NormLimitReport> {
    if !f.is_even() {
        return Err(Error::SymbolNotEven);
    }
    if !f.is_real() {
        return Err(Error::SymbolNotReal);
    }
    let sup = f.sup_abs();
    let rows = levels
        .par_iter()
        .map(|&level| {
            let g = grid_n.unwrap_or_else(|| default_grid(level, f.max_frequency()));
            let t = toeplitz_matrix_alt(level, cs, f, g)?;
            let norm = t.operator_norm();
            Ok(NormRow {
                r: level.r(),
                norm,
                gap: (norm - sup).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormLimitReport { sup, rows })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualRow {
    pub r: u32,
    pub residual: f64,
}

/// `‖T_{r+1/2}(v) − T(F_v)‖` on the alternating space at each level.
pub fn symbol_residual(
    levels: &[QuantizationLevel],
    cs: ComplexStructure,
    v: LatticeVector,
    grid_n: Option<usize>,
) -> Result<Vec<ResidualRow>> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("levels must be strictly increasing".into()));
    }
    let f = TrigSymbol::curve(v);
    levels
        .par_iter()
        .map(|&level| {
            let g = grid_n.unwrap_or_else(|| default_grid(level, f.max_frequency()));
            let curve = restrict_alternating(&curve_operator_full(level, v))?;
            let t = toeplitz_matrix_alt(level, cs, &f, g)?;
            Ok(ResidualRow {
                r: level.r(),
                residual: (&curve - &t).operator_norm(),
            })
        })
        .collect()
}

/// Ratios `residual(r_i)/residual(r_{i+1})`.
pub fn successive_ratios(rows: &[ResidualRow]) -> Vec<f64> {
    rows.windows(2).map(|w| w[0].residual / w[1].residual).collect()
}

/// Toeplitz operators of `f`, `g` and `αf + βg` on one grid, returning the
/// largest entry of `T(αf + βg) − αT(f) − βT(g)`.
pub fn linearity_defect(
    level: QuantizationLevel,
    cs: ComplexStructure,
    f: &TrigSymbol,
    g: &TrigSymbol,
    alpha: f64,
    beta: f64,
    grid_n: usize,
) -> Result<f64> {
    use num_complex::Complex64;
    let a = Complex64::new(alpha, 0.0);
    let b = Complex64::new(beta, 0.0);
    let combo = &f.scale(a) + &g.scale(b);
    let ts = toeplitz_family(level, cs, &[f.clone(), g.clone(), combo], grid_n)?;
    let lin: OperatorMatrix = &ts[0].scale(a) + &ts[1].scale(b);
    Ok(ts[2].max_abs_diff(&lin))
}
