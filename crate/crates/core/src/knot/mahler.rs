use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::laurent_ml::LaurentML;
use crate::error::{Error, Result};

/// Values of `|P|` below this are nudged off the zero set.
pub const ZERO_FLOOR: f64 = 1e-14;

pub const MIN_GRID: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct MahlerReport {
    /// Extrapolated value.
    pub value: f64,
    /// `(grid_n, midpoint estimate)` for each resolution, coarse to fine.
    pub estimates: Vec<(usize, f64)>,
}

impl MahlerReport {
    /// `|estimate(finest) − estimate(second finest)|`.
    pub fn last_difference(&self) -> Option<f64> {
        let n = self.estimates.len();
        (n >= 2).then(|| (self.estimates[n - 1].1 - self.estimates[n - 2].1).abs())
    }
}

fn midpoint(p: &LaurentML, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let terms: Vec<(i64, i64, f64)> = p.terms().map(|(a, b, c)| (a, b, c as f64)).collect();
    let eval = |theta: f64, phi: f64| -> f64 {
        terms
            .iter()
            .map(|&(a, b, c)| Complex64::from_polar(c, 2.0 * PI * (a as f64 * theta + b as f64 * phi)))
            .sum::<Complex64>()
            .norm()
    };
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let theta = (i as f64 + 0.5) * h;
            let mut acc = 0.0;
            for j in 0..n {
                let phi = (j as f64 + 0.5) * h;
                let mut v = eval(theta, phi);
                if v < ZERO_FLOOR {
                    v = eval(theta + 0.5 * h, phi + 0.5 * h).max(ZERO_FLOOR);
                }
                acc += v.ln();
            }
            acc
        })
        .collect();
    rows.iter().sum::<f64>() * h * h
}

/// First-order Richardson step `2·e_fine − e_coarse` on the two finest grids.
/// Zeros of `P` on the torus leave an `O(1/n)` error; a cyclotomic factor such
/// as `l − 1` contributes exactly `ln 2 / n`, which this removes.
fn extrapolate(est: &[f64]) -> f64 {
    match est {
        [] => f64::NAN,
        [only] => *only,
        [.., coarse, fine] => 2.0 * fine - coarse,
    }
}

/// Mahler measure `∫∫ ln|P(e^{2πiθ}, e^{2πiφ})| dθ dφ` by the midpoint rule on
/// `grid_n·2^k` grids, `k = 0..=refinements`, then Richardson-extrapolated.
pub fn mahler_measure(p: &LaurentML, grid_n: usize, refinements: u32) -> Result<MahlerReport> {
    if p.is_zero() {
        return Err(Error::DegeneratePolynomial);
    }
    if grid_n < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid must be at least {MIN_GRID}, got {grid_n}")));
    }
    let estimates: Vec<(usize, f64)> = (0..=refinements)
        .map(|k| {
            let n = grid_n << k;
            (n, midpoint(p, n))
        })
        .collect();
    let raw: Vec<f64> = estimates.iter().map(|e| e.1).collect();
    Ok(MahlerReport {
        value: extrapolate(&raw),
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> LaurentML {
        s.parse().unwrap()
    }

    #[test]
    fn constants_and_monomials() {
        let r = mahler_measure(&poly("2"), 64, 2).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-12);
        let r = mahler_measure(&poly("3*l^2*m^-1"), 64, 1).unwrap();
        assert!((r.value - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn jensen_one_variable() {
        // m(x + c) = ln max(1, |c|)
        let r = mahler_measure(&poly("m+3"), 64, 2).unwrap();
        assert!((r.value - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn smyth_constant() {
        let r = mahler_measure(&poly("1+m+l"), 128, 2).unwrap();
        assert!((r.value - 0.3230659472194505).abs() < 1e-5, "{}", r.value);
        assert!(r.last_difference().unwrap() < 1e-3);
    }

    #[test]
    fn zero_on_grid_is_nudged() {
        // m − l vanishes on the diagonal, which the midpoint grid hits exactly
        let r = mahler_measure(&poly("m-l"), 64, 0).unwrap();
        assert!(r.value.is_finite());
    }

    #[test]
    fn preconditions() {
        assert!(matches!(mahler_measure(&LaurentML::zero(), 64, 1), Err(Error::DegeneratePolynomial)));
        assert!(matches!(mahler_measure(&poly("m"), 32, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn richardson_removes_first_order_error() {
        let est: Vec<f64> = [64.0, 128.0, 256.0].iter().map(|n| 1.0 + 3.0 / n).collect();
        assert!((extrapolate(&est) - 1.0).abs() < 1e-14);
        assert_eq!(extrapolate(&[1.0, 1.0, 1.0]), 1.0);
        assert_eq!(extrapolate(&[0.5]), 0.5);
    }

    #[test]
    fn cyclotomic_factor_has_zero_measure() {
        let r = mahler_measure(&poly("l-1"), 64, 2).unwrap();
        assert!(r.value.abs() < 1e-12, "{}", r.value);
        // the raw midpoint estimate is biased by exactly ln 2 / n
        assert!((r.estimates[0].1 - 2f64.ln() / 64.0).abs() < 1e-12);
    }
}
