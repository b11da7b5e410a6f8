use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::presets::KnotPreset;
use super::state::{log_norm_sqr, StateOptions};
use crate::error::{Error, Result};
use crate::level::QuantizationLevel;

/// `ζ(2k)` for `k ≥ 1`: exact at `k = 1`, otherwise a direct sum with an
/// Euler-Maclaurin tail.
fn zeta_even(k: u32) -> f64 {
    if k == 1 {
        return PI * PI / 6.0;
    }
    let s = 2 * k as i32;
    const M: usize = 64;
    let head: f64 = (1..M).rev().map(|n| (n as f64).powi(-s)).sum();
    let m = M as f64;
    let tail = m.powi(1 - s) / (s - 1) as f64 + 0.5 * m.powi(-s) + s as f64 / 12.0 * m.powi(-s - 1);
    head + tail
}

/// Clausen function `Cl₂(θ) = Im Li₂(e^{iθ})` for `0 < θ < 2π`, from
/// `Cl₂(θ) = θ − θ ln θ + Σ_k |B_{2k}| θ^{2k+1} / (2k (2k+1)!)`
/// with `|B_{2k}|/(2k)! = 2ζ(2k)/(2π)^{2k}`.
pub fn clausen2(theta: f64) -> f64 {
    assert!(theta > 0.0 && theta < 2.0 * PI, "clausen2 argument outside (0, 2π)");
    // the series converges for θ < 2π but slowly near it; reflect
    if theta > PI {
        return -clausen2(2.0 * PI - theta);
    }
    let mut sum = theta - theta * theta.ln();
    let x = theta / (2.0 * PI);
    let mut pow = theta;
    for k in 1..200u32 {
        pow *= x * x;
        let kk = 2.0 * k as f64;
        // 2ζ(2k)/(2π)^{2k} · θ^{2k+1} / (2k(2k+1)) with pow = θ·(θ/2π)^{2k}
        let term = 2.0 * zeta_even(k) * pow / (kk * (kk + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hyperbolic volume of the complement: 0 for the unknot and trefoil,
/// `2·Cl₂(π/3)` for the figure-eight knot.
pub fn simplicial_volume_oracle(preset: KnotPreset) -> f64 {
    match preset {
        KnotPreset::Unknot | KnotPreset::Trefoil => 0.0,
        KnotPreset::FigureEight => 2.0 * clausen2(PI / 3.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeRow {
    pub r: u32,
    pub value: f64,
}

/// `(π/r)·ln ‖Z′_r‖²` at each level.
pub fn volume_sequence(
    preset: KnotPreset,
    levels: &[QuantizationLevel],
    opts: StateOptions,
) -> Result<Vec<VolumeRow>> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("levels must be strictly increasing".into()));
    }
    Ok(levels
        .par_iter()
        .map(|&lv| VolumeRow {
            r: lv.r(),
            value: PI / lv.r() as f64 * log_norm_sqr(preset, lv, opts),
        })
        .collect())
}

/// Least-squares fit `value ≈ v + c·ln(r)/r`, returning `(v, c)`.
pub fn volume_fit(rows: &[VolumeRow]) -> Result<(f64, f64)> {
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("fit needs at least two levels".into()));
    }
    let xs: Vec<f64> = rows.iter().map(|row| (row.r as f64).ln() / row.r as f64).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = rows.iter().map(|row| row.value).sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(rows).map(|(x, row)| (x - mx) * (row.value - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit needs distinct levels".into()));
    }
    let c = sxy / sxx;
    Ok((my - c * mx, c))
}
