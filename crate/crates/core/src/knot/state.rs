use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jones::{colored_jones_mp, jones_precision};
use super::presets::KnotPreset;
use crate::level::QuantizationLevel;
use crate::mp::{self, MpComplex, MpContext};
use crate::torus::AltVector;

/// How colored Jones values are paired with the `Φ_n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Coordinate `J′_n`.
    Flat,
    /// Coordinate `[n]·J′_n`, `[n] = sin(2πn/N)/sin(2π/N)`.
    #[default]
    QuantumDimension,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateOptions {
    pub weighting: Weighting,
    /// Use the mirror knot.
    pub mirror: bool,
}

/// Knot state in the alternating space, coordinate `n − 1` on `Φ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotState {
    level: QuantizationLevel,
    coords: AltVector,
}

impl KnotState {
    pub fn level(&self) -> QuantizationLevel {
        self.level
    }

    pub fn coords(&self) -> &AltVector {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }
}

/// Multiprecision coordinates, for norms that leave the f64 range.
pub(crate) fn state_coords_mp(
    ctx: &mut MpContext,
    preset: KnotPreset,
    level: QuantizationLevel,
    opts: StateOptions,
) -> Vec<MpComplex> {
    let table = ctx.unit_circle_table(level.dim());
    let jones = colored_jones_mp(ctx, &table, preset, level, opts.mirror);
    match opts.weighting {
        Weighting::Flat => jones,
        Weighting::QuantumDimension => jones
            .iter()
            .enumerate()
            .map(|(i, j)| {
                let qdim = ctx.div(&table[i + 1].im, &table[1].im);
                ctx.cscale(j, &qdim)
            })
            .collect(),
    }
}

pub fn knot_state(preset: KnotPreset, level: QuantizationLevel, opts: StateOptions) -> KnotState {
    let mut ctx = MpContext::new(jones_precision(level));
    let coords = state_coords_mp(&mut ctx, preset, level, opts);
    KnotState {
        level,
        coords: AltVector::from_iterator(
            coords.len(),
            coords.iter().map(|z| Complex64::new(mp::to_f64(&z.re), mp::to_f64(&z.im))),
        ),
    }
}

/// `ln Σ_n |coord_n|²` without leaving multiprecision.
pub fn log_norm_sqr(preset: KnotPreset, level: QuantizationLevel, opts: StateOptions) -> f64 {
    let mut ctx = MpContext::new(jones_precision(level));
    let coords = state_coords_mp(&mut ctx, preset, level, opts);
    let mut total = ctx.zero();
    for z in &coords {
        total = ctx.add(&total, &ctx.cnorm_sqr(z));
    }
    mp::ln_abs(&total)
}
