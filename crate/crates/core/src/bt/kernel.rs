//! Pointwise norm of the Szegő projector kernel `Π(z, w) = Σ_l Ψ_l(z) ⊗ Ψ̄_l(w)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::level::{ComplexStructure, ModuliPoint, QuantizationLevel};
use crate::mp::{self, MpComplex, MpContext};
use crate::torus::theta_point_evaluate;

/// One evaluation of the kernel norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSample {
    pub r: u32,
    pub z: ModuliPoint,
    pub w: ModuliPoint,
    pub norm: f64,
}

/// `‖Π(z, w)‖` from f64 theta values. Accurate relative to the diagonal
/// value `N/4π`, not relative to its own size once it is tiny.
pub fn projector_kernel_norm(
    level: QuantizationLevel,
    cs: ComplexStructure,
    z: ModuliPoint,
    w: ModuliPoint,
    tol: f64,
) -> Result<f64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..level.dim() as i64 {
        let a = theta_point_evaluate(level, cs, l, z, tol)?.weighted;
        let b = theta_point_evaluate(level, cs, l, w, tol)?.weighted;
        sum += a * b.conj();
    }
    Ok(sum.norm())
}

/// `∫ ‖Π(z, z)‖ ω` by the trapezoid rule on a `grid_n × grid_n` grid.
pub fn kernel_trace(level: QuantizationLevel, cs: ComplexStructure, grid_n: usize, tol: f64) -> Result<f64> {
    if grid_n == 0 {
        return Err(Error::InvalidArgument("grid must be nonempty".into()));
    }
    let rows: Result<Vec<f64>> = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..grid_n {
                let pt = ModuliPoint::new(i as f64 / grid_n as f64, j as f64 / grid_n as f64);
                acc += projector_kernel_norm(level, cs, pt, pt, tol)?;
            }
            Ok(acc)
        })
        .collect();
    let total: f64 = rows?.iter().sum();
    Ok(total * 4.0 * PI / (grid_n * grid_n) as f64)
}

/// Kernel norm and its deviation from the Gaussian model
/// `C²·√(N/2b)·√(W(q_z) W(q_w))·|exp(−(πN/2b)(z − w̄)²)|`, `C = (N/4π)^{1/4}`,
/// both from multiprecision sums.
struct MpKernel {
    ln_norm: f64,
    rel_error: f64,
}

fn mp_precision(level: QuantizationLevel) -> usize {
    128 + 4 * level.dim()
}

/// `Σ_{k ≡ l} exp(2πi[pk + a(qk + k²/2N)] − (πb/N)(Nq + k)²)` for every residue `l`.
fn mp_theta_sums(ctx: &mut MpContext, level: QuantizationLevel, cs: ComplexStructure, pt: ModuliPoint) -> Vec<MpComplex> {
    let ni = level.dim() as i64;
    let n = ni as f64;
    let b = cs.tau_im();
    // Gaussian exponent below −(prec·ln2 + 40) is invisible at this precision
    let cut = ctx.prec() as f64 * std::f64::consts::LN_2 + 40.0;
    let half_width = (cut * n / (PI * b)).sqrt().ceil() as i64 + 1;
    let centre = (-n * pt.q).round() as i64;

    let pi = ctx.pi();
    let two_pi = ctx.mul(&ctx.int(2), &pi);
    let pb_over_n = ctx.div(&ctx.mul(&pi, &ctx.real(b)), &ctx.int(ni));
    let nq = ctx.mul(&ctx.int(ni), &ctx.real(pt.q));
    let p = ctx.real(pt.p);
    let q = ctx.real(pt.q);
    let a = ctx.real(cs.tau_re());
    let two_n = ctx.int(2 * ni);

    let mut sums = vec![ctx.czero(); level.dim()];
    for k in centre - half_width..=centre + half_width {
        let kk = ctx.int(k);
        let x = ctx.add(&nq, &kk);
        let g = ctx.mul(&pb_over_n, &ctx.mul(&x, &x));
        let g = ctx.sub(&ctx.zero(), &g);
        // a(qk + k²/2N)
        let quad = ctx.add(&ctx.mul(&q, &kk), &ctx.div(&ctx.mul(&kk, &kk), &two_n));
        let phase = ctx.mul(&two_pi, &ctx.add(&ctx.mul(&p, &kk), &ctx.mul(&a, &quad)));
        let term = ctx.cexp(&g, &phase);
        let l = k.rem_euclid(ni) as usize;
        sums[l] = ctx.cadd(&sums[l], &term);
    }
    sums
}

fn mp_kernel(level: QuantizationLevel, cs: ComplexStructure, z: ModuliPoint, w: ModuliPoint) -> MpKernel {
    let mut ctx = MpContext::new(mp_precision(level));
    let sz = mp_theta_sums(&mut ctx, level, cs, z);
    let sw = mp_theta_sums(&mut ctx, level, cs, w);
    let mut pi_zw = ctx.czero();
    for (a, b) in sz.iter().zip(&sw) {
        pi_zw = ctx.cadd(&pi_zw, &ctx.cmul_conj(a, b));
    }
    let norm = ctx.cabs(&pi_zw);

    // ln G = ½ ln(N/2b) − (πN/2b)(u² − v²) − πNb(q_z² + q_w²),
    // u = Δp + aΔq, v = b(q_z + q_w)
    let n = level.dim() as i64;
    let b = ctx.real(cs.tau_im());
    let pi = ctx.pi();
    let u = ctx.add(
        &ctx.sub(&ctx.real(z.p), &ctx.real(w.p)),
        &ctx.mul(&ctx.real(cs.tau_re()), &ctx.sub(&ctx.real(z.q), &ctx.real(w.q))),
    );
    let v = ctx.mul(&b, &ctx.add(&ctx.real(z.q), &ctx.real(w.q)));
    let pn = ctx.mul(&pi, &ctx.int(n));
    let c1 = ctx.div(&pn, &ctx.mul(&ctx.int(2), &b));
    let quad = ctx.sub(&ctx.mul(&u, &u), &ctx.mul(&v, &v));
    let qz2 = ctx.mul(&ctx.real(z.q), &ctx.real(z.q));
    let qw2 = ctx.mul(&ctx.real(w.q), &ctx.real(w.q));
    let weight = ctx.mul(&ctx.mul(&pn, &b), &ctx.add(&qz2, &qw2));
    let expo = ctx.sub(&ctx.sub(&ctx.zero(), &ctx.mul(&c1, &quad)), &weight);
    let amp = ctx.sqrt(&ctx.div(&ctx.int(n), &ctx.mul(&ctx.int(2), &b)));
    let e = ctx.exp(&expo);
    let gauss = ctx.mul(&amp, &e);

    let ratio = ctx.div(&norm, &gauss);
    let rel = ctx.sub(&ratio, &ctx.int(1));
    let prefactor = (level.dim() as f64 / (4.0 * PI)).sqrt() * (cs.tau_im() / (2.0 * PI)).sqrt();
    MpKernel {
        ln_norm: mp::ln_abs(&norm) + prefactor.ln(),
        rel_error: mp::to_f64(&rel).abs(),
    }
}

/// `‖Π(z, w)‖` in multiprecision, returned as its natural logarithm so that
/// values far below the f64 range stay meaningful.
pub fn projector_kernel_log_norm_mp(
    level: QuantizationLevel,
    cs: ComplexStructure,
    z: ModuliPoint,
    w: ModuliPoint,
) -> f64 {
    mp_kernel(level, cs, z, w).ln_norm
}

/// Base point for the near-diagonal Gaussian comparison.
pub const GAUSSIAN_BASE: ModuliPoint = ModuliPoint { p: 0.5, q: 0.5 };

/// Largest `|dp|`, `|dq|` treated as near-diagonal.
pub const NEAR_DIAGONAL: f64 = 0.1;

#[derive(Debug, Clone, Serialize)]
pub struct GaussianRow {
    pub r: u32,
    pub dp: f64,
    pub dq: f64,
    /// `None` when the offset is outside the near-diagonal neighbourhood.
    pub rel_error: Option<f64>,
}

impl GaussianRow {
    pub fn out_of_neighborhood(&self) -> bool {
        self.rel_error.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussianReport {
    pub rows: Vec<GaussianRow>,
}

impl GaussianReport {
    /// Largest relative error at level `r` over in-neighbourhood offsets.
    pub fn max_rel_error(&self, r: u32) -> Option<f64> {
        self.rows
            .iter()
            .filter(|row| row.r == r)
            .filter_map(|row| row.rel_error)
            .reduce(f64::max)
    }
}

/// Compare `‖Π(z, z + offset)‖` with the Gaussian model at each level, with
/// `z` the base point [`GAUSSIAN_BASE`].
pub fn kernel_gaussian_check(
    levels: &[QuantizationLevel],
    cs: ComplexStructure,
    offsets: &[(f64, f64)],
) -> GaussianReport {
    let jobs: Vec<(QuantizationLevel, (f64, f64))> = levels
        .iter()
        .flat_map(|&lv| offsets.iter().map(move |&o| (lv, o)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(level, (dp, dq))| {
            let rel_error = if dp.abs() > NEAR_DIAGONAL || dq.abs() > NEAR_DIAGONAL {
                None
            } else {
                let w = ModuliPoint {
                    p: GAUSSIAN_BASE.p + dp,
                    q: GAUSSIAN_BASE.q + dq,
                };
                Some(mp_kernel(level, cs, GAUSSIAN_BASE, w).rel_error)
            };
            GaussianRow {
                r: level.r(),
                dp,
                dq,
                rel_error,
            }
        })
        .collect();
    GaussianReport { rows }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub separation: f64,
    /// `(r, ln ‖Π(z, w)‖)`.
    pub log_norms: Vec<(u32, f64)>,
    pub slope: f64,
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slope of `ln ‖Π(z, w)‖` against `r` for `z = (0, 0)`, `w = (0, separation)`.
pub fn kernel_decay_check(levels: &[QuantizationLevel], cs: ComplexStructure, separation: f64) -> Result<DecayReport> {
    if !(0.1..=0.5).contains(&separation) {
        return Err(Error::InvalidArgument(format!(
            "separation must lie in [0.1, 0.5], got {separation}"
        )));
    }
    if levels.len() < 3 || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "need at least three strictly increasing levels".into(),
        ));
    }
    let z = ModuliPoint::new(0.0, 0.0);
    let w = ModuliPoint::new(0.0, separation);
    let log_norms: Vec<(u32, f64)> = levels
        .par_iter()
        .map(|&lv| (lv.r(), projector_kernel_log_norm_mp(lv, cs, z, w)))
        .collect();
    let xs: Vec<f64> = log_norms.iter().map(|&(r, _)| r as f64).collect();
    let ys: Vec<f64> = log_norms.iter().map(|&(_, y)| y).collect();
    let slope = ls_slope(&xs, &ys);
    if !(slope < 0.0) {
        return Err(Error::NonDecaying { slope });
    }
    Ok(DecayReport {
        separation,
        log_norms,
        slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(r: u32) -> QuantizationLevel {
        QuantizationLevel::new(r).unwrap()
    }

    #[test]
    fn diagonal_is_flat() {
        let level = lv(20);
        let cs = ComplexStructure::square();
        let want = level.dim() as f64 / (4.0 * PI);
        for i in 0..5 {
            for j in 0..5 {
                let z = ModuliPoint::new(0.13 + 0.2 * i as f64, 0.07 + 0.2 * j as f64);
                let v = projector_kernel_norm(level, cs, z, z, 1e-15).unwrap();
                assert!((v / want - 1.0).abs() < 0.01);
            }
        }
    }

    #[test]
    fn trace_identity_small() {
        let level = lv(3);
        let t = kernel_trace(level, ComplexStructure::new(0.2, 0.9).unwrap(), 48, 1e-15).unwrap();
        assert!((t / 7.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn mp_agrees_with_f64_near_diagonal() {
        let level = lv(6);
        let cs = ComplexStructure::new(0.3, 0.8).unwrap();
        let z = ModuliPoint::new(0.4, 0.45);
        let w = ModuliPoint::new(0.43, 0.5);
        let f = projector_kernel_norm(level, cs, z, w, 1e-16).unwrap();
        let m = projector_kernel_log_norm_mp(level, cs, z, w).exp();
        assert!((f / m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_model_general_modulus() {
        let cs = ComplexStructure::new(0.3, 0.8).unwrap();
        let rep = kernel_gaussian_check(&[lv(10)], cs, &[(0.0, 0.0), (0.03, -0.02), (0.3, 0.3)]);
        assert!(rep.rows[0].rel_error.unwrap() < 1e-10);
        assert!(rep.rows[1].rel_error.unwrap() < 1e-6);
        assert!(rep.rows[2].out_of_neighborhood());
    }

    #[test]
    fn decay_preconditions() {
        let cs = ComplexStructure::square();
        let levels = [lv(5), lv(10), lv(20)];
        assert!(kernel_decay_check(&levels, cs, 0.05).is_err());
        assert!(kernel_decay_check(&levels[..2], cs, 0.5).is_err());
        assert!(kernel_decay_check(&[lv(10), lv(5), lv(20)], cs, 0.5).is_err());
    }

    #[test]
    fn slope_of_line() {
        assert!((ls_slope(&[1.0, 2.0, 3.0], &[2.0, 0.0, -2.0]) + 2.0).abs() < 1e-15);
    }
}
