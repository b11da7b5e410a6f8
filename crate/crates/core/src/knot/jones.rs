//! Colored Jones values from cyclotomic expansions.
//!
//! At the root of unity used for knot states, `q = A^{−4} = e^{−4πi/N}`, every
//! power of `q` is an exact entry of a table of `N`-th roots of unity. The
//! expansion has exponentially large terms that cancel to a much smaller sum
//! (dramatically for the trefoil), so it is accumulated in multiprecision.

use num_complex::Complex64;

use super::presets::KnotPreset;
use crate::error::{Error, Result};
use crate::level::QuantizationLevel;
use crate::mp::{self, MpComplex, MpContext};

/// `J′_n(q)` in f64 at an arbitrary nonzero `q`; `mirror` replaces `q` by `q⁻¹`.
/// Meant for small colors, where the expansion is numerically harmless.
pub fn colored_jones_at(preset: KnotPreset, n: usize, q: Complex64, mirror: bool) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let Some(rule) = preset.cyclotomic() else {
        return one;
    };
    let q = if mirror { q.inv() } else { q };
    let qn = q.powi(n as i32) + q.powi(-(n as i32));
    let mut prod = one;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        if k > 0 {
            prod *= qn - q.powi(k as i32) - q.powi(-(k as i32));
        }
        acc += q.powi(rule.exponent(k) as i32) * rule.sign(k) as f64 * prod;
    }
    acc
}

/// Bits of working precision for colors up to `r`. Each factor of the product
/// has modulus at most 4, so `2r` bits cover the largest term.
pub(crate) fn jones_precision(level: QuantizationLevel) -> usize {
    128 + 2 * level.r() as usize
}

/// Multiprecision `J′_n` for `n = 1..=r` at `q = A^{−4}`, sharing one table.
pub(crate) fn colored_jones_mp(
    ctx: &mut MpContext,
    table: &[MpComplex],
    preset: KnotPreset,
    level: QuantizationLevel,
    mirror: bool,
) -> Vec<MpComplex> {
    let r = level.r() as usize;
    let n_dim = level.dim() as i64;
    let Some(rule) = preset.cyclotomic() else {
        let one = MpComplex {
            re: ctx.int(1),
            im: ctx.zero(),
        };
        return vec![one; r];
    };
    // q^e = e^{2πi·(∓2e)/N}
    let q_pow = |e: i64| -> &MpComplex {
        let step = if mirror { 2 * e } else { -2 * e };
        &table[step.rem_euclid(n_dim) as usize]
    };
    // q^j + q^{−j} = 2cos(4πj/N)
    let two_cos = |j: i64| ctx.mul(&ctx.int(2), &q_pow(j).re);

    let mut out = Vec::with_capacity(r);
    for n in 1..=r {
        let qn = two_cos(n as i64);
        let mut prod = ctx.int(1);
        let mut acc = ctx.czero();
        for k in 0..n {
            if k > 0 {
                let f = ctx.sub(&qn, &two_cos(k as i64));
                prod = ctx.mul(&prod, &f);
            }
            let phase = q_pow(rule.exponent(k));
            let term = ctx.cscale(phase, &ctx.mul(&prod, &ctx.int(rule.sign(k))));
            acc = ctx.cadd(&acc, &term);
        }
        out.push(acc);
    }
    out
}

/// `J′_n` for `n = 1..=r` at `q = A^{−4} = e^{−4πi/(2r+1)}`.
pub fn colored_jones_all(preset: KnotPreset, level: QuantizationLevel, mirror: bool) -> Vec<Complex64> {
    let mut ctx = MpContext::new(jones_precision(level));
    let table = ctx.unit_circle_table(level.dim());
    colored_jones_mp(&mut ctx, &table, preset, level, mirror)
        .iter()
        .map(|z| Complex64::new(mp::to_f64(&z.re), mp::to_f64(&z.im)))
        .collect()
}

/// `J′_n` at `q = A^{−4}` for a single color `1 ≤ n ≤ r`.
pub fn colored_jones(preset: KnotPreset, n: usize, level: QuantizationLevel) -> Result<Complex64> {
    if n == 0 || n > level.r() as usize {
        return Err(Error::ColorOutOfRange { n, r: level.r() });
    }
    Ok(colored_jones_all(preset, level, false)[n - 1])
}

/// The root `q = A^{−4}` used for knot states at `level`.
pub fn state_root(level: QuantizationLevel) -> Complex64 {
    level.a_pow(-4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(r: u32) -> QuantizationLevel {
        QuantizationLevel::new(r).unwrap()
    }

    #[test]
    fn color_one_is_trivial() {
        for k in KnotPreset::ALL {
            for r in [1, 4, 17] {
                let j = colored_jones(k, 1, lv(r)).unwrap();
                assert!((j - 1.0).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn unknot_is_one() {
        assert!(colored_jones_all(KnotPreset::Unknot, lv(9), false)
            .iter()
            .all(|z| *z == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn color_two_polynomials() {
        let q = Complex64::from_polar(1.0, 0.917);
        let f8 = colored_jones_at(KnotPreset::FigureEight, 2, q, false);
        let want = q.powi(-2) - q.inv() + 1.0 - q + q * q;
        assert!((f8 - want).norm() < 1e-14);
        let t = colored_jones_at(KnotPreset::Trefoil, 2, q, false);
        let want = -q.powi(-4) + q.powi(-3) + q.inv();
        assert!((t - want).norm() < 1e-14);
        let tm = colored_jones_at(KnotPreset::Trefoil, 2, q, true);
        let want = -q.powi(4) + q.powi(3) + q;
        assert!((tm - want).norm() < 1e-14);
    }

    #[test]
    fn multiprecision_matches_f64_small_colors() {
        let level = lv(12);
        let q = state_root(level);
        for k in [KnotPreset::Trefoil, KnotPreset::FigureEight] {
            for mirror in [false, true] {
                let all = colored_jones_all(k, level, mirror);
                for n in 1..=6 {
                    let direct = colored_jones_at(k, n, q, mirror);
                    assert!((all[n - 1] - direct).norm() < 1e-10 * direct.norm().max(1.0), "{k} {n}");
                }
            }
        }
    }

    #[test]
    fn figure_eight_is_real_and_amphichiral() {
        let level = lv(15);
        let a = colored_jones_all(KnotPreset::FigureEight, level, false);
        let b = colored_jones_all(KnotPreset::FigureEight, level, true);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.im.abs() < 1e-9 * x.norm().max(1.0));
            assert!((x - y).norm() < 1e-9 * x.norm().max(1.0));
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            colored_jones(KnotPreset::Trefoil, 0, lv(3)),
            Err(Error::ColorOutOfRange { n: 0, r: 3 })
        ));
        assert!(colored_jones(KnotPreset::Trefoil, 4, lv(3)).is_err());
    }
}
