//! Theta basis, translation and curve operators on the level-`r` space.
//!
//! Operators are realized on the basis `(Ψ_l)` through their eigen and shift
//! relations. Ψ_l is an eigenvector of the meridian translation with
//! eigenvalue `ζ^l`, `ζ = A²`, and the longitude translation shifts the index.
//! The translation by `λ_{a,b}/N` is `A^{−ab} L^{−b} M^a` where `M = diag(ζ^l)`
//! and `L Ψ_l = Ψ_{l+1}`; with this sign the family satisfies
//!
//! ```text
//! T(c,d) T(a,b) = A^{ad−bc} T(a+c, b+d).
//! ```

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::level::{ComplexStructure, LatticeVector, ModuliPoint, QuantizationLevel};
use crate::operator::{Basis, OperatorMatrix};

/// Coordinates in the basis `(Ψ_l)`, `l = 0..N−1`.
pub type FullVector = DVector<Complex64>;
/// Coordinates in the basis `(Φ_l)`, `l = 1..r` stored at positions `0..r−1`.
pub type AltVector = DVector<Complex64>;

/// Default truncation tolerance for theta series.
pub const THETA_TOL: f64 = 1e-15;

/// Relative tolerance of the alternating-subspace check in [`restrict_alternating`].
pub const ALT_LEAK_TOL: f64 = 1e-10;

/// Nonzero entries `(row, col, value)` of the translation matrix, one per column.
pub fn translation_entries(
    level: QuantizationLevel,
    v: LatticeVector,
) -> impl Iterator<Item = (usize, usize, Complex64)> {
    let n = level.dim() as i64;
    let two_n = 2 * n;
    let a = v.a.rem_euclid(two_n);
    let b = v.b.rem_euclid(two_n);
    let base = -(a * b);
    (0..n).map(move |l| {
        let phase = (base + 2 * a * l).rem_euclid(two_n);
        let row = (l - b).rem_euclid(n) as usize;
        (row, l as usize, level.a_pow(phase))
    })
}

/// Matrix of the translation `T*_{λ_{a,b}/N}` in the full basis. Unitary.
pub fn translation_matrix(level: QuantizationLevel, v: LatticeVector) -> OperatorMatrix {
    let n = level.dim();
    let mut m = DMatrix::zeros(n, n);
    for (row, col, val) in translation_entries(level, v) {
        m[(row, col)] = val;
    }
    OperatorMatrix::from_parts(level, Basis::Full, m)
}

/// Curve operator `−(T(v) + T(−v))` in the full basis. Hermitian.
pub fn curve_operator_full(level: QuantizationLevel, v: LatticeVector) -> OperatorMatrix {
    let n = level.dim();
    let mut m = DMatrix::zeros(n, n);
    for w in [v, -v] {
        for (row, col, val) in translation_entries(level, w) {
            m[(row, col)] -= val;
        }
    }
    OperatorMatrix::from_parts(level, Basis::Full, m)
}

/// `S†TS` where column `l` of `S` is `(e_l − e_{−l})/√2`.
pub(crate) fn compress_alternating(t: &DMatrix<Complex64>, r: usize) -> DMatrix<Complex64> {
    let n = 2 * r + 1;
    DMatrix::from_fn(r, r, |i, j| {
        let (i, j) = (i + 1, j + 1);
        let (ii, jj) = (n - i, n - j);
        (t[(i, j)] - t[(i, jj)] - t[(ii, j)] + t[(ii, jj)]) * 0.5
    })
}

/// Norm of `(I − SS†) T S`, the part of `T·H^alt` that leaves `H^alt`.
pub fn alternating_leak(t: &OperatorMatrix) -> Result<f64> {
    if t.basis() != Basis::Full {
        return Err(Error::BasisMismatch {
            expected: Basis::Full,
            found: t.basis(),
        });
    }
    let r = t.level().alt_dim();
    let n = t.dim();
    let m = t.matrix();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // (TS) column l, then subtract its projection back onto the alternating span
    let mut leak = DMatrix::<Complex64>::zeros(n, r);
    for j in 0..r {
        let col = j + 1;
        for i in 0..n {
            leak[(i, j)] = (m[(i, col)] - m[(i, n - col)]) * s;
        }
        for i in 1..=r {
            let odd = (leak[(i, j)] - leak[(n - i, j)]) * 0.5;
            leak[(i, j)] -= odd;
            leak[(n - i, j)] += odd;
        }
    }
    let frob = leak.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if frob == 0.0 || r == 0 {
        return Ok(frob);
    }
    Ok(leak.singular_values().iter().copied().fold(0.0, f64::max))
}

/// Compress a full-basis operator to the alternating basis `(Φ_l)`.
///
/// Fails with [`Error::SubspaceNotPreserved`] when `‖(I − SS†)TS‖ > 10⁻¹⁰‖T‖`.
pub fn restrict_alternating(t: &OperatorMatrix) -> Result<OperatorMatrix> {
    let leak = alternating_leak(t)?;
    let bound = ALT_LEAK_TOL * t.operator_norm();
    if leak > bound {
        return Err(Error::SubspaceNotPreserved { leak, bound });
    }
    let r = t.level().alt_dim();
    Ok(OperatorMatrix::from_parts(
        t.level(),
        Basis::Alternating,
        compress_alternating(t.matrix(), r),
    ))
}

/// Embed an alternating vector into the full space.
pub fn alt_to_full(level: QuantizationLevel, v: &AltVector) -> FullVector {
    let r = level.alt_dim();
    let n = level.dim();
    assert_eq!(v.len(), r);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = FullVector::zeros(n);
    for l in 1..=r {
        out[l] += v[l - 1] * s;
        out[n - l] -= v[l - 1] * s;
    }
    out
}

/// Value of a theta-basis section at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    /// `Ψ_l(z)` in the trivialization of the theta series.
    /// Overflows to infinity for very large `N·q²`; use `weighted` instead.
    pub value: Complex64,
    /// `Ψ_l(z)` multiplied by the square root of the metric weight.
    pub weighted: Complex64,
    /// Pointwise norm `h(Ψ_l, Ψ_l)(z)`.
    pub pointwise_norm_sq: f64,
}

/// `((2r+1)/4π)^{1/4}`.
fn prefactor(level: QuantizationLevel) -> f64 {
    (level.dim() as f64 / (4.0 * PI)).powf(0.25)
}

/// Fourth root of the half-form weight `|Ω_μ|² = √(b/2π)`.
fn half_form_root(b: f64) -> f64 {
    (b / (2.0 * PI)).powf(0.25)
}

/// Number of extra periods kept on each side of the dominant series term.
pub fn truncation_radius(level: QuantizationLevel, cs: ComplexStructure, tol: f64) -> i64 {
    let n = level.dim() as f64;
    let x = ((1.0 / tol).ln().max(0.0) / (PI * n * cs.tau_im())).sqrt();
    (1.0 + x).ceil() as i64
}

/// `exp(2πi·a(qk + k²/2N) − (πb/N)(Nq + k)²)`: the `k`-th series term of
/// `√W(q)·Ψ(p, q)` with its `exp(2πipk)` factor and prefactors removed.
#[inline]
fn amplitude(n: f64, a: f64, b: f64, q: f64, k: i64) -> Complex64 {
    let kf = k as f64;
    let x = n * q + kf;
    let g = -(PI * b / n) * x * x;
    if g < -745.0 {
        return Complex64::new(0.0, 0.0);
    }
    let phase = if a == 0.0 {
        0.0
    } else {
        2.0 * PI * a * (q * kf + kf * kf / (2.0 * n))
    };
    Complex64::from_polar(g.exp(), phase)
}

/// Evaluate `Ψ_l` at `pt`, truncating the series once the Gaussian tail is below `tol`.
pub fn theta_point_evaluate(
    level: QuantizationLevel,
    cs: ComplexStructure,
    l: i64,
    pt: ModuliPoint,
    tol: f64,
) -> Result<ThetaValue> {
    let b = cs.tau_im();
    if !(b > 0.0) {
        return Err(Error::DegenerateModulus(b));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let ni = level.dim() as i64;
    let n = ni as f64;
    let a = cs.tau_re();
    let l = l.rem_euclid(ni);
    let radius = truncation_radius(level, cs, tol);
    let centre = (-(pt.q + l as f64 / n)).round() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in centre - radius..=centre + radius {
        let k = l + ni * m;
        let p_phase = 2.0 * PI * (pt.p * k as f64);
        sum += amplitude(n, a, b, pt.q, k) * Complex64::from_polar(1.0, p_phase);
    }
    let weighted = sum * (prefactor(level) * half_form_root(b));
    let unweight = (PI * n * b * pt.q * pt.q).exp() / half_form_root(b);
    Ok(ThetaValue {
        value: weighted * unweight,
        weighted,
        pointwise_norm_sq: weighted.norm_sqr(),
    })
}

/// Series amplitudes of all theta sections on the rows `q_j = j/n` of a
/// uniform grid, the `p` dependence being the pure character `exp(2πipk)`.
///
/// Integrals of `f·h(Ψ_{l'}, Ψ_l)` against `4π dp dq` for trigonometric `f`
/// are then exact discrete sums over `p` and a trapezoid sum over `q`.
#[derive(Debug, Clone)]
pub struct ThetaGrid {
    level: QuantizationLevel,
    grid_n: usize,
    k_min: i64,
    rows: Vec<Vec<Complex64>>,
}

/// Number of row blocks in the quadrature; fixed so the summation order
/// does not depend on the thread pool.
const QUAD_BLOCKS: usize = 32;

impl ThetaGrid {
    pub fn new(level: QuantizationLevel, cs: ComplexStructure, grid_n: usize) -> Self {
        let ni = level.dim() as i64;
        let n = ni as f64;
        let radius = truncation_radius(level, cs, THETA_TOL);
        let k_min = -radius * ni;
        let k_max = (radius + 1) * ni;
        let scale = prefactor(level) * half_form_root(cs.tau_im());
        let rows = (0..grid_n)
            .into_par_iter()
            .map(|j| {
                let q = j as f64 / grid_n as f64;
                (k_min..k_max)
                    .map(|k| amplitude(n, cs.tau_re(), cs.tau_im(), q, k) * scale)
                    .collect()
            })
            .collect();
        Self {
            level,
            grid_n,
            k_min,
            rows,
        }
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    /// Matrix of `⟨Ψ_{l'}, f Ψ_l⟩` for `f = Σ c_v χ_v`, `χ_{a,b} = exp(−2πi(aq + bp))`,
    /// by the trapezoid rule on the `grid_n × grid_n` grid.
    pub fn integrate(&self, terms: &[(LatticeVector, Complex64)]) -> DMatrix<Complex64> {
        let nd = self.level.dim();
        let ni = nd as i64;
        let gn = self.grid_n;
        let g = gn as i64;
        let k_min = self.k_min;
        let len = self.rows.first().map_or(0, Vec::len) as i64;
        let k_max = k_min + len - 1;
        let block = gn.div_ceil(QUAD_BLOCKS).max(1);

        let partials: Vec<DMatrix<Complex64>> = (0..gn.div_ceil(block))
            .into_par_iter()
            .map(|bi| {
                let mut acc = DMatrix::<Complex64>::zeros(nd, nd);
                for j in bi * block..((bi + 1) * block).min(gn) {
                    let row = &self.rows[j];
                    let q = j as f64 / gn as f64;
                    for &(v, c) in terms {
                        if c == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let w = c * Complex64::from_polar(1.0, -2.0 * PI * v.a as f64 * q);
                        for (kk, &gk) in row.iter().enumerate() {
                            if gk.re == 0.0 && gk.im == 0.0 {
                                continue;
                            }
                            let k = k_min + kk as i64;
                            let col = k.rem_euclid(ni) as usize;
                            // k' = k − b − s·n stays inside the stored window
                            let base = k - v.b;
                            let s_lo = (base - k_max + g - 1).div_euclid(g);
                            let s_hi = (base - k_min).div_euclid(g);
                            for s in s_lo..=s_hi {
                                let kp = base - s * g;
                                let gkp = row[(kp - k_min) as usize];
                                let rowi = kp.rem_euclid(ni) as usize;
                                acc[(rowi, col)] += w * gkp.conj() * gk;
                            }
                        }
                    }
                }
                acc
            })
            .collect();

        let mut total = DMatrix::<Complex64>::zeros(nd, nd);
        for p in partials {
            total += p;
        }
        total * Complex64::new(4.0 * PI / gn as f64, 0.0)
    }
}

/// Minimum grid for quadrature of a symbol with the given largest frequency.
pub fn min_grid(level: QuantizationLevel, max_freq: usize) -> usize {
    4 * level.dim() + 2 * max_freq
}

/// Default grid `max(128, 8N)` plus room for the symbol's frequencies.
pub fn default_grid(level: QuantizationLevel, max_freq: usize) -> usize {
    128.max(8 * level.dim()) + 2 * max_freq
}

/// Gram matrix of `(Ψ_l)` by trapezoid quadrature on a `grid_n × grid_n` grid.
pub fn gram_matrix(level: QuantizationLevel, cs: ComplexStructure, grid_n: usize) -> Result<OperatorMatrix> {
    let min = min_grid(level, 0);
    if grid_n < min {
        return Err(Error::GridTooCoarse { grid_n, min });
    }
    let grid = ThetaGrid::new(level, cs, grid_n);
    let m = grid.integrate(&[(LatticeVector::ZERO, Complex64::new(1.0, 0.0))]);
    Ok(OperatorMatrix::from_parts(level, Basis::Full, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(r: u32) -> QuantizationLevel {
        QuantizationLevel::new(r).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn meridian_translation_is_diagonal() {
        let level = lv(1);
        let t = translation_matrix(level, LatticeVector::new(1, 0));
        for l in 0..3 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / 3.0);
            assert!((t.get(l, l) - z).norm() < 1e-14);
        }
        assert!((t.get(0, 1)).norm() == 0.0);
        let id = translation_matrix(level, LatticeVector::ZERO);
        assert!(id.max_abs_diff(&OperatorMatrix::identity(level, Basis::Full)) < 1e-15);
    }

    #[test]
    fn three_by_three_products() {
        // explicit shift and clock matrices at N = 3
        let level = lv(1);
        let a = level.a_root();
        let zeta = a * a;
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), zeta, zeta * zeta]));
        let mut shift = DMatrix::<Complex64>::zeros(3, 3);
        for l in 0..3 {
            shift[((l + 1) % 3, l)] = c(1.0, 0.0);
        }
        let inv_shift = shift.transpose();
        let expect = inv_shift * m * a.inv();
        let t11 = translation_matrix(level, LatticeVector::new(1, 1));
        assert!((t11.matrix() - &expect).iter().all(|x| x.norm() < 1e-14));

        let lhs = &translation_matrix(level, LatticeVector::new(0, 1)) * &translation_matrix(level, LatticeVector::new(1, 0));
        let rhs = t11.scale(a);
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn longitude_shifts_down() {
        let level = lv(3);
        let t = translation_matrix(level, LatticeVector::new(0, 1));
        for l in 0..7 {
            assert_eq!(t.get((l + 6) % 7, l), c(1.0, 0.0));
        }
    }

    #[test]
    fn period_n_is_scalar() {
        for r in [1, 2, 5, 8] {
            let level = lv(r);
            let n = level.dim() as i64;
            let t = translation_matrix(level, LatticeVector::new(n, 0));
            assert!(t.max_abs_diff(&OperatorMatrix::identity(level, Basis::Full)) < 1e-12);
            for (a, b, k) in [(1, 2, 1), (-2, 3, 2), (3, -1, -1)] {
                let lhs = translation_matrix(level, LatticeVector::new(a + n * k, b));
                let rhs = translation_matrix(level, LatticeVector::new(a, b)).scale(level.a_pow(-n * k * b));
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn curve_operator_examples() {
        let t = curve_operator_full(lv(1), LatticeVector::new(1, 0));
        for (l, want) in [(0, -2.0), (1, 1.0), (2, 1.0)] {
            assert!((t.get(l, l) - c(want, 0.0)).norm() < 1e-14);
        }
        let t0 = curve_operator_full(lv(4), LatticeVector::ZERO);
        assert!(t0.max_abs_diff(&OperatorMatrix::identity(lv(4), Basis::Full).scale(c(-2.0, 0.0))) < 1e-15);

        let t = curve_operator_full(lv(2), LatticeVector::new(1, 0));
        for l in 0..5 {
            let want = -2.0 * (2.0 * PI * l as f64 / 5.0).cos();
            assert!((t.get(l, l).re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn restriction_examples() {
        let level = lv(2);
        let alt = restrict_alternating(&curve_operator_full(level, LatticeVector::new(0, 1))).unwrap();
        let want = [[0.0, -1.0], [-1.0, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((alt.get(i, j) - c(want[i][j], 0.0)).norm() < 1e-14);
            }
        }
        let id = restrict_alternating(&OperatorMatrix::identity(lv(6), Basis::Full)).unwrap();
        assert!(id.max_abs_diff(&OperatorMatrix::identity(lv(6), Basis::Alternating)) < 1e-15);
    }

    #[test]
    fn translation_is_not_alternating() {
        let err = restrict_alternating(&translation_matrix(lv(3), LatticeVector::new(1, 0))).unwrap_err();
        assert!(matches!(err, Error::SubspaceNotPreserved { .. }));
        let bad = restrict_alternating(&OperatorMatrix::identity(lv(3), Basis::Alternating)).unwrap_err();
        assert!(matches!(bad, Error::BasisMismatch { .. }));
    }

    #[test]
    fn theta_rejects_bad_input() {
        let cs = ComplexStructure::square();
        assert!(theta_point_evaluate(lv(2), cs, 0, ModuliPoint::new(0.1, 0.2), 0.0).is_err());
    }

    #[test]
    fn theta_translation_eigenrelation() {
        // shifting z by 1/N multiplies Ψ_l by exp(2πil/N)
        let level = lv(4);
        let cs = ComplexStructure::new(0.2, 0.9).unwrap();
        let n = level.dim() as f64;
        for l in 0..9 {
            for &(p, q) in &[(0.1, 0.3), (0.77, 0.05), (0.4, 0.61)] {
                let pt = ModuliPoint { p, q };
                let v0 = theta_point_evaluate(level, cs, l, pt, 1e-15).unwrap();
                let v1 = theta_point_evaluate(level, cs, l, ModuliPoint { p: p + 1.0 / n, q }, 1e-15).unwrap();
                let ratio = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / n);
                assert!((v1.value - v0.value * ratio).norm() < 1e-12 * (1.0 + v0.value.norm()));
            }
        }
    }

    #[test]
    fn theta_concentrates_at_its_centre() {
        let cs = ComplexStructure::square();
        for r in [10, 20] {
            let level = lv(r);
            let n = level.dim() as f64;
            for l in [0i64, 3, 7] {
                let centre = (-(l as f64) / n).rem_euclid(1.0);
                let at = theta_point_evaluate(level, cs, l, ModuliPoint::new(0.3, centre), 1e-15).unwrap();
                let away = theta_point_evaluate(level, cs, l, ModuliPoint::new(0.3, centre + 0.5), 1e-15).unwrap();
                assert!(away.pointwise_norm_sq < (-(r as f64)).exp() * at.pointwise_norm_sq);
            }
        }
    }

    #[test]
    fn gram_is_identity() {
        for (r, grid, tau) in [(1, 64, (0.0, 1.0)), (5, 128, (0.0, 1.0)), (3, 64, (0.35, 0.7))] {
            let level = lv(r);
            let cs = ComplexStructure::new(tau.0, tau.1).unwrap();
            let g = gram_matrix(level, cs, grid).unwrap();
            assert!(g.max_abs_diff(&OperatorMatrix::identity(level, Basis::Full)) < 1e-8);
        }
        assert!(matches!(
            gram_matrix(lv(5), ComplexStructure::square(), 43),
            Err(Error::GridTooCoarse { grid_n: 43, min: 44 })
        ));
    }

    #[test]
    fn quadrature_matches_pointwise_sum() {
        // brute force trapezoid over pointwise theta values
        let level = lv(2);
        let cs = ComplexStructure::new(0.3, 0.8).unwrap();
        let gn = 24;
        let terms = [
            (LatticeVector::new(1, 0), c(0.5, -0.25)),
            (LatticeVector::new(-1, 2), c(-1.0, 0.0)),
            (LatticeVector::new(0, 0), c(0.3, 0.0)),
        ];
        let fast = ThetaGrid::new(level, cs, gn).integrate(&terms);
        let mut slow = DMatrix::<Complex64>::zeros(5, 5);
        for i in 0..gn {
            for j in 0..gn {
                let pt = ModuliPoint {
                    p: i as f64 / gn as f64,
                    q: j as f64 / gn as f64,
                };
                let f: Complex64 = terms
                    .iter()
                    .map(|(v, c)| c * Complex64::from_polar(1.0, -2.0 * PI * (v.a as f64 * pt.q + v.b as f64 * pt.p)))
                    .sum();
                let vals: Vec<Complex64> = (0..5)
                    .map(|l| theta_point_evaluate(level, cs, l, pt, 1e-16).unwrap().weighted)
                    .collect();
                for a in 0..5 {
                    for b in 0..5 {
                        slow[(a, b)] += f * vals[a].conj() * vals[b];
                    }
                }
            }
        }
        slow *= Complex64::new(4.0 * PI / (gn * gn) as f64, 0.0);
        let diff = (&fast - &slow).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "diff {diff}");
    }
}
