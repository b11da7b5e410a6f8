use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::level::{LatticeVector, ModuliPoint};

/// Trigonometric polynomial `f = Σ c_{a,b} χ_{a,b}` on the moduli torus with
/// `χ_{a,b}(p, q) = exp(−2πi(aq + bp))`.
///
/// With this sign the Toeplitz quantization of `χ_{a,b}` has the same leading
/// behaviour as the translation `T(a,b)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigSymbol {
    coeffs: BTreeMap<LatticeVector, Complex64>,
}

/// Grid used for `sup |f|`.
pub const SUP_GRID: usize = 512;
const SUP_REFINE: usize = 32;
const SYMMETRY_TOL: f64 = 1e-13;

impl TrigSymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([(LatticeVector::ZERO, Complex64::new(c, 0.0))])
    }

    /// The character `χ_v`.
    pub fn chi(v: LatticeVector) -> Self {
        Self::from_terms([(v, Complex64::new(1.0, 0.0))])
    }

    /// `F_v = −(χ_v + χ_{−v}) = −2cos(2π(aq + bp))`, the principal symbol of the curve operator.
    pub fn curve(v: LatticeVector) -> Self {
        let m1 = Complex64::new(-1.0, 0.0);
        Self::from_terms([(v, m1), (-v, m1)])
    }

    pub fn from_terms<I: IntoIterator<Item = (LatticeVector, Complex64)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (v, c) in terms {
            *coeffs.entry(v).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c: &mut Complex64| *c != Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn terms(&self) -> impl Iterator<Item = (LatticeVector, Complex64)> + '_ {
        self.coeffs.iter().map(|(&v, &c)| (v, c))
    }

    pub fn coeff(&self, v: LatticeVector) -> Complex64 {
        self.coeffs.get(&v).copied().unwrap_or_default()
    }

    pub fn max_frequency(&self) -> usize {
        self.coeffs
            .keys()
            .map(|v| v.a.unsigned_abs().max(v.b.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(v, c)| (v, c * s)))
    }

    fn scale_ref(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max).max(1.0)
    }

    /// `c_{−v} = conj(c_v)` for all `v`.
    pub fn is_real(&self) -> bool {
        let tol = SYMMETRY_TOL * self.scale_ref();
        self.coeffs.keys().all(|&v| (self.coeff(-v) - self.coeff(v).conj()).norm() <= tol)
    }

    /// `c_{−v} = c_v`, i.e. `f(−z) = f(z)`.
    pub fn is_even(&self) -> bool {
        let tol = SYMMETRY_TOL * self.scale_ref();
        self.coeffs.keys().all(|&v| (self.coeff(-v) - self.coeff(v)).norm() <= tol)
    }

    pub fn evaluate(&self, pt: ModuliPoint) -> Complex64 {
        self.terms()
            .map(|(v, c)| c * Complex64::from_polar(1.0, -2.0 * PI * (v.a as f64 * pt.q + v.b as f64 * pt.p)))
            .sum()
    }

    /// `∫ f dp dq`, the constant coefficient.
    pub fn mean(&self) -> Complex64 {
        self.coeff(LatticeVector::ZERO)
    }

    /// `sup |f|` from a `512 × 512` grid scan followed by one `32 × 32`
    /// refinement over the two cells around the best sample.
    pub fn sup_abs(&self) -> f64 {
        let n = SUP_GRID;
        let (best, bi, bj) = (0..n)
            .into_par_iter()
            .map(|i| {
                let p = i as f64 / n as f64;
                let mut row = (0.0f64, i, 0usize);
                for j in 0..n {
                    let val = self.evaluate(ModuliPoint { p, q: j as f64 / n as f64 }).norm();
                    if val > row.0 {
                        row = (val, i, j);
                    }
                }
                row
            })
            .reduce(|| (0.0, 0, 0), |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
        let h = 1.0 / n as f64;
        let (p0, q0) = (bi as f64 * h, bj as f64 * h);
        let mut sup = best;
        for s in 0..=SUP_REFINE {
            for t in 0..=SUP_REFINE {
                let p = p0 - h + 2.0 * h * s as f64 / SUP_REFINE as f64;
                let q = q0 - h + 2.0 * h * t as f64 / SUP_REFINE as f64;
                sup = sup.max(self.evaluate(ModuliPoint { p, q }).norm());
            }
        }
        sup
    }

    /// Smallest real part over the `512 × 512` grid.
    pub fn grid_min_real(&self) -> f64 {
        let n = SUP_GRID;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let p = i as f64 / n as f64;
                (0..n)
                    .map(|j| self.evaluate(ModuliPoint { p, q: j as f64 / n as f64 }).re)
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min)
    }
}

impl Add for &TrigSymbol {
    type Output = TrigSymbol;
    fn add(self, rhs: &TrigSymbol) -> TrigSymbol {
        TrigSymbol::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &TrigSymbol {
    type Output = TrigSymbol;
    fn sub(self, rhs: &TrigSymbol) -> TrigSymbol {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}
