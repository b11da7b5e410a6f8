use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quantization level `r`.
///
/// Fixes the full space dimension `N = 2r + 1`, the alternating dimension `r`,
/// the root `A = exp(iπ/N)` and `q = A²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantizationLevel {
    r: u32,
}

impl QuantizationLevel {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidLevel(0));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `N = 2r + 1`, the dimension of the full space.
    pub fn dim(&self) -> usize {
        2 * self.r as usize + 1
    }

    /// Dimension of the alternating subspace.
    pub fn alt_dim(&self) -> usize {
        self.r as usize
    }

    /// `A^e` with `A = exp(iπ/N)`. The exponent is reduced modulo `2N`
    /// before the exponential is taken so large exponents stay exact.
    pub fn a_pow(&self, e: i64) -> Complex64 {
        let two_n = 2 * self.dim() as i64;
        let k = e.rem_euclid(two_n);
        Complex64::from_polar(1.0, PI * k as f64 / self.dim() as f64)
    }

    pub fn a_root(&self) -> Complex64 {
        self.a_pow(1)
    }

    pub fn q_root(&self) -> Complex64 {
        self.a_pow(2)
    }

    /// Canonical representative of `l` in `0..N`.
    pub fn wrap(&self, l: i64) -> usize {
        l.rem_euclid(self.dim() as i64) as usize
    }
}

impl fmt::Display for QuantizationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}", self.r)
    }
}

/// Torus modulus `τ = a + bi` with `b > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexStructure {
    tau_re: f64,
    tau_im: f64,
}

impl ComplexStructure {
    pub fn new(tau_re: f64, tau_im: f64) -> Result<Self> {
        if !(tau_im > 0.0) || !tau_re.is_finite() || !tau_im.is_finite() {
            return Err(Error::DegenerateModulus(tau_im));
        }
        Ok(Self { tau_re, tau_im })
    }

    /// The square torus `τ = i`.
    pub fn square() -> Self {
        Self {
            tau_re: 0.0,
            tau_im: 1.0,
        }
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.tau_re, self.tau_im)
    }

    pub fn tau_re(&self) -> f64 {
        self.tau_re
    }

    pub fn tau_im(&self) -> f64 {
        self.tau_im
    }

    /// Holomorphic coordinate `z = p + τq`.
    pub fn z(&self, pt: ModuliPoint) -> Complex64 {
        Complex64::new(pt.p + self.tau_re * pt.q, self.tau_im * pt.q)
    }
}

impl Default for ComplexStructure {
    fn default() -> Self {
        Self::square()
    }
}

/// Lattice vector `λ_{a,b} = aμ + bλ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    pub a: i64,
    pub b: i64,
}

impl LatticeVector {
    pub const ZERO: Self = Self { a: 0, b: 0 };
    pub const MU: Self = Self { a: 1, b: 0 };
    pub const LAMBDA: Self = Self { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    /// `ad − bc`, i.e. `ω(λ_{a,b}, λ_{c,d}) / 4π`.
    pub fn cross(self, other: Self) -> i64 {
        self.a * other.b - self.b * other.a
    }
}

impl Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Add for LatticeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LatticeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl From<(i64, i64)> for LatticeVector {
    fn from((a, b): (i64, i64)) -> Self {
        Self::new(a, b)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Point of the moduli torus in the coordinates `(p, q)` dual to `(μ, λ)`,
/// stored in `[0, 1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    pub p: f64,
    pub q: f64,
}

fn unit_wrap(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

impl ModuliPoint {
    pub fn new(p: f64, q: f64) -> Self {
        Self {
            p: unit_wrap(p),
            q: unit_wrap(q),
        }
    }

    /// Image under `z ↦ −z`.
    pub fn involution(self) -> Self {
        Self::new(-self.p, -self.q)
    }

    pub fn shifted(self, dp: f64, dq: f64) -> Self {
        Self::new(self.p + dp, self.q + dq)
    }
}
