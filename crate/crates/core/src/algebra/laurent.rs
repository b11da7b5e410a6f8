use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::level::QuantizationLevel;

/// Laurent polynomial in `A` with integer coefficients.
///
/// Arithmetic is exact; coefficient overflow panics rather than wrapping.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentA {
    terms: BTreeMap<i64, i64>,
}

impl LaurentA {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff · A^exp`.
    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Units of `ℤ[A^{±1}]` are exactly `±A^k`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs() == 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot = slot.checked_add(coeff).expect("Laurent coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `A^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        if s == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, &c)| (e, c.checked_mul(s).expect("Laurent coefficient overflow")))
                .collect(),
        }
    }

    /// Value at `A = exp(iπ/(2r+1))`.
    pub fn evaluate(&self, level: QuantizationLevel) -> Complex64 {
        self.terms.iter().map(|(&e, &c)| level.a_pow(e) * c as f64).sum()
    }

    /// Value at an arbitrary complex `A`.
    pub fn evaluate_at(&self, a: Complex64) -> Complex64 {
        self.terms.iter().map(|(&e, &c)| a.powi(e as i32) * c as f64).sum()
    }
}

impl Add for &LaurentA {
    type Output = LaurentA;
    fn add(self, rhs: &LaurentA) -> LaurentA {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentA {
    type Output = LaurentA;
    fn sub(self, rhs: &LaurentA) -> LaurentA {
        self + &(-rhs)
    }
}

impl Neg for &LaurentA {
    type Output = LaurentA;
    fn neg(self) -> LaurentA {
        self.scale(-1)
    }
}

impl Mul for &LaurentA {
    type Output = LaurentA;
    fn mul(self, rhs: &LaurentA) -> LaurentA {
        let mut out = LaurentA::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1.checked_mul(c2).expect("Laurent coefficient overflow"));
            }
        }
        out
    }
}

impl fmt::Display for LaurentA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            write!(f, "{sign}")?;
            match (mag, e) {
                (m, 0) => write!(f, "{m}")?,
                (1, 1) => write!(f, "A")?,
                (1, e) => write!(f, "A^{e}")?,
                (m, 1) => write!(f, "{m}A")?,
                (m, e) => write!(f, "{m}A^{e}")?,
            }
            first = false;
        }
        Ok(())
    }
}
