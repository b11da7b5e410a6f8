//! Thin multiprecision layer over `astro-float`.
//!
//! Used where f64 cancels catastrophically: colored Jones sums at roots of
//! unity and the comparison of the projector kernel with its Gaussian model.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

pub use astro_float::BigFloat as MpReal;

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision plus the constants cache astro-float needs for
/// transcendental functions.
pub struct MpContext {
    prec: usize,
    cc: Consts,
}

#[derive(Debug, Clone)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpContext {
    pub fn new(prec: usize) -> Self {
        Self {
            prec: prec.max(64),
            cc: Consts::new().expect("astro-float constants cache"),
        }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i64(0, self.prec)
    }

    pub fn int(&self, i: i64) -> BigFloat {
        BigFloat::from_i64(i, self.prec)
    }

    pub fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, RM, &mut self.cc)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.prec, RM, &mut self.cc)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.prec, RM, &mut self.cc)
    }

    /// `(cos(2πm/n), sin(2πm/n))` for `m = 0..n`.
    pub fn unit_circle_table(&mut self, n: usize) -> Vec<MpComplex> {
        let pi = self.pi();
        let two_pi = self.mul(&self.int(2), &pi);
        let step = self.div(&two_pi, &self.int(n as i64));
        (0..n)
            .map(|m| {
                let x = self.mul(&step, &self.int(m as i64));
                MpComplex {
                    re: self.cos(&x),
                    im: self.sin(&x),
                }
            })
            .collect()
    }

    /// `exp(x + iy)`.
    pub fn cexp(&mut self, x: &BigFloat, y: &BigFloat) -> MpComplex {
        let r = self.exp(x);
        let (c, s) = (self.cos(y), self.sin(y));
        MpComplex {
            re: self.mul(&r, &c),
            im: self.mul(&r, &s),
        }
    }

    pub fn czero(&self) -> MpComplex {
        MpComplex {
            re: self.zero(),
            im: self.zero(),
        }
    }

    pub fn cadd(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        MpComplex {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    pub fn cmul(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        MpComplex {
            re: self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        }
    }

    /// `a · conj(b)`.
    pub fn cmul_conj(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        MpComplex {
            re: self.add(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.sub(&self.mul(&a.im, &b.re), &self.mul(&a.re, &b.im)),
        }
    }

    pub fn cscale(&self, a: &MpComplex, s: &BigFloat) -> MpComplex {
        MpComplex {
            re: self.mul(&a.re, s),
            im: self.mul(&a.im, s),
        }
    }

    pub fn cnorm_sqr(&self, a: &MpComplex) -> BigFloat {
        self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im))
    }

    pub fn cabs(&self, a: &MpComplex) -> BigFloat {
        self.sqrt(&self.cnorm_sqr(a))
    }
}

/// Split a finite nonzero number into `(m, e)` with `x = m·2^e`, `0.5 ≤ |m| < 1`.
fn frexp(x: &BigFloat) -> Option<(f64, i64)> {
    if x.is_zero() {
        return None;
    }
    let (words, _bits, sign, exp, _) = x.as_raw_parts()?;
    // mantissa words are little-endian with the leading bit in the last word
    let mut m = 0.0f64;
    let mut scale = 1.0f64;
    for w in words.iter().rev().take(2) {
        scale /= 2f64.powi(64);
        m += *w as f64 * scale;
    }
    let m = if sign == Sign::Neg { -m } else { m };
    Some((m, exp as i64))
}

fn ldexp(m: f64, e: i64) -> f64 {
    let e = e.clamp(-2200, 2200) as i32;
    // two steps keep the intermediate power of two representable
    let half = e / 2;
    m * 2f64.powi(half) * 2f64.powi(e - half)
}

/// Nearest f64, saturating to ±∞ and flushing to 0 outside the f64 range.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    match frexp(x) {
        None => 0.0,
        Some((m, e)) => ldexp(m, e),
    }
}

/// `ln|x|` as f64, valid far outside the f64 range of `x` itself.
pub fn ln_abs(x: &BigFloat) -> f64 {
    match frexp(x) {
        None => f64::NEG_INFINITY,
        Some((m, e)) => m.abs().ln() + e as f64 * std::f64::consts::LN_2,
    }
}
