use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Laurent polynomial in `m`, `l` with integer coefficients, keyed by `(α, β)`
/// for the monomial `m^α l^β`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<[i64; 3]>", into = "Vec<[i64; 3]>")]
pub struct LaurentML {
    terms: BTreeMap<(i64, i64), i64>,
}

impl LaurentML {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(alpha: i64, beta: i64, coeff: i64) -> Self {
        Self::from_terms([(alpha, beta, coeff)])
    }

    pub fn m() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn l() -> Self {
        Self::monomial(0, 1, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (a, b, c) in terms {
            out.add_term(a, b, c);
        }
        out
    }

    fn add_term(&mut self, a: i64, b: i64, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert(0);
        *slot = slot.checked_add(c).expect("polynomial coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(α, β, coeff)` in increasing `(α, β)` order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn coeff(&self, alpha: i64, beta: i64) -> i64 {
        self.terms.get(&(alpha, beta)).copied().unwrap_or(0)
    }

    /// Multiply by `m^α l^β`.
    pub fn shift(&self, alpha: i64, beta: i64) -> Self {
        Self::from_terms(self.terms().map(|(a, b, c)| (a + alpha, b + beta, c)))
    }

    /// `P(m⁻¹, l⁻¹)`.
    pub fn invert_variables(&self) -> Self {
        Self::from_terms(self.terms().map(|(a, b, c)| (-a, -b, c)))
    }

    pub fn evaluate(&self, m: Complex64, l: Complex64) -> Complex64 {
        self.terms()
            .map(|(a, b, c)| m.powi(a as i32) * l.powi(b as i32) * c as f64)
            .sum()
    }

    /// Gcd of the coefficients.
    pub fn content(&self) -> i64 {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        self.terms.values().fold(0, |g, &c| gcd(g, c))
    }

    /// Largest `max(|α|, |β|)` over the support.
    pub fn max_degree(&self) -> i64 {
        self.terms.keys().map(|&(a, b)| a.abs().max(b.abs())).max().unwrap_or(0)
    }

    fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }
}

impl From<Vec<[i64; 3]>> for LaurentML {
    fn from(v: Vec<[i64; 3]>) -> Self {
        Self::from_terms(v.into_iter().map(|[a, b, c]| (a, b, c)))
    }
}

impl From<LaurentML> for Vec<[i64; 3]> {
    fn from(p: LaurentML) -> Self {
        p.terms().map(|(a, b, c)| [a, b, c]).collect()
    }
}

impl Add for &LaurentML {
    type Output = LaurentML;
    fn add(self, rhs: &LaurentML) -> LaurentML {
        let mut out = self.clone();
        for (a, b, c) in rhs.terms() {
            out.add_term(a, b, c);
        }
        out
    }
}

impl Neg for &LaurentML {
    type Output = LaurentML;
    fn neg(self) -> LaurentML {
        LaurentML::from_terms(self.terms().map(|(a, b, c)| (a, b, -c)))
    }
}

impl Sub for &LaurentML {
    type Output = LaurentML;
    fn sub(self, rhs: &LaurentML) -> LaurentML {
        self + &(-rhs)
    }
}

impl Mul for &LaurentML {
    type Output = LaurentML;
    fn mul(self, rhs: &LaurentML) -> LaurentML {
        let mut out = LaurentML::zero();
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in rhs.terms() {
                out.add_term(a1 + a2, b1 + b2, c1.checked_mul(c2).expect("polynomial coefficient overflow"));
            }
        }
        out
    }
}

impl fmt::Display for LaurentML {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest l-degree first, then highest m-degree, reads like the usual tables
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|x, y| (y.1, y.0).cmp(&(x.1, x.0)));
        for (i, (a, b, c)) in terms.into_iter().enumerate() {
            if c < 0 {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let mut vars = Vec::new();
            for (name, e) in [("l", b), ("m", a)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    e => vars.push(format!("{name}^{e}")),
                }
            }
            let mag = c.abs();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Recursive-descent parser for expressions such as `l*m^6+1`,
/// `(l-1)*(l*m^6+1)` or `m^-2 + 3 l m`.
struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::PolynomialParse {
            input: self.src.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err(format!("expected integer at position {start}")))
    }

    fn signed_integer(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            Some('(') => {
                self.pos += 1;
                let v = self.signed_integer()?;
                if self.peek() != Some(')') {
                    return Err(self.err("unclosed exponent parenthesis"));
                }
                self.pos += 1;
                return Ok(v);
            }
            _ => false,
        };
        let v = self.integer()?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<LaurentML> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') | Some('−') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentML> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c == 'm' || c == 'l' || c == '(' || c.is_ascii_digit() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentML> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(LaurentML::constant(self.integer()?)),
            Some('m') | Some('l') => {
                let var = self.chars[self.pos];
                self.pos += 1;
                let e = if self.peek() == Some('^') {
                    self.pos += 1;
                    self.signed_integer()?
                } else {
                    1
                };
                Ok(if var == 'm' {
                    LaurentML::monomial(e, 0, 1)
                } else {
                    LaurentML::monomial(0, e, 1)
                })
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("unclosed parenthesis"));
                }
                self.pos += 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.signed_integer()?;
                    let e = u32::try_from(e).map_err(|_| self.err("negative power of a sum"))?;
                    return Ok(inner.pow(e));
                }
                Ok(inner)
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl FromStr for LaurentML {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s,
            chars: s.chars().collect(),
            pos: 0,
        };
        let out = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err(format!("trailing input at position {}", p.pos)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple() {
        let p: LaurentML = "l*m^6+1".parse().unwrap();
        assert_eq!(p, LaurentML::from_terms([(6, 1, 1), (0, 0, 1)]));
        let q: LaurentML = "1 + m + l".parse().unwrap();
        assert_eq!(q, LaurentML::from_terms([(0, 0, 1), (1, 0, 1), (0, 1, 1)]));
        let r: LaurentML = "-2m^-1 l^(-3) + 4".parse().unwrap();
        assert_eq!(r, LaurentML::from_terms([(-1, -3, -2), (0, 0, 4)]));
    }

    #[test]
    fn parse_products() {
        let p: LaurentML = "(l-1)*(l*m^6+1)".parse().unwrap();
        let want = &LaurentML::from_terms([(0, 1, 1), (0, 0, -1)]) * &LaurentML::from_terms([(6, 1, 1), (0, 0, 1)]);
        assert_eq!(p, want);
        let sq: LaurentML = "(1+m)^2".parse().unwrap();
        assert_eq!(sq, LaurentML::from_terms([(0, 0, 1), (1, 0, 2), (2, 0, 1)]));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1+", "x", "(m+1", "m^", "(m+1)^-1", "2 3)"] {
            assert!(matches!(bad.parse::<LaurentML>(), Err(Error::PolynomialParse { .. })), "{bad}");
        }
    }

    #[test]
    fn display_round_trip() {
        let p = LaurentML::from_terms([(4, 2, 1), (8, 1, -1), (6, 1, 1), (4, 1, 2), (2, 1, 1), (0, 1, -1), (4, 0, 1)]);
        let s = p.to_string();
        assert_eq!(s, "l^2*m^4-l*m^8+l*m^6+2*l*m^4+l*m^2-l+m^4");
        assert_eq!(s.parse::<LaurentML>().unwrap(), p);
    }

    #[test]
    fn json_shape() {
        let p = LaurentML::from_terms([(6, 1, 1), (0, 0, 1)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[0,0,1],[6,1,1]]");
        assert_eq!(p.content(), 1);
        assert_eq!(LaurentML::from_terms([(1, 0, 4), (0, 0, -6)]).content(), 2);
    }
}
