use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::LaurentA;
use crate::error::{Error, Result};
use crate::level::LatticeVector;

/// Element of the quantum torus, `Σ c_{a,b}(A) e_{a,b}` with
/// `e_{a,b} ∗ e_{c,d} = A^{ad−bc} e_{a+c,b+d}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct QTElement {
    terms: BTreeMap<LatticeVector, LaurentA>,
}

impl QTElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(0, 0)
    }

    /// The basis vector `e_{a,b}`.
    pub fn basis(a: i64, b: i64) -> Self {
        Self::term(LatticeVector::new(a, b), LaurentA::one())
    }

    pub fn term(v: LatticeVector, c: LaurentA) -> Self {
        let mut out = Self::zero();
        out.add_term(v, &c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (LatticeVector, LaurentA)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (v, c) in terms {
            out.add_term(v, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (LatticeVector, &LaurentA)> {
        self.terms.iter().map(|(&v, c)| (v, c))
    }

    pub fn coeff(&self, v: LatticeVector) -> LaurentA {
        self.terms.get(&v).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = LatticeVector> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, v: LatticeVector, c: &LaurentA) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(v).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    /// Multiply every coefficient by the Laurent polynomial `c`.
    pub fn scale(&self, c: &LaurentA) -> Self {
        Self::from_terms(self.terms().map(|(v, x)| (v, x * c)))
    }

    /// The involution `e_{a,b} ↦ e_{−a,−b}`.
    pub fn sigma(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&v, c)| (-v, c.clone())).collect(),
        }
    }

    pub fn is_sigma_invariant(&self) -> bool {
        self.terms.iter().all(|(&v, c)| self.terms.get(&-v) == Some(c))
    }

    /// `x + σ(x)`.
    pub fn symmetrize(&self) -> SigmaInvariantElement {
        SigmaInvariantElement(self + &self.sigma())
    }

    /// Largest `max(|a|, |b|)` over the support.
    pub fn max_frequency(&self) -> i64 {
        self.terms.keys().map(|v| v.a.abs().max(v.b.abs())).max().unwrap_or(0)
    }

    /// Random element: one to four support points in `[−bound, bound]²`, each
    /// carrying one or two monomials `c·A^e` with `c ∈ {−3..3}∖{0}`, `e ∈ {−2..2}`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        let mut out = Self::zero();
        let points = rng.gen_range(1..=4);
        for _ in 0..points {
            let v = LatticeVector::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
            let monos = rng.gen_range(1..=2);
            let mut c = LaurentA::zero();
            for _ in 0..monos {
                let mut k = rng.gen_range(-3..=2);
                if k >= 0 {
                    k += 1;
                }
                c = &c + &LaurentA::monomial(rng.gen_range(-2..=2), k);
            }
            out.add_term(v, &c);
        }
        out
    }
}

/// Product in the quantum torus.
pub fn qt_multiply(x: &QTElement, y: &QTElement) -> QTElement {
    let mut out = QTElement::zero();
    for (u, cu) in x.terms() {
        for (w, cw) in y.terms() {
            let c = (cu * cw).shift(u.cross(w));
            out.add_term(u + w, &c);
        }
    }
    out
}

impl Add for &QTElement {
    type Output = QTElement;
    fn add(self, rhs: &QTElement) -> QTElement {
        let mut out = self.clone();
        for (v, c) in rhs.terms() {
            out.add_term(v, c);
        }
        out
    }
}

impl Sub for &QTElement {
    type Output = QTElement;
    fn sub(self, rhs: &QTElement) -> QTElement {
        self + &(-rhs)
    }
}

impl Neg for &QTElement {
    type Output = QTElement;
    fn neg(self) -> QTElement {
        self.scale(&LaurentA::constant(-1))
    }
}

impl Mul for &QTElement {
    type Output = QTElement;
    fn mul(self, rhs: &QTElement) -> QTElement {
        qt_multiply(self, rhs)
    }
}

impl fmt::Display for QTElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (v, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})e{v}")?;
        }
        Ok(())
    }
}

/// Element fixed by `σ`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SigmaInvariantElement(QTElement);

impl SigmaInvariantElement {
    pub fn new(x: QTElement) -> Result<Self> {
        if x.is_sigma_invariant() {
            Ok(Self(x))
        } else {
            Err(Error::NotInvariant)
        }
    }

    pub fn one() -> Self {
        Self(QTElement::one())
    }

    /// `e_{a,b} + e_{−a,−b}`.
    pub fn curve(a: i64, b: i64) -> Self {
        QTElement::basis(a, b).symmetrize()
    }

    pub fn as_element(&self) -> &QTElement {
        &self.0
    }

    pub fn into_element(self) -> QTElement {
        self.0
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        QTElement::random(rng, bound).symmetrize()
    }
}

impl TryFrom<QTElement> for SigmaInvariantElement {
    type Error = Error;
    fn try_from(x: QTElement) -> Result<Self> {
        Self::new(x)
    }
}

impl Mul for &SigmaInvariantElement {
    type Output = SigmaInvariantElement;
    /// σ is an algebra morphism, so the product stays invariant.
    fn mul(self, rhs: &SigmaInvariantElement) -> SigmaInvariantElement {
        SigmaInvariantElement(qt_multiply(&self.0, &rhs.0))
    }
}

impl fmt::Display for SigmaInvariantElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    a: i64,
    b: i64,
    laurent: Vec<[i64; 2]>,
}

impl Serialize for QTElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<JsonTerm> = self
            .terms()
            .map(|(v, c)| JsonTerm {
                a: v.a,
                b: v.b,
                laurent: c.terms().map(|(e, k)| [e, k]).collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QTElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<JsonTerm>::deserialize(d)?;
        Ok(Self::from_terms(terms.into_iter().map(|t| {
            (
                LatticeVector::new(t.a, t.b),
                LaurentA::from_terms(t.laurent.into_iter().map(|[e, k]| (e, k))),
            )
        })))
    }
}
