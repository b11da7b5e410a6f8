use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::laurent_ml::LaurentML;
use crate::error::{Error, Result};

const DATA_VERSION: u32 = 1;

/// Built-in knots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnotPreset {
    Unknot,
    Trefoil,
    FigureEight,
}

/// Cyclotomic coefficients `c_k = s^k · q^{(quadratic·k² + linear·k)/denominator}`
/// with `s = −1` when the sign alternates, so that
/// `J′_n = Σ_{k<n} c_k Π_{j=1..k} (q^n + q^{−n} − q^j − q^{−j})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicRule {
    pub alternating_sign: bool,
    pub q_exponent: QuadraticExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticExponent {
    pub quadratic: i64,
    pub linear: i64,
    pub denominator: i64,
}

impl CyclotomicRule {
    pub fn sign(&self, k: usize) -> i64 {
        if self.alternating_sign && k % 2 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn exponent(&self, k: usize) -> i64 {
        let k = k as i64;
        let e = &self.q_exponent;
        let num = e.quadratic * k * k + e.linear * k;
        debug_assert_eq!(num % e.denominator, 0, "non-integral cyclotomic exponent");
        num / e.denominator
    }
}

/// Contents of one `data/<knot>.json` file.
#[derive(Debug, Clone, Deserialize)]
pub struct PresetData {
    pub version: u32,
    pub knot: KnotPreset,
    #[serde(default)]
    pub chirality: Option<String>,
    pub monomials: LaurentML,
    pub abelian_factor: Option<LaurentML>,
    pub cyclotomic: Option<CyclotomicRule>,
    pub hyperbolic: bool,
}

fn load(src: &str) -> PresetData {
    let d: PresetData = serde_json::from_str(src).expect("bundled knot data is valid JSON");
    assert_eq!(d.version, DATA_VERSION, "unsupported knot data version");
    d
}

impl KnotPreset {
    pub const ALL: [KnotPreset; 3] = [KnotPreset::Unknot, KnotPreset::Trefoil, KnotPreset::FigureEight];

    pub fn name(self) -> &'static str {
        match self {
            KnotPreset::Unknot => "unknot",
            KnotPreset::Trefoil => "trefoil",
            KnotPreset::FigureEight => "figure_eight",
        }
    }

    pub fn data(self) -> &'static PresetData {
        static UNKNOT: OnceLock<PresetData> = OnceLock::new();
        static TREFOIL: OnceLock<PresetData> = OnceLock::new();
        static FIGURE_EIGHT: OnceLock<PresetData> = OnceLock::new();
        match self {
            KnotPreset::Unknot => UNKNOT.get_or_init(|| load(include_str!("../../data/unknot.json"))),
            KnotPreset::Trefoil => TREFOIL.get_or_init(|| load(include_str!("../../data/trefoil.json"))),
            KnotPreset::FigureEight => {
                FIGURE_EIGHT.get_or_init(|| load(include_str!("../../data/figure_eight.json")))
            }
        }
    }

    /// The A-polynomial component coming from irreducible representations
    /// (for the unknot, the abelian one).
    pub fn nonabelian_component(self) -> LaurentML {
        self.data().monomials.clone()
    }

    /// A-polynomial, optionally multiplied by the abelian factor `l − 1`.
    pub fn a_polynomial(self, abelian_factor: bool) -> LaurentML {
        let d = self.data();
        match (&d.abelian_factor, abelian_factor) {
            (Some(f), true) => f * &d.monomials,
            _ => d.monomials.clone(),
        }
    }

    pub fn cyclotomic(self) -> Option<CyclotomicRule> {
        self.data().cyclotomic
    }

    pub fn is_hyperbolic(self) -> bool {
        self.data().hyperbolic
    }

    pub fn simplicial_volume(self) -> f64 {
        super::volume::simplicial_volume_oracle(self)
    }
}

impl fmt::Display for KnotPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KnotPreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "unknot" | "0_1" => Ok(KnotPreset::Unknot),
            "trefoil" | "3_1" => Ok(KnotPreset::Trefoil),
            "figure_eight" | "figure8" | "4_1" => Ok(KnotPreset::FigureEight),
            _ => Err(Error::UnknownKnot(s.to_string())),
        }
    }
}

/// A-polynomial of a built-in knot by name, abelian factor included.
pub fn builtin_apolynomial(name: &str) -> Result<LaurentML> {
    Ok(name.parse::<KnotPreset>()?.a_polynomial(true))
}
