//! Independent oracles shared by the integration tests. Nothing here calls
//! into the colored Jones or A-polynomial code it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;

/// Planar diagram codes, `X[i, j, k, l]` with `i` the incoming under-strand and
/// the remaining edges counterclockwise.
pub const TREFOIL_RIGHT_PD: [[usize; 4]; 3] = [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]];
pub const FIGURE_EIGHT_PD: [[usize; 4]; 4] = [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];

type Poly = BTreeMap<i64, i64>;

fn poly_mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ex, cx) in x {
        for (ey, cy) in y {
            *out.entry(ex + ey).or_insert(0) += cx * cy;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Kauffman bracket `⟨D⟩` in `A`, normalized so the empty diagram's single loop is 1.
pub fn kauffman_bracket(pd: &[[usize; 4]]) -> Poly {
    let edges = 2 * pd.len();
    let loop_value: Poly = [(2, -1), (-2, -1)].into_iter().collect();
    let mut total = Poly::new();
    for state in 0u32..(1 << pd.len()) {
        let mut parent: Vec<usize> = (0..=edges).collect();
        let mut a_count = 0i64;
        for (c, x) in pd.iter().enumerate() {
            let (p, q, r, s) = if state >> c & 1 == 0 {
                a_count += 1;
                (x[0], x[1], x[2], x[3])
            } else {
                (x[0], x[3], x[1], x[2])
            };
            let (u, v) = (find(&mut parent, p), find(&mut parent, q));
            parent[u] = v;
            let (u, v) = (find(&mut parent, r), find(&mut parent, s));
            parent[u] = v;
        }
        let loops = (1..=edges).filter(|&e| find(&mut parent, e) == e).count();
        let b_count = pd.len() as i64 - a_count;
        let mut term: Poly = [(a_count - b_count, 1)].into_iter().collect();
        for _ in 1..loops {
            term = poly_mul(&term, &loop_value);
        }
        for (e, c) in term {
            *total.entry(e).or_insert(0) += c;
        }
    }
    total.retain(|_, c| *c != 0);
    total
}

/// Writhe, with `X[i, j, k, l]` positive when the over-strand runs `l → j`.
pub fn writhe(pd: &[[usize; 4]]) -> i64 {
    let m = 2 * pd.len() as i64;
    pd.iter()
        .map(|x| if (x[1] as i64 - x[3] as i64).rem_euclid(m) == 1 { 1 } else { -1 })
        .sum()
}

/// Jones polynomial `V(t) = (−A³)^{−w} ⟨D⟩` at `A = t^{−1/4}`.
pub fn jones_from_pd(pd: &[[usize; 4]], t: Complex64) -> Complex64 {
    let a = t.powf(-0.25);
    let w = writhe(pd);
    let bracket: Complex64 = kauffman_bracket(pd)
        .iter()
        .map(|(&e, &c)| a.powi(e as i32) * c as f64)
        .sum();
    let sign = if w % 2 == 0 { 1.0 } else { -1.0 };
    bracket * a.powi(-3 * w as i32) * sign
}

type M2 = [[Complex64; 2]; 2];

fn mat_mul(x: &M2, y: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn mat_inv(x: &M2) -> M2 {
    // determinant one
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

/// Two-bridge knot `K(p, q)` in Riley's normal form: generators `a`, `b`,
/// relation `a·w = w·b` with `w = b^{ε₁} a^{ε₂} b^{ε₃} ⋯`, `ε_i = (−1)^{⌊iq/p⌋}`.
pub struct TwoBridge {
    /// `(is_a, exponent)` letters of `w`.
    word: Vec<(bool, i32)>,
    sigma: i32,
}

impl TwoBridge {
    pub fn new(p: i64, q: i64) -> Self {
        let word: Vec<(bool, i32)> = (1..p)
            .map(|i| {
                let e = if (i * q / p) % 2 == 0 { 1 } else { -1 };
                (i % 2 == 0, e)
            })
            .collect();
        let sigma = word.iter().map(|w| w.1).sum();
        Self { word, sigma }
    }

    fn generators(m: Complex64, t: Complex64) -> (M2, M2) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        ([[m, one], [zero, m.inv()]], [[m, zero], [t, m.inv()]])
    }

    fn eval_word(word: &[(bool, i32)], a: &M2, b: &M2) -> M2 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut out = [[one, zero], [zero, one]];
        for &(is_a, e) in word {
            let g = if is_a { *a } else { *b };
            let g = if e > 0 { g } else { mat_inv(&g) };
            out = mat_mul(&out, &g);
        }
        out
    }

    /// Entry `[0][1]` of `ρ(a)ρ(w) − ρ(w)ρ(b)`; its nonzero roots in `t` are
    /// the nonabelian representations.
    pub fn riley(&self, m: Complex64, t: Complex64) -> Complex64 {
        let (a, b) = Self::generators(m, t);
        let w = Self::eval_word(&self.word, &a, &b);
        let lhs = mat_mul(&a, &w);
        let rhs = mat_mul(&w, &b);
        lhs[0][1] - rhs[0][1]
    }

    /// Eigenvalue of the longitude `w·w̃·a^{−2σ}` on the line fixed by `ρ(a)`.
    pub fn longitude(&self, m: Complex64, t: Complex64) -> Complex64 {
        let (a, b) = Self::generators(m, t);
        let mut word = self.word.clone();
        word.extend(self.word.iter().rev());
        let e = if self.sigma > 0 { -1 } else { 1 };
        word.extend(std::iter::repeat_n((true, e), 2 * self.sigma.unsigned_abs() as usize));
        Self::eval_word(&word, &a, &b)[0][0]
    }

    /// Nonzero roots in `t` of the Riley polynomial at meridian eigenvalue `m`.
    pub fn representations(&self, m: Complex64) -> Vec<Complex64> {
        let deg = self.word.len();
        let coeffs = interpolate(|t| self.riley(m, t), deg);
        durand_kerner(&coeffs)
            .into_iter()
            .filter(|t| t.norm() > 1e-8)
            .collect()
    }
}

/// Monomial coefficients, constant first, of a polynomial of degree `≤ deg`
/// from its values at `t = 0, 1, …, deg`, trimmed of vanishing leading terms.
fn interpolate(f: impl Fn(Complex64) -> Complex64, deg: usize) -> Vec<Complex64> {
    let xs: Vec<f64> = (0..=deg).map(|i| i as f64).collect();
    let mut dd: Vec<Complex64> = xs.iter().map(|&x| f(Complex64::new(x, 0.0))).collect();
    for j in 1..=deg {
        for i in (j..=deg).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    // Newton form to monomial basis
    let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
    for k in (0..=deg).rev() {
        for i in (1..=deg).rev() {
            c[i] = c[i - 1] - c[i] * xs[k];
        }
        c[0] = dd[k] - c[0] * xs[k];
    }
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().unwrap().norm() < 1e-10 * scale {
        c.pop();
    }
    c
}

fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * x + k);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|i| seed.powi(i as i32)).collect();
    for _ in 0..500 {
        let prev = roots.clone();
        for i in 0..deg {
            let denom: Complex64 = (0..deg).filter(|&j| j != i).map(|j| roots[i] - roots[j]).product();
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
        }
        if roots.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15 * a.norm().max(1.0)) {
            break;
        }
    }
    roots
}
