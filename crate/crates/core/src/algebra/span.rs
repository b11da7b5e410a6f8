use std::collections::{BTreeMap, BTreeSet};

use super::laurent::LaurentA;
use super::qt::{qt_multiply, QTElement};
use crate::error::{Error, Result};
use crate::level::LatticeVector;

/// Representative of `{v, −v}` with `a > 0`, or `a = 0` and `b ≥ 0`.
fn canonical(v: LatticeVector) -> LatticeVector {
    if v.a > 0 || (v.a == 0 && v.b >= 0) {
        v
    } else {
        -v
    }
}

/// Coefficients of an invariant element in the basis `B_v = e_v + e_{−v}`,
/// keyed by canonical `v ≠ 0`. The `e_{0,0}` part is dropped since the unit
/// is always available.
fn invariant_coordinates(x: &QTElement) -> BTreeMap<LatticeVector, LaurentA> {
    x.terms()
        .filter(|(v, _)| *v != LatticeVector::ZERO && canonical(*v) == *v)
        .map(|(v, c)| (v, c.clone()))
        .collect()
}

/// Lattice pairs whose invariant basis vector `e_{a,b} + e_{−a,−b}` is reached
/// from the three curves `(1,0)`, `(0,1)`, `(1,1)` using products of total word
/// length at most `degree`.
///
/// A product of two reached vectors is expanded in the invariant basis; when
/// every term but one is already reached and the remaining coefficient is a
/// unit `±A^k`, that vector is reached too. The search runs to a fixpoint.
/// Both `v` and `−v` are returned; the unit `(0,0)` is not.
pub fn span_closure(degree: usize) -> Result<BTreeSet<LatticeVector>> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut length: BTreeMap<LatticeVector, usize> = [(1, 0), (0, 1), (1, 1)]
        .into_iter()
        .map(|(a, b)| (LatticeVector::new(a, b), 1))
        .collect();

    loop {
        let mut changed = false;
        let snapshot: Vec<(LatticeVector, usize)> = length.iter().map(|(&v, &l)| (v, l)).collect();
        for (i, &(u, lu)) in snapshot.iter().enumerate() {
            for &(w, lw) in &snapshot[i..] {
                let total = lu + lw;
                if total > degree {
                    continue;
                }
                let bu = QTElement::basis(u.a, u.b).symmetrize();
                let bw = QTElement::basis(w.a, w.b).symmetrize();
                let coords = invariant_coordinates(&qt_multiply(bu.as_element(), bw.as_element()));
                let missing: Vec<_> = coords.keys().filter(|k| !length.contains_key(*k)).collect();
                match missing.as_slice() {
                    [v] if coords[*v].is_unit() => {
                        length.insert(**v, total);
                        changed = true;
                    }
                    [] => {
                        // everything known: a unit coefficient gives a shorter derivation
                        for (k, c) in &coords {
                            if c.is_unit() && length[k] > total {
                                length.insert(*k, total);
                                changed = true;
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }

    Ok(length.keys().flat_map(|&v| [v, -v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64) -> LatticeVector {
        LatticeVector::new(a, b)
    }

    #[test]
    fn degree_one_is_generators() {
        let s = span_closure(1).unwrap();
        let want: BTreeSet<_> = [v(1, 0), v(0, 1), v(1, 1), v(-1, 0), v(0, -1), v(-1, -1)].into();
        assert_eq!(s, want);
        assert!(span_closure(0).is_err());
    }

    #[test]
    fn degree_two_reaches_two_one() {
        let s = span_closure(2).unwrap();
        assert!(s.contains(&v(2, 1)));
        assert!(s.contains(&v(-2, -1)));
        assert!(!s.contains(&v(0, 0)));
    }

    #[test]
    fn degree_six_fills_box() {
        let s = span_closure(6).unwrap();
        for a in -3..=3 {
            for b in -3..=3 {
                if (a, b) != (0, 0) {
                    assert!(s.contains(&v(a, b)), "missing ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn closure_is_symmetric_and_monotone() {
        let s3 = span_closure(3).unwrap();
        let s4 = span_closure(4).unwrap();
        assert!(s3.is_subset(&s4));
        assert!(s4.iter().all(|x| s4.contains(&-*x)));
    }
}
