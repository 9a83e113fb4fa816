//! The E_t-construction.
//!
//! For a graded poset `L` of length `d + 1` and `0 <= t <= d - 1`, `E_t(L)`
//! consists of the intervals `[x, z]` of `L` that contain an element of rank
//! `t + 1` strictly inside, the singletons `{y}` with `rank(y) = t + 1`, and
//! the empty set, ordered by reversed inclusion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{ElementId, FlagVector, GradedPoset, PosetError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EtElement {
    Interval { x: ElementId, z: ElementId },
    Singleton { y: ElementId },
    #[serde(rename = "empty")]
    TopEmpty,
}

impl EtElement {
    /// Endpoints as an interval, with `{y}` read as `[y, y]`.
    fn bounds(self) -> Option<(ElementId, ElementId)> {
        match self {
            EtElement::Interval { x, z } => Some((x, z)),
            EtElement::Singleton { y } => Some((y, y)),
            EtElement::TopEmpty => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EtError {
    #[error("t = {t} is out of range for a poset of dimension {d} (allowed {lo}..={hi})")]
    BadT { t: i64, d: i64, lo: i64, hi: i64 },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// `E_t(L)` together with what each of its elements stands for.
#[derive(Clone, Debug)]
pub struct EtPoset {
    pub poset: GradedPoset,
    /// `elements[i]` is the interval (or singleton, or empty set) behind id `i`.
    pub elements: Vec<EtElement>,
    pub t: usize,
}

impl EtPoset {
    pub fn element(&self, id: ElementId) -> EtElement {
        self.elements[id]
    }

    pub fn find(&self, e: EtElement) -> Option<ElementId> {
        self.elements.iter().position(|&f| f == e)
    }
}

fn check_t(t: i64, d: i64, lo: i64, hi: i64) -> Result<(), EtError> {
    if t < lo || t > hi {
        return Err(EtError::BadT { t, d, lo, hi });
    }
    Ok(())
}

/// Builds `E_t(L)`. Ranks: `[x, z]` gets `r(x) + d + 1 - r(z)`, `{y}` gets
/// `d`, the empty set `d + 1`.
pub fn et(l: &GradedPoset, t: usize) -> Result<EtPoset, EtError> {
    let d = l.dim();
    check_t(t as i64, d, 0, d - 1)?;
    let d = d as usize;
    let middle = l.rank_mask(t + 1);

    let mut elements = Vec::new();
    let mut ranks = Vec::new();
    for r_x in 0..=t {
        for &x in l.elements_of_rank(r_x) {
            let mut above = l.up_set(x).clone();
            above.intersect_with(middle);
            if above.count_ones(..) == 0 {
                continue;
            }
            for r_z in (t + 2)..=(d + 1) {
                for &z in l.elements_of_rank(r_z) {
                    if !l.leq(x, z) || above.is_disjoint(l.down_set(z)) {
                        continue;
                    }
                    elements.push(EtElement::Interval { x, z });
                    ranks.push(r_x + d + 1 - r_z);
                }
            }
        }
    }
    for &y in l.elements_of_rank(t + 1) {
        elements.push(EtElement::Singleton { y });
        ranks.push(d);
    }
    elements.push(EtElement::TopEmpty);
    ranks.push(d + 1);

    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); d + 2];
    for (i, &r) in ranks.iter().enumerate() {
        by_rank[r].push(i);
    }
    // a < b with rank(b) = rank(a) + 1 is a cover
    let below = |a: EtElement, b: EtElement| match (a.bounds(), b.bounds()) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some((x, z)), Some((x2, z2))) => l.leq(x, x2) && l.leq(z2, z),
    };
    let mut covers = Vec::new();
    for r in 0..=d {
        for &a in &by_rank[r] {
            for &b in &by_rank[r + 1] {
                if below(elements[a], elements[b]) {
                    covers.push((a, b));
                }
            }
        }
    }
    let poset = GradedPoset::from_covers(&ranks, &covers)?;
    Ok(EtPoset { poset, elements, t })
}

/// Face numbers of `E_t(L)` from the flag numbers of `L`: for `k < d - 1`,
/// `f_k = sum f_ij` over `-1 <= i < t < j <= d` with `j - i = d - k`;
/// `f_{d-1} = f_t`.
pub fn et_fvector_formula(fv: &FlagVector, t: usize) -> Result<Vec<u64>, EtError> {
    let d = fv.dim as i64;
    let t = t as i64;
    check_t(t, d, 0, d - 1)?;
    let mut out = Vec::with_capacity(d as usize);
    for k in 0..d {
        if k == d - 1 {
            out.push(fv.f(t));
            continue;
        }
        let gap = d - k;
        let mut s = 0;
        for i in -1..t {
            let j = i + gap;
            if j > t && j <= d {
                s += fv.fij(i, j).expect("pair flag numbers are present");
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// `f_{t-2,t,t+2}(L) = 6 f_{t-2,t+2}(L)`; on Eulerian lattices this holds
/// exactly when `E_t(L)` is 2-simple.
pub fn et_two_simple_criterion(l: &GradedPoset, t: usize) -> Result<bool, EtError> {
    let d = l.dim();
    let t = t as i64;
    check_t(t, d, 1, d - 2)?;
    let three = l.flag_number(&[t - 2, t, t + 2])?;
    let two = l.flag_number(&[t - 2, t + 2])?;
    Ok(three == 6 * two)
}

/// Predicted answer to "is `E_t(L)` k-simplicial": `L` must be
/// `min(k, t-1)`-simplicial and `min(k, d-t-2)`-simple.
pub fn predicted_k_simplicial(l: &GradedPoset, t: usize, k: usize) -> Result<bool, EtError> {
    let d = l.dim();
    check_t(t as i64, d, 1, d - 2)?;
    if k as i64 > d - 2 {
        return Err(EtError::BadT {
            t: k as i64,
            d,
            lo: 0,
            hi: d - 2,
        });
    }
    let d = d as usize;
    let s = k.min(t - 1);
    let r = k.min(d - t - 2);
    Ok(l.is_k_simplicial(s) && l.is_h_simple(r))
}

/// Combinatorial model of the generalized truncation `D_k`: the opposite of
/// `E_k(L)`. Allowed for `0 <= k <= d - 1`.
pub fn d_construction(l: &GradedPoset, k: usize) -> Result<EtPoset, EtError> {
    let e = et(l, k)?;
    Ok(EtPoset {
        poset: e.poset.opposite(),
        elements: e.elements,
        t: e.t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{are_isomorphic, boolean_lattice};

    #[test]
    fn tetrahedron_t1_is_cube_lattice() {
        let e = et(&boolean_lattice(4), 1).unwrap();
        assert_eq!(e.poset.rank_sizes(), vec![1, 8, 12, 6, 1]);
        assert!(e.poset.is_eulerian());
        assert!(e.poset.is_lattice());
        assert_eq!(e.element(e.poset.top()), EtElement::TopEmpty);
        let EtElement::Interval { x, z } = e.element(e.poset.bottom()) else {
            panic!("bottom must be an interval")
        };
        let b = boolean_lattice(4);
        assert_eq!((x, z), (b.bottom(), b.top()));
    }

    #[test]
    fn boundary_cases() {
        for n in 3..=5 {
            let b = boolean_lattice(n);
            let d = b.dim() as usize;
            let e0 = et(&b, 0).unwrap();
            assert!(are_isomorphic(&e0.poset, &b.opposite()).is_some());
            let e_last = et(&b, d - 1).unwrap();
            assert!(are_isomorphic(&e_last.poset, &b).is_some());
        }
    }

    #[test]
    fn bad_t() {
        let b = boolean_lattice(4);
        assert!(matches!(et(&b, 3), Err(EtError::BadT { .. })));
        assert!(matches!(et_two_simple_criterion(&b, 0), Err(EtError::BadT { .. })));
        assert!(matches!(d_construction(&b, 3), Err(EtError::BadT { .. })));
    }

    #[test]
    fn simplex_formula() {
        let fv = boolean_lattice(5).flag_vector();
        assert_eq!(et_fvector_formula(&fv, 1).unwrap(), vec![10, 30, 30, 10]);
        let e = et(&boolean_lattice(5), 1).unwrap();
        assert_eq!(e.poset.flag_vector().four_shape(), Some(([10, 30, 30, 10], 50)));
    }

    #[test]
    fn simplex_two_simple() {
        let b = boolean_lattice(5);
        assert_eq!(b.flag_number(&[-1, 1, 3]).unwrap(), 30);
        assert!(et_two_simple_criterion(&b, 1).unwrap());
    }

    #[test]
    fn serde_tags() {
        let s = serde_json::to_string(&EtElement::Interval { x: 1, z: 4 }).unwrap();
        assert_eq!(s, r#"{"kind":"interval","x":1,"z":4}"#);
        let s = serde_json::to_string(&EtElement::Singleton { y: 2 }).unwrap();
        assert_eq!(s, r#"{"kind":"singleton","y":2}"#);
        let back: EtElement = serde_json::from_str(r#"{"kind":"empty"}"#).unwrap();
        assert_eq!(back, EtElement::TopEmpty);
    }
}
