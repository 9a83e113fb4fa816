//! Piecewise-linear maps between the order complexes of `L` and `E_t(L)`.
//!
//! A point of an order complex is a convex combination of the elements of
//! a chain in the proper part. `pi` is the linear extension of the vertex map
//! `{y} -> y`, `[x, z] -> x/2 + z/2`, `[x, 1] -> x`, `[0, z] -> z`, and
//! `pi_inverse` is its explicit inverse.
//!
//! For the inverse, take a point with weights `l_1, ..., l_d` on a chain
//! `x_1 < ... < x_t < y < z_{t+2} < ... < z_d` (one slot per rank, zero
//! weights allowed) and put `l_0 = l_{d+1} = 1`. With
//! `f(i) = l_i + ... + l_t`, `g(j) = l_{t+2} + ... + l_j`,
//! `f(t+1) = g(t+1) = 0` and
//! `a(i,j) = max(0, min(f(i), g(j)) - max(f(i+1), g(j-1)))`, the preimage
//! puts `l_{t+1}` on `{y}`, `2 a(i,j)` on `[x_i, z_j]` for `1 <= i <= t`,
//! `t+2 <= j <= d`, and `a(i,j)` on the boundary intervals `[0, z_j]` and
//! `[x_i, 1]`. The interior range must include `i = t`; without it the
//! weights do not sum to 1.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::et::{EtElement, EtPoset};
use crate::poset::{ElementId, GradedPoset};
use crate::rational::{frac, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("support is not a chain in the proper part: {0}")]
    NotAChain(String),
    #[error("elements {0} and {1} have the same rank")]
    RankCollision(ElementId, ElementId),
    #[error("no element of rank {rank} lies between {below} and {above}")]
    NoMiddleRankPath {
        rank: usize,
        below: ElementId,
        above: ElementId,
    },
    #[error("weights are negative or do not sum to 1")]
    BadWeights,
    #[error("support and weights have different lengths")]
    LengthMismatch,
}

/// Convex combination of chain elements. Compare with [`ChainPoint::normalized`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPoint {
    pub chain: Vec<ElementId>,
    pub weights: Vec<Rat>,
}

impl ChainPoint {
    pub fn vertex(x: ElementId) -> Self {
        Self {
            chain: vec![x],
            weights: vec![Rat::one()],
        }
    }

    /// Zero weights dropped, equal elements merged, sorted by id.
    pub fn normalized(&self) -> Self {
        let mut acc: BTreeMap<ElementId, Rat> = BTreeMap::new();
        for (x, w) in self.chain.iter().zip(&self.weights) {
            *acc.entry(*x).or_insert_with(Rat::zero) += w;
        }
        acc.retain(|_, w| !w.is_zero());
        Self {
            chain: acc.keys().copied().collect(),
            weights: acc.into_values().collect(),
        }
    }

    /// Support (zero weights removed) sorted by rank, checked to be a chain
    /// in the proper part of `p` with nonnegative weights summing to 1.
    pub fn checked_support(
        &self,
        p: &GradedPoset,
    ) -> Result<Vec<(ElementId, Rat)>, SubdivisionError> {
        if self.chain.len() != self.weights.len() {
            return Err(SubdivisionError::LengthMismatch);
        }
        let total: Rat = self.weights.iter().sum();
        if total != Rat::one() || self.weights.iter().any(Signed::is_negative) {
            return Err(SubdivisionError::BadWeights);
        }
        let mut items: Vec<(ElementId, Rat)> = Vec::new();
        for (x, w) in self.chain.iter().zip(&self.weights) {
            if *x >= p.len() {
                return Err(SubdivisionError::NotAChain(format!("unknown element {x}")));
            }
            if *x == p.bottom() || *x == p.top() {
                return Err(SubdivisionError::NotAChain(format!(
                    "element {x} is not in the proper part"
                )));
            }
            if !w.is_zero() {
                items.push((*x, w.clone()));
            }
        }
        items.sort_by_key(|(x, _)| (p.rank(*x), *x));
        for pair in items.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if p.rank(a) == p.rank(b) {
                return Err(SubdivisionError::RankCollision(a, b));
            }
            if !p.lt(a, b) {
                return Err(SubdivisionError::NotAChain(format!(
                    "elements {a} and {b} are incomparable"
                )));
            }
        }
        Ok(items)
    }
}

fn collect(items: BTreeMap<ElementId, Rat>, p: &GradedPoset) -> ChainPoint {
    let mut v: Vec<(ElementId, Rat)> = items.into_iter().filter(|(_, w)| !w.is_zero()).collect();
    v.sort_by_key(|(x, _)| (p.rank(*x), *x));
    ChainPoint {
        chain: v.iter().map(|(x, _)| *x).collect(),
        weights: v.into_iter().map(|(_, w)| w).collect(),
    }
}

/// `pi`: order complex of `E_t(L)` to that of `L`.
pub fn pi(l: &GradedPoset, e: &EtPoset, point: &ChainPoint) -> Result<ChainPoint, SubdivisionError> {
    let items = point.checked_support(&e.poset)?;
    let (bot, top) = (l.bottom(), l.top());
    let half = frac(1, 2);
    let mut out: BTreeMap<ElementId, Rat> = BTreeMap::new();
    let mut put = |x: ElementId, w: Rat| *out.entry(x).or_insert_with(Rat::zero) += w;
    for (id, w) in items {
        match e.element(id) {
            EtElement::Singleton { y } => put(y, w),
            EtElement::Interval { x, z } if x == bot => put(z, w),
            EtElement::Interval { x, z } if z == top => put(x, w),
            EtElement::Interval { x, z } => {
                put(x, &w * &half);
                put(z, &w * &half);
            }
            EtElement::TopEmpty => unreachable!("top is excluded by the support check"),
        }
    }
    Ok(collect(out, l))
}

/// `pi^{-1}`: order complex of `L` to that of `E_t(L)`.
pub fn pi_inverse(
    l: &GradedPoset,
    e: &EtPoset,
    point: &ChainPoint,
) -> Result<ChainPoint, SubdivisionError> {
    let items = point.checked_support(l)?;
    let t = e.t;
    let d = l.length() - 1;
    // slot r holds the chain element of rank r; 0 and d+1 are the bounds
    let mut elem: Vec<Option<ElementId>> = vec![None; d + 2];
    let mut lam = vec![Rat::zero(); d + 2];
    elem[0] = Some(l.bottom());
    elem[d + 1] = Some(l.top());
    lam[0] = Rat::one();
    lam[d + 1] = Rat::one();
    for (x, w) in &items {
        let r = l.rank(*x);
        elem[r] = Some(*x);
        lam[r] = w.clone();
    }
    // f(i) for i in 0..=t+1, g(j) for j in t+1..=d+1
    let mut f = vec![Rat::zero(); d + 3];
    for i in (0..=t).rev() {
        f[i] = &f[i + 1] + &lam[i];
    }
    let mut g = vec![Rat::zero(); d + 2];
    for j in (t + 2)..=(d + 1) {
        g[j] = &g[j - 1] + &lam[j];
    }
    let alpha = |i: usize, j: usize| -> Rat {
        let hi = if f[i] < g[j] { &f[i] } else { &g[j] };
        let lo = if f[i + 1] > g[j - 1] { &f[i + 1] } else { &g[j - 1] };
        let a = hi - lo;
        if a.is_positive() {
            a
        } else {
            Rat::zero()
        }
    };

    let index: HashMap<EtElement, ElementId> =
        e.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut out: BTreeMap<ElementId, Rat> = BTreeMap::new();
    let middle = |below: ElementId, above: ElementId| -> Result<(), SubdivisionError> {
        let mut between = l.up_set(below).clone();
        between.intersect_with(l.down_set(above));
        between.intersect_with(l.rank_mask(t + 1));
        if between.count_ones(..) == 0 {
            return Err(SubdivisionError::NoMiddleRankPath {
                rank: t + 1,
                below,
                above,
            });
        }
        Ok(())
    };
    if lam[t + 1].is_positive() {
        let y = elem[t + 1].expect("positive weight has an element");
        out.insert(index[&EtElement::Singleton { y }], lam[t + 1].clone());
    }
    let two = Rat::from_integer(2.into());
    for i in 0..=t {
        for j in (t + 2)..=(d + 1) {
            if i == 0 && j == d + 1 {
                continue;
            }
            let a = alpha(i, j);
            if a.is_zero() {
                continue;
            }
            let (x, z) = (
                elem[i].expect("positive coefficient needs x"),
                elem[j].expect("positive coefficient needs z"),
            );
            middle(x, z)?;
            let id = *index
                .get(&EtElement::Interval { x, z })
                .ok_or(SubdivisionError::NoMiddleRankPath {
                    rank: t + 1,
                    below: x,
                    above: z,
                })?;
            let w = if i >= 1 && j <= d { &a * &two } else { a };
            *out.entry(id).or_insert_with(Rat::zero) += w;
        }
    }
    let result = collect(out, &e.poset);
    result.checked_support(&e.poset)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::et::et;
    use crate::geometry::linalg::rref;
    use crate::poset::boolean_lattice;
    use crate::rational::RatVec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn maximal_chains(p: &GradedPoset) -> Vec<Vec<ElementId>> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<ElementId>> = p
            .upper_covers(p.bottom())
            .iter()
            .map(|&a| vec![a])
            .collect();
        while let Some(c) = stack.pop() {
            let last = *c.last().unwrap();
            let ups: Vec<ElementId> = p
                .upper_covers(last)
                .iter()
                .copied()
                .filter(|&u| u != p.top())
                .collect();
            if ups.is_empty() {
                out.push(c);
            } else {
                for u in ups {
                    let mut n = c.clone();
                    n.push(u);
                    stack.push(n);
                }
            }
        }
        out
    }

    fn random_point(rng: &mut ChaCha8Rng, chain: &[ElementId]) -> ChainPoint {
        let raw: Vec<i64> = chain.iter().map(|_| rng.gen_range(0..6)).collect();
        let total: i64 = raw.iter().sum::<i64>().max(1);
        let mut weights: Vec<Rat> = raw.iter().map(|&r| frac(r, total)).collect();
        if raw.iter().all(|&r| r == 0) {
            weights[0] = Rat::one();
        }
        ChainPoint {
            chain: chain.to_vec(),
            weights,
        }
    }

    /// Oracle: scan every maximal chain simplex of `E_t(L)` and invert the
    /// vertex map on it.
    fn brute_force_preimage(l: &GradedPoset, e: &EtPoset, q: &ChainPoint) -> Option<ChainPoint> {
        let target = q.normalized();
        for chain in maximal_chains(&e.poset) {
            let images: Vec<ChainPoint> = chain
                .iter()
                .map(|&c| pi(l, e, &ChainPoint::vertex(c)).unwrap())
                .collect();
            // unknowns mu_k; one equation per element of L plus sum = 1
            let mut rows: Vec<RatVec> = Vec::new();
            for x in 0..l.len() {
                let mut row: RatVec = images
                    .iter()
                    .map(|im| {
                        im.chain
                            .iter()
                            .position(|&y| y == x)
                            .map_or_else(Rat::zero, |k| im.weights[k].clone())
                    })
                    .collect();
                row.push(
                    target
                        .chain
                        .iter()
                        .position(|&y| y == x)
                        .map_or_else(Rat::zero, |k| target.weights[k].clone()),
                );
                rows.push(row);
            }
            let mut sum = vec![Rat::one(); chain.len()];
            sum.push(Rat::one());
            rows.push(sum);
            let n = chain.len();
            let piv = rref(&mut rows);
            if piv.contains(&n) || piv.len() < n {
                continue;
            }
            let mu: Vec<Rat> = (0..n).map(|k| rows[k][n].clone()).collect();
            if mu.iter().any(Signed::is_negative) {
                continue;
            }
            return Some(
                ChainPoint {
                    chain,
                    weights: mu,
                }
                .normalized(),
            );
        }
        None
    }

    #[test]
    fn vertex_table() {
        let l = boolean_lattice(4);
        let e = et(&l, 1).unwrap();
        for (id, el) in e.elements.iter().enumerate() {
            if id == e.poset.bottom() || id == e.poset.top() {
                continue;
            }
            let img = pi(&l, &e, &ChainPoint::vertex(id)).unwrap();
            match *el {
                EtElement::Singleton { y } => assert_eq!(img, ChainPoint::vertex(y)),
                EtElement::Interval { x, z } if x == l.bottom() => {
                    assert_eq!(img, ChainPoint::vertex(z))
                }
                EtElement::Interval { x, z } if z == l.top() => {
                    assert_eq!(img, ChainPoint::vertex(x))
                }
                EtElement::Interval { x, z } => {
                    assert_eq!(img.normalized().chain.len(), 2);
                    assert!(img.chain.contains(&x) && img.chain.contains(&z));
                    assert!(img.weights.iter().all(|w| *w == frac(1, 2)));
                }
                EtElement::TopEmpty => unreachable!(),
            }
        }
    }

    #[test]
    fn atom_goes_to_boundary_interval() {
        let l = boolean_lattice(4);
        let e = et(&l, 1).unwrap();
        let atom = 0b0001;
        let back = pi_inverse(&l, &e, &ChainPoint::vertex(atom)).unwrap();
        let want = e.find(EtElement::Interval { x: atom, z: l.top() }).unwrap();
        assert_eq!(back, ChainPoint::vertex(want));
        let y = 0b0011;
        let back = pi_inverse(&l, &e, &ChainPoint::vertex(y)).unwrap();
        assert_eq!(back, ChainPoint::vertex(e.find(EtElement::Singleton { y }).unwrap()));
    }

    #[test]
    fn round_trip_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, t) in [(4, 1), (4, 0), (5, 1), (5, 2)] {
            let l = boolean_lattice(n);
            let e = et(&l, t).unwrap();
            let chains = maximal_chains(&l);
            for _ in 0..40 {
                let c = &chains[rng.gen_range(0..chains.len())];
                let q = random_point(&mut rng, c);
                let back = pi_inverse(&l, &e, &q).unwrap();
                assert_eq!(pi(&l, &e, &back).unwrap().normalized(), q.normalized());
                assert_eq!(Some(back.normalized()), brute_force_preimage(&l, &e, &q));
            }
        }
    }

    #[test]
    fn errors() {
        let l = boolean_lattice(4);
        let e = et(&l, 1).unwrap();
        let two_atoms = ChainPoint {
            chain: vec![0b0001, 0b0010],
            weights: vec![frac(1, 2), frac(1, 2)],
        };
        assert_eq!(
            pi_inverse(&l, &e, &two_atoms),
            Err(SubdivisionError::RankCollision(0b0001, 0b0010))
        );
        let incomparable = ChainPoint {
            chain: vec![0b0001, 0b0110],
            weights: vec![frac(1, 2), frac(1, 2)],
        };
        assert!(matches!(
            pi_inverse(&l, &e, &incomparable),
            Err(SubdivisionError::NotAChain(_))
        ));
        let bad = ChainPoint {
            chain: vec![0b0001],
            weights: vec![frac(1, 2)],
        };
        assert_eq!(pi_inverse(&l, &e, &bad), Err(SubdivisionError::BadWeights));
    }
}
