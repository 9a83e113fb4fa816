//! Finite bounded graded posets.
//!
//! Elements are dense integer ids. The order relation is materialised as
//! one up-set and one down-set bitset per element, so comparability tests
//! and interval scans are bitset operations.

mod eulerian;
mod flags;
mod incidence;
mod iso;
mod lattice;

pub use eulerian::{is_boolean_interval, SimplicialityProfile};
pub use flags::{fatness, FlagVector};
pub use incidence::{face_lattice_from_incidence, FaceLattice};
pub use iso::{are_isomorphic, Isomorphism};
pub use lattice::GradedLattice;

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub type ElementId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("not graded: {0}")]
    NotGraded(String),
    #[error("no unique bottom element")]
    NoBoundedBottom,
    #[error("no unique top element")]
    NoBoundedTop,
    #[error("cover {lower} < {upper} does not raise the declared rank by exactly one")]
    RankSkip { lower: ElementId, upper: ElementId },
    #[error("elements {0} and {1} are not comparable")]
    NotComparable(ElementId, ElementId),
    #[error("unknown element id {0}")]
    UnknownElement(ElementId),
    #[error("rank index {0} outside -1..=d")]
    BadRankIndex(i64),
    #[error("poset is not Eulerian")]
    NotEulerian,
    #[error("poset is not a lattice")]
    NotALattice,
    #[error("expected dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
}

#[derive(Clone, Debug)]
pub struct GradedPoset {
    rank: Vec<usize>,
    lower: Vec<Vec<ElementId>>,
    upper: Vec<Vec<ElementId>>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    by_rank: Vec<Vec<ElementId>>,
    rank_mask: Vec<FixedBitSet>,
    bottom: ElementId,
    top: ElementId,
}

impl GradedPoset {
    /// Builds and validates a poset from declared ranks and cover pairs
    /// `(lower, upper)`. The order is the reflexive-transitive closure of the
    /// covers.
    pub fn from_covers(
        ranks: &[usize],
        covers: &[(ElementId, ElementId)],
    ) -> Result<Self, PosetError> {
        let n = ranks.len();
        if n == 0 {
            return Err(PosetError::NoBoundedBottom);
        }
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n {
                return Err(PosetError::UnknownElement(a));
            }
            if b >= n {
                return Err(PosetError::UnknownElement(b));
            }
            if a == b {
                return Err(PosetError::NotGraded(format!("element {a} covers itself")));
            }
            upper[a].push(b);
            lower[b].push(a);
        }
        for l in lower.iter_mut().chain(upper.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }

        let minimal: Vec<_> = (0..n).filter(|&x| lower[x].is_empty()).collect();
        let maximal: Vec<_> = (0..n).filter(|&x| upper[x].is_empty()).collect();
        if minimal.len() != 1 {
            return Err(PosetError::NoBoundedBottom);
        }
        if maximal.len() != 1 {
            return Err(PosetError::NoBoundedTop);
        }
        let bottom = minimal[0];
        let top = maximal[0];

        // Shortest and longest cover paths from the bottom must agree.
        let mut indeg: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut shortest = vec![usize::MAX; n];
        let mut longest = vec![0usize; n];
        shortest[bottom] = 0;
        let mut queue = VecDeque::from([bottom]);
        let mut order = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &upper[x] {
                shortest[y] = shortest[y].min(shortest[x] + 1);
                longest[y] = longest[y].max(longest[x] + 1);
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if order.len() != n {
            return Err(PosetError::NotGraded("cover relation has a cycle".into()));
        }
        if let Some(x) = (0..n).find(|&x| shortest[x] != longest[x]) {
            return Err(PosetError::NotGraded(format!(
                "maximal chains through element {x} have different lengths"
            )));
        }
        for (b, lows) in lower.iter().enumerate() {
            for &a in lows {
                if ranks[b] != ranks[a] + 1 {
                    return Err(PosetError::RankSkip { lower: a, upper: b });
                }
            }
        }
        if ranks[bottom] != 0 {
            return Err(PosetError::NotGraded("bottom element must have rank 0".into()));
        }

        let length = ranks[top];
        let mut by_rank = vec![Vec::new(); length + 1];
        let mut rank_mask = vec![FixedBitSet::with_capacity(n); length + 1];
        for x in 0..n {
            by_rank[ranks[x]].push(x);
            rank_mask[ranks[x]].insert(x);
        }

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &x in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &upper[x] {
                set.union_with(&up[y]);
            }
            up[x] = set;
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for &x in &order {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &lower[x] {
                set.union_with(&down[y]);
            }
            down[x] = set;
        }

        Ok(Self {
            rank: ranks.to_vec(),
            lower,
            upper,
            up,
            down,
            by_rank,
            rank_mask,
            bottom,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// Rank of the top element.
    pub fn length(&self) -> usize {
        self.rank[self.top]
    }

    /// `length - 1`; the dimension when the poset is a face lattice.
    pub fn dim(&self) -> i64 {
        self.length() as i64 - 1
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn rank(&self, x: ElementId) -> usize {
        self.rank[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn elements_of_rank(&self, r: usize) -> &[ElementId] {
        self.by_rank.get(r).map_or(&[], Vec::as_slice)
    }

    pub fn rank_mask(&self, r: usize) -> &FixedBitSet {
        &self.rank_mask[r]
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: ElementId) -> &[ElementId] {
        &self.lower[x]
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: ElementId) -> &[ElementId] {
        &self.upper[x]
    }

    pub fn up_set(&self, x: ElementId) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: ElementId) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn cover_pairs(&self) -> Vec<(ElementId, ElementId)> {
        let mut pairs = Vec::new();
        for (a, ups) in self.upper.iter().enumerate() {
            for &b in ups {
                pairs.push((a, b));
            }
        }
        pairs
    }

    /// Number of elements at each rank `0..=length`.
    pub fn rank_sizes(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    /// Elements of the closed interval `[x, z]` as a bitset.
    pub fn interval_set(&self, x: ElementId, z: ElementId) -> Result<FixedBitSet, PosetError> {
        self.check_id(x)?;
        self.check_id(z)?;
        if !self.leq(x, z) {
            return Err(PosetError::NotComparable(x, z));
        }
        let mut set = self.up[x].clone();
        set.intersect_with(&self.down[z]);
        Ok(set)
    }

    /// The interval `[x, z]` as a poset with ranks renormalised to start at
    /// zero, together with the original ids of its elements.
    pub fn interval_with_ids(
        &self,
        x: ElementId,
        z: ElementId,
    ) -> Result<(GradedPoset, Vec<ElementId>), PosetError> {
        let set = self.interval_set(x, z)?;
        Ok((self.restrict(&set), set.ones().collect()))
    }

    pub fn interval(&self, x: ElementId, z: ElementId) -> Result<GradedPoset, PosetError> {
        self.interval_with_ids(x, z).map(|(p, _)| p)
    }

    /// Restriction to a convex bounded subset (used for intervals).
    fn restrict(&self, set: &FixedBitSet) -> GradedPoset {
        let ids: Vec<_> = set.ones().collect();
        let mut index = vec![usize::MAX; self.len()];
        for (i, &x) in ids.iter().enumerate() {
            index[x] = i;
        }
        let base = ids.iter().map(|&x| self.rank[x]).min().unwrap_or(0);
        let ranks: Vec<_> = ids.iter().map(|&x| self.rank[x] - base).collect();
        let mut covers = Vec::new();
        for &a in &ids {
            for &b in &self.upper[a] {
                if set.contains(b) {
                    covers.push((index[a], index[b]));
                }
            }
        }
        GradedPoset::from_covers(&ranks, &covers)
            .expect("intervals of a graded poset are graded")
    }

    /// The same elements with the order reversed; ranks become
    /// `length - rank`.
    pub fn opposite(&self) -> GradedPoset {
        let length = self.length();
        Self {
            rank: self.rank.iter().map(|r| length - r).collect(),
            lower: self.upper.clone(),
            upper: self.lower.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
            by_rank: self.by_rank.iter().rev().cloned().collect(),
            rank_mask: self.rank_mask.iter().rev().cloned().collect(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Möbius function by the defining recursion
    /// `mu(x,x) = 1`, `mu(x,y) = -sum_{x <= z < y} mu(x,z)`.
    pub fn moebius(&self, x: ElementId, y: ElementId) -> Result<i64, PosetError> {
        let set = self.interval_set(x, y)?;
        let mut members: Vec<_> = set.ones().collect();
        members.sort_by_key(|&z| self.rank[z]);
        let mut mu = vec![0i64; self.len()];
        for &z in &members {
            if z == x {
                mu[z] = 1;
                continue;
            }
            let mut below = self.down[z].clone();
            below.intersect_with(&set);
            mu[z] = -below.ones().filter(|&w| w != z).map(|w| mu[w]).sum::<i64>();
        }
        Ok(mu[y])
    }

    pub(crate) fn check_id(&self, x: ElementId) -> Result<(), PosetError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(PosetError::UnknownElement(x))
        }
    }
}

/// Boolean lattice `B_n` on the subsets of an `n`-set; element `i` is the
/// subset with bitmask `i`.
pub fn boolean_lattice(n: usize) -> GradedPoset {
    let size = 1usize << n;
    let ranks: Vec<_> = (0..size).map(|s| s.count_ones() as usize).collect();
    let mut covers = Vec::new();
    for s in 0..size {
        for i in 0..n {
            if s & (1 << i) == 0 {
                covers.push((s, s | (1 << i)));
            }
        }
    }
    GradedPoset::from_covers(&ranks, &covers).expect("boolean lattice is graded")
}

/// The chain `0 < 1 < ... < n` of length `n`.
pub fn chain(n: usize) -> GradedPoset {
    let ranks: Vec<_> = (0..=n).collect();
    let covers: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
    GradedPoset::from_covers(&ranks, &covers).expect("chains are graded")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_chain_is_valid() {
        let p = chain(2);
        assert_eq!(p.length(), 2);
        assert_eq!(p.len(), 3);
        assert_eq!(p.bottom(), 0);
        assert_eq!(p.top(), 2);
        assert!(p.lt(0, 2));
    }

    #[test]
    fn boolean_b3_is_valid() {
        let b3 = boolean_lattice(3);
        assert_eq!(b3.length(), 3);
        assert_eq!(b3.rank_sizes(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn cover_spanning_two_ranks_is_rank_skip() {
        let err = GradedPoset::from_covers(&[0, 2], &[(0, 1)]).unwrap_err();
        assert_eq!(err, PosetError::RankSkip { lower: 0, upper: 1 });
    }

    #[test]
    fn unbalanced_chains_are_not_graded() {
        // 0 < a < b < 1 and 0 < c < 1
        let err = GradedPoset::from_covers(
            &[0, 1, 2, 1, 3],
            &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
        )
        .unwrap_err();
        assert!(matches!(err, PosetError::NotGraded(_)));
    }

    #[test]
    fn missing_bounds_are_reported() {
        assert_eq!(
            GradedPoset::from_covers(&[0, 0, 1], &[(0, 2), (1, 2)]).unwrap_err(),
            PosetError::NoBoundedBottom
        );
        assert_eq!(
            GradedPoset::from_covers(&[0, 1, 1], &[(0, 1), (0, 2)]).unwrap_err(),
            PosetError::NoBoundedTop
        );
    }

    #[test]
    fn opposite_reverses_rank_sizes() {
        let p = GradedPoset::from_covers(
            &[0, 1, 1, 1, 2, 3],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (4, 5)],
        )
        .unwrap();
        let op = p.opposite();
        let mut sizes = p.rank_sizes();
        sizes.reverse();
        assert_eq!(op.rank_sizes(), sizes);
        assert!(op.leq(5, 0));
        assert_eq!(op.bottom(), 5);
        assert!(are_isomorphic(&boolean_lattice(3).opposite(), &boolean_lattice(3)).is_some());
    }

    #[test]
    fn intervals() {
        let b3 = boolean_lattice(3);
        let whole = b3.interval(b3.bottom(), b3.top()).unwrap();
        assert!(are_isomorphic(&whole, &b3).is_some());
        let single = b3.interval(5, 5).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.length(), 0);
        assert_eq!(b3.interval(1, 2).unwrap_err(), PosetError::NotComparable(1, 2));
    }

    #[test]
    fn moebius_values() {
        for n in 1..=5 {
            let b = boolean_lattice(n);
            let expected = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(b.moebius(b.bottom(), b.top()).unwrap(), expected);
            assert_eq!(b.moebius(3 % (1 << n), 3 % (1 << n)).unwrap(), 1);
        }
        // On the 3-chain mu(0,1) = 0, not (-1)^2.
        let c = chain(2);
        assert_eq!(c.moebius(0, 2).unwrap(), 0);
        assert_eq!(c.moebius(0, 1).unwrap(), -1);
    }
}
