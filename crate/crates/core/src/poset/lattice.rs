use fixedbitset::FixedBitSet;

use super::{ElementId, GradedPoset, PosetError};

/// A graded poset in which every pair has a join and a meet. Joins and meets
/// are evaluated on demand from the up/down bitsets.
#[derive(Clone, Debug)]
pub struct GradedLattice {
    poset: GradedPoset,
}

impl GradedLattice {
    pub fn new(poset: GradedPoset) -> Result<Self, PosetError> {
        if poset.is_lattice() {
            Ok(Self { poset })
        } else {
            Err(PosetError::NotALattice)
        }
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    pub fn into_poset(self) -> GradedPoset {
        self.poset
    }

    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.poset.join(a, b).expect("lattice joins exist")
    }

    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.poset.meet(a, b).expect("lattice meets exist")
    }

    pub fn opposite(&self) -> GradedLattice {
        GradedLattice {
            poset: self.poset.opposite(),
        }
    }
}

impl std::ops::Deref for GradedLattice {
    type Target = GradedPoset;

    fn deref(&self) -> &GradedPoset {
        &self.poset
    }
}

/// The lowest-ranked member of `bounds`, provided every member lies in its
/// up-set.
fn least_of(poset: &GradedPoset, bounds: &FixedBitSet) -> Option<ElementId> {
    let candidate = bounds.ones().min_by_key(|&u| poset.rank(u))?;
    bounds.is_subset(&poset.up[candidate]).then_some(candidate)
}

impl GradedPoset {
    /// Least upper bound of `a` and `b`, if unique.
    pub fn join(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        let mut ub = self.up[a].clone();
        ub.intersect_with(&self.up[b]);
        least_of(self, &ub)
    }

    /// Greatest lower bound of `a` and `b`, if unique.
    pub fn meet(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        let mut lb = self.down[a].clone();
        lb.intersect_with(&self.down[b]);
        let candidate = lb.ones().max_by_key(|&u| self.rank(u))?;
        lb.is_subset(&self.down[candidate]).then_some(candidate)
    }

    /// True iff all pairwise joins and meets exist.
    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.leq(a, b) || self.leq(b, a) {
                    continue;
                }
                if self.join(a, b).is_none() || self.meet(a, b).is_none() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::super::boolean_lattice;
    use super::*;

    #[test]
    fn boolean_lattice_is_lattice() {
        let b4 = boolean_lattice(4);
        assert!(b4.is_lattice());
        let l = GradedLattice::new(b4).unwrap();
        assert_eq!(l.join(0b0011, 0b0110), 0b0111);
        assert_eq!(l.meet(0b0011, 0b0110), 0b0010);
    }

    #[test]
    fn bowtie_is_not_a_lattice() {
        // 0 < {a,b} < {c,d} < 1 with a,b both below c,d
        let p = GradedPoset::from_covers(
            &[0, 1, 1, 2, 2, 3],
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        assert!(!p.is_lattice());
        assert_eq!(p.join(1, 2), None);
        assert!(matches!(GradedLattice::new(p), Err(PosetError::NotALattice)));
    }
}
