use serde::{Deserialize, Serialize};

use super::{ElementId, GradedPoset, PosetError};

/// Largest `k` with every `[0, z]`, `rank(z) = k + 1`, boolean; largest `h`
/// dually; and whether the whole lattice is boolean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialityProfile {
    pub max_k_simplicial: usize,
    pub max_h_simple: usize,
    pub is_boolean: bool,
}

/// `[x, z]` is boolean iff it has exactly `len` atoms and `2^len` elements.
/// Equivalent to isomorphism with `B_len` for intervals of Eulerian lattices.
pub fn is_boolean_interval(p: &GradedPoset, x: ElementId, z: ElementId) -> bool {
    if !p.leq(x, z) {
        return false;
    }
    let len = p.rank(z) - p.rank(x);
    if len >= usize::BITS as usize - 1 {
        return false;
    }
    let mut set = p.up[x].clone();
    set.intersect_with(&p.down[z]);
    if set.count_ones(..) != 1usize << len {
        return false;
    }
    if len == 0 {
        return true;
    }
    set.intersect_with(p.rank_mask(p.rank(x) + 1));
    set.count_ones(..) == len
}

impl GradedPoset {
    /// Every interval `[x, y]`, `x < y`, has as many odd-rank as even-rank
    /// elements. All intervals are scanned directly.
    pub fn is_eulerian(&self) -> bool {
        let n = self.len();
        let mut odd = fixedbitset::FixedBitSet::with_capacity(n);
        for (r, mask) in self.rank_mask.iter().enumerate() {
            if r % 2 == 1 {
                odd.union_with(mask);
            }
        }
        for x in 0..n {
            for y in self.up[x].ones() {
                if y == x {
                    continue;
                }
                let mut set = self.up[x].clone();
                set.intersect_with(&self.down[y]);
                let total = set.count_ones(..);
                set.intersect_with(&odd);
                if 2 * set.count_ones(..) != total {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_boolean(&self) -> bool {
        is_boolean_interval(self, self.bottom, self.top)
    }

    /// Whether all lower intervals `[0, z]` with `rank(z) = k + 1` are
    /// boolean.
    pub fn is_k_simplicial(&self, k: usize) -> bool {
        self.elements_of_rank(k + 1)
            .iter()
            .all(|&z| is_boolean_interval(self, self.bottom, z))
    }

    /// Whether all upper intervals `[x, 1]` with `rank(x) = d - h` are
    /// boolean.
    pub fn is_h_simple(&self, h: usize) -> bool {
        let d = self.length() - 1;
        if h > d {
            return false;
        }
        self.elements_of_rank(d - h)
            .iter()
            .all(|&x| is_boolean_interval(self, x, self.top))
    }

    pub fn simpliciality_profile(&self) -> Result<SimplicialityProfile, PosetError> {
        if !self.is_eulerian() {
            return Err(PosetError::NotEulerian);
        }
        if self.length() == 0 {
            return Ok(SimplicialityProfile {
                max_k_simplicial: 0,
                max_h_simple: 0,
                is_boolean: true,
            });
        }
        let d = self.length() - 1;
        let max_k = (0..d)
            .take_while(|&k| self.is_k_simplicial(k))
            .last()
            .unwrap_or(0);
        let max_h = (0..d)
            .take_while(|&h| self.is_h_simple(h))
            .last()
            .unwrap_or(0);
        Ok(SimplicialityProfile {
            max_k_simplicial: max_k,
            max_h_simple: max_h,
            is_boolean: self.is_boolean(),
        })
    }
}
