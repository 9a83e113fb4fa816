use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::{GradedPoset, PosetError};
use crate::rational::Rat;

/// Face numbers `f_i` for `i` in `-1..=d` (index `i` counts elements of rank
/// `i + 1`), pair numbers `f_ij`, and whichever triples were requested.
///
/// Vectors evaluated from closed formulas may carry only part of the data, so
/// pair and triple lookups return `Option`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector {
    pub dim: usize,
    f: Vec<u64>,
    pairs: BTreeMap<(i64, i64), u64>,
    triples: BTreeMap<(i64, i64, i64), u64>,
}

impl FlagVector {
    /// A flag vector known only through its face numbers `f_0..f_{d-1}`
    /// (and optionally `f_03` for 4-polytopes).
    pub fn from_f_vector(proper: &[u64], f03: Option<u64>) -> Self {
        let dim = proper.len();
        let mut f = Vec::with_capacity(dim + 2);
        f.push(1);
        f.extend_from_slice(proper);
        f.push(1);
        let mut pairs = BTreeMap::new();
        if let Some(v) = f03 {
            pairs.insert((0, 3), v);
        }
        Self {
            dim,
            f,
            pairs,
            triples: BTreeMap::new(),
        }
    }

    /// Face numbers plus explicitly given pair numbers `f_ij`, `0 <= i < j < d`.
    pub fn with_pairs(proper: &[u64], pairs: &[((i64, i64), u64)]) -> Self {
        let mut fv = Self::from_f_vector(proper, None);
        fv.pairs.extend(pairs.iter().copied());
        fv
    }

    /// Flag numbers of a simplicial polytope: every face of dimension `j`
    /// is a simplex, so `f_ij = C(j+1, i+1) f_j`.
    pub fn simplicial(proper: &[u64]) -> Self {
        let d = proper.len() as i64;
        let mut pairs = Vec::new();
        for j in 1..d {
            for i in 0..j {
                pairs.push(((i, j), binomial((j + 1) as u64, (i + 1) as u64) * proper[j as usize]));
            }
        }
        Self::with_pairs(proper, &pairs)
    }

    /// `f_i` for `-1 <= i <= d`.
    pub fn f(&self, i: i64) -> u64 {
        self.f[(i + 1) as usize]
    }

    /// `(f_0, ..., f_{d-1})`.
    pub fn proper(&self) -> &[u64] {
        &self.f[1..=self.dim]
    }

    pub fn fij(&self, i: i64, j: i64) -> Option<u64> {
        if i == j {
            return Some(self.f(i));
        }
        let key = if i < j { (i, j) } else { (j, i) };
        if key.0 == -1 {
            return Some(self.f(key.1));
        }
        if key.1 == self.dim as i64 {
            return Some(self.f(key.0));
        }
        self.pairs.get(&key).copied()
    }

    pub fn triple(&self, i: i64, j: i64, k: i64) -> Option<u64> {
        self.triples.get(&(i, j, k)).copied()
    }

    /// `(f0, f1, f2, f3; f03)` for 4-dimensional data.
    pub fn four_shape(&self) -> Option<([u64; 4], u64)> {
        if self.dim != 4 {
            return None;
        }
        let f03 = self.fij(0, 3)?;
        Some(([self.f(0), self.f(1), self.f(2), self.f(3)], f03))
    }

    /// Generalized Dehn-Sommerville identity `sum_{i=-1}^{j} (-1)^i f_ij = 0` for every
    /// `0 <= j <= d`. Returns false if a needed pair is missing.
    pub fn satisfies_lower_euler_relations(&self) -> bool {
        (0..=self.dim as i64).all(|j| {
            let mut acc: i128 = 0;
            for i in -1..=j {
                let Some(v) = self.fij(i, j) else { return false };
                let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                acc += s * v as i128;
            }
            acc == 0
        })
    }

    /// Dual identity `sum_{j=i}^{d} (-1)^j f_ij = (-1)^d [i = d]` for
    /// `-1 <= i <= d`.
    pub fn satisfies_upper_euler_relations(&self) -> bool {
        let d = self.dim as i64;
        (-1..=d).all(|i| {
            let mut acc: i128 = 0;
            for j in i..=d {
                let Some(v) = self.fij(i, j) else { return false };
                let s = if j.rem_euclid(2) == 0 { 1 } else { -1 };
                acc += s * v as i128;
            }
            let rhs = if i == d { if d % 2 == 0 { 1 } else { -1 } } else { 0 };
            acc == rhs
        })
    }
}

impl fmt::Display for FlagVector {
    /// `"f0 f1 ... f_{d-1} ; f03=.."` (the `f03` part only in dimension 4).
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.proper().iter().map(u64::to_string).collect();
        write!(out, "{}", parts.join(" "))?;
        if self.dim == 4 {
            if let Some(v) = self.fij(0, 3) {
                write!(out, " ; f03={v}")?;
            }
        }
        Ok(())
    }
}

impl GradedPoset {
    /// Number of chains `x_1 < ... < x_k` with `x_m` of dimension index
    /// `S[m]` (rank `S[m] + 1`); `f_{} = 1`.
    pub fn flag_number(&self, indices: &[i64]) -> Result<u64, PosetError> {
        let d = self.dim();
        let mut s: Vec<i64> = indices.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&i| i < -1 || i > d) {
            return Err(PosetError::BadRankIndex(bad));
        }
        if s.is_empty() {
            return Ok(1);
        }
        let n = self.len();
        let mut counts = vec![0u64; n];
        for &x in self.elements_of_rank((s[0] + 1) as usize) {
            counts[x] = 1;
        }
        for w in s.windows(2) {
            let (lo, hi) = ((w[0] + 1) as usize, (w[1] + 1) as usize);
            let mut next = vec![0u64; n];
            for &y in self.elements_of_rank(hi) {
                let mut below = self.down_set(y).clone();
                below.intersect_with(self.rank_mask(lo));
                next[y] = below.ones().map(|x| counts[x]).sum();
            }
            counts = next;
        }
        let last = (s[s.len() - 1] + 1) as usize;
        Ok(self.elements_of_rank(last).iter().map(|&x| counts[x]).sum())
    }

    /// All `f_i`, all `f_ij`, and the triples `f_{t-2,t,t+2}` that the
    /// 2-simplicity criterion uses.
    pub fn flag_vector(&self) -> FlagVector {
        let d = self.dim();
        assert!(d >= 0, "flag vectors need length >= 1");
        let f: Vec<u64> = (-1..=d)
            .map(|i| self.elements_of_rank((i + 1) as usize).len() as u64)
            .collect();
        let mut pairs = BTreeMap::new();
        for i in 0..d {
            for j in (i + 1)..d {
                pairs.insert((i, j), self.flag_number(&[i, j]).expect("indices in range"));
            }
        }
        let mut triples = BTreeMap::new();
        for t in 1..=(d - 2).max(0) {
            if t + 2 <= d {
                let v = self.flag_number(&[t - 2, t, t + 2]).expect("indices in range");
                triples.insert((t - 2, t, t + 2), v);
            }
        }
        FlagVector {
            dim: d as usize,
            f,
            pairs,
            triples,
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `(f_1 + f_2) / (f_0 + f_3)` of a 4-dimensional flag vector.
pub fn fatness(fv: &FlagVector) -> Result<Rat, PosetError> {
    if fv.dim != 4 {
        return Err(PosetError::WrongDimension {
            expected: 4,
            found: fv.dim,
        });
    }
    Ok(Rat::new(
        BigInt::from(fv.f(1) + fv.f(2)),
        BigInt::from(fv.f(0) + fv.f(3)),
    ))
}
