//! A small exact simplex method: maximize `c.y` subject to `A y = b`,
//! `y >= 0`. Two phases, Bland's rule, dense tableau.

use num_traits::{One, Signed, Zero};

use crate::rational::{Rat, RatVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, y: RatVec },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows[i] = coefficients followed by rhs
    rows: Vec<RatVec>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..self.rows.len() {
            if i != r && !self.rows[i][c].is_zero() {
                let f = self.rows[i][c].clone();
                for j in 0..=self.ncols {
                    let delta = &f * &self.rows[r][j];
                    self.rows[i][j] -= delta;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximize `obj` over the columns in `allowed`. Returns false if unbounded.
    fn run(&mut self, obj: &[Rat], allowed: &[bool]) -> bool {
        loop {
            // reduced cost of column j: obj_j - sum_i obj_{basis_i} * a_ij
            let entering = (0..self.ncols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let mut rc = obj[j].clone();
                    for (i, &bi) in self.basis.iter().enumerate() {
                        rc -= &obj[bi] * &self.rows[i][j];
                    }
                    rc.is_positive()
                }
            });
            let Some(c) = entering else { return true };
            let mut best: Option<(Rat, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rows[i][self.ncols] / a;
                    let better = match &best {
                        None => true,
                        Some((r, bi)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, r)) = best else { return false };
            self.pivot(r, c);
        }
    }
}

pub fn maximize(c: &[Rat], a: &[RatVec], b: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    // columns: n structural, then m artificials
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: RatVec = a[i]
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        for k in 0..m {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        ncols,
    };

    // phase 1: maximize -sum(artificials)
    let mut obj1 = vec![Rat::zero(); ncols];
    for o in obj1.iter_mut().skip(n) {
        *o = -Rat::one();
    }
    let all = vec![true; ncols];
    t.run(&obj1, &all);
    let infeas: Rat = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bi)| bi >= n)
        .map(|(i, _)| t.rows[i][ncols].clone())
        .sum();
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // phase 2
    let mut obj2 = vec![Rat::zero(); ncols];
    obj2[..n].clone_from_slice(c);
    let structural: Vec<bool> = (0..ncols).map(|j| j < n).collect();
    if !t.run(&obj2, &structural) {
        return LpOutcome::Unbounded;
    }
    let mut y = vec![Rat::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            y[bi] = t.rows[i][ncols].clone();
        }
    }
    let value = c.iter().zip(&y).map(|(ci, yi)| ci * yi).sum();
    LpOutcome::Optimal { value, y }
}

/// Largest `s` such that `x = sum w_k p_k` with `sum w_k = 1` and every
/// `w_k >= s`; `None` if `x` is not in the convex hull. `x` is in the
/// relative interior iff the result is positive.
pub fn min_weight_margin(points: &[&RatVec], x: &[Rat]) -> Option<Rat> {
    let k = points.len();
    if k == 0 {
        return None;
    }
    let dim = x.len();
    // variables: s, u_1..u_k with w_k = s + u_k
    let mut a: Vec<RatVec> = Vec::with_capacity(dim + 1);
    for coord in 0..dim {
        let mut row = Vec::with_capacity(k + 1);
        row.push(points.iter().map(|p| p[coord].clone()).sum());
        row.extend(points.iter().map(|p| p[coord].clone()));
        a.push(row);
    }
    let mut sum_row = vec![Rat::from_integer(k.into())];
    sum_row.extend(std::iter::repeat_n(Rat::one(), k));
    a.push(sum_row);
    let mut b: RatVec = x.to_vec();
    b.push(Rat::one());
    let mut c = vec![Rat::zero(); k + 1];
    c[0] = Rat::one();
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}
