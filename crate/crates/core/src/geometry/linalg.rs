//! Dense Gaussian elimination over exact rationals.

use num_traits::{One, Zero};

use crate::rational::{dot, sub, Rat, RatVec};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [RatVec]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[RatVec]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Dimension of the affine hull of `points` (`-1` for no points).
pub fn affine_dim(points: &[&RatVec]) -> i64 {
    let Some(first) = points.first() else {
        return -1;
    };
    let diffs: Vec<RatVec> = points[1..].iter().map(|p| sub(p, first)).collect();
    rank(&diffs) as i64
}

/// Indices of a maximal affinely independent subset, chosen greedily.
pub fn affine_basis(points: &[&RatVec]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut diffs: Vec<RatVec> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if chosen.is_empty() {
            chosen.push(i);
            continue;
        }
        let mut trial = diffs.clone();
        trial.push(sub(p, points[chosen[0]]));
        if rank(&trial) == trial.len() {
            diffs = trial;
            chosen.push(i);
        }
    }
    chosen
}

/// Linearly independent subset of `rows` (greedy, in order).
pub fn independent_rows(rows: &[RatVec]) -> Vec<usize> {
    let mut kept: Vec<RatVec> = Vec::new();
    let mut idx = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        kept.push(r.clone());
        if rank(&kept) == kept.len() {
            idx.push(i);
        } else {
            kept.pop();
        }
    }
    idx
}

/// Solves the square system `a x = b`; `None` if `a` is singular.
pub fn solve(a: &[RatVec], b: &[Rat]) -> Option<RatVec> {
    let n = a.len();
    let mut m: Vec<RatVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let piv = rref(&mut m);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

/// Gram matrix `G_ij = <v_i, v_j>`.
pub fn gram(vs: &[RatVec]) -> Vec<RatVec> {
    vs.iter()
        .map(|a| vs.iter().map(|b| dot(a, b)).collect())
        .collect()
}

/// Basis of `{y : rows . y = 0}` for `ncols` unknowns.
pub fn nullspace(rows: &[RatVec], ncols: usize) -> Vec<RatVec> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut y = vec![Rat::zero(); ncols];
        y[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            y[pc] = -m[r][free].clone();
        }
        basis.push(y);
    }
    basis
}

/// Determinant by elimination.
pub fn det(a: &[RatVec]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in (c + 1)..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(xs: &[i64]) -> RatVec {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn solve_and_det() {
        let a = vec![v(&[2, 1]), v(&[1, 3])];
        assert_eq!(det(&a), int(5));
        let x = solve(&a, &v(&[3, 5])).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        assert!(solve(&[v(&[1, 2]), v(&[2, 4])], &v(&[1, 1])).is_none());
    }

    #[test]
    fn affine_dims() {
        let pts = [v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[2, 0, 0]), v(&[0, 1, 0])];
        let refs: Vec<&RatVec> = pts.iter().collect();
        assert_eq!(affine_dim(&refs), 2);
        assert_eq!(affine_basis(&refs), vec![0, 1, 3]);
        assert_eq!(rank(&[v(&[1, 1]), v(&[2, 2])]), 1);
        let ns = nullspace(&[v(&[1, 1, 0])], 3);
        assert_eq!(ns, vec![v(&[-1, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(independent_rows(&[v(&[1, 1]), v(&[2, 2]), v(&[0, 1])]), vec![0, 2]);
    }
}
