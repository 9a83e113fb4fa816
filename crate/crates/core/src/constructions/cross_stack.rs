//! `C^4_n`: a stack of `n` cross polytopes glued along facets, with the
//! symmetries of a regular 3-simplex (coordinate permutations).
//!
//! Vertices come in layers `p_{m,i} = alpha_m 1 + beta_m e_i`, `m = 0..=n`,
//! starting from `-e_i` and `e_i`. Gluing by plain reflection through the
//! shared facet is not convex (two regular cross polytopes meet at a
//! dihedral angle of 240 degrees), so layer `m + 1` is the reflection of
//! layer `m - 1` through the hyperplane of layer `m`, shrunk towards the
//! layer centroid by a factor `lambda_m`, halved until the partial stack
//! certifies.
//!
//! Cuts: midpoints for `n = 1`. Otherwise one parameter per edge orbit.
//! Within-layer edges are cut at their midpoints (forced by symmetry), the
//! first between-layer orbit gets a chosen parameter, and each later one is
//! solved exactly so that the cut points around every vertex are coplanar.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::truncation::{cuts_through_edge_points, midpoint_cuts, truncate_all, CutSystem};
use super::ConstructionError;
use crate::geometry::linalg::det;
use crate::geometry::{hyperplane_through, validate, Hyperplane, PolytopeData, VHPolytope};
use crate::rational::{add, centroid, frac, int, scale, sub, Rat, RatVec};

const MAX_HALVINGS: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub enum CutStrategy {
    Midpoint,
    /// Between-layer edge parameters `B_0, ..., B_{n-1}`.
    SymmetricOrbit { between: Vec<Rat> },
    /// No certified cuts; only the combinatorial truncation is available.
    Combinatorial { reason: String },
}

impl CutStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            CutStrategy::Midpoint => "midpoint",
            CutStrategy::SymmetricOrbit { .. } => "symmetric-orbit",
            CutStrategy::Combinatorial { .. } => "combinatorial",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrossStack {
    pub n: usize,
    /// Shrink factor used for layers `2..=n`.
    pub lambdas: Vec<Rat>,
    pub polytope: VHPolytope,
    pub strategy: CutStrategy,
    pub cuts: Option<CutSystem>,
}

impl CrossStack {
    /// Geometric `D_1`, if a cut system certified.
    pub fn truncation(&self) -> Option<Result<VHPolytope, ConstructionError>> {
        self.cuts.as_ref().map(|c| truncate_all(&self.polytope, c))
    }
}

fn vertex(alpha: &Rat, beta: &Rat, i: usize) -> RatVec {
    (0..4)
        .map(|k| if k == i { alpha + beta } else { alpha.clone() })
        .collect()
}

/// Next layer: reflect layer `m - 1` through the hyperplane of layer `m`,
/// then shrink towards the centroid of layer `m` by `lambda`.
fn next_layer(prev: &(Rat, Rat), cur: &(Rat, Rat), lambda: &Rat) -> (Rat, Rat) {
    let (a0, b0) = prev;
    let (a1, b1) = cur;
    let s0 = a0 * int(4) + b0;
    let s1 = a1 * int(4) + b1;
    let c = a1 + b1 / int(4);
    let reflected = a0 + (&s1 - &s0) / int(2);
    let alpha = &c + lambda * (reflected - &c);
    (alpha, lambda * b0)
}

/// `(alpha_m, beta_m)` for all layers.
fn build_polytope(ls: &[(Rat, Rat)]) -> Result<VHPolytope, ConstructionError> {
    let n = ls.len() - 1;
    let mut vertices = Vec::with_capacity(4 * (n + 1));
    for (a, b) in ls {
        for i in 0..4 {
            vertices.push(vertex(a, b, i));
        }
    }
    let center = centroid(&vertices);
    let mut sets: Vec<Vec<usize>> = vec![(0..4).collect()];
    for m in 0..n {
        for mask in 1..15u32 {
            sets.push(
                (0..4)
                    .map(|i| if mask >> i & 1 == 1 { 4 * (m + 1) + i } else { 4 * m + i })
                    .collect(),
            );
        }
    }
    sets.push((0..4).map(|i| 4 * n + i).collect());
    let mut facets = Vec::with_capacity(sets.len());
    for s in &sets {
        let pts: Vec<&RatVec> = s.iter().map(|&v| &vertices[v]).collect();
        let h = hyperplane_through(&pts, &[], &center).ok_or_else(|| {
            ConstructionError::PlacementFailed(format!("facet {s:?} is degenerate"))
        })?;
        facets.push(Hyperplane::new(h.a.iter().map(|x| -x).collect(), -h.b));
    }
    Ok(validate(PolytopeData {
        ambient: 4,
        hull: vec![],
        vertices,
        facets,
        center: Some(center),
        r2: None,
    })?)
}

/// Invariant coordinates `(x_0, x_1 + x_2 + x_3, 1)` under permutations
/// fixing the first coordinate.
fn invariant_row(x: &[Rat]) -> RatVec {
    vec![x[0].clone(), &x[1] + &x[2] + &x[3], Rat::one()]
}

fn lerp(p: &[Rat], q: &[Rat], s: &Rat) -> RatVec {
    add(p, &scale(&sub(q, p), s))
}

/// Between-layer parameters from `b0`, or `None` if some solve leaves `(0,1)`.
fn solve_between(ls: &[(Rat, Rat)], b0: &Rat) -> Option<Vec<Rat>> {
    let n = ls.len() - 1;
    let p = |m: usize, i: usize| vertex(&ls[m].0, &ls[m].1, i);
    let mut between = vec![b0.clone()];
    for m in 1..n {
        let here = p(m, 0);
        let within = lerp(&here, &p(m, 1), &frac(1, 2));
        let down = lerp(&p(m - 1, 1), &here, &between[m - 1]);
        let up = |tau: &Rat| lerp(&here, &p(m + 1, 1), tau);
        let at = |tau: &Rat| {
            det(&[
                invariant_row(&within),
                invariant_row(&down),
                invariant_row(&up(tau)),
            ])
        };
        let d0 = at(&Rat::zero());
        let d1 = at(&Rat::one());
        if d0 == d1 {
            return None;
        }
        let tau = &d0 / (&d0 - &d1);
        if !tau.is_positive() || tau >= Rat::one() {
            return None;
        }
        between.push(tau);
    }
    Some(between)
}

fn orbit_edge_points(
    p: &VHPolytope,
    between: &[Rat],
) -> BTreeMap<(usize, usize), RatVec> {
    let mut out = BTreeMap::new();
    for (v, w) in super::truncation::edges(p) {
        let (mv, mw) = (v / 4, w / 4);
        let s = if mv == mw {
            frac(1, 2)
        } else {
            // v is in the lower layer because ids grow with the layer
            between[mv].clone()
        };
        out.insert((v, w), lerp(&p.vertices[v], &p.vertices[w], &s));
    }
    out
}

const B0_GRID: [(i64, i64); 13] = [
    (1, 2),
    (2, 5),
    (3, 5),
    (1, 3),
    (2, 3),
    (1, 4),
    (3, 4),
    (1, 5),
    (4, 5),
    (1, 6),
    (5, 6),
    (1, 8),
    (7, 8),
];

pub fn build_cross_stack(n: usize) -> Result<CrossStack, ConstructionError> {
    if n < 1 {
        return Err(ConstructionError::BadParams("C^4_n needs n >= 1".into()));
    }
    // each layer gets its own shrink factor, fixed before the next is added
    let mut ls = vec![(int(0), int(-1)), (int(0), int(1))];
    let mut lambdas = Vec::new();
    let mut polytope = build_polytope(&ls)?;
    for m in 1..n {
        let mut lambda = frac(1, 2);
        let mut done = None;
        let mut last = String::new();
        for _ in 0..MAX_HALVINGS {
            let mut trial = ls.clone();
            trial.push(next_layer(&ls[m - 1], &ls[m], &lambda));
            match build_polytope(&trial) {
                Ok(p) => {
                    done = Some((trial, p));
                    break;
                }
                Err(e) => last = e.to_string(),
            }
            lambda *= frac(1, 2);
        }
        let Some((trial, p)) = done else {
            return Err(ConstructionError::PlacementFailed(format!(
                "layer {}: no convex gluing found: {last}",
                m + 1
            )));
        };
        ls = trial;
        polytope = p;
        lambdas.push(lambda);
    }

    if let Ok(cuts) = midpoint_cuts(&polytope) {
        return Ok(CrossStack {
            n,
            lambdas,
            polytope,
            strategy: CutStrategy::Midpoint,
            cuts: Some(cuts),
        });
    }
    let mut reason = String::from("no grid value of B_0 gave coplanar cut points");
    for (num, den) in B0_GRID {
        let Some(between) = solve_between(&ls, &frac(num, den)) else {
            continue;
        };
        match cuts_through_edge_points(&polytope, orbit_edge_points(&polytope, &between)) {
            Ok(cuts) => {
                return Ok(CrossStack {
                    n,
                    lambdas,
                    polytope,
                    strategy: CutStrategy::SymmetricOrbit { between },
                    cuts: Some(cuts),
                })
            }
            Err(e) => reason = e.to_string(),
        }
    }
    Ok(CrossStack {
        n,
        lambdas,
        polytope,
        strategy: CutStrategy::Combinatorial { reason },
        cuts: None,
    })
}
