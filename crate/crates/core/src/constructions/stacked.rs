//! Stacked polytopes that stay truncatable.
//!
//! Start from a regular base with midpoint cuts. To stack onto facet `F`,
//! let `F'` be the facet of the truncation `D_1(P)` in the hyperplane of
//! `F`. The apex `v` goes slightly beyond `F'` from its centroid, beneath
//! every other facet of `D_1(P)` (the remaining facets of `P` and all cuts).
//! Each new edge `w v` meets the old cut of `w` in one point, and `cut_v` is
//! the hyperplane through those `d` points.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::generators::{cross_polytope, simplex};
use super::stack::stack;
use super::truncation::{edges, midpoint_cuts, truncate_all, CutSystem};
use super::ConstructionError;
use crate::geometry::{hyperplane_through, offset_point, VHPolytope};
use crate::rational::{add, centroid, dot, frac, scale, sub, Rat, RatVec};

const MAX_HALVINGS: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StackBase {
    Simplex,
    Cross,
}

#[derive(Clone, Debug)]
pub struct StackedFamily {
    pub base: StackBase,
    pub plan: Vec<usize>,
    pub polytope: VHPolytope,
    pub cuts: CutSystem,
}

impl StackedFamily {
    pub fn truncation(&self) -> Result<VHPolytope, ConstructionError> {
        truncate_all(&self.polytope, &self.cuts)
    }
}

/// Applies `plan` (facet indices into the current facet list) to the base.
/// The stacked facet is dropped from the list and the new facets are
/// appended.
pub fn build_truncatable_stacked(
    base: StackBase,
    d: usize,
    plan: &[usize],
) -> Result<StackedFamily, ConstructionError> {
    if d < 3 {
        return Err(ConstructionError::BadParams("stacking needs d >= 3".into()));
    }
    let mut p = match base {
        StackBase::Simplex => simplex(d),
        StackBase::Cross => cross_polytope(d),
    };
    let mut cuts = midpoint_cuts(&p)?;
    for (step, &facet) in plan.iter().enumerate() {
        if facet >= p.facets.len() {
            return Err(ConstructionError::BadParams(format!(
                "step {step}: facet {facet} out of range ({} facets)",
                p.facets.len()
            )));
        }
        let (np, nc) = stack_step(&p, &cuts, facet).map_err(|e| match e {
            ConstructionError::PlacementFailed(m) => {
                ConstructionError::PlacementFailed(format!("step {step}: {m}"))
            }
            other => other,
        })?;
        p = np;
        cuts = nc;
    }
    Ok(StackedFamily {
        base,
        plan: plan.to_vec(),
        polytope: p,
        cuts,
    })
}

fn stack_step(
    p: &VHPolytope,
    cuts: &CutSystem,
    facet: usize,
) -> Result<(VHPolytope, CutSystem), ConstructionError> {
    let d1 = truncate_all(p, cuts)?;
    // D_1 keeps P's facets first, in order, so F' has the same index
    let f_prime: Vec<RatVec> = d1.incidence[facet]
        .ones()
        .map(|i| d1.vertices[i].clone())
        .collect();
    let c = centroid(&f_prime);
    let normal = &p.facets[facet].a;
    let f_vertices: Vec<usize> = p.incidence[facet].ones().collect();

    let mut eps = Rat::one();
    let mut last = String::from("no attempt");
    for _ in 0..MAX_HALVINGS {
        let v = offset_point(&c, normal, &eps);
        eps *= frac(1, 2);
        let beyond = p.facets[facet].slack(&v).is_positive();
        let beneath_rest = d1
            .facets
            .iter()
            .enumerate()
            .all(|(j, h)| j == facet || h.slack(&v).is_negative());
        if !(beyond && beneath_rest) {
            last = "apex not beyond F' and beneath the rest".into();
            continue;
        }
        let np = match stack(p, facet, Some(v.clone())) {
            Ok(np) => np,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let apex = np.vertices.len() - 1;
        match extend_cuts(&np, cuts, &f_vertices, apex) {
            Ok(nc) => return Ok((np, nc)),
            Err(e) => last = e.to_string(),
        }
    }
    Err(ConstructionError::PlacementFailed(last))
}

/// Old cuts, plus points on the new edges and `cut_apex` through them.
fn extend_cuts(
    np: &VHPolytope,
    cuts: &CutSystem,
    f_vertices: &[usize],
    apex: usize,
) -> Result<CutSystem, ConstructionError> {
    let v = &np.vertices[apex];
    let mut edge_points: BTreeMap<(usize, usize), RatVec> = cuts.edge_points.clone();
    let mut new_pts = Vec::new();
    for &w in f_vertices {
        let wp = &np.vertices[w];
        let cut = &cuts.cuts[w];
        let dir = sub(v, wp);
        let s = (&cut.b - dot(&cut.a, wp)) / dot(&cut.a, &dir);
        let u = add(wp, &scale(&dir, &s));
        edge_points.insert((w, apex), u.clone());
        new_pts.push(u);
    }
    let refs: Vec<&RatVec> = new_pts.iter().collect();
    let cut_v = hyperplane_through(&refs, &np.hull, v).ok_or_else(|| {
        ConstructionError::CutInvariantViolated("new edge points are degenerate".into())
    })?;
    let mut all = cuts.cuts.clone();
    all.push(cut_v);
    let expected = edges(np);
    edge_points.retain(|k, _| expected.binary_search(k).is_ok());
    let cs = CutSystem {
        cuts: all,
        edge_points,
    };
    cs.certify(np)?;
    Ok(cs)
}
