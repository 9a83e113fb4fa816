//! Simultaneous truncation of all vertices.
//!
//! A cut system gives every vertex `v` a hyperplane `cut_v` with `v` strictly
//! beyond it and all other vertices strictly beneath, and every edge `vw` a
//! point `u_e` in its relative interior lying on both `cut_v` and `cut_w`.
//! Cutting along all of them leaves exactly the points `u_e` as vertices.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::ConstructionError;
use crate::geometry::{
    hyperplane_through, is_t_tangent, validate, Hyperplane, PolytopeData, VHPolytope,
};
use crate::rational::{add, frac, scale, sub, Rat, RatVec};

#[derive(Clone, Debug, PartialEq)]
pub struct CutSystem {
    /// `cuts[v]` truncates vertex `v`.
    pub cuts: Vec<Hyperplane>,
    /// Keyed by the edge `(v, w)` with `v < w`.
    pub edge_points: BTreeMap<(usize, usize), RatVec>,
}

/// All edges `(v, w)`, `v < w`, in lattice order.
pub fn edges(p: &VHPolytope) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = p
        .faces_of_dim(1)
        .iter()
        .map(|&e| {
            let mut it = p.lattice.faces[e].ones();
            let v = it.next().expect("edge has two vertices");
            let w = it.next().expect("edge has two vertices");
            (v, w)
        })
        .collect();
    out.sort_unstable();
    out
}

fn violated(msg: String) -> ConstructionError {
    ConstructionError::CutInvariantViolated(msg)
}

impl CutSystem {
    /// Checks every invariant against `p`.
    pub fn certify(&self, p: &VHPolytope) -> Result<(), ConstructionError> {
        let nv = p.vertices.len();
        if self.cuts.len() != nv {
            return Err(violated(format!("{} cuts for {nv} vertices", self.cuts.len())));
        }
        for (v, cut) in self.cuts.iter().enumerate() {
            if !cut.slack(&p.vertices[v]).is_positive() {
                return Err(violated(format!("vertex {v} is not beyond its cut")));
            }
            for w in (0..nv).filter(|&w| w != v) {
                if !cut.slack(&p.vertices[w]).is_negative() {
                    return Err(violated(format!("vertex {w} is not beneath the cut of {v}")));
                }
            }
        }
        let es = edges(p);
        if es.len() != self.edge_points.len() || es.iter().any(|e| !self.edge_points.contains_key(e)) {
            return Err(violated("edge points do not match the edges".into()));
        }
        for (&(v, w), u) in &self.edge_points {
            let dir = sub(&p.vertices[w], &p.vertices[v]);
            let off = sub(u, &p.vertices[v]);
            // u = v + s (w - v) with 0 < s < 1
            let k = dir.iter().position(|x| !x.is_zero()).expect("distinct endpoints");
            let s = &off[k] / &dir[k];
            if off != scale(&dir, &s) || !s.is_positive() || s >= Rat::from_integer(1.into()) {
                return Err(violated(format!("point of edge ({v},{w}) is not inside the edge")));
            }
            for x in [v, w] {
                if !self.cuts[x].slack(u).is_zero() {
                    return Err(violated(format!(
                        "cut of {x} misses the point of edge ({v},{w})"
                    )));
                }
            }
            for x in (0..nv).filter(|&x| x != v && x != w) {
                if !self.cuts[x].slack(u).is_negative() {
                    return Err(violated(format!(
                        "point of edge ({v},{w}) is not beneath the cut of {x}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Cut system with one chosen point per edge: `cut_v` is the hyperplane
/// through the points on the edges at `v`.
pub fn cuts_through_edge_points(
    p: &VHPolytope,
    edge_points: BTreeMap<(usize, usize), RatVec>,
) -> Result<CutSystem, ConstructionError> {
    let mut cuts = Vec::with_capacity(p.vertices.len());
    for v in 0..p.vertices.len() {
        let pts: Vec<&RatVec> = edge_points
            .iter()
            .filter(|((a, b), _)| *a == v || *b == v)
            .map(|(_, u)| u)
            .collect();
        let h = hyperplane_through(&pts, &p.hull, &p.vertices[v]).ok_or_else(|| {
            violated(format!("edge points at vertex {v} do not span a single hyperplane"))
        })?;
        cuts.push(h);
    }
    let cs = CutSystem { cuts, edge_points };
    cs.certify(p)?;
    Ok(cs)
}

/// Cuts through edge midpoints. Valid for the regular simplex and the
/// cross polytope, among others.
pub fn midpoint_cuts(p: &VHPolytope) -> Result<CutSystem, ConstructionError> {
    let half = frac(1, 2);
    let pts = edges(p)
        .into_iter()
        .map(|(v, w)| ((v, w), scale(&add(&p.vertices[v], &p.vertices[w]), &half)))
        .collect();
    cuts_through_edge_points(p, pts)
}

/// Cuts through the points where the edges touch a sphere of squared radius
/// `r2` about the center.
pub fn cuts_from_edge_tangency(p: &VHPolytope, r2: &Rat) -> Result<CutSystem, ConstructionError> {
    let report = is_t_tangent(p, 1, r2);
    if !report.tangent {
        return Err(ConstructionError::NotTangent {
            t: 1,
            r2: r2.to_string(),
        });
    }
    let mut pts = BTreeMap::new();
    for (face, point) in report.points {
        let mut it = p.lattice.faces[face].ones();
        let v = it.next().expect("edge");
        let w = it.next().expect("edge");
        pts.insert((v, w), point.expect("tangent edges carry a point"));
    }
    cuts_through_edge_points(p, pts)
}

/// `D_1(P)`: the edge points as vertices, the old facets followed by all
/// cuts as facets.
pub fn truncate_all(p: &VHPolytope, cuts: &CutSystem) -> Result<VHPolytope, ConstructionError> {
    cuts.certify(p)?;
    let vertices: Vec<RatVec> = cuts.edge_points.values().cloned().collect();
    let mut facets = p.facets.clone();
    facets.extend(cuts.cuts.iter().cloned());
    Ok(validate(PolytopeData {
        ambient: p.ambient,
        hull: p.hull.clone(),
        vertices,
        facets,
        center: None,
        r2: None,
    })?)
}
