//! Stacking a pyramid onto a facet.

use num_traits::{One, Signed};

use super::ConstructionError;
use crate::geometry::{offset_point, validate, Hyperplane, PolytopeData, VHPolytope};
use crate::rational::{centroid, frac, Rat, RatVec};

const MAX_HALVINGS: usize = 64;

/// The facets of `facet` as lattice elements, each paired with the other
/// facet of `p` through that ridge.
pub(crate) fn ridges_with_neighbours(p: &VHPolytope, facet: usize) -> Vec<(Vec<usize>, usize)> {
    let inc = &p.incidence[facet];
    let elem = p.lattice.find(inc).expect("facet is a lattice element");
    let mut out = Vec::new();
    for &r in p.lattice.poset.lower_covers(elem) {
        let ridge = &p.lattice.faces[r];
        let other = (0..p.facets.len())
            .find(|&j| j != facet && ridge.is_subset(&p.incidence[j]))
            .expect("every ridge lies in two facets");
        out.push((ridge.ones().collect(), other));
    }
    out
}

/// Whether `apex` is beyond facet `facet` and beneath every other facet.
pub fn check_apex(p: &VHPolytope, facet: usize, apex: &[Rat]) -> Result<(), ConstructionError> {
    if !p.facets[facet].slack(apex).is_positive() {
        return Err(ConstructionError::ApexNotBeyond { facet });
    }
    for (j, h) in p.facets.iter().enumerate() {
        if j != facet && !h.slack(apex).is_negative() {
            return Err(ConstructionError::ApexNotBeneathOthers { facet: j });
        }
    }
    Ok(())
}

/// `conv(P ∪ {apex})` when `apex` is beyond `facet` only. Facet `facet` is
/// removed and one facet per ridge of it is appended, in ridge order; the
/// apex becomes the last vertex. Without an apex the point
/// `c_F + eps * a_F` is used, halving `eps` from 1 until it certifies.
pub fn stack(
    p: &VHPolytope,
    facet: usize,
    apex: Option<RatVec>,
) -> Result<VHPolytope, ConstructionError> {
    if facet >= p.facets.len() {
        return Err(ConstructionError::BadParams(format!(
            "facet index {facet} out of range (polytope has {})",
            p.facets.len()
        )));
    }
    let apex = match apex {
        Some(a) => {
            check_apex(p, facet, &a)?;
            a
        }
        None => auto_apex(p, facet)?,
    };
    let f = &p.facets[facet];
    let sf = f.slack(&apex);
    let mut facets: Vec<Hyperplane> = p
        .facets
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != facet)
        .map(|(_, h)| h.clone())
        .collect();
    for (_, other) in ridges_with_neighbours(p, facet) {
        // the pencil through the ridge contains s_F(apex) G - s_G(apex) F
        let g = &p.facets[other];
        let sg = g.slack(&apex);
        let a = g
            .a
            .iter()
            .zip(&f.a)
            .map(|(ga, fa)| &sf * ga - &sg * fa)
            .collect();
        let b = &sf * &g.b - &sg * &f.b;
        facets.push(Hyperplane::new(a, b));
    }
    let mut vertices = p.vertices.clone();
    vertices.push(apex);
    Ok(validate(PolytopeData {
        ambient: p.ambient,
        hull: p.hull.clone(),
        vertices,
        facets,
        center: Some(p.center.clone()),
        r2: None,
    })?)
}

fn auto_apex(p: &VHPolytope, facet: usize) -> Result<RatVec, ConstructionError> {
    let pts: Vec<RatVec> = p.incidence[facet].ones().map(|v| p.vertices[v].clone()).collect();
    let c = centroid(&pts);
    let mut eps = Rat::one();
    for _ in 0..MAX_HALVINGS {
        let apex = offset_point(&c, &p.facets[facet].a, &eps);
        if check_apex(p, facet, &apex).is_ok() {
            return Ok(apex);
        }
        eps *= frac(1, 2);
    }
    Err(ConstructionError::PlacementFailed(format!(
        "no certified apex over facet {facet}"
    )))
}
