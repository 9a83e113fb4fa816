use num_traits::Signed;

use super::{validate, GeometryError, Hyperplane, PolytopeData, VHPolytope};
use crate::rational::{dot, sub, Rat};

/// Polar with respect to the sphere of squared radius `r2` about `p.center`,
/// taken inside the affine hull of `p`. Vertex `j` of the result belongs to
/// facet `j` of `p`; facet `i` of the result belongs to vertex `i` of `p`.
pub fn polar(p: &VHPolytope, r2: &Rat) -> Result<VHPolytope, GeometryError> {
    if !r2.is_positive() {
        return Err(GeometryError::NonPositiveRadius);
    }
    let c = &p.center;
    let mut vertices = Vec::with_capacity(p.facets.len());
    for h in &p.facets {
        let gap = &h.b - dot(&h.a, c);
        if !gap.is_positive() {
            return Err(GeometryError::CenterNotInterior);
        }
        let s = r2 / gap;
        vertices.push(c.iter().zip(&h.a).map(|(ci, ai)| ci + &s * ai).collect());
    }
    let facets = p
        .vertices
        .iter()
        .map(|v| {
            let a = sub(v, c);
            let b = r2 + dot(&a, c);
            Hyperplane::new(a, b)
        })
        .collect();
    validate(PolytopeData {
        ambient: p.ambient,
        hull: p.hull.clone(),
        vertices,
        facets,
        center: Some(c.clone()),
        r2: Some(r2.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::generators::{cross_polytope, cube, simplex};
    use crate::poset::are_isomorphic;
    use crate::rational::{frac, int, unit};
    use std::collections::BTreeSet;

    fn vertex_set(p: &VHPolytope) -> BTreeSet<Vec<Rat>> {
        p.vertices.iter().cloned().collect()
    }

    #[test]
    fn cube_polar_is_scaled_cross() {
        let q = polar(&cube(4), &int(2)).unwrap();
        let expected: BTreeSet<Vec<Rat>> = (0..4)
            .flat_map(|i| {
                [1, -1].map(|s| unit(4, i).into_iter().map(|x| x * int(2 * s)).collect())
            })
            .collect();
        assert_eq!(vertex_set(&q), expected);
        assert_eq!(q.f_vector(), vec![8, 24, 32, 16]);
    }

    #[test]
    fn cross_polar_is_half_cube() {
        let q = polar(&cross_polytope(4), &frac(1, 2)).unwrap();
        assert_eq!(q.vertices.len(), 16);
        assert!(q
            .vertices
            .iter()
            .all(|v| v.iter().all(|x| *x == frac(1, 2) || *x == frac(-1, 2))));
    }

    #[test]
    fn involution_and_duality() {
        for p in [simplex(4), cube(3), cross_polytope(4)] {
            let r2 = frac(3, 10);
            let q = polar(&p, &r2).unwrap();
            let back = polar(&q, &r2).unwrap();
            assert_eq!(vertex_set(&back), vertex_set(&p));
            assert!(are_isomorphic(&q.lattice.poset, &p.lattice.poset.opposite()).is_some());
        }
    }
}
