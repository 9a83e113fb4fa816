use num_traits::Signed;

use super::ConstructionError;
use crate::geometry::{is_t_tangent, polar, validate, Hyperplane, PolytopeData, VHPolytope};
use crate::rational::{dot, sub, Rat};

/// `conv(P ∪ P°)` for a polytope whose `t`-faces touch the sphere of squared
/// radius `r2`. Vertices of `P` come first, then one polar vertex per facet
/// of `P`. There is one facet per `t`-face `F`, the tangent hyperplane
/// `<x_F - c, y - c> <= r2` at its tangency point, with incident vertices
/// exactly `F ∪ F°`.
pub fn et_realization(p: &VHPolytope, t: usize, r2: &Rat) -> Result<VHPolytope, ConstructionError> {
    let report = is_t_tangent(p, t, r2);
    if !report.tangent {
        return Err(ConstructionError::NotTangent {
            t,
            r2: r2.to_string(),
        });
    }
    let q = polar(p, r2)?;
    let c = &p.center;
    let nv = p.vertices.len();
    let mut vertices = p.vertices.clone();
    vertices.extend(q.vertices.iter().cloned());

    let mut facets = Vec::with_capacity(report.points.len());
    for (face, point) in &report.points {
        let x = point.as_ref().expect("tangent faces carry points");
        let a = sub(x, c);
        let b = r2 + dot(&a, c);
        let h = Hyperplane::new(a, b);
        let inside = &p.lattice.faces[*face];
        let polar_face = p.facets_containing(*face);
        for (i, y) in vertices.iter().enumerate() {
            let s = h.slack(y);
            if s.is_positive() {
                return Err(ConstructionError::FacetViolated {
                    face: *face,
                    vertex: i,
                });
            }
            let expected = if i < nv {
                inside.contains(i)
            } else {
                polar_face.contains(&(i - nv))
            };
            if expected != !s.is_negative() {
                return Err(ConstructionError::FacetViolated {
                    face: *face,
                    vertex: i,
                });
            }
        }
        facets.push(h);
    }
    Ok(validate(PolytopeData {
        ambient: p.ambient,
        hull: p.hull.clone(),
        vertices,
        facets,
        center: Some(c.clone()),
        r2: None,
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::generators::{cube, simplex};
    use crate::et::et;
    use crate::poset::are_isomorphic;
    use crate::rational::{frac, int};

    #[test]
    fn cube_t2_is_24_cell() {
        let q = et_realization(&cube(4), 2, &int(2)).unwrap();
        assert_eq!(q.vertices.len(), 24);
        assert_eq!(
            q.lattice.poset.flag_vector().four_shape(),
            Some(([24, 96, 96, 24], 144))
        );
        let e = et(&cube(4).lattice.poset, 2).unwrap();
        assert!(are_isomorphic(&q.lattice.poset, &e.poset).is_some());
    }

    #[test]
    fn simplex_t1() {
        let s = simplex(4);
        let q = et_realization(&s, 1, &frac(3, 10)).unwrap();
        let e = et(&s.lattice.poset, 1).unwrap();
        assert!(are_isomorphic(&q.lattice.poset, &e.poset).is_some());
    }

    #[test]
    fn not_tangent() {
        assert!(matches!(
            et_realization(&cube(4), 1, &int(2)),
            Err(ConstructionError::NotTangent { .. })
        ));
    }
}
