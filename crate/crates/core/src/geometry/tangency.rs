use num_traits::{Signed, Zero};

use super::{distance2_to_hyperplane, linalg, lp, GeometryError, VHPolytope};
use crate::poset::ElementId;
use crate::rational::{dot, norm2, sub, Rat, RatVec};

/// Foot of the perpendicular from `c` onto the affine hull of `points`.
pub fn foot_of_perpendicular(points: &[&RatVec], c: &[Rat]) -> Option<RatVec> {
    let basis = linalg::affine_basis(points);
    let q0 = points[*basis.first()?];
    let dirs: Vec<RatVec> = basis[1..].iter().map(|&i| sub(points[i], q0)).collect();
    if dirs.is_empty() {
        return Some(q0.clone());
    }
    let g = linalg::gram(&dirs);
    let rel = sub(c, q0);
    let rhs: RatVec = dirs.iter().map(|e| dot(&rel, e)).collect();
    let mu = linalg::solve(&g, &rhs)?;
    let mut x = q0.clone();
    for (m, e) in mu.iter().zip(&dirs) {
        for (xi, ei) in x.iter_mut().zip(e) {
            *xi += m * ei;
        }
    }
    Some(x)
}

/// The tangency point of face `face` with the sphere of squared radius `r2`
/// about the center: the foot of the perpendicular, provided it is at squared
/// distance exactly `r2` and lies in the relative interior of the face.
pub fn tangency_point(
    p: &VHPolytope,
    face: ElementId,
    r2: &Rat,
) -> Result<Option<RatVec>, GeometryError> {
    let pts = p.face_vertices(face);
    if pts.is_empty() {
        return Err(GeometryError::DegenerateFace("empty face".into()));
    }
    let Some(x) = foot_of_perpendicular(&pts, &p.center) else {
        return Err(GeometryError::DegenerateFace("singular Gram matrix".into()));
    };
    if norm2(&sub(&x, &p.center)) != *r2 {
        return Ok(None);
    }
    let inside = match lp::min_weight_margin(&pts, &x) {
        Some(margin) => margin.is_positive(),
        None => false,
    };
    Ok(inside.then_some(x))
}

#[derive(Clone, Debug)]
pub struct TangencyReport {
    pub tangent: bool,
    /// `(face, point)` for every `t`-face.
    pub points: Vec<(ElementId, Option<RatVec>)>,
    pub vertices_outside: bool,
    pub facets_cut: bool,
}

/// Whether every `t`-face touches the sphere in its relative interior, the
/// vertices lie strictly outside (for `t >= 1`) and every facet hyperplane
/// strictly cuts the sphere (for `t <= d - 2`).
pub fn is_t_tangent(p: &VHPolytope, t: usize, r2: &Rat) -> TangencyReport {
    let c = &p.center;
    let mut points = Vec::new();
    let mut all = t < p.dim;
    if t < p.dim {
        for &f in p.faces_of_dim(t) {
            let pt = tangency_point(p, f, r2).ok().flatten();
            all &= pt.is_some();
            points.push((f, pt));
        }
    }
    let vertices_outside =
        t == 0 || p.vertices.iter().all(|v| norm2(&sub(v, c)) > *r2);
    let facets_cut = t + 2 > p.dim
        || p.facets.iter().all(|h| {
            let d2 = distance2_to_hyperplane(h, c);
            d2 < *r2 && !d2.is_zero()
        });
    TangencyReport {
        tangent: all && vertices_outside && facets_cut,
        points,
        vertices_outside,
        facets_cut,
    }
}
