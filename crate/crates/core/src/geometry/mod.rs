//! Exact rational polytopes given by vertices and facet inequalities.
//!
//! Nothing here computes convex hulls. A polytope arrives with its facets
//! already known and [`validate`] certifies the description: every vertex
//! satisfies every inequality, incidences are recomputed, every facet is
//! spanned by its vertices, and the incidence face lattice is an Eulerian
//! lattice of the right length. Eulerian incidence is a strong necessary
//! condition for a correct description, not a full proof of polytopality.

pub mod linalg;
pub mod lp;
mod polar;
mod tangency;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::poset::{face_lattice_from_incidence, ElementId, FaceLattice, PosetError};
use crate::rational::{centroid, dot, is_zero_vec, scale, Rat, RatVec};

pub use polar::polar;
pub use tangency::{is_t_tangent, tangency_point, TangencyReport};

/// `<a, x> <= b` on the polytope side; used as an equation `<a, x> = b` for
/// affine hulls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub a: RatVec,
    pub b: Rat,
}

impl Hyperplane {
    pub fn new(a: RatVec, b: Rat) -> Self {
        Self { a, b }
    }

    /// `<a, p> - b`.
    pub fn slack(&self, p: &[Rat]) -> Rat {
        dot(&self.a, p) - &self.b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Beyond,
    Beneath,
    On,
}

pub fn side(h: &Hyperplane, p: &[Rat]) -> Result<Side, GeometryError> {
    if h.a.len() != p.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: h.a.len(),
            found: p.len(),
        });
    }
    let s = h.slack(p);
    Ok(if s.is_positive() {
        Side::Beyond
    } else if s.is_negative() {
        Side::Beneath
    } else {
        Side::On
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vertex {vertex} violates facet {facet}")]
    VertexOutside { vertex: usize, facet: usize },
    #[error("vertex {vertex} is off the affine hull")]
    VertexOffHull { vertex: usize },
    #[error("vertex {vertex} lies on fewer than {needed} facets")]
    NotAVertex { vertex: usize, needed: usize },
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("facet {facet} is spanned by an affine {found}-flat, expected {expected}")]
    DanglingFacet {
        facet: usize,
        expected: i64,
        found: i64,
    },
    #[error("incidence lattice rejected: {0}")]
    NotEulerianIncidence(String),
    #[error("center is not strictly inside the polytope")]
    CenterNotInterior,
    #[error("expected a vector of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate face: {0}")]
    DegenerateFace(String),
    #[error("squared radius must be positive")]
    NonPositiveRadius,
}

/// Raw description: ambient dimension, affine hull equations, vertices,
/// facet inequalities, optional center (defaults to the vertex centroid) and
/// optional squared radius.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeData {
    pub ambient: usize,
    pub hull: Vec<Hyperplane>,
    pub vertices: Vec<RatVec>,
    pub facets: Vec<Hyperplane>,
    pub center: Option<RatVec>,
    pub r2: Option<Rat>,
}

/// A certified polytope. Facet normals are projected into the direction
/// space of the affine hull, which leaves every facet's intersection with
/// the hull unchanged.
#[derive(Clone, Debug)]
pub struct VHPolytope {
    pub ambient: usize,
    pub dim: usize,
    pub hull: Vec<Hyperplane>,
    pub vertices: Vec<RatVec>,
    pub facets: Vec<Hyperplane>,
    pub center: RatVec,
    pub r2: Option<Rat>,
    /// `incidence[j]` = vertices on facet `j`.
    pub incidence: Vec<FixedBitSet>,
    pub lattice: FaceLattice,
}

impl VHPolytope {
    pub fn to_data(&self) -> PolytopeData {
        PolytopeData {
            ambient: self.ambient,
            hull: self.hull.clone(),
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            center: Some(self.center.clone()),
            r2: self.r2.clone(),
        }
    }

    /// Face lattice elements that are `k`-dimensional faces.
    pub fn faces_of_dim(&self, k: usize) -> &[ElementId] {
        self.lattice.faces_of_dim(k)
    }

    pub fn face_vertices(&self, face: ElementId) -> Vec<&RatVec> {
        self.lattice.faces[face].ones().map(|v| &self.vertices[v]).collect()
    }

    /// `(f_0, ..., f_{d-1})`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim).map(|k| self.faces_of_dim(k).len()).collect()
    }

    /// Facets whose hyperplane passes through every vertex of `face`.
    pub fn facets_containing(&self, face: ElementId) -> Vec<usize> {
        let f = &self.lattice.faces[face];
        (0..self.facets.len())
            .filter(|&j| f.is_subset(&self.incidence[j]))
            .collect()
    }

    pub fn with_r2(mut self, r2: Rat) -> Self {
        self.r2 = Some(r2);
        self
    }
}

/// Independent rows of the hull equations.
fn reduce_hull(hull: &[Hyperplane]) -> Vec<Hyperplane> {
    let augmented: Vec<RatVec> = hull
        .iter()
        .map(|h| {
            let mut r = h.a.clone();
            r.push(h.b.clone());
            r
        })
        .collect();
    linalg::independent_rows(&augmented)
        .into_iter()
        .map(|i| hull[i].clone())
        .collect()
}

/// Removes the component of `h.a` normal to the hull: solve
/// `(N N^T) lambda = N a`, then `a' = a - N^T lambda`, `b' = b - lambda.h`.
pub(crate) fn project_to_hull(hull: &[Hyperplane], h: &Hyperplane) -> Hyperplane {
    if hull.is_empty() {
        return h.clone();
    }
    let n: Vec<RatVec> = hull.iter().map(|e| e.a.clone()).collect();
    let g = linalg::gram(&n);
    let rhs: RatVec = n.iter().map(|row| dot(row, &h.a)).collect();
    let lambda = linalg::solve(&g, &rhs).expect("hull equations are independent");
    let mut a = h.a.clone();
    let mut b = h.b.clone();
    for (l, e) in lambda.iter().zip(hull) {
        for (ai, ei) in a.iter_mut().zip(&e.a) {
            *ai -= l * ei;
        }
        b -= l * &e.b;
    }
    Hyperplane { a, b }
}

pub fn validate(data: PolytopeData) -> Result<VHPolytope, GeometryError> {
    let m = data.ambient;
    let check_len = |v: &[Rat]| {
        if v.len() != m {
            Err(GeometryError::DimensionMismatch {
                expected: m,
                found: v.len(),
            })
        } else {
            Ok(())
        }
    };
    for h in data.hull.iter().chain(&data.facets) {
        check_len(&h.a)?;
    }
    for v in &data.vertices {
        check_len(v)?;
    }
    if let Some(c) = &data.center {
        check_len(c)?;
    }
    if let Some(r2) = &data.r2 {
        if !r2.is_positive() {
            return Err(GeometryError::NonPositiveRadius);
        }
    }

    let hull = reduce_hull(&data.hull);
    for h in &hull {
        if is_zero_vec(&h.a) {
            return Err(GeometryError::DegenerateFace(
                "affine hull equation has a zero normal and nonzero offset".into(),
            ));
        }
    }
    let dim = m - hull.len();
    for (i, v) in data.vertices.iter().enumerate() {
        if hull.iter().any(|h| !h.slack(v).is_zero()) {
            return Err(GeometryError::VertexOffHull { vertex: i });
        }
    }
    for i in 0..data.vertices.len() {
        for j in (i + 1)..data.vertices.len() {
            if data.vertices[i] == data.vertices[j] {
                return Err(GeometryError::DuplicateVertex(i, j));
            }
        }
    }

    let facets: Vec<Hyperplane> = data
        .facets
        .iter()
        .map(|h| project_to_hull(&hull, h))
        .collect();
    let nv = data.vertices.len();
    let mut incidence = Vec::with_capacity(facets.len());
    for (j, h) in facets.iter().enumerate() {
        let mut on = FixedBitSet::with_capacity(nv);
        for (i, v) in data.vertices.iter().enumerate() {
            let s = h.slack(v);
            if s.is_positive() {
                return Err(GeometryError::VertexOutside { vertex: i, facet: j });
            }
            if s.is_zero() {
                on.insert(i);
            }
        }
        let pts: Vec<&RatVec> = on.ones().map(|i| &data.vertices[i]).collect();
        let found = linalg::affine_dim(&pts);
        if is_zero_vec(&h.a) || found != dim as i64 - 1 {
            return Err(GeometryError::DanglingFacet {
                facet: j,
                expected: dim as i64 - 1,
                found,
            });
        }
        incidence.push(on);
    }
    for i in 0..nv {
        let count = incidence.iter().filter(|s| s.contains(i)).count();
        if count < dim {
            return Err(GeometryError::NotAVertex { vertex: i, needed: dim });
        }
    }

    let lattice = face_lattice_from_incidence(nv, &incidence)
        .map_err(|e: PosetError| GeometryError::NotEulerianIncidence(e.to_string()))?;
    if lattice.poset.length() != dim + 1 {
        return Err(GeometryError::NotEulerianIncidence(format!(
            "lattice length {} but dimension {dim}",
            lattice.poset.length()
        )));
    }
    if !lattice.poset.is_eulerian() {
        return Err(GeometryError::NotEulerianIncidence("not Eulerian".into()));
    }
    if !lattice.poset.is_lattice() {
        return Err(GeometryError::NotEulerianIncidence("not a lattice".into()));
    }

    let center = match data.center {
        Some(c) => c,
        None => centroid(&data.vertices),
    };
    if hull.iter().any(|h| !h.slack(&center).is_zero())
        || facets.iter().any(|h| !h.slack(&center).is_negative())
    {
        return Err(GeometryError::CenterNotInterior);
    }

    Ok(VHPolytope {
        ambient: m,
        dim,
        hull,
        vertices: data.vertices,
        facets,
        center,
        r2: data.r2,
        incidence,
        lattice,
    })
}

/// `c + eps * a` style helper used by placement routines.
pub(crate) fn offset_point(base: &[Rat], dir: &[Rat], eps: &Rat) -> RatVec {
    let step = scale(dir, eps);
    base.iter().zip(step).map(|(x, s)| x + s).collect()
}

/// Squared distance from `p` to the hyperplane `h`.
pub fn distance2_to_hyperplane(h: &Hyperplane, p: &[Rat]) -> Rat {
    let s = h.slack(p);
    &s * &s / dot(&h.a, &h.a)
}

/// The unique hyperplane (inside the affine hull) through `points`, oriented
/// so that `beyond` is strictly on its positive side. `None` if the points do
/// not pin down a single hyperplane or `beyond` lies on it.
pub fn hyperplane_through(
    points: &[&RatVec],
    hull: &[Hyperplane],
    beyond: &[Rat],
) -> Option<Hyperplane> {
    let m = beyond.len();
    let mut rows: Vec<RatVec> = Vec::with_capacity(points.len() + hull.len());
    for p in points {
        let mut r = (*p).clone();
        r.push(-Rat::from_integer(1.into()));
        rows.push(r);
    }
    for h in hull {
        let mut r = h.a.clone();
        r.push(Rat::zero());
        rows.push(r);
    }
    let ns = linalg::nullspace(&rows, m + 1);
    if ns.len() != 1 {
        return None;
    }
    let mut y = ns.into_iter().next()?;
    let b = y.pop()?;
    let mut h = Hyperplane::new(y, b);
    if is_zero_vec(&h.a) {
        return None;
    }
    let s = h.slack(beyond);
    if s.is_zero() {
        return None;
    }
    if s.is_negative() {
        h.a = h.a.iter().map(|x| -x).collect();
        h.b = -h.b;
    }
    Some(h)
}
