use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::geometry::{validate, Hyperplane, PolytopeData, VHPolytope};
use crate::rational::{frac, int, unit, zeros, Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    Simplex { d: usize },
    Cube { d: usize },
    Cross { d: usize },
    Hypersimplex { d: usize, k: usize },
    /// `|x_i| <= 1`, `sum |x_i| <= d - 2`.
    M { d: usize },
    /// `sum eps_i x_i <= d - 2` over sign vectors with an odd number of `+1`.
    HalfcubeN { d: usize },
    PrismOverSimplex { d: usize },
}

fn bad(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::BadParams(msg.into())
}

/// Sign vectors of length `d` in a fixed order (bit `i` set means `-1`).
fn sign_vectors(d: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..1u64 << d).map(move |mask| {
        (0..d)
            .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
            .collect()
    })
}

fn ivec(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn generate(kind: GeneratorKind) -> Result<VHPolytope, ConstructionError> {
    let data = match kind {
        GeneratorKind::Simplex { d } => {
            if d < 1 {
                return Err(bad("simplex needs d >= 1"));
            }
            hypersimplex_data(d, 1)
        }
        GeneratorKind::Hypersimplex { d, k } => {
            if d < 2 || k < 1 || k > d {
                return Err(bad("hypersimplex needs d >= 2 and 1 <= k <= d"));
            }
            hypersimplex_data(d, k)
        }
        GeneratorKind::Cube { d } => {
            if d < 1 {
                return Err(bad("cube needs d >= 1"));
            }
            let vertices = sign_vectors(d).map(|s| ivec(&s)).collect();
            let mut facets = Vec::new();
            for i in 0..d {
                for s in [1, -1] {
                    facets.push(Hyperplane::new(ivec(&unit_i(d, i, s)), int(1)));
                }
            }
            plain(d, vertices, facets)
        }
        GeneratorKind::Cross { d } => {
            if d < 2 {
                return Err(bad("cross polytope needs d >= 2"));
            }
            let mut vertices = Vec::new();
            for i in 0..d {
                for s in [1, -1] {
                    vertices.push(ivec(&unit_i(d, i, s)));
                }
            }
            let facets = sign_vectors(d)
                .map(|s| Hyperplane::new(ivec(&s), int(1)))
                .collect();
            plain(d, vertices, facets)
        }
        GeneratorKind::M { d } => {
            if d < 4 {
                return Err(bad("M^d needs d >= 4"));
            }
            // d - 2 coordinates are +-1, two are zero
            let mut vertices = Vec::new();
            for zi in 0..d {
                for zj in (zi + 1)..d {
                    for s in sign_vectors(d - 2) {
                        let mut v = vec![0; d];
                        let mut k = 0;
                        for (c, slot) in v.iter_mut().enumerate() {
                            if c != zi && c != zj {
                                *slot = s[k];
                                k += 1;
                            }
                        }
                        vertices.push(ivec(&v));
                    }
                }
            }
            let mut facets = Vec::new();
            for i in 0..d {
                for s in [1, -1] {
                    facets.push(Hyperplane::new(ivec(&unit_i(d, i, s)), int(1)));
                }
            }
            for s in sign_vectors(d) {
                facets.push(Hyperplane::new(ivec(&s), int(d as i64 - 2)));
            }
            plain(d, vertices, facets)
        }
        GeneratorKind::HalfcubeN { d } => {
            if d < 4 {
                return Err(bad("N^d needs d >= 4"));
            }
            let plus = |s: &[i64]| s.iter().filter(|&&x| x == 1).count();
            let mut vertices: Vec<RatVec> = sign_vectors(d)
                .filter(|s| plus(s) % 2 == 0)
                .map(|s| ivec(&s))
                .collect();
            for i in 0..d {
                for s in [1, -1] {
                    vertices.push(ivec(&unit_i(d, i, s * (d as i64 - 2))));
                }
            }
            let facets = sign_vectors(d)
                .filter(|s| plus(s) % 2 == 1)
                .map(|s| Hyperplane::new(ivec(&s), int(d as i64 - 2)))
                .collect();
            plain(d, vertices, facets)
        }
        GeneratorKind::PrismOverSimplex { d } => {
            if d < 2 {
                return Err(bad("prism needs d >= 2"));
            }
            // conv(0, e_1, ..., e_{d-1}) x [-1, 1]
            let mut vertices = Vec::new();
            for h in [1, -1] {
                let mut base = vec![0; d];
                base[d - 1] = h;
                vertices.push(ivec(&base));
                for i in 0..d - 1 {
                    let mut v = base.clone();
                    v[i] = 1;
                    vertices.push(ivec(&v));
                }
            }
            let mut facets = Vec::new();
            for i in 0..d - 1 {
                facets.push(Hyperplane::new(ivec(&unit_i(d, i, -1)), int(0)));
            }
            let mut sum = vec![1; d];
            sum[d - 1] = 0;
            facets.push(Hyperplane::new(ivec(&sum), int(1)));
            for s in [1, -1] {
                facets.push(Hyperplane::new(ivec(&unit_i(d, d - 1, s)), int(1)));
            }
            PolytopeData {
                ambient: d,
                hull: vec![],
                vertices,
                facets,
                center: None,
                r2: None,
            }
        }
    };
    Ok(validate(data)?)
}

fn unit_i(d: usize, i: usize, s: i64) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = s;
    v
}

/// Centrally symmetric polytope about the origin of `R^d`.
fn plain(d: usize, vertices: Vec<RatVec>, facets: Vec<Hyperplane>) -> PolytopeData {
    PolytopeData {
        ambient: d,
        hull: vec![],
        vertices,
        facets,
        center: Some(zeros(d)),
        r2: None,
    }
}

/// `K_k^d`: 0/1 vectors in `R^{d+1}` with `k` ones, inside `sum x = k`.
fn hypersimplex_data(d: usize, k: usize) -> PolytopeData {
    let m = d + 1;
    let mut vertices = Vec::new();
    for mask in 0..1u64 << m {
        if mask.count_ones() as usize == k {
            vertices.push((0..m).map(|i| int((mask >> i & 1) as i64)).collect());
        }
    }
    vertices.sort();
    vertices.reverse();
    // {x_i = 0} is a facet iff k <= d - 1, {x_i = 1} iff k >= 2
    let mut facets = Vec::new();
    if k < d {
        for i in 0..m {
            facets.push(Hyperplane::new(ivec(&unit_i(m, i, -1)), int(0)));
        }
    }
    if k >= 2 {
        for i in 0..m {
            facets.push(Hyperplane::new(unit(m, i), int(1)));
        }
    }
    let center: RatVec = vec![frac(k as i64, m as i64); m];
    PolytopeData {
        ambient: m,
        hull: vec![Hyperplane::new(vec![Rat::from_integer(1.into()); m], int(k as i64))],
        vertices,
        facets,
        center: Some(center),
        r2: None,
    }
}

/// Regular simplex `Δ_d` in `sum x = 1` of `R^{d+1}`.
pub fn simplex(d: usize) -> VHPolytope {
    generate(GeneratorKind::Simplex { d }).expect("simplex certifies")
}

pub fn cube(d: usize) -> VHPolytope {
    generate(GeneratorKind::Cube { d }).expect("cube certifies")
}

pub fn cross_polytope(d: usize) -> VHPolytope {
    generate(GeneratorKind::Cross { d }).expect("cross polytope certifies")
}
