use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{ElementId, GradedPoset, PosetError};

/// A face lattice built from vertex-facet incidences. Every element carries
/// its vertex set; the bottom is the empty set and the top is the set of all
/// vertices.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub poset: GradedPoset,
    pub faces: Vec<FixedBitSet>,
}

impl FaceLattice {
    pub fn vertex_set(&self, x: ElementId) -> &FixedBitSet {
        &self.faces[x]
    }

    /// The element whose vertex set is exactly `set`, if any.
    pub fn find(&self, set: &FixedBitSet) -> Option<ElementId> {
        self.faces.iter().position(|f| f == set)
    }

    /// Faces of dimension `k` (rank `k + 1`).
    pub fn faces_of_dim(&self, k: usize) -> &[ElementId] {
        self.poset.elements_of_rank(k + 1)
    }
}

/// Intersection closure of the facet vertex sets.
///
/// `facets[j]` is the set of vertices (out of `n_vertices`) incident to facet
/// `j`. Proper elements are all nonempty intersections of facet subsets;
/// the poset is ordered by inclusion and validated as graded.
pub fn face_lattice_from_incidence(
    n_vertices: usize,
    facets: &[FixedBitSet],
) -> Result<FaceLattice, PosetError> {
    let mut seen_facets: HashMap<&FixedBitSet, usize> = HashMap::new();
    for (j, f) in facets.iter().enumerate() {
        if let Some(prev) = seen_facets.insert(f, j) {
            return Err(PosetError::NotGraded(format!(
                "facets {prev} and {j} have the same vertex set"
            )));
        }
    }
    let mut covered = FixedBitSet::with_capacity(n_vertices);
    for f in facets {
        covered.union_with(f);
    }
    if covered.count_ones(..) != n_vertices {
        return Err(PosetError::NotGraded("a vertex lies on no facet".into()));
    }

    let mut full = FixedBitSet::with_capacity(n_vertices);
    full.insert_range(..);

    // closure(S) = intersection of all facets containing S
    let closure = |s: &FixedBitSet| -> FixedBitSet {
        let mut acc = full.clone();
        for f in facets {
            if s.is_subset(f) {
                acc.intersect_with(f);
            }
        }
        acc
    };

    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut faces: Vec<FixedBitSet> = Vec::new();
    let empty = FixedBitSet::with_capacity(n_vertices);
    index.insert(empty.clone(), 0);
    faces.push(empty);

    let mut upper: Vec<Vec<usize>> = vec![Vec::new()];
    let mut cursor = 0;
    while cursor < faces.len() {
        let current = faces[cursor].clone();
        if current.count_ones(..) == n_vertices {
            cursor += 1;
            continue;
        }
        let mut candidates: Vec<FixedBitSet> = Vec::new();
        for v in 0..n_vertices {
            if current.contains(v) {
                continue;
            }
            let mut s = current.clone();
            s.insert(v);
            let c = closure(&s);
            if !candidates.contains(&c) {
                candidates.push(c);
            }
        }
        // upper covers are the inclusion-minimal candidates
        let minimal: Vec<FixedBitSet> = candidates
            .iter()
            .filter(|c| {
                !candidates
                    .iter()
                    .any(|o| o != *c && o.is_subset(c))
            })
            .cloned()
            .collect();
        let mut ups = Vec::with_capacity(minimal.len());
        for m in minimal {
            let id = match index.get(&m) {
                Some(&id) => id,
                None => {
                    let id = faces.len();
                    index.insert(m.clone(), id);
                    faces.push(m);
                    upper.push(Vec::new());
                    id
                }
            };
            ups.push(id);
        }
        upper[cursor] = ups;
        cursor += 1;
    }

    // ranks by longest chain from the bottom; from_covers checks gradedness
    let n = faces.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| faces[i].count_ones(..));
    let mut rank = vec![0usize; n];
    for &x in &order {
        for &y in &upper[x] {
            rank[y] = rank[y].max(rank[x] + 1);
        }
    }
    let covers: Vec<(usize, usize)> = upper
        .iter()
        .enumerate()
        .flat_map(|(x, ups)| ups.iter().map(move |&y| (x, y)))
        .collect();
    let poset = GradedPoset::from_covers(&rank, &covers).map_err(|e| match e {
        PosetError::RankSkip { lower, upper } => PosetError::NotGraded(format!(
            "faces {lower} and {upper} are joined by covers of different lengths"
        )),
        other => other,
    })?;
    Ok(FaceLattice { poset, faces })
}
