//! JSON documents. Rationals are strings `"p/q"` (or `"p"` for integers).
//!
//! Loading a document also validates it through the owning module, so a
//! lattice with a rank gap fails with `NotGraded` and a polytope file goes
//! through [`validate`].

use std::collections::BTreeMap;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::constructions::CutSystem;
use crate::et::{EtElement, EtPoset};
use crate::geometry::{validate, GeometryError, Hyperplane, PolytopeData, VHPolytope};
use crate::poset::{ElementId, GradedPoset, PosetError};
use crate::rational::{format_rat, parse_rat, Rat, RatVec};
use crate::subdivision::ChainPoint;

#[derive(Debug, Error)]
pub enum IoError {
    /// `path` is the location inside the document, `field` its last key.
    #[error("parse error at {path} (field {field:?}): {reason}")]
    Parse {
        path: String,
        field: String,
        reason: String,
    },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl IoError {
    fn at(path: impl Into<String>, field: impl Into<String>, reason: impl Into<String>) -> Self {
        IoError::Parse {
            path: path.into(),
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// Rational stored as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rat);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = RatStr;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<RatStr, E> {
                parse_rat(v).map(RatStr).map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<RatStr, E> {
                Ok(RatStr(crate::rational::int(v)))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<RatStr, E> {
                parse_rat(&v.to_string()).map(RatStr).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn wrap(v: &[Rat]) -> Vec<RatStr> {
    v.iter().cloned().map(RatStr).collect()
}

fn unwrap(v: Vec<RatStr>) -> RatVec {
    v.into_iter().map(|r| r.0).collect()
}

fn last_field(path: &str) -> String {
    path.rsplit('.')
        .next()
        .map(|s| s.split('[').next().unwrap_or(s).to_string())
        .unwrap_or_default()
}

/// Deserializes with the failing location recorded.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = last_field(&path);
        IoError::at(path, field, e.into_inner().to_string())
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents always serialize")
}

// lattices

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ElementDoc {
    pub id: ElementId,
    pub rank: usize,
    /// Ids of the elements this one covers.
    pub covers: Vec<ElementId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub et: Option<EtElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LatticeDoc {
    pub length: usize,
    /// Present when the elements carry E_t labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub elements: Vec<ElementDoc>,
    pub bottom: ElementId,
    pub top: ElementId,
}

/// A loaded lattice document; `et` is set when every element is labelled.
#[derive(Clone, Debug)]
pub struct LoadedLattice {
    pub poset: GradedPoset,
    pub et: Option<EtPoset>,
}

pub fn lattice_doc(p: &GradedPoset, et: Option<(&[EtElement], usize)>) -> LatticeDoc {
    LatticeDoc {
        length: p.length(),
        t: et.map(|(_, t)| t),
        elements: (0..p.len())
            .map(|x| ElementDoc {
                id: x,
                rank: p.rank(x),
                covers: p.lower_covers(x).to_vec(),
                et: et.map(|(labels, _)| labels[x]),
            })
            .collect(),
        bottom: p.bottom(),
        top: p.top(),
    }
}

pub fn save_lattice(p: &GradedPoset) -> String {
    to_json(&lattice_doc(p, None))
}

pub fn save_et(e: &EtPoset) -> String {
    to_json(&lattice_doc(&e.poset, Some((&e.elements, e.t))))
}

pub fn lattice_from_doc(doc: LatticeDoc) -> Result<LoadedLattice, IoError> {
    let n = doc.elements.len();
    let mut ranks = vec![usize::MAX; n];
    let mut labels = vec![None; n];
    let mut covers = Vec::new();
    for (i, el) in doc.elements.iter().enumerate() {
        let path = format!("elements[{i}]");
        if el.id >= n {
            return Err(IoError::at(path, "id", format!("id {} out of range 0..{n}", el.id)));
        }
        if ranks[el.id] != usize::MAX {
            return Err(IoError::at(path, "id", format!("duplicate id {}", el.id)));
        }
        ranks[el.id] = el.rank;
        labels[el.id] = el.et;
        for (j, &c) in el.covers.iter().enumerate() {
            if c >= n {
                return Err(IoError::at(
                    format!("{path}.covers[{j}]"),
                    "covers",
                    format!("unknown id {c}"),
                ));
            }
            covers.push((c, el.id));
        }
    }
    let poset = GradedPoset::from_covers(&ranks, &covers).map_err(|e| match e {
        PosetError::RankSkip { lower, upper } => PosetError::NotGraded(format!(
            "declared ranks of {lower} and {upper} differ by more than one"
        )),
        other => other,
    })?;
    if poset.length() != doc.length {
        return Err(IoError::at(
            "length",
            "length",
            format!("declared {}, actual {}", doc.length, poset.length()),
        ));
    }
    if poset.bottom() != doc.bottom {
        return Err(IoError::at("bottom", "bottom", format!("actual bottom is {}", poset.bottom())));
    }
    if poset.top() != doc.top {
        return Err(IoError::at("top", "top", format!("actual top is {}", poset.top())));
    }
    let et = match (doc.t, labels.iter().all(Option::is_some)) {
        (Some(t), true) => Some(EtPoset {
            poset: poset.clone(),
            elements: labels.into_iter().map(Option::unwrap).collect(),
            t,
        }),
        _ => None,
    };
    Ok(LoadedLattice { poset, et })
}

pub fn load_lattice(text: &str) -> Result<LoadedLattice, IoError> {
    lattice_from_doc(from_json(text)?)
}

// polytopes

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HyperplaneDoc {
    pub a: Vec<RatStr>,
    pub b: RatStr,
}

impl HyperplaneDoc {
    fn from(h: &Hyperplane) -> Self {
        HyperplaneDoc {
            a: wrap(&h.a),
            b: RatStr(h.b.clone()),
        }
    }

    fn into_hyperplane(self) -> Hyperplane {
        Hyperplane::new(unwrap(self.a), self.b.0)
    }
}

/// Hull equations are rows `[a_1, ..., a_m, b]` meaning `<a, x> = b`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolytopeDoc {
    pub ambient: usize,
    #[serde(default)]
    pub hull: Vec<Vec<RatStr>>,
    pub vertices: Vec<Vec<RatStr>>,
    pub facets: Vec<HyperplaneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<RatStr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<RatStr>,
}

pub fn polytope_doc(p: &VHPolytope) -> PolytopeDoc {
    PolytopeDoc {
        ambient: p.ambient,
        hull: p
            .hull
            .iter()
            .map(|h| {
                let mut row = wrap(&h.a);
                row.push(RatStr(h.b.clone()));
                row
            })
            .collect(),
        vertices: p.vertices.iter().map(|v| wrap(v)).collect(),
        facets: p.facets.iter().map(HyperplaneDoc::from).collect(),
        center: Some(wrap(&p.center)),
        r2: p.r2.clone().map(RatStr),
    }
}

pub fn polytope_data_from_doc(doc: PolytopeDoc) -> Result<PolytopeData, IoError> {
    let m = doc.ambient;
    let mut hull = Vec::with_capacity(doc.hull.len());
    for (i, mut row) in doc.hull.into_iter().enumerate() {
        if row.len() != m + 1 {
            return Err(IoError::at(
                format!("hull[{i}]"),
                "hull",
                format!("expected {} entries, found {}", m + 1, row.len()),
            ));
        }
        let b = row.pop().expect("nonempty").0;
        hull.push(Hyperplane::new(unwrap(row), b));
    }
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.len() != m {
            return Err(IoError::at(
                format!("vertices[{i}]"),
                "vertices",
                format!("expected {m} coordinates, found {}", v.len()),
            ));
        }
    }
    for (i, f) in doc.facets.iter().enumerate() {
        if f.a.len() != m {
            return Err(IoError::at(
                format!("facets[{i}].a"),
                "a",
                format!("expected {m} coefficients, found {}", f.a.len()),
            ));
        }
    }
    if let Some(c) = &doc.center {
        if c.len() != m {
            return Err(IoError::at("center", "center", format!("expected {m} coordinates")));
        }
    }
    Ok(PolytopeData {
        ambient: m,
        hull,
        vertices: doc.vertices.into_iter().map(unwrap).collect(),
        facets: doc.facets.into_iter().map(HyperplaneDoc::into_hyperplane).collect(),
        center: doc.center.map(unwrap),
        r2: doc.r2.map(|r| r.0),
    })
}

pub fn save_polytope(p: &VHPolytope) -> String {
    to_json(&polytope_doc(p))
}

pub fn load_polytope(text: &str) -> Result<VHPolytope, IoError> {
    Ok(validate(polytope_data_from_doc(from_json(text)?)?)?)
}

// cut systems

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CutDoc {
    pub vertex: usize,
    pub a: Vec<RatStr>,
    pub b: RatStr,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgePointDoc {
    pub edge: [usize; 2],
    pub point: Vec<RatStr>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CutSystemDoc {
    pub cuts: Vec<CutDoc>,
    pub edge_points: Vec<EdgePointDoc>,
}

pub fn cut_system_doc(c: &CutSystem) -> CutSystemDoc {
    CutSystemDoc {
        cuts: c
            .cuts
            .iter()
            .enumerate()
            .map(|(v, h)| CutDoc {
                vertex: v,
                a: wrap(&h.a),
                b: RatStr(h.b.clone()),
            })
            .collect(),
        edge_points: c
            .edge_points
            .iter()
            .map(|(&(v, w), p)| EdgePointDoc {
                edge: [v, w],
                point: wrap(p),
            })
            .collect(),
    }
}

/// Cuts must name every vertex `0..n` once. Edges are stored with `v < w`.
pub fn cut_system_from_doc(doc: CutSystemDoc) -> Result<CutSystem, IoError> {
    let n = doc.cuts.len();
    let mut cuts: Vec<Option<Hyperplane>> = vec![None; n];
    for (i, c) in doc.cuts.into_iter().enumerate() {
        let path = format!("cuts[{i}]");
        if c.vertex >= n || cuts[c.vertex].is_some() {
            return Err(IoError::at(
                path,
                "vertex",
                format!("vertex {} missing from 0..{n} or repeated", c.vertex),
            ));
        }
        cuts[c.vertex] = Some(Hyperplane::new(unwrap(c.a), c.b.0));
    }
    let mut edge_points = BTreeMap::new();
    for (i, e) in doc.edge_points.into_iter().enumerate() {
        let [v, w] = e.edge;
        if v == w {
            return Err(IoError::at(format!("edge_points[{i}].edge"), "edge", "loop"));
        }
        let key = (v.min(w), v.max(w));
        if edge_points.insert(key, unwrap(e.point)).is_some() {
            return Err(IoError::at(format!("edge_points[{i}].edge"), "edge", "repeated edge"));
        }
    }
    Ok(CutSystem {
        cuts: cuts.into_iter().map(|c| c.expect("all filled")).collect(),
        edge_points,
    })
}

pub fn save_cut_system(c: &CutSystem) -> String {
    to_json(&cut_system_doc(c))
}

pub fn load_cut_system(text: &str) -> Result<CutSystem, IoError> {
    cut_system_from_doc(from_json(text)?)
}

// chain points and plans

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChainPointDoc {
    pub chain: Vec<ElementId>,
    pub weights: Vec<RatStr>,
}

pub fn chain_point_doc(c: &ChainPoint) -> ChainPointDoc {
    ChainPointDoc {
        chain: c.chain.clone(),
        weights: wrap(&c.weights),
    }
}

pub fn chain_point_from_doc(doc: ChainPointDoc) -> Result<ChainPoint, IoError> {
    if doc.chain.len() != doc.weights.len() {
        return Err(IoError::at(
            "weights",
            "weights",
            format!("{} weights for {} chain elements", doc.weights.len(), doc.chain.len()),
        ));
    }
    Ok(ChainPoint {
        chain: doc.chain,
        weights: unwrap(doc.weights),
    })
}

pub fn save_chain_point(c: &ChainPoint) -> String {
    to_json(&chain_point_doc(c))
}

pub fn load_chain_point(text: &str) -> Result<ChainPoint, IoError> {
    chain_point_from_doc(from_json(text)?)
}

pub fn load_plan(text: &str) -> Result<Vec<usize>, IoError> {
    from_json(text)
}

pub fn save_plan(plan: &[usize]) -> String {
    to_json(&plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::generators::cube;
    use crate::constructions::midpoint_cuts;
    use crate::et::et;
    use crate::poset::boolean_lattice;
    use crate::rational::frac;

    #[test]
    fn lattice_round_trip_keeps_ids() {
        let b = boolean_lattice(3);
        let back = load_lattice(&save_lattice(&b)).unwrap().poset;
        assert_eq!(back.ranks(), b.ranks());
        assert_eq!(back.cover_pairs(), b.cover_pairs());
    }

    #[test]
    fn et_labels_round_trip() {
        let e = et(&boolean_lattice(3), 1).unwrap();
        let back = load_lattice(&save_et(&e)).unwrap().et.unwrap();
        assert_eq!(back.elements, e.elements);
        assert_eq!(back.t, 1);
    }

    #[test]
    fn rank_gap_is_not_graded() {
        let text = r#"{"length":2,"elements":[
            {"id":0,"rank":0,"covers":[]},
            {"id":1,"rank":2,"covers":[0]}],"bottom":0,"top":1}"#;
        assert!(matches!(
            load_lattice(text),
            Err(IoError::Poset(PosetError::NotGraded(_)))
        ));
    }

    #[test]
    fn zero_denominator_names_field() {
        let text = r#"{"chain":[0],"weights":["1/0"]}"#;
        match load_chain_point(text) {
            Err(IoError::Parse { path, field, .. }) => {
                assert_eq!(path, "weights[0]");
                assert_eq!(field, "weights");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn polytope_and_cuts_round_trip() {
        let c = cube(4).with_r2(frac(7, 3));
        let text = save_polytope(&c);
        let back = load_polytope(&text).unwrap();
        assert_eq!(back.vertices, c.vertices);
        assert_eq!(back.facets, c.facets);
        assert_eq!(back.r2, c.r2);
        assert_eq!(save_polytope(&back), text);

        let cuts = midpoint_cuts(&c).unwrap();
        let again = load_cut_system(&save_cut_system(&cuts)).unwrap();
        assert_eq!(again.cuts, cuts.cuts);
        assert_eq!(again.edge_points, cuts.edge_points);
    }

    #[test]
    fn plan_round_trip() {
        assert_eq!(load_plan(&save_plan(&[0, 3, 7])).unwrap(), vec![0, 3, 7]);
        assert!(load_plan("[-1]").is_err());
    }
}
