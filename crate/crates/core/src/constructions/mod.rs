//! Concrete polytopes and the two realization procedures: simultaneous
//! vertex truncation and `conv(P ∪ P°)` for a `t`-tangent `P`.

pub mod cross_stack;
pub mod generators;
pub mod realization;
pub mod stack;
pub mod stacked;
pub mod truncation;

use thiserror::Error;

use crate::et::EtError;
use crate::geometry::GeometryError;

pub use cross_stack::{build_cross_stack, CrossStack, CutStrategy};
pub use generators::{generate, GeneratorKind};
pub use realization::et_realization;
pub use stack::stack;
pub use stacked::{build_truncatable_stacked, StackBase, StackedFamily};
pub use truncation::{cuts_from_edge_tangency, midpoint_cuts, truncate_all, CutSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("apex is not beyond facet {facet}")]
    ApexNotBeyond { facet: usize },
    #[error("apex is not beneath facet {facet}")]
    ApexNotBeneathOthers { facet: usize },
    #[error("placement failed: {0}")]
    PlacementFailed(String),
    #[error("cut system invalid: {0}")]
    CutInvariantViolated(String),
    #[error("no certified cut system found: {0}")]
    CutSearchFailed(String),
    #[error("polytope is not {t}-tangent to the sphere of squared radius {r2}")]
    NotTangent { t: usize, r2: String },
    #[error("vertex {vertex} lies beyond the facet of face {face}")]
    FacetViolated { face: usize, vertex: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Et(#[from] EtError),
}
