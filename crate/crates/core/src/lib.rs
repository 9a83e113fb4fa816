//! Exact combinatorics and rational geometry for the E_t-construction on
//! Eulerian lattices.
//!
//! The crate is organised bottom-up:
//!
//! * [`poset`] holds finite bounded graded posets, lattices, flag vectors and
//!   poset isomorphism.
//! * [`et`] implements the E_t-construction and the criteria that predict
//!   simpliciality and simplicity of its output.
//! * [`geometry`] provides exact rational polytopes given by vertices and
//!   facets, polarity and tangency certificates.
//! * [`constructions`] generates the concrete polytopes and the two
//!   realization routes (simultaneous vertex truncation and the convex hull
//!   of a tangent polytope with its polar).
//! * [`subdivision`] carries the explicit piecewise-linear maps between the
//!   order complexes of `L` and `E_t(L)`.
//! * [`formulas`] evaluates the closed-form flag-vector families.
//! * [`io`] is the JSON document layer used by the command-line tool.

pub mod constructions;
pub mod et;
pub mod formulas;
pub mod geometry;
pub mod io;
pub mod poset;
pub mod rational;
pub mod subdivision;

pub use et::{et, EtElement, EtPoset};
pub use poset::{FlagVector, GradedLattice, GradedPoset, PosetError};
pub use rational::{Rat, RatVec};
