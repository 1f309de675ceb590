//! Inner-product arithmetic shared by every other module.
//!
//! The inner product is conjugate-linear in the first slot and linear in the
//! second.

pub mod atoms;
pub mod grid;
pub mod onb;
pub mod vector;

pub use atoms::{Atom, Pole};
pub use grid::Grid1D;
pub use onb::{dist_to_span, gram_schmidt, project_onto_span, Onb, DEFAULT_GS_TOL};
pub use vector::{graph_inner, AtomVec, GraphVec, GridVec, HVec, HilbertVector, SpectralVec};
