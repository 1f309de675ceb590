//! Self-adjoint extensions `B ⊃ A` built from a unitary `U: H₊ → H₋`.

pub mod boundary;
pub mod engine;
pub mod unitary;

pub use boundary::{boundary_parameters, BoundaryParameters, IntervalLabel};
pub use engine::{apply_extension, build_extension, resolvent, vn_resolvent, DomainElement, Extension, Phi0};
pub use unitary::{random_hermitian, UnitaryParam, UNITARY_TOL};

#[cfg(test)]
mod tests;
