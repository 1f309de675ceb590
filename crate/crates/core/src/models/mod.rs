//! Concrete closed symmetric operators with equal deficiency indices.

pub mod core_func;
pub mod frame;
pub mod model;
pub mod ode;
pub mod potential;
pub mod resolvent;

pub use core_func::CoreFunc;
pub use frame::{deficiency_frame, DeficiencyFrame, FRAME_RESIDUAL_TOL};
pub use model::{CoreVector, ModelOperator, ModelSpec, Numerics};
pub use potential::{potential_l2_local_distance, PotentialSpec};
pub use resolvent::{green_resolvent, robin, schrodinger_green_resolvent, BoundaryCondition};

#[cfg(test)]
mod tests;
