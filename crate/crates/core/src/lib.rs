//! Numerical laboratory for von Neumann self-adjoint extensions of closed
//! symmetric operators with equal, finite deficiency indices `(k, k)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`hilbert`]: vectors in `H` and `H ⊕ H`, inner products, Gram–Schmidt
//!   and finite-rank projections.
//! * [`models`]: concrete symmetric operators with deficiency frames and
//!   reference resolvents.
//! * [`extension`]: self-adjoint extensions `B` built from a unitary `U`,
//!   their action on `D(B)` and their resolvents at `±i`.
//! * [`graph`]: orthogonal projections in `H ⊕ H` onto `Gr(B)`, `Gr(A)` and
//!   `Gr(A*)`.
//! * [`convergence`]: metrics along sequences `n ↦ (A_n, U_n)`, verdicts and
//!   the implication checks between them.
//! * [`scenario`]: JSON-configured batch runs, the invariant suite and report
//!   output used by the `deflab` binary.

pub mod convergence;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod graph;
pub mod hilbert;
pub mod models;
pub mod scenario;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Spectral point `±i` at which resolvents are evaluated.
///
/// `Sign::Plus` stands for `(B + i)^{-1}`, `Sign::Minus` for `(B - i)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The complex number `±i`.
    pub fn value(self) -> C64 {
        match self {
            Sign::Plus => I,
            Sign::Minus => -I,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}
