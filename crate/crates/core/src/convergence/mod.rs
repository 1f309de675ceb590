//! Metrics along sequences `n ↦ B_n`, verdicts and implication checks.

pub mod consistency;
pub mod dictionary;
pub mod metrics;
pub mod report;
pub mod sequence;
pub mod verdict;

pub use consistency::{theorem_consistency, CheckStatus, ConsistencyRecord, ImplicationCheck};
pub use dictionary::{Dictionary, DictionarySpec, ExplicitVector, Named, Role, VectorSpec};
pub use metrics::{
    adjoint_limit_certificate, core_convergence_certificate, graph_limit_certificate, projection_metric,
    q_projection_metric, srs_metric, ucond_metric, unitary_strong_metric, MetricKind,
};
pub use report::{run_diagnostic, ConvergenceReport, DiagnosticSettings, VectorReport, RATE_LABEL};
pub use sequence::{SequenceSpec, MAX_N};
pub use verdict::{combine, fit_decay, verdict, FittedDecay, Parity, Subsequence, Verdict};

#[cfg(test)]
mod tests;
