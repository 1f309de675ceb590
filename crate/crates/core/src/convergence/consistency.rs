use serde::{Deserialize, Serialize};

use crate::convergence::metrics::MetricKind;
use crate::convergence::report::ConvergenceReport;
use crate::convergence::verdict::Verdict;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    Violated,
    /// Premise fails, so the implication says nothing.
    NotApplicable,
    /// Premise holds but an inconclusive verdict blocks the conclusion.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationCheck {
    pub rule: String,
    pub statement: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRecord {
    pub checks: Vec<ImplicationCheck>,
    pub violations: usize,
    pub annotations: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum T {
    C,
    D,
    I,
}

impl From<&Verdict> for T {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Converged { .. } => T::C,
            Verdict::Diverged { .. } => T::D,
            Verdict::Inconclusive { .. } => T::I,
        }
    }
}

fn and(a: T, b: T) -> T {
    match (a, b) {
        (T::C, T::C) => T::C,
        (T::D, _) | (_, T::D) => T::D,
        _ => T::I,
    }
}

fn find(reports: &[ConvergenceReport], kinds: &[MetricKind]) -> Result<T> {
    kinds
        .iter()
        .find_map(|k| reports.iter().find(|r| r.diagnostic == *k))
        .map(|r| T::from(&r.verdict))
        .ok_or_else(|| Error::MissingReport(kinds[0].name().into()))
}

fn check(rule: &str, statement: &str, premise: T, conclusion_ok: bool, conclusion_bad: bool) -> ImplicationCheck {
    let status = if premise != T::C {
        CheckStatus::NotApplicable
    } else if conclusion_bad {
        CheckStatus::Violated
    } else if conclusion_ok {
        CheckStatus::Holds
    } else {
        CheckStatus::Undetermined
    };
    ImplicationCheck { rule: rule.into(), statement: statement.into(), status }
}

/// Checks the observed verdicts against the convergence implications between
/// the core certificate (`Gr(A) ⊆ Γ∞`), `U_n → U`, strong resolvent
/// convergence, projection convergence and the adjoint certificate
/// (`Gr(A*) ⊆ Γ*∞`). Only converged/diverged pairs can contradict an
/// implication.
pub fn theorem_consistency(reports: &[ConvergenceReport]) -> Result<ConsistencyRecord> {
    let core = find(reports, &[MetricKind::CoreCertificate])?;
    let u = find(reports, &[MetricKind::UnitaryStrong, MetricKind::Ucond])?;
    let srs = find(reports, &[MetricKind::Srs])?;
    let proj = find(reports, &[MetricKind::Projection])?;
    let adj = find(reports, &[MetricKind::AdjointCertificate])?;

    let mut checks = vec![
        check(
            "core_and_unitary_imply_resolvent_and_projection",
            "Gr(A) ⊆ Γ∞ and U_n → U ⇒ B_n → B (strong resolvent) and P_n → P",
            and(core, u),
            srs == T::C && proj == T::C,
            srs == T::D || proj == T::D,
        ),
        check(
            "resolvent_and_projection_imply_unitary",
            "B_n → B (strong resolvent) and P_n → P ⇒ U_n → U",
            and(srs, proj),
            u == T::C,
            u == T::D,
        ),
        check(
            "projection_limit_equivalence",
            "P_n → P ⇒ (B_n → B ⇔ U_n → U)",
            proj,
            (srs == T::C && u == T::C) || (srs == T::D && u == T::D),
            (srs == T::C && u == T::D) || (srs == T::D && u == T::C),
        ),
    ];
    let rhs = and(srs, adj);
    checks.push(check(
        "core_limit_equivalence",
        "Gr(A) ⊆ Γ∞ ⇒ (U_n → U ⇔ B_n → B and Gr(A*) ⊆ Γ*∞)",
        core,
        (u == T::C && rhs == T::C) || (u == T::D && rhs == T::D),
        (u == T::C && rhs == T::D) || (u == T::D && rhs == T::C),
    ));

    let mut annotations = Vec::new();
    if core == T::C && srs == T::C && u == T::D && adj == T::D {
        annotations.push(
            "strictly_stronger_gap: the core certificate and strong resolvent convergence hold while U_n does not \
             converge. The adjoint certificate diverges, so Gr(A*) ⊆ Γ*∞ fails and U-convergence is not forced. \
             Strong graph convergence of A_n is strictly weaker than convergence of the graph projections."
                .to_string(),
        );
    }
    let violations = checks.iter().filter(|c| c.status == CheckStatus::Violated).count();
    Ok(ConsistencyRecord { checks, violations, annotations })
}
