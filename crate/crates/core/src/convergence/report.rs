use serde::{Deserialize, Serialize};

use crate::convergence::dictionary::{Dictionary, Role};
use crate::convergence::metrics::*;
use crate::convergence::sequence::SequenceSpec;
use crate::convergence::verdict::{combine, fit_decay, verdict, FittedDecay, Subsequence, Verdict};
use crate::hilbert::HilbertVector;
use crate::{Error, Result};

/// Label attached to every fitted rate: rates are properties of the chosen
/// sequence, not general statements.
pub const RATE_LABEL: &str = "scenario-derived";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticSettings {
    pub metric: MetricKind,
    pub tol: f64,
    pub delta: f64,
    #[serde(default)]
    pub subsequence: Subsequence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorReport {
    pub id: String,
    /// Norm of the dictionary vector; verdicts and fits use `metrics / norm`.
    pub norm: f64,
    pub metrics: Vec<f64>,
    pub verdict: Verdict,
    pub decay: FittedDecay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub diagnostic: MetricKind,
    pub tol: f64,
    pub delta: f64,
    pub subsequence: Subsequence,
    pub verdict: Verdict,
    pub vectors: Vec<VectorReport>,
    pub dictionary: String,
    pub rate_label: String,
}

/// Evaluates one diagnostic on every dictionary vector of its role.
pub fn run_diagnostic(seq: &SequenceSpec, dict: &Dictionary, settings: &DiagnosticSettings) -> Result<ConvergenceReport> {
    let metric = settings.metric;
    let target = seq.target().model();
    let series: Vec<(String, Vec<f64>, f64)> = match metric {
        MetricKind::Ucond | MetricKind::AdjointCertificate | MetricKind::UnitaryStrong | MetricKind::Srs => {
            let list = if metric.role() == Role::Plus { &dict.plus } else { &dict.h };
            list.iter()
                .map(|v| {
                    let e = match metric {
                        MetricKind::Ucond => ucond_metric(seq, &v.vector)?,
                        MetricKind::AdjointCertificate => adjoint_limit_certificate(seq, &v.vector)?,
                        MetricKind::UnitaryStrong => unitary_strong_metric(seq, &v.vector)?,
                        _ => srs_metric(seq, &v.vector)?,
                    };
                    Ok((v.id.clone(), e, v.vector.norm()?))
                })
                .collect::<Result<_>>()?
        }
        MetricKind::CoreCertificate => dict
            .core
            .iter()
            .map(|v| {
                let norm = target.core_vector(&v.vector)?.norm()?;
                Ok((v.id.clone(), core_convergence_certificate(seq, &v.vector)?, norm))
            })
            .collect::<Result<_>>()?,
        MetricKind::Projection | MetricKind::QProjection | MetricKind::GraphLimit => {
            let list = if metric == MetricKind::GraphLimit { &dict.domain } else { &dict.graph };
            list.iter()
                .map(|v| {
                    let e = match metric {
                        MetricKind::Projection => projection_metric(seq, &v.vector)?,
                        MetricKind::QProjection => q_projection_metric(seq, &v.vector)?,
                        _ => graph_limit_certificate(seq, &v.vector)?,
                    };
                    Ok((v.id.clone(), e, v.vector.norm()?))
                })
                .collect::<Result<_>>()?
        }
    };
    if series.is_empty() {
        return Err(Error::Config(format!("dictionary has no {:?} vectors for diagnostic {}", metric.role(), metric.name())));
    }
    let vectors = series
        .into_iter()
        .map(|(id, metrics, norm)| {
            let rel: Vec<f64> = metrics.iter().map(|e| e / norm).collect();
            let v = verdict(&rel, settings.tol, settings.delta, &settings.subsequence)?;
            let decay = fit_decay(&rel);
            Ok(VectorReport { id, norm, metrics, verdict: v, decay })
        })
        .collect::<Result<Vec<_>>>()?;
    let overall = combine(&vectors.iter().map(|v| v.verdict.clone()).collect::<Vec<_>>());
    Ok(ConvergenceReport {
        diagnostic: metric,
        tol: settings.tol,
        delta: settings.delta,
        subsequence: settings.subsequence,
        verdict: overall,
        vectors,
        dictionary: dict.provenance.clone(),
        rate_label: RATE_LABEL.into(),
    })
}
