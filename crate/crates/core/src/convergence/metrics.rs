use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::dictionary::Role;
use crate::convergence::sequence::SequenceSpec;
use crate::extension::{resolvent, Extension};
use crate::graph::{q_projection, GraphProjection, ProjectionKind};
use crate::hilbert::{project_onto_span, GraphVec, HVec, HilbertVector};
use crate::models::CoreVector;
use crate::{Result, Sign};

/// Diagnostics evaluated along a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// `‖(π_nφ₊, U_nπ_nφ₊) - (φ₊, Uφ₊)‖`.
    Ucond,
    /// `‖U_nπ_nψ - Uπψ‖`.
    UnitaryStrong,
    /// `‖(B_n+i)^{-1}ψ - (B+i)^{-1}ψ‖`.
    Srs,
    /// `‖(φ_n, A_nφ_n) - (φ, Aφ)‖` with `φ_n` the canonical core approximant.
    CoreCertificate,
    /// Distance of the `π_n`-projected pieces of `Gr(A_n*)` from those of `Gr(A*)`.
    AdjointCertificate,
    /// `‖P_nx - Px‖`.
    Projection,
    /// `‖Q_nx - Qx‖`.
    QProjection,
    /// `‖Q_nx - x‖` for `x ∈ Gr(B)`.
    GraphLimit,
}

impl MetricKind {
    pub const ALL: [MetricKind; 8] = [
        MetricKind::Ucond,
        MetricKind::UnitaryStrong,
        MetricKind::Srs,
        MetricKind::CoreCertificate,
        MetricKind::AdjointCertificate,
        MetricKind::Projection,
        MetricKind::QProjection,
        MetricKind::GraphLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Ucond => "ucond",
            MetricKind::UnitaryStrong => "unitary_strong",
            MetricKind::Srs => "srs",
            MetricKind::CoreCertificate => "core_certificate",
            MetricKind::AdjointCertificate => "adjoint_certificate",
            MetricKind::Projection => "projection",
            MetricKind::QProjection => "q_projection",
            MetricKind::GraphLimit => "graph_limit",
        }
    }

    /// Dictionary list the metric reads.
    pub fn role(self) -> Role {
        match self {
            MetricKind::Ucond | MetricKind::AdjointCertificate => Role::Plus,
            MetricKind::UnitaryStrong | MetricKind::Srs => Role::H,
            MetricKind::CoreCertificate => Role::Core,
            MetricKind::Projection | MetricKind::QProjection => Role::Graph,
            MetricKind::GraphLimit => Role::Domain,
        }
    }
}

fn per_member<F>(seq: &SequenceSpec, f: F) -> Result<Vec<f64>>
where
    F: Fn(&Extension) -> Result<f64> + Sync + Send,
{
    seq.members().par_iter().map(&f).collect()
}

/// `(π_nφ₊, U_nπ_nφ₊)` for one member.
fn projected_pair(ext: &Extension, phi: &HVec) -> Result<(HVec, HVec)> {
    let p = project_onto_span(ext.frame().plus(), phi)?;
    let up = ext.apply_u(&p)?;
    Ok((p, up))
}

pub fn ucond_metric(seq: &SequenceSpec, phi_plus: &HVec) -> Result<Vec<f64>> {
    let (p, up) = projected_pair(seq.target(), phi_plus)?;
    per_member(seq, |ext| {
        let (pn, upn) = projected_pair(ext, phi_plus)?;
        Ok((pn.distance(&p)?.powi(2) + upn.distance(&up)?.powi(2)).sqrt())
    })
}

pub fn unitary_strong_metric(seq: &SequenceSpec, psi: &HVec) -> Result<Vec<f64>> {
    let u = seq.target().apply_u(psi)?;
    per_member(seq, |ext| ext.apply_u(psi)?.distance(&u))
}

pub fn srs_metric(seq: &SequenceSpec, psi: &HVec) -> Result<Vec<f64>> {
    let r = resolvent(seq.target(), Sign::Plus, psi)?;
    per_member(seq, |ext| resolvent(ext, Sign::Plus, psi)?.distance(&r))
}

pub fn core_convergence_certificate(seq: &SequenceSpec, phi: &CoreVector) -> Result<Vec<f64>> {
    let model = seq.target().model();
    let v = model.core_vector(phi)?;
    let av = model.apply_on_core(phi)?;
    per_member(seq, |ext| {
        let m = ext.model();
        let phin = m.core_approximant(phi)?;
        let dv = m.core_vector(&phin)?.distance(&v)?;
        let da = m.apply_on_core(&phin)?.distance(&av)?;
        Ok((dv * dv + da * da).sqrt())
    })
}

/// `‖(π_nφ₊ - φ₊)(1, i)‖ + ‖(U_nπ_nφ₊ - Uφ₊)(1, -i)‖`, i.e. `√2` times the
/// sum of the two component errors.
pub fn adjoint_limit_certificate(seq: &SequenceSpec, phi_plus: &HVec) -> Result<Vec<f64>> {
    let (p, up) = projected_pair(seq.target(), phi_plus)?;
    per_member(seq, |ext| {
        let (pn, upn) = projected_pair(ext, phi_plus)?;
        Ok(std::f64::consts::SQRT_2 * (pn.distance(&p)? + upn.distance(&up)?))
    })
}

pub fn projection_metric(seq: &SequenceSpec, x: &GraphVec) -> Result<Vec<f64>> {
    let px = GraphProjection::new(ProjectionKind::POfSymmetric, seq.target())?.apply(x)?;
    per_member(seq, |ext| GraphProjection::new(ProjectionKind::POfSymmetric, ext)?.apply(x)?.distance(&px))
}

pub fn q_projection_metric(seq: &SequenceSpec, x: &GraphVec) -> Result<Vec<f64>> {
    let qx = q_projection(seq.target(), x)?;
    per_member(seq, |ext| q_projection(ext, x)?.distance(&qx))
}

/// Canonical witness `Q_nx ∈ Gr(B_n)` for `x ∈ Gr(B)`.
pub fn graph_limit_certificate(seq: &SequenceSpec, x: &GraphVec) -> Result<Vec<f64>> {
    per_member(seq, |ext| q_projection(ext, x)?.distance(x))
}
