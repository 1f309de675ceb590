//! Orthogonal projections in `H ⊕ H` onto `Gr(B)`, `Gr(A)` and `Gr(A*)`.

use serde::{Deserialize, Serialize};

use crate::extension::{resolvent, Extension};
use crate::hilbert::{project_onto_span, GraphVec, HVec, HilbertVector, Onb};
use crate::{Result, Sign, C64, I};

/// Orthonormality tolerance of the complement frame.
pub const COMPLEMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionKind {
    QOfExtension,
    POfSymmetric,
    PstarOfAdjoint,
}

/// One of the three graph projections attached to an extension.
#[derive(Debug, Clone)]
pub struct GraphProjection {
    kind: ProjectionKind,
    ext: Extension,
    complement: Option<Onb<GraphVec>>,
}

impl GraphProjection {
    pub fn new(kind: ProjectionKind, ext: &Extension) -> Result<Self> {
        let complement = match kind {
            ProjectionKind::QOfExtension => None,
            _ => Some(complement_frame(ext)?),
        };
        Ok(Self { kind, ext: ext.clone(), complement })
    }

    pub fn kind(&self) -> ProjectionKind {
        self.kind
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    pub fn apply(&self, x: &GraphVec) -> Result<GraphVec> {
        match (self.kind, &self.complement) {
            (ProjectionKind::QOfExtension, _) => q_projection(&self.ext, x),
            (ProjectionKind::POfSymmetric, Some(w)) => p_with(&self.ext, w, x),
            (ProjectionKind::PstarOfAdjoint, Some(w)) => {
                let wx = x.w_map();
                let rest = wx.sub(&p_with(&self.ext, w, &wx)?)?;
                Ok(rest.w_inverse())
            }
            _ => unreachable!("complement frame is built in new"),
        }
    }
}

/// Projection onto `Gr(B)` from the resolvents at `±i`:
/// `u = (C₋ - C₊)x₁/(2i) + (C₊ + C₋)x₂/2`,
/// `Bu = (C₊ + C₋)x₁/2 + x₂ - (C₋ - C₊)x₂/(2i)`.
pub fn q_projection(ext: &Extension, x: &GraphVec) -> Result<GraphVec> {
    let p1 = resolvent(ext, Sign::Plus, &x.first)?;
    let m1 = resolvent(ext, Sign::Minus, &x.first)?;
    let p2 = resolvent(ext, Sign::Plus, &x.second)?;
    let m2 = resolvent(ext, Sign::Minus, &x.second)?;
    let half = C64::new(0.5, 0.0);
    let d = C64::new(1.0, 0.0) / (2.0 * I);
    let one = C64::new(1.0, 0.0);
    let u = HVec::lin_comb(&[(d, &m1), (-d, &p1), (half, &p2), (half, &m2)])?;
    let bu = HVec::lin_comb(&[(half, &p1), (half, &m1), (one, &x.second), (-d, &m2), (d, &p2)])?;
    GraphVec::new(u, bu)
}

/// `wℓ = ½(φ̂₊ℓ + Uφ̂₊ℓ, iφ̂₊ℓ - iUφ̂₊ℓ)`, an orthonormal basis of
/// `Gr(B) ⊖ Gr(A)`.
pub fn complement_frame(ext: &Extension) -> Result<Onb<GraphVec>> {
    let half = C64::new(0.5, 0.0);
    let vectors = (0..ext.k())
        .map(|l| {
            let p = &ext.frame().plus().vectors()[l];
            let up = ext.u_plus(l)?;
            let first = HVec::lin_comb(&[(half, p), (half, &up)])?;
            let second = HVec::lin_comb(&[(half * I, p), (-half * I, &up)])?;
            GraphVec::new(first, second)
        })
        .collect::<Result<Vec<_>>>()?;
    Onb::from_orthonormal(vectors, COMPLEMENT_TOL)
}

fn p_with(ext: &Extension, w: &Onb<GraphVec>, x: &GraphVec) -> Result<GraphVec> {
    let q = q_projection(ext, x)?;
    // w ⊂ Gr(B), so projecting x or Qx onto it is the same
    let r = project_onto_span(w, &q)?;
    q.sub(&r)
}

/// Projection onto `Gr(A)`: `P = Q - Σ |wℓ⟩⟨wℓ|`.
pub fn p_projection(ext: &Extension, x: &GraphVec) -> Result<GraphVec> {
    p_with(ext, &complement_frame(ext)?, x)
}

/// Projection onto `Gr(A*)`: `P* = W^{-1}(1 - P)W`.
pub fn pstar_projection(ext: &Extension, x: &GraphVec) -> Result<GraphVec> {
    GraphProjection::new(ProjectionKind::PstarOfAdjoint, ext)?.apply(x)
}

/// `P*` assembled directly from `Gr(A*) = Gr(A) ⊕ {(φ₊, iφ₊)} ⊕ {(φ₋, -iφ₋)}`.
pub fn pstar_three_block(ext: &Extension, x: &GraphVec) -> Result<GraphVec> {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let frame = ext.frame();
    let mut blocks = Vec::with_capacity(2 * ext.k());
    for p in frame.plus().vectors() {
        blocks.push(GraphVec::new(p.scale(s), p.scale(s * I))?);
    }
    for m in frame.minus().vectors() {
        blocks.push(GraphVec::new(m.scale(s), m.scale(-s * I))?);
    }
    let defect = Onb::from_orthonormal(blocks, 1e-8)?;
    p_projection(ext, x)?.add(&project_onto_span(&defect, x)?)
}

/// `‖x - Πx‖`.
pub fn dist_to_graph(proj: &GraphProjection, x: &GraphVec) -> Result<f64> {
    x.distance(&proj.apply(x)?)
}
