use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::extension::engine::Extension;
use crate::extension::unitary::{unitarity_deviation, UnitaryParam};
use crate::models::{BoundaryCondition, DeficiencyFrame, ModelSpec};
use crate::{Error, Result, Sign, C64};

/// Deviation from unitarity accepted before `u` recovered from a boundary
/// condition is projected back onto the unitary group.
const RECOVERY_TOL: f64 = 1e-8;

/// `M` with `M · data(φ̂₊ℓ + Uφ̂₊ℓ) = 0` for every `ℓ`: the rows span the
/// annihilator of the boundary data of `D(B)`.
pub fn bc_from_unitary(frame: &DeficiencyFrame, u: &UnitaryParam) -> Result<BoundaryCondition> {
    let dp = frame.data_matrix(Sign::Plus);
    let dm = frame.data_matrix(Sign::Minus);
    let g = &dp + &dm * u.matrix();
    let k = g.ncols();
    let n = g.nrows();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(k);
    let candidates = (0..k)
        .map(|c| g.column(c).iter().copied().collect::<Vec<_>>())
        .chain((0..n).map(|i| (0..n).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()));
    for (idx, mut v) in candidates.enumerate() {
        let scale = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for b in &basis {
                let h: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= h * y;
                }
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if idx < k {
            if norm < 1e-10 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::Degenerate { index: idx, residual: norm, tol: 1e-10 });
            }
        } else if norm < 1e-6 {
            continue;
        }
        let v: Vec<C64> = v.into_iter().map(|c| c / norm).collect();
        if idx >= k {
            rows.push(v.iter().map(|c| c.conj()).collect());
        }
        basis.push(v);
        if rows.len() == k {
            break;
        }
    }
    BoundaryCondition::new(rows)
}

/// `u = -(M D₋)^{-1}(M D₊)`.
pub fn unitary_from_bc(frame: &DeficiencyFrame, bc: &BoundaryCondition) -> Result<UnitaryParam> {
    let k = frame.k();
    if bc.k() != k {
        return Err(Error::Config(format!("boundary condition has {} rows, frame has k = {k}", bc.k())));
    }
    let m = DMatrix::from_fn(k, 2 * k, |i, j| bc.rows()[i][j]);
    let a = &m * frame.data_matrix(Sign::Minus);
    let b = &m * frame.data_matrix(Sign::Plus);
    let inv = a.clone().try_inverse().ok_or_else(|| Error::NearSingular {
        context: "boundary condition contains a minus deficiency vector".into(),
        wronskian: a.determinant().norm(),
    })?;
    let u = -(inv * b);
    let deviation = unitarity_deviation(&u);
    if deviation > RECOVERY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(UnitaryParam::project(u))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalLabel {
    Dirichlet,
    Neumann,
    General,
}

/// Human-readable boundary condition of an extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryParameters {
    /// `ψ(1) = e^{iθ} ψ(0)`, `θ ∈ [0, 2π)`.
    Twisted { theta: f64 },
    /// `cos β ψ(0) + sin β ψ'(0) = 0`, `β ∈ [0, π)`.
    Robin { beta: f64 },
    /// `M [ψ(0), ψ(1), ψ'(0), ψ'(1)]ᵀ = 0` in reduced form.
    Interval { rows: Vec<Vec<C64>>, label: IntervalLabel },
    /// `ρ = ασ` for `ψ ≈ σ/(4π|x-y|) + ρ`; `None` is the free Laplacian.
    PointInteraction { alpha: Option<f64> },
}

impl BoundaryParameters {
    pub fn to_bc(&self) -> BoundaryCondition {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let rows = match self {
            BoundaryParameters::Twisted { theta } => vec![vec![C64::from_polar(1.0, *theta), -one]],
            BoundaryParameters::Robin { beta } => vec![vec![C64::new(beta.cos(), 0.0), C64::new(beta.sin(), 0.0)]],
            BoundaryParameters::Interval { rows, .. } => rows.clone(),
            BoundaryParameters::PointInteraction { alpha: Some(a) } => vec![vec![C64::new(*a, 0.0), -one]],
            BoundaryParameters::PointInteraction { alpha: None } => vec![vec![one, zero]],
        };
        BoundaryCondition::new(rows).expect("parameter records are well formed")
    }
}

fn block_inverse(m: &DMatrix<C64>, cols: [usize; 2]) -> Option<DMatrix<C64>> {
    let b = DMatrix::from_fn(2, 2, |i, j| m[(i, cols[j])]);
    let scale = m.iter().fold(0.0, |a: f64, c| a.max(c.norm()));
    if b.determinant().norm() <= 1e-8 * scale * scale {
        return None;
    }
    b.try_inverse()
}

/// Readable boundary condition equivalent to the extension's `U`.
pub fn boundary_parameters(ext: &Extension) -> BoundaryParameters {
    let rows = ext.boundary_condition().rows();
    let r = &rows[0];
    let scale = r.iter().map(|c| c.norm()).fold(0.0, f64::max);
    match ext.model().spec() {
        ModelSpec::MomentumInterval => {
            let theta = (-r[0] / r[1]).arg().rem_euclid(2.0 * std::f64::consts::PI);
            BoundaryParameters::Twisted { theta }
        }
        ModelSpec::SchrodingerHalfLine { .. } => {
            let lead = if r[0].norm() >= r[1].norm() { r[0] } else { r[1] };
            let phase = lead.conj() / lead.norm();
            let (a, b) = ((r[0] * phase).re, (r[1] * phase).re);
            let beta = b.atan2(a).rem_euclid(std::f64::consts::PI);
            BoundaryParameters::Robin { beta }
        }
        ModelSpec::PointInteraction3D { .. } => {
            if r[1].norm() <= 1e-12 * scale {
                BoundaryParameters::PointInteraction { alpha: None }
            } else {
                BoundaryParameters::PointInteraction { alpha: Some((-r[0] / r[1]).re) }
            }
        }
        ModelSpec::LaplaceInterval => {
            let m = DMatrix::from_fn(2, 4, |i, j| rows[i][j]);
            let small = |cols: [usize; 2], red: &DMatrix<C64>| {
                cols.iter().all(|&c| (0..2).all(|i| red[(i, c)].norm() < 1e-9))
            };
            let (reduced, label) = if let Some(inv) = block_inverse(&m, [0, 1]) {
                let red = inv * &m;
                let label = if small([2, 3], &red) { IntervalLabel::Dirichlet } else { IntervalLabel::General };
                (red, label)
            } else if let Some(inv) = block_inverse(&m, [2, 3]) {
                let red = inv * &m;
                let label = if small([0, 1], &red) { IntervalLabel::Neumann } else { IntervalLabel::General };
                (red, label)
            } else {
                (m, IntervalLabel::General)
            };
            let rows = (0..2).map(|i| (0..4).map(|j| reduced[(i, j)]).collect()).collect();
            BoundaryParameters::Interval { rows, label }
        }
    }
}
