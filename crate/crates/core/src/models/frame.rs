use nalgebra::DMatrix;

use crate::hilbert::atoms::{Atom, Pole};
use crate::hilbert::{gram_schmidt, HVec, HilbertVector, Onb, DEFAULT_GS_TOL};
use crate::models::model::{atomic_boundary_data, laplacian_of_atoms, ModelOperator, ModelSpec};
use crate::models::resolvent::decaying_solution;
use crate::{Error, Result, Sign, C64, I};

/// Largest admitted adjoint-equation residual of a frame vector.
pub const FRAME_RESIDUAL_TOL: f64 = 1e-8;

/// Orthonormal bases of `H₊ = ker(A* - i)` and `H₋ = ker(A* + i)` with the
/// boundary data of every basis vector.
#[derive(Debug, Clone)]
pub struct DeficiencyFrame {
    plus: Onb<HVec>,
    minus: Onb<HVec>,
    plus_data: Vec<Vec<C64>>,
    minus_data: Vec<Vec<C64>>,
    plus_residuals: Vec<f64>,
    minus_residuals: Vec<f64>,
}

impl DeficiencyFrame {
    pub fn k(&self) -> usize {
        self.plus.len()
    }

    pub fn plus(&self) -> &Onb<HVec> {
        &self.plus
    }

    pub fn minus(&self) -> &Onb<HVec> {
        &self.minus
    }

    pub fn basis(&self, sign: Sign) -> &Onb<HVec> {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    pub fn plus_data(&self) -> &[Vec<C64>] {
        &self.plus_data
    }

    pub fn minus_data(&self) -> &[Vec<C64>] {
        &self.minus_data
    }

    /// `2k × k` matrix whose columns are the boundary data of the basis.
    pub fn data_matrix(&self, sign: Sign) -> DMatrix<C64> {
        let cols = match sign {
            Sign::Plus => &self.plus_data,
            Sign::Minus => &self.minus_data,
        };
        let k = cols.len();
        DMatrix::from_fn(2 * k, k, |r, c| cols[c][r])
    }

    pub fn residuals(&self) -> (&[f64], &[f64]) {
        (&self.plus_residuals, &self.minus_residuals)
    }

    pub fn max_residual(&self) -> f64 {
        self.plus_residuals.iter().chain(&self.minus_residuals).fold(0.0, |a, b| a.max(*b))
    }
}

/// One unnormalised solution of `A*v = zv` with its derivative samples (1D
/// second-order models) and boundary data.
struct Raw {
    vector: HVec,
    derivative: Option<HVec>,
    data: Vec<C64>,
}

fn orthonormalise(model: &ModelOperator, raw: Vec<Raw>, z: C64) -> Result<(Onb<HVec>, Vec<Vec<C64>>, Vec<f64>)> {
    let vectors: Vec<HVec> = raw.iter().map(|r| r.vector.clone()).collect();
    let onb = gram_schmidt(&vectors, DEFAULT_GS_TOL)?;
    let mut data = Vec::with_capacity(raw.len());
    let mut residuals = Vec::with_capacity(raw.len());
    for (j, t) in onb.transform().iter().enumerate() {
        let d: Vec<C64> = (0..raw[0].data.len())
            .map(|r| t.iter().zip(&raw).map(|(c, x)| c * x.data[r]).sum())
            .collect();
        data.push(d);
        let derivative = match raw[0].derivative {
            Some(_) => {
                let terms: Vec<(C64, &HVec)> =
                    t.iter().copied().zip(raw.iter().map(|x| x.derivative.as_ref().unwrap())).collect();
                Some(HVec::lin_comb(&terms)?)
            }
            None => None,
        };
        residuals.push(adjoint_residual(model, &onb.vectors()[j], derivative.as_ref(), z)?);
    }
    Ok((onb, data, residuals))
}

/// `‖A*v - zv‖` from the differential expression of the model. For the
/// second-order 1D models `w` carries samples of `v'`, and `‖Dv - w‖` is
/// added so that the check does not trust `w`.
pub fn adjoint_residual(model: &ModelOperator, v: &HVec, w: Option<&HVec>, z: C64) -> Result<f64> {
    match (model.spec(), v) {
        (ModelSpec::PointInteraction3D { .. }, HVec::Atoms(a)) => {
            let lap = HVec::Atoms(laplacian_of_atoms(a)?);
            lap.sub(&v.scale(z))?.norm()
        }
        (spec, HVec::Grid(g)) => {
            let grid = &g.grid;
            let dv = grid.differentiate(&g.values);
            match spec {
                ModelSpec::MomentumInterval => {
                    let r: Vec<C64> = dv.iter().zip(&g.values).map(|(d, x)| -I * d - z * x).collect();
                    HVec::on_grid(grid.clone(), r).norm()
                }
                _ => {
                    let w = match w {
                        Some(HVec::Grid(w)) => w.values.clone(),
                        _ => dv.clone(),
                    };
                    let dw = grid.differentiate(&w);
                    let phi = |x: f64| model.potential().map_or(0.0, |p| p.eval(x));
                    let r: Vec<C64> = dw
                        .iter()
                        .zip(&g.values)
                        .zip(grid.nodes())
                        .map(|((d2, x), t)| -d2 + (phi(*t) - z) * x)
                        .collect();
                    let consistency: Vec<C64> = dv.iter().zip(&w).map(|(a, b)| a - b).collect();
                    Ok(HVec::on_grid(grid.clone(), r).norm()? + HVec::on_grid(grid.clone(), consistency).norm()?)
                }
            }
        }
        (_, v) => Err(Error::RepresentationMismatch(format!("{} vector for {}", v.tag(), model.name()))),
    }
}

fn raw_solutions(model: &ModelOperator, z: C64) -> Result<Vec<Raw>> {
    let grid = model.grid();
    Ok(match model.spec() {
        ModelSpec::MomentumInterval => {
            // -iψ' = zψ  ⇒  ψ = e^{izx}
            let g = grid.unwrap();
            vec![Raw {
                vector: HVec::sample(g, |x| (I * z * x).exp()),
                derivative: None,
                data: vec![C64::new(1.0, 0.0), (I * z).exp()],
            }]
        }
        ModelSpec::LaplaceInterval => {
            // -ψ'' = zψ  ⇒  e^{iμx}, e^{iμ(1-x)} with μ² = z
            let g = grid.unwrap();
            let mu = z.sqrt();
            let e = (I * mu).exp();
            let one = C64::new(1.0, 0.0);
            vec![
                Raw {
                    vector: HVec::sample(g, |x| (I * mu * x).exp()),
                    derivative: Some(HVec::sample(g, |x| I * mu * (I * mu * x).exp())),
                    data: vec![one, e, I * mu, I * mu * e],
                },
                Raw {
                    vector: HVec::sample(g, |x| (I * mu * (1.0 - x)).exp()),
                    derivative: Some(HVec::sample(g, |x| -I * mu * (I * mu * (1.0 - x)).exp())),
                    data: vec![e, one, -I * mu * e, -I * mu],
                },
            ]
        }
        ModelSpec::SchrodingerHalfLine { .. } => {
            // -ψ'' + Φψ = zψ is u'' = (Φ + s)u with s = -z
            let sign = if z.im > 0.0 { Sign::Minus } else { Sign::Plus };
            let sol = decaying_solution(model, sign)?;
            let g = grid.unwrap();
            vec![Raw {
                vector: HVec::on_grid(g.clone(), sol.values.clone()),
                derivative: Some(HVec::on_grid(g.clone(), sol.derivatives.clone())),
                data: sol.at_zero.to_vec(),
            }]
        }
        ModelSpec::PointInteraction3D { center } => {
            let pole = Pole::from_z(z).ok_or_else(|| Error::Unsupported {
                operation: "deficiency_frame",
                reason: "3D frames exist only at ±i".into(),
            })?;
            let v = crate::hilbert::AtomVec::new([(C64::new(1.0, 0.0), Atom::green(pole, *center))]);
            let data = atomic_boundary_data(&v, *center).to_vec();
            vec![Raw { vector: HVec::Atoms(v), derivative: None, data }]
        }
    })
}

pub(crate) fn build_frame(model: &ModelOperator) -> Result<DeficiencyFrame> {
    let (plus, plus_data, plus_residuals) = orthonormalise(model, raw_solutions(model, I)?, I)?;
    let (minus, minus_data, minus_residuals) = orthonormalise(model, raw_solutions(model, -I)?, -I)?;
    let frame = DeficiencyFrame { plus, minus, plus_data, minus_data, plus_residuals, minus_residuals };
    let worst = frame.max_residual();
    if !(worst < FRAME_RESIDUAL_TOL) {
        return Err(Error::FrameConstruction { model: model.name().into(), residual: worst });
    }
    Ok(frame)
}

/// `deficiency_frame(model)`.
pub fn deficiency_frame(model: &ModelOperator) -> &DeficiencyFrame {
    model.frame()
}
