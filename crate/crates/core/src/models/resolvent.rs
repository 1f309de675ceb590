use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::hilbert::atoms::{free_resolvent_of_green, Atom, Pole};
use crate::hilbert::{AtomVec, Grid1D, HVec};
use crate::models::model::{atomic_boundary_data, ModelOperator, ModelSpec};
use crate::models::ode::integrate_linear2;
use crate::{Error, Result, Sign, C64, I};

/// Below this the Green's-function denominator counts as singular.
pub const WRONSKIAN_TOL: f64 = 1e-12;

/// Linear boundary condition `M · data(ψ) = 0` with `M` a `k × 2k` matrix
/// acting on the model's boundary data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    rows: Vec<Vec<C64>>,
}

impl BoundaryCondition {
    pub fn new(rows: Vec<Vec<C64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != 2 * k) {
            return Err(Error::Config(format!("boundary condition must be k × 2k, got {k} rows")));
        }
        if rows.iter().flatten().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Config("boundary condition entries must be finite".into()));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<C64>] {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Applied to a data vector.
    pub fn apply(&self, data: &[C64]) -> Vec<C64> {
        self.rows.iter().map(|r| r.iter().zip(data).map(|(a, b)| a * b).sum()).collect()
    }

    /// Bit pattern of the single row scaled to unit norm with its first
    /// significant entry positive real.
    fn key(&self) -> Vec<u64> {
        let row = &self.rows[0];
        let n = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let lead = row.iter().find(|c| c.norm() > 1e-12 * n).copied().unwrap_or(C64::new(1.0, 0.0));
        let phase = lead.conj() / lead.norm();
        row.iter()
            .flat_map(|c| {
                let v = c * phase / n;
                [(v.re + 0.0).to_bits(), (v.im + 0.0).to_bits()]
            })
            .collect()
    }
}

/// Samples of a half-line solution with its data `[u(0), u'(0)]`.
#[derive(Debug)]
pub struct Solution {
    pub values: Vec<C64>,
    pub derivatives: Vec<C64>,
    pub at_zero: [C64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SolutionKey {
    Decaying(Sign),
    Regular(Sign, Vec<u64>),
}

fn cached(model: &ModelOperator, key: SolutionKey, build: impl FnOnce() -> Result<Solution>) -> Result<Arc<Solution>> {
    if let Some(s) = model.inner.solutions.read().expect("solution cache poisoned").get(&key) {
        return Ok(s.clone());
    }
    let s = Arc::new(build()?);
    model.inner.solutions.write().expect("solution cache poisoned").entry(key).or_insert(s.clone());
    Ok(s)
}

fn half_line_parts(model: &ModelOperator) -> Result<(&Arc<Grid1D>, f64, Vec<f64>)> {
    match model.spec() {
        ModelSpec::SchrodingerHalfLine { potential, truncation } => {
            let grid = model.grid().expect("half-line model has a grid");
            Ok((grid, *truncation, potential.breakpoints()))
        }
        _ => Err(Error::Unsupported { operation: "half-line solution", reason: model.name().into() }),
    }
}

/// Integrates through the grid nodes and potential breakpoints, returning
/// `(values at nodes, derivatives at nodes, final state)`.
fn sweep(model: &ModelOperator, s: C64, x0: f64, y0: [C64; 2], backward: bool) -> Result<(Vec<C64>, Vec<C64>, [C64; 2])> {
    let (grid, truncation, breaks) = half_line_parts(model)?;
    let potential = model.potential().cloned().unwrap_or_default();
    let mut targets: Vec<(f64, Option<usize>)> = grid.nodes().iter().enumerate().map(|(i, x)| (*x, Some(i))).collect();
    targets.extend(breaks.into_iter().filter(|b| *b > 0.0 && *b < truncation).map(|b| (b, None)));
    let end = if backward { 0.0 } else { truncation };
    targets.push((end, None));
    targets.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if backward {
        targets.reverse();
    }
    let xs: Vec<f64> = targets.iter().map(|t| t.0).collect();
    let ys = integrate_linear2(|x| s + potential.eval(x), x0, y0, &xs, model.ode_options())?;
    let n = grid.len();
    let mut values = vec![C64::new(0.0, 0.0); n];
    let mut derivatives = vec![C64::new(0.0, 0.0); n];
    for ((_, idx), y) in targets.iter().zip(&ys) {
        if let Some(i) = idx {
            values[*i] = y[0];
            derivatives[*i] = y[1];
        }
    }
    Ok((values, derivatives, *ys.last().unwrap()))
}

/// Solution of `u'' = (Φ + s)u` decaying at infinity, started from
/// `e^{-κ(x-X)}` at the truncation point and scaled so that
/// `|(u(0), u'(0))| = 1`.
pub(crate) fn decaying_solution(model: &ModelOperator, sign: Sign) -> Result<Arc<Solution>> {
    cached(model, SolutionKey::Decaying(sign), || {
        let (_, truncation, _) = half_line_parts(model)?;
        let s = sign.value();
        let kappa = s.sqrt();
        let (mut values, mut derivatives, at_zero) =
            sweep(model, s, truncation, [C64::new(1.0, 0.0), -kappa], true)?;
        let scale = (at_zero[0].norm_sqr() + at_zero[1].norm_sqr()).sqrt();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Ode("decaying solution lost all precision".into()));
        }
        values.iter_mut().chain(derivatives.iter_mut()).for_each(|v| *v /= scale);
        Ok(Solution { values, derivatives, at_zero: [at_zero[0] / scale, at_zero[1] / scale] })
    })
}

fn regular_solution(model: &ModelOperator, sign: Sign, bc: &BoundaryCondition) -> Result<Arc<Solution>> {
    cached(model, SolutionKey::Regular(sign, bc.key()), || {
        let m = &bc.rows()[0];
        let start = [m[1], -m[0]];
        let (values, derivatives, _) = sweep(model, sign.value(), 0.0, start, false)?;
        Ok(Solution { values, derivatives, at_zero: start })
    })
}

fn grid_input<'a>(model: &ModelOperator, f: &'a HVec) -> Result<&'a [C64]> {
    let grid = model.grid().ok_or_else(|| Error::RepresentationMismatch("model has no grid".into()))?;
    match f {
        HVec::Grid(g) if *g.grid == **grid => Ok(&g.values),
        other => Err(Error::RepresentationMismatch(format!("{} input for {}", other.tag(), model.name()))),
    }
}

fn singular(context: &str, value: C64, scale: f64) -> Result<()> {
    if value.norm() < WRONSKIAN_TOL * scale.max(1.0) {
        return Err(Error::NearSingular { context: context.into(), wronskian: value.norm() });
    }
    Ok(())
}

/// `(B + sign)^{-1} f` for the extension `B` of the model singled out by the
/// boundary condition `bc`, from closed-form or ODE Green's functions.
pub fn green_resolvent(model: &ModelOperator, bc: &BoundaryCondition, sign: Sign, f: &HVec) -> Result<HVec> {
    if bc.k() != model.k() {
        return Err(Error::Config(format!("boundary condition has {} rows, model needs {}", bc.k(), model.k())));
    }
    let s = sign.value();
    match model.spec() {
        ModelSpec::MomentumInterval => {
            let grid = model.grid().unwrap();
            let values = grid_input(model, f)?;
            // -iu' + su = f  ⇒  u = e^{λx}(c + iF(x)),  F(x) = ∫_0^x e^{-λt} f
            let lambda = -I * s;
            let weighted: Vec<C64> = values.iter().zip(grid.nodes()).map(|(v, x)| v * (-lambda * x).exp()).collect();
            let big_f = grid.cumulative(&weighted);
            let f1 = grid.integrate(&weighted);
            let m = &bc.rows()[0];
            let e = lambda.exp();
            let denom = m[0] + m[1] * e;
            singular("momentum Green's function", denom, m[0].norm() + m[1].norm())?;
            let c = -m[1] * e * I * f1 / denom;
            let u = big_f.iter().zip(grid.nodes()).map(|(bf, x)| (lambda * x).exp() * (c + I * bf)).collect();
            Ok(HVec::on_grid(grid.clone(), u))
        }
        ModelSpec::LaplaceInterval => {
            let grid = model.grid().unwrap();
            let values = grid_input(model, f)?;
            // -u'' + su = f, κ² = s
            let kappa = s.sqrt();
            let sh = kappa.sinh();
            let ch = kappa.cosh();
            let xs = grid.nodes();
            let left: Vec<C64> = values.iter().zip(xs).map(|(v, x)| v * (kappa * x).sinh()).collect();
            let right: Vec<C64> = values.iter().zip(xs).map(|(v, x)| v * (kappa * (1.0 - x)).sinh()).collect();
            let a_cum = grid.cumulative(&left);
            let b_cum = grid.cumulative_from_right(&right);
            let d0 = grid.integrate(&right) / sh;
            let d1 = -grid.integrate(&left) / sh;
            let h10 = -kappa * ch / sh;
            let h11 = -kappa / sh;
            let h20 = kappa / sh;
            let h21 = kappa * ch / sh;
            let r = bc.rows();
            let row = |j: usize| {
                let q = &r[j];
                (q[0] + q[2] * h10 + q[3] * h11, q[1] + q[2] * h20 + q[3] * h21, -(q[2] * d0 + q[3] * d1))
            };
            let (a11, a12, b1) = row(0);
            let (a21, a22, b2) = row(1);
            let det = a11 * a22 - a12 * a21;
            let scale: f64 = r.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
            singular("interval Laplacian Green's function", det, scale * scale)?;
            let a = (b1 * a22 - a12 * b2) / det;
            let b = (a11 * b2 - a21 * b1) / det;
            let u = xs
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let s1 = (kappa * (1.0 - x)).sinh();
                    let s2 = (kappa * x).sinh();
                    (s1 * a_cum[j] + s2 * b_cum[j]) / (kappa * sh) + (a * s1 + b * s2) / sh
                })
                .collect();
            Ok(HVec::on_grid(grid.clone(), u))
        }
        ModelSpec::SchrodingerHalfLine { .. } => schrodinger_green_resolvent(model, bc, sign, f),
        ModelSpec::PointInteraction3D { center } => {
            let atoms = f.as_atoms().ok_or_else(|| {
                Error::RepresentationMismatch(format!("{} input for {}", f.tag(), model.name()))
            })?;
            let z = Pole::from_z(-s).expect("±i");
            let mut out = free_resolvent(atoms, z)?;
            let [sigma0, g] = atomic_boundary_data(&out, *center);
            let m = &bc.rows()[0];
            let i_kappa = I * z.kappa() / (4.0 * std::f64::consts::PI);
            let denom = m[0] + m[1] * i_kappa;
            singular("point-interaction Krein formula", denom, m[0].norm() + m[1].norm())?;
            let c = -(m[0] * sigma0 + m[1] * g) / denom;
            out.push(c, Atom::green(z, *center));
            Ok(HVec::Atoms(out))
        }
    }
}

/// `(−Δ − z)^{-1}` on a combination of Green atoms.
pub fn free_resolvent(f: &AtomVec, z: Pole) -> Result<AtomVec> {
    let mut out = AtomVec::default();
    for (w, a) in f.terms() {
        match *a {
            Atom::Green { pole, order, center } => {
                for (c, p, m) in free_resolvent_of_green(z, pole, order) {
                    out.push(w * c, Atom::Green { pole: p, order: m, center });
                }
            }
            Atom::Gauss { .. } => {
                return Err(Error::Unsupported {
                    operation: "free_resolvent",
                    reason: "3D resolvent inputs must be Green atom combinations".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Sturm–Liouville resolvent `u(x) = -(u∞(x)∫_0^x u₀f + u₀(x)∫_x^X u∞f)/W`
/// for the half-line extension with `m₀ψ(0) + m₁ψ'(0) = 0`. On the interval
/// Laplacian the condition must be a two-row matrix and the closed form is
/// used instead.
pub fn schrodinger_green_resolvent(model: &ModelOperator, bc: &BoundaryCondition, sign: Sign, f: &HVec) -> Result<HVec> {
    match model.spec() {
        ModelSpec::LaplaceInterval => return green_resolvent(model, bc, sign, f),
        ModelSpec::SchrodingerHalfLine { .. } => {}
        _ => {
            return Err(Error::Unsupported {
                operation: "schrodinger_green_resolvent",
                reason: format!("{} is not a Sturm–Liouville model", model.name()),
            })
        }
    }
    if bc.k() != 1 {
        return Err(Error::Config("half-line boundary condition must have one row".into()));
    }
    let grid = model.grid().unwrap();
    let values = grid_input(model, f)?;
    let inf = decaying_solution(model, sign)?;
    let reg = regular_solution(model, sign, bc)?;
    let w = reg.at_zero[0] * inf.at_zero[1] - reg.at_zero[1] * inf.at_zero[0];
    singular("half-line Wronskian", w, 1.0)?;
    let left: Vec<C64> = values.iter().zip(&reg.values).map(|(v, u)| v * u).collect();
    let right: Vec<C64> = values.iter().zip(&inf.values).map(|(v, u)| v * u).collect();
    let a = grid.cumulative(&left);
    let b = grid.cumulative_from_right(&right);
    let u = (0..grid.len())
        .map(|j| -(inf.values[j] * a[j] + reg.values[j] * b[j]) / w)
        .collect();
    Ok(HVec::on_grid(grid.clone(), u))
}

impl ModelOperator {
    /// `(B_ref + sign)^{-1} f` for the fixed reference extension.
    pub fn reference_resolvent(&self, sign: Sign, f: &HVec) -> Result<HVec> {
        green_resolvent(self, &self.reference_bc(), sign, f)
    }
}

/// Robin condition `cos β ψ(0) + sin β ψ'(0) = 0`.
pub fn robin(beta: f64) -> BoundaryCondition {
    BoundaryCondition::new(vec![vec![C64::new(beta.cos(), 0.0), C64::new(beta.sin(), 0.0)]]).unwrap()
}
