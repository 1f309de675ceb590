use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::hilbert::atoms::{distance, green_regular_at_center, Atom, Pole};
use crate::hilbert::{AtomVec, Grid1D, HVec};
use crate::models::core_func::CoreFunc;
use crate::models::frame::DeficiencyFrame;
use crate::models::ode::OdeOptions;
use crate::models::potential::PotentialSpec;
use crate::models::resolvent::{BoundaryCondition, Solution, SolutionKey};
use crate::{Error, Result, C64};

/// Net order-one weight and point value below this count as zero when a
/// 3D vector is certified as a member of `D(A)`.
pub const CORE_RESIDUAL_TOL: f64 = 1e-8;

fn default_truncation() -> f64 {
    40.0
}

/// Serializable description of a model operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    MomentumInterval,
    LaplaceInterval,
    SchrodingerHalfLine {
        #[serde(default)]
        potential: PotentialSpec,
        #[serde(default = "default_truncation")]
        truncation: f64,
    },
    #[serde(rename = "point_interaction_3d")]
    PointInteraction3D { center: [f64; 3] },
}

impl ModelSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::MomentumInterval => "momentum_interval",
            ModelSpec::LaplaceInterval => "laplace_interval",
            ModelSpec::SchrodingerHalfLine { .. } => "schrodinger_half_line",
            ModelSpec::PointInteraction3D { .. } => "point_interaction_3d",
        }
    }

    pub fn deficiency_index(&self) -> usize {
        match self {
            ModelSpec::LaplaceInterval => 2,
            _ => 1,
        }
    }

    pub fn reference_extension(&self) -> &'static str {
        match self {
            ModelSpec::MomentumInterval => "periodic",
            ModelSpec::LaplaceInterval => "Dirichlet at both ends",
            ModelSpec::SchrodingerHalfLine { .. } => "Dirichlet at 0",
            ModelSpec::PointInteraction3D { .. } => "free Laplacian",
        }
    }

    fn domain(&self) -> Option<(f64, f64)> {
        match self {
            ModelSpec::MomentumInterval | ModelSpec::LaplaceInterval => Some((0.0, 1.0)),
            ModelSpec::SchrodingerHalfLine { truncation, .. } => Some((0.0, *truncation)),
            ModelSpec::PointInteraction3D { .. } => None,
        }
    }
}

/// Discretisation settings shared by the 1D models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Numerics {
    pub panels: usize,
    pub order: usize,
    pub ode_rtol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self { panels: 64, order: 16, ode_rtol: 1e-10 }
    }
}

/// Element of the common core: a 1D profile or, in 3D, a finite atom
/// combination that lies in `H²` and vanishes at the interaction center.
#[derive(Debug, Clone)]
pub enum CoreVector {
    Profile(CoreFunc),
    Atomic(AtomVec),
}

pub(crate) struct ModelInner {
    pub(crate) spec: ModelSpec,
    pub(crate) numerics: Numerics,
    pub(crate) grid: Option<Arc<Grid1D>>,
    pub(crate) frame: OnceLock<DeficiencyFrame>,
    pub(crate) solutions: RwLock<HashMap<SolutionKey, Arc<Solution>>>,
}

/// Closed symmetric operator `A` with its deficiency frame.
///
/// Cheap to clone; the frame is built once at construction.
#[derive(Clone)]
pub struct ModelOperator {
    pub(crate) inner: Arc<ModelInner>,
}

impl std::fmt::Debug for ModelOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelOperator")
            .field("spec", &self.inner.spec)
            .field("numerics", &self.inner.numerics)
            .finish()
    }
}

impl ModelOperator {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        Self::with_numerics(spec, Numerics::default())
    }

    pub fn with_numerics(spec: ModelSpec, numerics: Numerics) -> Result<Self> {
        if numerics.panels == 0 || numerics.order < 2 || !(numerics.ode_rtol > 0.0) {
            return Err(Error::Config(format!("invalid numerics {numerics:?}")));
        }
        match &spec {
            ModelSpec::SchrodingerHalfLine { potential, truncation } => {
                if !(truncation.is_finite() && *truncation > 0.0) {
                    return Err(Error::Config(format!("truncation must be positive, got {truncation}")));
                }
                potential.validate(*truncation)?;
            }
            ModelSpec::PointInteraction3D { center } => {
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Config("3D center must be finite".into()));
                }
            }
            _ => {}
        }
        let grid = spec
            .domain()
            .map(|(a, b)| Arc::new(Grid1D::new(a, b, numerics.panels, numerics.order)));
        let model = ModelOperator {
            inner: Arc::new(ModelInner {
                spec,
                numerics,
                grid,
                frame: OnceLock::new(),
                solutions: RwLock::new(HashMap::new()),
            }),
        };
        let frame = crate::models::frame::build_frame(&model)?;
        if frame.k() != model.k() {
            return Err(Error::FrameConstruction { model: model.name().into(), residual: f64::NAN });
        }
        let _ = model.inner.frame.set(frame);
        Ok(model)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.inner.spec
    }

    pub fn numerics(&self) -> Numerics {
        self.inner.numerics
    }

    pub fn name(&self) -> &'static str {
        self.inner.spec.family()
    }

    pub fn k(&self) -> usize {
        self.inner.spec.deficiency_index()
    }

    pub fn grid(&self) -> Option<&Arc<Grid1D>> {
        self.inner.grid.as_ref()
    }

    pub fn frame(&self) -> &DeficiencyFrame {
        self.inner.frame.get().expect("frame is set at construction")
    }

    pub(crate) fn ode_options(&self) -> OdeOptions {
        OdeOptions { rtol: self.inner.numerics.ode_rtol, ..OdeOptions::default() }
    }

    pub fn potential(&self) -> Option<&PotentialSpec> {
        match &self.inner.spec {
            ModelSpec::SchrodingerHalfLine { potential, .. } => Some(potential),
            _ => None,
        }
    }

    pub fn center(&self) -> Option<[f64; 3]> {
        match &self.inner.spec {
            ModelSpec::PointInteraction3D { center } => Some(*center),
            _ => None,
        }
    }

    /// Same family and discretisation, so vectors of the two models can be
    /// combined.
    pub fn compatible_with(&self, other: &ModelOperator) -> bool {
        self.name() == other.name()
            && self.k() == other.k()
            && match (self.grid(), other.grid()) {
                (Some(a), Some(b)) => a == b,
                (None, None) => true,
                _ => false,
            }
    }

    /// Boundary condition of the reference extension used by
    /// [`ModelOperator::reference_resolvent`].
    pub fn reference_bc(&self) -> BoundaryCondition {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let rows = match &self.inner.spec {
            ModelSpec::MomentumInterval => vec![vec![one, -one]],
            ModelSpec::LaplaceInterval => vec![vec![one, zero, zero, zero], vec![zero, one, zero, zero]],
            ModelSpec::SchrodingerHalfLine { .. } | ModelSpec::PointInteraction3D { .. } => vec![vec![one, zero]],
        };
        BoundaryCondition::new(rows).expect("reference conditions are well formed")
    }

    fn grid_or_err(&self, operation: &'static str) -> Result<&Arc<Grid1D>> {
        self.grid().ok_or_else(|| Error::Unsupported { operation, reason: format!("{} has no 1D grid", self.name()) })
    }

    /// Checks that `φ` lies in the core: compact support strictly inside the
    /// interval, or for 3D the `H²` and vanishing conditions at the center.
    pub fn validate_core(&self, phi: &CoreVector) -> Result<()> {
        match (phi, &self.inner.spec) {
            (CoreVector::Profile(f), spec) if spec.domain().is_some() => {
                let (a, b) = spec.domain().unwrap();
                let (lo, hi) = f.support();
                if f.terms.is_empty() {
                    return Ok(());
                }
                if !(lo > a && hi < b) {
                    return Err(Error::Domain(format!(
                        "core function support [{lo}, {hi}] not strictly inside ({a}, {b})"
                    )));
                }
                Ok(())
            }
            (CoreVector::Atomic(v), ModelSpec::PointInteraction3D { center }) => {
                check_atomic_core(v, *center)
            }
            _ => Err(Error::Domain(format!("core vector of the wrong kind for {}", self.name()))),
        }
    }

    /// The canonical member of this model's core that approximates `φ`.
    ///
    /// 1D profiles are returned unchanged. A 3D atomic vector has its value at
    /// the center removed with a fixed `H²` atom of unit value there.
    pub fn core_approximant(&self, phi: &CoreVector) -> Result<CoreVector> {
        match (phi, &self.inner.spec) {
            (CoreVector::Atomic(v), ModelSpec::PointInteraction3D { center }) => {
                let value = v.value_at(*center);
                let mut out = v.clone();
                if value != C64::new(0.0, 0.0) {
                    let g = green_regular_at_center(Pole::PlusI, 2);
                    out.push(-value / g, Atom::Green { pole: Pole::PlusI, order: 2, center: *center });
                }
                let out = CoreVector::Atomic(out);
                self.validate_core(&out)?;
                Ok(out)
            }
            _ => {
                self.validate_core(phi)?;
                Ok(phi.clone())
            }
        }
    }

    /// `φ` as a vector of `H`.
    pub fn core_vector(&self, phi: &CoreVector) -> Result<HVec> {
        match phi {
            CoreVector::Profile(f) => {
                let grid = self.grid_or_err("core_vector")?;
                Ok(HVec::sample(grid, |x| f.value(x)))
            }
            CoreVector::Atomic(v) => Ok(HVec::Atoms(v.clone())),
        }
    }

    /// `Aφ` for `φ` in the core.
    pub fn apply_on_core(&self, phi: &CoreVector) -> Result<HVec> {
        self.validate_core(phi)?;
        match (phi, &self.inner.spec) {
            (CoreVector::Profile(f), spec) => {
                let grid = self.grid_or_err("apply_on_core")?;
                let minus_i = C64::new(0.0, -1.0);
                Ok(match spec {
                    ModelSpec::MomentumInterval => HVec::sample(grid, |x| minus_i * f.jet(x)[1]),
                    ModelSpec::LaplaceInterval => HVec::sample(grid, |x| -f.jet(x)[2]),
                    ModelSpec::SchrodingerHalfLine { potential, .. } => HVec::sample(grid, |x| {
                        let j = f.jet(x);
                        -j[2] + j[0] * potential.eval(x)
                    }),
                    ModelSpec::PointInteraction3D { .. } => unreachable!(),
                })
            }
            (CoreVector::Atomic(v), _) => Ok(HVec::Atoms(laplacian_of_atoms(v)?)),
        }
    }

    /// Boundary data: `[ψ(0), ψ(1)]` (momentum), `[ψ(0), ψ(1), ψ'(0), ψ'(1)]`
    /// (interval Laplacian), `[ψ(0), ψ'(0)]` (half-line) and `[σ, ρ]` with
    /// `ψ ≈ σ/(4π|x-y|) + ρ` near the center (3D). Vanishes exactly on `D(A)`.
    pub fn boundary_data(&self, v: &HVec) -> Result<Vec<C64>> {
        match (&self.inner.spec, v) {
            (ModelSpec::PointInteraction3D { center }, HVec::Atoms(a)) => Ok(atomic_boundary_data(a, *center).to_vec()),
            (spec, HVec::Grid(g)) if spec.domain().is_some() => {
                let grid = self.grid_or_err("boundary_data")?;
                if *g.grid != **grid {
                    return Err(Error::RepresentationMismatch("vector grid differs from model grid".into()));
                }
                let (l, dl) = g.grid.left_boundary(&g.values);
                let (r, dr) = g.grid.right_boundary(&g.values);
                Ok(match spec {
                    ModelSpec::MomentumInterval => vec![l, r],
                    ModelSpec::LaplaceInterval => vec![l, r, dl, dr],
                    _ => vec![l, dl],
                })
            }
            (_, v) => Err(Error::RepresentationMismatch(format!("{} vector for {}", v.tag(), self.name()))),
        }
    }

    /// Residual-policy test for membership of an arbitrary vector in `D(A)`:
    /// the boundary data must vanish to `tol`.
    pub fn domain_residual(&self, v: &HVec) -> Result<f64> {
        Ok(self.boundary_data(v)?.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
    }

    /// `A*v` by differentiation of the representation: `-iv'`, `-v''` or
    /// `-v'' + Φv` on the grid, termwise `-Δ` for atoms (singular weight only
    /// at the interaction center).
    pub fn adjoint_action(&self, v: &HVec) -> Result<HVec> {
        match (&self.inner.spec, v) {
            (ModelSpec::PointInteraction3D { center }, HVec::Atoms(a)) => {
                let mut net: Vec<([f64; 3], C64)> = Vec::new();
                let mut scale: f64 = 0.0;
                for (w, atom) in a.terms() {
                    scale = scale.max(w.norm());
                    if let Atom::Green { order: 1, center: c, .. } = *atom {
                        if distance(c, *center) < 1e-12 {
                            continue;
                        }
                        match net.iter_mut().find(|(x, _)| *x == c) {
                            Some(e) => e.1 += w,
                            None => net.push((c, *w)),
                        }
                    }
                }
                if let Some((c, w)) = net.iter().find(|(_, w)| w.norm() > CORE_RESIDUAL_TOL * scale.max(1.0)) {
                    return Err(Error::Domain(format!("net singular weight {:.3e} at {c:?}", w.norm())));
                }
                Ok(HVec::Atoms(laplacian_of_atoms(a)?))
            }
            (spec, HVec::Grid(g)) if spec.domain().is_some() => {
                let grid = self.grid_or_err("adjoint_action")?;
                if *g.grid != **grid {
                    return Err(Error::RepresentationMismatch("vector grid differs from model grid".into()));
                }
                let d = grid.differentiate(&g.values);
                let values: Vec<C64> = match spec {
                    ModelSpec::MomentumInterval => d.iter().map(|c| C64::new(0.0, -1.0) * c).collect(),
                    ModelSpec::LaplaceInterval => grid.differentiate(&d).iter().map(|c| -c).collect(),
                    ModelSpec::SchrodingerHalfLine { potential, .. } => grid
                        .differentiate(&d)
                        .iter()
                        .zip(&g.values)
                        .zip(grid.nodes())
                        .map(|((dd, v), &x)| -dd + v * potential.eval(x))
                        .collect(),
                    ModelSpec::PointInteraction3D { .. } => unreachable!(),
                };
                Ok(HVec::on_grid(grid.clone(), values))
            }
            (_, v) => Err(Error::RepresentationMismatch(format!("{} vector for {}", v.tag(), self.name()))),
        }
    }
}

fn check_atomic_core(v: &AtomVec, y: [f64; 3]) -> Result<()> {
    let mut net: Vec<([f64; 3], C64)> = Vec::new();
    let mut scale: f64 = 0.0;
    for (w, a) in v.terms() {
        scale = scale.max(w.norm());
        match *a {
            Atom::Green { order: 1, center, .. } => match net.iter_mut().find(|(c, _)| *c == center) {
                Some(e) => e.1 += w,
                None => net.push((center, *w)),
            },
            Atom::Green { .. } => {}
            Atom::Gauss { .. } => {
                return Err(Error::Domain("Gaussian atoms are not admitted in the 3D core".into()));
            }
        }
    }
    let tol = CORE_RESIDUAL_TOL * scale.max(1.0);
    if let Some((c, w)) = net.iter().find(|(_, w)| w.norm() > tol) {
        return Err(Error::Domain(format!("net singular weight {:.3e} at {c:?}", w.norm())));
    }
    let rho = atomic_boundary_data(v, y)[1];
    if rho.norm() > tol {
        return Err(Error::Domain(format!("value {:.3e} at the interaction center", rho.norm())));
    }
    Ok(())
}

/// `(σ, ρ)` of an atom combination at `y`.
pub(crate) fn atomic_boundary_data(v: &AtomVec, y: [f64; 3]) -> [C64; 2] {
    let mut sigma = C64::new(0.0, 0.0);
    let mut rho = C64::new(0.0, 0.0);
    for (w, a) in v.terms() {
        let at_center = distance(a.center(), y) < 1e-12;
        match *a {
            Atom::Green { pole, order, .. } if at_center => {
                if order == 1 {
                    sigma += w;
                }
                rho += w * green_regular_at_center(pole, order);
            }
            _ => rho += w * a.value_at(y),
        }
    }
    [sigma, rho]
}

/// `-Δ` applied termwise to Green atoms, away from their centers:
/// `-ΔG^{(m)} = G^{(m-1)} + zG^{(m)}` for `m ≥ 2` and `zG^{(1)}` for `m = 1`.
/// Delta terms are dropped; callers certify that they cancel.
pub(crate) fn laplacian_of_atoms(v: &AtomVec) -> Result<AtomVec> {
    let mut out = AtomVec::default();
    for (w, a) in v.terms() {
        match *a {
            Atom::Green { pole, order, center } => {
                out.push(w * pole.z(), *a);
                if order >= 2 {
                    out.push(*w, Atom::Green { pole, order: order - 1, center });
                }
            }
            Atom::Gauss { .. } => {
                return Err(Error::Unsupported {
                    operation: "laplacian_of_atoms",
                    reason: "Gaussian atoms have no closed-form Laplacian in this algebra".into(),
                })
            }
        }
    }
    Ok(out)
}

impl CoreVector {
    pub fn norm_sup(&self) -> Option<f64> {
        match self {
            CoreVector::Profile(f) => Some(f.sup_norm()),
            CoreVector::Atomic(_) => None,
        }
    }

    pub fn scaled(&self, c: C64) -> CoreVector {
        match self {
            CoreVector::Profile(f) => CoreVector::Profile(f.scaled(c)),
            CoreVector::Atomic(v) => CoreVector::Atomic(AtomVec::new(v.terms().iter().map(|(w, a)| (w * c, *a)))),
        }
    }
}
