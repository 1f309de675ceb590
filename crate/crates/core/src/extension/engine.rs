use crate::extension::boundary::{bc_from_unitary, unitary_from_bc};
use crate::extension::unitary::UnitaryParam;
use crate::hilbert::{project_onto_span, HVec, HilbertVector};
use crate::models::model::CORE_RESIDUAL_TOL;
use crate::models::resolvent::green_resolvent;
use crate::models::{BoundaryCondition, CoreVector, DeficiencyFrame, ModelOperator};
use crate::{Error, Result, Sign, C64, I};

/// Self-adjoint extension `B` of a model operator, fixed by `U`.
#[derive(Debug, Clone)]
pub struct Extension {
    model: ModelOperator,
    u: UnitaryParam,
    bc: BoundaryCondition,
}

/// Validates `u` against the model's deficiency index and caches the
/// equivalent boundary condition.
pub fn build_extension(model: &ModelOperator, u: UnitaryParam) -> Result<Extension> {
    if u.k() != model.k() {
        return Err(Error::Config(format!("unitary is {0}×{0}, {1} has k = {2}", u.k(), model.name(), model.k())));
    }
    let deviation = u.deviation();
    if deviation > crate::extension::UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let bc = bc_from_unitary(model.frame(), &u)?;
    Ok(Extension { model: model.clone(), u, bc })
}

impl Extension {
    /// Extension singled out by a boundary condition.
    pub fn from_boundary_condition(model: &ModelOperator, bc: &BoundaryCondition) -> Result<Extension> {
        let u = unitary_from_bc(model.frame(), bc)?;
        build_extension(model, u)
    }

    pub fn model(&self) -> &ModelOperator {
        &self.model
    }

    pub fn frame(&self) -> &DeficiencyFrame {
        self.model.frame()
    }

    pub fn unitary(&self) -> &UnitaryParam {
        &self.u
    }

    pub fn boundary_condition(&self) -> &BoundaryCondition {
        &self.bc
    }

    pub fn k(&self) -> usize {
        self.u.k()
    }

    /// `Uψ` with `U` acting as a partial isometry: `U π₊ ψ`.
    pub fn apply_u(&self, psi: &HVec) -> Result<HVec> {
        let a = self.frame().plus().coordinates(psi)?;
        self.frame().minus().combine(&self.u.apply(&a))
    }

    /// `U*ψ = U* π₋ ψ`.
    pub fn apply_u_adjoint(&self, psi: &HVec) -> Result<HVec> {
        let b = self.frame().minus().coordinates(psi)?;
        self.frame().plus().combine(&self.u.apply_adjoint(&b))
    }

    /// `Uφ̂₊ℓ`.
    pub fn u_plus(&self, l: usize) -> Result<HVec> {
        let col: Vec<C64> = (0..self.k()).map(|m| self.u.matrix()[(m, l)]).collect();
        self.frame().minus().combine(&col)
    }
}

/// The `D(A)` part of a domain element.
#[derive(Debug, Clone)]
pub enum Phi0 {
    Core(CoreVector),
    /// A vector certified in `D(A)` by residual policy, stored with `Aφ₀`.
    Certified { vector: HVec, image: HVec },
}

/// `φ₀ + Σ aℓ(φ̂₊ℓ + Uφ̂₊ℓ)` with the components kept apart.
#[derive(Debug, Clone)]
pub struct DomainElement {
    pub phi0: Option<Phi0>,
    pub coeffs: Vec<C64>,
}

impl DomainElement {
    pub fn new(phi0: Option<CoreVector>, coeffs: Vec<C64>) -> Self {
        Self { phi0: phi0.map(Phi0::Core), coeffs }
    }

    /// Admits an arbitrary vector as `φ₀` when its boundary data vanishes to
    /// the core residual tolerance.
    pub fn certified(model: &ModelOperator, vector: HVec, coeffs: Vec<C64>) -> Result<Self> {
        let r = model.domain_residual(&vector)?;
        let scale = vector.norm()?.max(1.0);
        if r > CORE_RESIDUAL_TOL * scale {
            return Err(Error::Domain(format!("boundary data {r:.3e} exceeds the residual policy")));
        }
        let image = model.adjoint_action(&vector)?;
        Ok(Self { phi0: Some(Phi0::Certified { vector, image }), coeffs })
    }
}

/// `(v, Bv)` assembled from `B(φ₀ + φ₊ + Uφ₊) = Aφ₀ + iφ₊ - iUφ₊`.
pub fn apply_extension(ext: &Extension, elt: &DomainElement) -> Result<(HVec, HVec)> {
    if elt.coeffs.len() != ext.k() {
        return Err(Error::Config(format!("domain element has {} coefficients, k = {}", elt.coeffs.len(), ext.k())));
    }
    let model = ext.model();
    let (mut v, mut bv) = match &elt.phi0 {
        Some(Phi0::Core(phi)) => (model.core_vector(phi)?, model.apply_on_core(phi)?),
        Some(Phi0::Certified { vector, image }) => (vector.clone(), image.clone()),
        None => {
            let z = ext.frame().plus().vectors()[0].zero_like();
            (z.clone(), z)
        }
    };
    let plus = ext.frame().plus().combine(&elt.coeffs)?;
    let uplus = ext.frame().minus().combine(&ext.u.apply(&elt.coeffs))?;
    let one = C64::new(1.0, 0.0);
    v = HVec::lin_comb(&[(one, &v), (one, &plus), (one, &uplus)])?;
    bv = HVec::lin_comb(&[(one, &bv), (I, &plus), (-I, &uplus)])?;
    Ok((v, bv))
}

/// Resolvent from the von Neumann decomposition:
/// `(B+i)^{-1}ψ = R_ref(ψ - ψ₊) + (ψ₊ + Uψ₊)/(2i)` and
/// `(B-i)^{-1}ψ = R_ref(ψ - ψ₋) + φ₊ + Uφ₊` with `φ₊ = (i/2)U*ψ₋`.
pub fn vn_resolvent(ext: &Extension, sign: Sign, psi: &HVec) -> Result<HVec> {
    let model = ext.model();
    let one = C64::new(1.0, 0.0);
    match sign {
        Sign::Plus => {
            let psi_plus = project_onto_span(ext.frame().plus(), psi)?;
            let rest = psi.sub(&psi_plus)?;
            let r = model.reference_resolvent(sign, &rest)?;
            let u = ext.apply_u(&psi_plus)?;
            let c = one / (2.0 * I);
            HVec::lin_comb(&[(one, &r), (c, &psi_plus), (c, &u)])
        }
        Sign::Minus => {
            let psi_minus = project_onto_span(ext.frame().minus(), psi)?;
            let rest = psi.sub(&psi_minus)?;
            let r = model.reference_resolvent(sign, &rest)?;
            let phi_plus = ext.apply_u_adjoint(&psi_minus)?.scale(0.5 * I);
            let u = ext.apply_u(&phi_plus)?;
            HVec::lin_comb(&[(one, &r), (one, &phi_plus), (one, &u)])
        }
    }
}

/// `(B ± i)^{-1}ψ` through the model's Green's function for the boundary
/// condition equivalent to `U`.
pub fn resolvent(ext: &Extension, sign: Sign, psi: &HVec) -> Result<HVec> {
    green_resolvent(ext.model(), &ext.bc, sign, psi)
}
