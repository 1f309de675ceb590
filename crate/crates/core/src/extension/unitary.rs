use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Unitarity tolerance for [`UnitaryParam::new`].
pub const UNITARY_TOL: f64 = 1e-12;

/// `k × k` unitary matrix `u` with `Uφ̂₊ℓ = Σ_m u_{mℓ} φ̂₋m`, extended by zero on
/// the orthogonal complement of `H₊`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<C64>>", into = "Vec<Vec<C64>>")]
pub struct UnitaryParam {
    u: DMatrix<C64>,
}

impl TryFrom<Vec<Vec<C64>>> for UnitaryParam {
    type Error = Error;

    fn try_from(rows: Vec<Vec<C64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(Error::Config(format!("unitary must be a square nonempty matrix, got {k} rows")));
        }
        UnitaryParam::new(DMatrix::from_fn(k, k, |i, j| rows[i][j]))
    }
}

impl From<UnitaryParam> for Vec<Vec<C64>> {
    fn from(u: UnitaryParam) -> Self {
        (0..u.k()).map(|i| (0..u.k()).map(|j| u.u[(i, j)]).collect()).collect()
    }
}

/// `max |(u*u - 1)_{ij}|, |(uu* - 1)_{ij}|`.
pub fn unitarity_deviation(u: &DMatrix<C64>) -> f64 {
    let id = DMatrix::<C64>::identity(u.nrows(), u.ncols());
    let a = u.adjoint() * u - &id;
    let b = u * u.adjoint() - id;
    a.iter().chain(b.iter()).fold(0.0, |m, c| m.max(c.norm()))
}

impl UnitaryParam {
    pub fn new(u: DMatrix<C64>) -> Result<Self> {
        if !u.is_square() || u.nrows() == 0 {
            return Err(Error::Config("unitary must be a square nonempty matrix".into()));
        }
        let deviation = unitarity_deviation(&u);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { u })
    }

    /// `e^{iθ}` for `k = 1`.
    pub fn phase(theta: f64) -> Self {
        Self { u: DMatrix::from_element(1, 1, C64::from_polar(1.0, theta)) }
    }

    pub fn scalar(c: C64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, c))
    }

    pub fn identity(k: usize) -> Self {
        Self { u: DMatrix::identity(k, k) }
    }

    /// Haar-distributed unitary from the QR factorisation of a complex
    /// Gaussian matrix with the phases of `R` moved into `Q`.
    pub fn random(k: usize, rng: &mut impl Rng) -> Self {
        let g = DMatrix::from_fn(k, k, |_, _| {
            C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        let phases = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                let d = r[(i, i)];
                if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) }
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self::project(q * phases)
    }

    /// Polar projection of a nearly unitary matrix back onto the unitary group,
    /// `m (m*m)^{-1/2}`, computed through the SVD.
    pub fn project(m: DMatrix<C64>) -> Self {
        let svd = m.svd(true, true);
        let u = svd.u.unwrap() * svd.v_t.unwrap();
        Self { u }
    }

    pub fn k(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.u
    }

    pub fn deviation(&self) -> f64 {
        unitarity_deviation(&self.u)
    }

    /// `u · a`: minus-basis coordinates of `U` applied to plus-basis
    /// coordinates `a`.
    pub fn apply(&self, a: &[C64]) -> Vec<C64> {
        (0..self.k()).map(|m| (0..self.k()).map(|l| self.u[(m, l)] * a[l]).sum()).collect()
    }

    /// `u* · b`.
    pub fn apply_adjoint(&self, b: &[C64]) -> Vec<C64> {
        (0..self.k()).map(|l| (0..self.k()).map(|m| self.u[(m, l)].conj() * b[m]).sum()).collect()
    }

    /// Largest entry of `u - v`.
    pub fn distance(&self, other: &UnitaryParam) -> f64 {
        (&self.u - &other.u).iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// `u · exp(iH)` for Hermitian `H` (used to perturb unitaries along
    /// sequences).
    pub fn times_exp_i(&self, h: &DMatrix<C64>) -> Result<Self> {
        let herm_dev = (h - h.adjoint()).iter().fold(0.0, |m: f64, c| m.max(c.norm()));
        if herm_dev > 1e-12 {
            return Err(Error::Config(format!("generator is not Hermitian (deviation {herm_dev:.3e})")));
        }
        let eig = nalgebra::linalg::SymmetricEigen::new(h.clone());
        let k = h.nrows();
        let d = DMatrix::from_fn(k, k, |i, j| {
            if i == j { C64::from_polar(1.0, eig.eigenvalues[i]) } else { C64::new(0.0, 0.0) }
        });
        let e = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        Ok(Self::project(&self.u * e))
    }
}

/// Random Hermitian matrix with standard Gaussian entries.
pub fn random_hermitian(k: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(k, k, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}
