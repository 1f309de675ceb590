use crate::hilbert::vector::HilbertVector;
use crate::{Error, Result, C64};

/// Default linear-dependence threshold for [`gram_schmidt`].
pub const DEFAULT_GS_TOL: f64 = 1e-10;

/// Orthonormal list together with the triangular map from the inputs it was
/// built from: `vectors[j] = Σ_i transform[j][i] · inputs[i]`.
#[derive(Debug, Clone)]
pub struct Onb<V> {
    vectors: Vec<V>,
    transform: Vec<Vec<C64>>,
    tol: f64,
}

impl<V: HilbertVector> Onb<V> {
    pub fn vectors(&self) -> &[V] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn transform(&self) -> &[Vec<C64>] {
        &self.transform
    }

    /// Wraps vectors that are already orthonormal (checked against `tol`).
    pub fn from_orthonormal(vectors: Vec<V>, tol: f64) -> Result<Self> {
        let n = vectors.len();
        let transform = (0..n)
            .map(|j| (0..n).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        let onb = Self { vectors, transform, tol };
        let dev = onb.gram_deviation()?;
        if dev > tol {
            return Err(Error::Degenerate { index: 0, residual: dev, tol });
        }
        Ok(onb)
    }

    pub fn gram_matrix(&self) -> Result<Vec<Vec<C64>>> {
        self.vectors
            .iter()
            .map(|a| self.vectors.iter().map(|b| a.inner(b)).collect())
            .collect()
    }

    /// `max |⟨b_l, b_m⟩ - δ_lm|`.
    pub fn gram_deviation(&self) -> Result<f64> {
        let g = self.gram_matrix()?;
        let mut dev: f64 = 0.0;
        for (l, row) in g.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                let target = if l == m { 1.0 } else { 0.0 };
                dev = dev.max((v - target).norm());
            }
        }
        Ok(dev)
    }

    /// Coordinates `⟨b_l, x⟩`.
    pub fn coordinates(&self, x: &V) -> Result<Vec<C64>> {
        self.vectors.iter().map(|b| b.inner(x)).collect()
    }

    pub fn combine(&self, coords: &[C64]) -> Result<V> {
        let terms: Vec<(C64, &V)> = coords.iter().copied().zip(self.vectors.iter()).collect();
        V::lin_comb(&terms)
    }
}

/// Modified Gram–Schmidt with one reorthogonalisation pass and phase fixing:
/// each output is rotated so that its first coefficient of modulus above
/// `tol` is positive real.
pub fn gram_schmidt<V: HilbertVector>(inputs: &[V], tol: f64) -> Result<Onb<V>> {
    let n = inputs.len();
    let mut vectors: Vec<V> = Vec::with_capacity(n);
    let mut transform: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (j, input) in inputs.iter().enumerate() {
        let input_norm = input.norm()?;
        let mut v = input.clone();
        let mut coeff = vec![C64::new(0.0, 0.0); n];
        coeff[j] = C64::new(1.0, 0.0);
        for _pass in 0..2 {
            for (q, qc) in vectors.iter().zip(&transform) {
                let h = q.inner(&v)?;
                v = V::lin_comb(&[(C64::new(1.0, 0.0), &v), (-h, q)])?;
                for (c, d) in coeff.iter_mut().zip(qc) {
                    *c -= h * d;
                }
            }
        }
        let norm = v.norm()?;
        if !(norm > tol * input_norm.max(f64::MIN_POSITIVE)) {
            return Err(Error::Degenerate { index: j, residual: norm, tol });
        }
        let unit = v.scale(C64::new(1.0 / norm, 0.0));
        let phase = unit
            .first_significant(tol)
            .map(|c| c.conj() / c.norm())
            .unwrap_or(C64::new(1.0, 0.0));
        let factor = phase / norm;
        vectors.push(v.scale(factor));
        transform.push(coeff.into_iter().map(|c| c * factor).collect());
    }
    Ok(Onb { vectors, transform, tol })
}

/// `Σ_l ⟨b_l, x⟩ b_l`.
pub fn project_onto_span<V: HilbertVector>(basis: &Onb<V>, x: &V) -> Result<V> {
    if basis.is_empty() {
        return Err(Error::Unsupported { operation: "project_onto_span", reason: "empty basis".into() });
    }
    let coords = basis.coordinates(x)?;
    basis.combine(&coords)
}

/// `‖x - Px‖`.
pub fn dist_to_span<V: HilbertVector>(basis: &Onb<V>, x: &V) -> Result<f64> {
    x.distance(&project_onto_span(basis, x)?)
}
