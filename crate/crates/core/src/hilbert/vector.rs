use std::sync::Arc;

use crate::hilbert::atoms::{self, Atom};
use crate::hilbert::grid::Grid1D;
use crate::{Error, Result, C64};

/// Operations shared by `H` and `H ⊕ H` vectors.
pub trait HilbertVector: Clone + Send + Sync {
    /// Inner product, conjugate-linear in `self`, linear in `other`.
    fn inner(&self, other: &Self) -> Result<C64>;

    fn lin_comb(terms: &[(C64, &Self)]) -> Result<Self>;

    fn scale(&self, c: C64) -> Self;

    /// First coefficient (in storage order) whose modulus exceeds `tol`.
    fn first_significant(&self, tol: f64) -> Option<C64>;

    fn norm(&self) -> Result<f64> {
        Ok(self.inner(self)?.re.max(0.0).sqrt())
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        Self::lin_comb(&[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)])
    }

    fn add(&self, other: &Self) -> Result<Self> {
        Self::lin_comb(&[(C64::new(1.0, 0.0), self), (C64::new(1.0, 0.0), other)])
    }

    fn distance(&self, other: &Self) -> Result<f64> {
        self.sub(other)?.norm()
    }
}

/// Samples on a composite Gauss–Legendre grid.
#[derive(Debug, Clone)]
pub struct GridVec {
    pub grid: Arc<Grid1D>,
    pub values: Vec<C64>,
}

/// Coefficients against a declared orthonormal family indexed by `-M..=M`.
#[derive(Debug, Clone)]
pub struct SpectralVec {
    pub family: String,
    pub max_mode: usize,
    pub coeffs: Vec<C64>,
}

/// Finite combination of radial atoms in `L²(ℝ³)`, deduplicated by descriptor.
#[derive(Debug, Clone, Default)]
pub struct AtomVec {
    terms: Vec<(C64, Atom)>,
}

impl AtomVec {
    pub fn new(terms: impl IntoIterator<Item = (C64, Atom)>) -> Self {
        let mut v = AtomVec::default();
        for (w, a) in terms {
            v.push(w, a);
        }
        v
    }

    pub fn push(&mut self, w: C64, atom: Atom) {
        assert!(w.re.is_finite() && w.im.is_finite(), "atom weight must be finite");
        if let Some(t) = self.terms.iter_mut().find(|t| t.1.same_descriptor(&atom)) {
            t.0 += w;
        } else if w != C64::new(0.0, 0.0) {
            self.terms.push((w, atom));
        }
    }

    pub fn terms(&self) -> &[(C64, Atom)] {
        &self.terms
    }

    pub fn value_at(&self, x: [f64; 3]) -> C64 {
        self.terms.iter().map(|(w, a)| w * a.value_at(x)).sum()
    }
}

#[derive(Debug, Clone)]
pub enum HVec {
    Grid(GridVec),
    Spectral(SpectralVec),
    Atoms(AtomVec),
}

impl HVec {
    pub fn on_grid(grid: Arc<Grid1D>, values: Vec<C64>) -> Self {
        assert_eq!(grid.len(), values.len(), "grid and sample lengths differ");
        HVec::Grid(GridVec { grid, values })
    }

    pub fn sample(grid: &Arc<Grid1D>, f: impl Fn(f64) -> C64) -> Self {
        HVec::on_grid(grid.clone(), grid.sample(f))
    }

    pub fn spectral(family: impl Into<String>, max_mode: usize, coeffs: Vec<C64>) -> Self {
        assert_eq!(coeffs.len(), 2 * max_mode + 1);
        HVec::Spectral(SpectralVec { family: family.into(), max_mode, coeffs })
    }

    pub fn atoms(terms: impl IntoIterator<Item = (C64, Atom)>) -> Self {
        HVec::Atoms(AtomVec::new(terms))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            HVec::Grid(_) => "Grid1D",
            HVec::Spectral(_) => "Spectral",
            HVec::Atoms(_) => "Atoms3D",
        }
    }

    pub fn zero_like(&self) -> HVec {
        match self {
            HVec::Grid(g) => HVec::on_grid(g.grid.clone(), vec![C64::new(0.0, 0.0); g.values.len()]),
            HVec::Spectral(s) => HVec::spectral(s.family.clone(), s.max_mode, vec![C64::new(0.0, 0.0); s.coeffs.len()]),
            HVec::Atoms(_) => HVec::Atoms(AtomVec::default()),
        }
    }

    pub fn as_grid(&self) -> Option<&GridVec> {
        match self {
            HVec::Grid(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_atoms(&self) -> Option<&AtomVec> {
        match self {
            HVec::Atoms(a) => Some(a),
            _ => None,
        }
    }

    fn check_compatible(&self, other: &HVec) -> Result<()> {
        match (self, other) {
            (HVec::Grid(a), HVec::Grid(b)) => {
                if Arc::ptr_eq(&a.grid, &b.grid) || *a.grid == *b.grid {
                    Ok(())
                } else {
                    Err(Error::RepresentationMismatch("Grid1D vectors on different grids".into()))
                }
            }
            (HVec::Spectral(a), HVec::Spectral(b)) => {
                if a.family == b.family && a.max_mode == b.max_mode {
                    Ok(())
                } else {
                    Err(Error::RepresentationMismatch(format!(
                        "spectral families {}[{}] and {}[{}]",
                        a.family, a.max_mode, b.family, b.max_mode
                    )))
                }
            }
            (HVec::Atoms(_), HVec::Atoms(_)) => Ok(()),
            (a, b) => Err(Error::RepresentationMismatch(format!("{} vs {}", a.tag(), b.tag()))),
        }
    }
}

impl HilbertVector for HVec {
    fn inner(&self, other: &Self) -> Result<C64> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (HVec::Grid(a), HVec::Grid(b)) => a
                .values
                .iter()
                .zip(&b.values)
                .zip(a.grid.weights())
                .map(|((x, y), w)| x.conj() * y * w)
                .sum(),
            (HVec::Spectral(a), HVec::Spectral(b)) => a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.conj() * y).sum(),
            (HVec::Atoms(a), HVec::Atoms(b)) => {
                let mut s = C64::new(0.0, 0.0);
                for (w1, a1) in &a.terms {
                    for (w2, a2) in &b.terms {
                        s += w1.conj() * w2 * atoms::kernel(a1, a2)?;
                    }
                }
                s
            }
            _ => unreachable!(),
        })
    }

    fn lin_comb(terms: &[(C64, &Self)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::RepresentationMismatch("empty linear combination".into()))?
            .1;
        for (_, v) in terms {
            first.check_compatible(v)?;
        }
        Ok(match first {
            HVec::Grid(g) => {
                let mut out = vec![C64::new(0.0, 0.0); g.values.len()];
                for (c, v) in terms {
                    if let HVec::Grid(v) = v {
                        for (o, x) in out.iter_mut().zip(&v.values) {
                            *o += c * x;
                        }
                    }
                }
                HVec::on_grid(g.grid.clone(), out)
            }
            HVec::Spectral(s) => {
                let mut out = vec![C64::new(0.0, 0.0); s.coeffs.len()];
                for (c, v) in terms {
                    if let HVec::Spectral(v) = v {
                        for (o, x) in out.iter_mut().zip(&v.coeffs) {
                            *o += c * x;
                        }
                    }
                }
                HVec::spectral(s.family.clone(), s.max_mode, out)
            }
            HVec::Atoms(_) => {
                let mut out = AtomVec::default();
                for (c, v) in terms {
                    if let HVec::Atoms(v) = v {
                        for (w, a) in &v.terms {
                            out.push(c * w, *a);
                        }
                    }
                }
                HVec::Atoms(out)
            }
        })
    }

    fn scale(&self, c: C64) -> Self {
        match self {
            HVec::Grid(g) => HVec::on_grid(g.grid.clone(), g.values.iter().map(|v| v * c).collect()),
            HVec::Spectral(s) => HVec::spectral(s.family.clone(), s.max_mode, s.coeffs.iter().map(|v| v * c).collect()),
            HVec::Atoms(a) => HVec::atoms(a.terms.iter().map(|(w, at)| (w * c, *at))),
        }
    }

    fn first_significant(&self, tol: f64) -> Option<C64> {
        match self {
            HVec::Grid(g) => g.values.iter().copied().find(|v| v.norm() > tol),
            HVec::Spectral(s) => s.coeffs.iter().copied().find(|v| v.norm() > tol),
            HVec::Atoms(a) => a.terms.iter().map(|t| t.0).find(|v| v.norm() > tol),
        }
    }
}

/// Element of `H ⊕ H`.
#[derive(Debug, Clone)]
pub struct GraphVec {
    pub first: HVec,
    pub second: HVec,
}

impl GraphVec {
    pub fn new(first: HVec, second: HVec) -> Result<Self> {
        first.check_compatible(&second)?;
        Ok(Self { first, second })
    }

    /// `W(φ, ψ) = (-ψ, φ)`.
    pub fn w_map(&self) -> GraphVec {
        GraphVec { first: self.second.scale(C64::new(-1.0, 0.0)), second: self.first.clone() }
    }

    /// `W^{-1} = -W`.
    pub fn w_inverse(&self) -> GraphVec {
        GraphVec { first: self.second.clone(), second: self.first.scale(C64::new(-1.0, 0.0)) }
    }

    pub fn zero_like(&self) -> GraphVec {
        GraphVec { first: self.first.zero_like(), second: self.second.zero_like() }
    }
}

/// `⟨x1, y1⟩ + ⟨x2, y2⟩`.
pub fn graph_inner(x: &GraphVec, y: &GraphVec) -> Result<C64> {
    Ok(x.first.inner(&y.first)? + x.second.inner(&y.second)?)
}

impl HilbertVector for GraphVec {
    fn inner(&self, other: &Self) -> Result<C64> {
        graph_inner(self, other)
    }

    fn lin_comb(terms: &[(C64, &Self)]) -> Result<Self> {
        let firsts: Vec<(C64, &HVec)> = terms.iter().map(|(c, v)| (*c, &v.first)).collect();
        let seconds: Vec<(C64, &HVec)> = terms.iter().map(|(c, v)| (*c, &v.second)).collect();
        Ok(GraphVec { first: HVec::lin_comb(&firsts)?, second: HVec::lin_comb(&seconds)? })
    }

    fn scale(&self, c: C64) -> Self {
        GraphVec { first: self.first.scale(c), second: self.second.scale(c) }
    }

    fn first_significant(&self, tol: f64) -> Option<C64> {
        self.first.first_significant(tol).or_else(|| self.second.first_significant(tol))
    }
}
