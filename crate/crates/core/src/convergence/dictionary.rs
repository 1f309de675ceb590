use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::extension::{apply_extension, DomainElement, Extension};
use crate::graph::complement_frame;
use crate::hilbert::atoms::{Atom, Pole};
use crate::hilbert::{AtomVec, GraphVec, HVec, HilbertVector};
use crate::models::{CoreFunc, CoreVector, ModelOperator, ModelSpec};
use crate::{Error, Result, C64, I};

/// Which dictionary list a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Core functions, for the core certificate.
    Core,
    /// Vectors of `H`, for resolvents and `U`.
    H,
    /// Vectors of the target's `H₊`.
    Plus,
    /// Vectors of `H ⊕ H`, for graph projections.
    Graph,
    /// Elements `(v, Bv)` of the target's graph.
    Domain,
}

/// Explicit dictionary vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VectorSpec {
    /// Constant function on a 1D grid.
    Constant,
    Gaussian { center: f64, width: f64, #[serde(default)] frequency: f64 },
    Bump { center: f64, radius: f64, #[serde(default)] frequency: f64 },
    GreenAtom { pole: Pole, #[serde(default = "one_u32")] order: u32, center: [f64; 3] },
    /// `φ̂₊ℓ` of the target.
    PlusFrame { index: usize },
    /// `φ̂₋ℓ` of the target.
    MinusFrame { index: usize },
    /// `ŵℓ`, the `ℓ`-th vector of `Gr(B) ⊖ Gr(A)` for the target.
    ComplementFrame { index: usize },
    /// `(v, Bv)` for `v = φ̂₊ℓ + Uφ̂₊ℓ` of the target.
    DeficiencyPair { index: usize },
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitVector {
    pub id: String,
    pub role: Role,
    #[serde(flatten)]
    pub spec: VectorSpec,
}

/// Seeded generator counts plus explicit vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionarySpec {
    pub seed: u64,
    #[serde(default)]
    pub core: usize,
    #[serde(default)]
    pub h: usize,
    #[serde(default)]
    pub plus: usize,
    #[serde(default)]
    pub graph: usize,
    #[serde(default)]
    pub domain: usize,
    #[serde(default)]
    pub explicit: Vec<ExplicitVector>,
}

#[derive(Debug, Clone)]
pub struct Named<T> {
    pub id: String,
    pub vector: T,
}

/// Normalised test vectors, grouped by role.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    pub core: Vec<Named<CoreVector>>,
    pub h: Vec<Named<HVec>>,
    pub plus: Vec<Named<HVec>>,
    pub graph: Vec<Named<GraphVec>>,
    pub domain: Vec<Named<GraphVec>>,
    pub provenance: String,
}

fn unit<V: HilbertVector>(v: V) -> Result<V> {
    let n = v.norm()?;
    if !(n > 1e-300) {
        return Err(Error::Config("dictionary vector has zero norm".into()));
    }
    Ok(v.scale(C64::new(1.0 / n, 0.0)))
}

fn cplx(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn gaussian(model: &ModelOperator, center: f64, width: f64, frequency: f64) -> Result<HVec> {
    let grid = model.grid().ok_or_else(|| Error::Config(format!("gaussian vector for {}", model.name())))?;
    Ok(HVec::sample(grid, |x| {
        let t = (x - center) / width;
        C64::from_polar((-0.5 * t * t).exp(), frequency * x)
    }))
}

fn random_h(model: &ModelOperator, rng: &mut ChaCha8Rng) -> Result<HVec> {
    match model.spec() {
        ModelSpec::MomentumInterval | ModelSpec::LaplaceInterval => {
            let (c, w, k) = (rng.gen_range(0.2..0.8), rng.gen_range(0.1..0.3), rng.gen_range(-8.0..8.0));
            let g = gaussian(model, c, w, k)?;
            let a = cplx(rng);
            let grid = model.grid().unwrap();
            let smooth = HVec::sample(grid, |x| a * C64::new(1.0 + x * (1.0 - x), 0.0));
            g.add(&smooth)
        }
        ModelSpec::SchrodingerHalfLine { .. } => {
            let (c, w, k) = (rng.gen_range(2.0..15.0), rng.gen_range(1.5..3.0), rng.gen_range(-1.0..1.0));
            gaussian(model, c, w, k)
        }
        ModelSpec::PointInteraction3D { center } => {
            let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let r = rng.gen_range(0.5..2.0);
            let p = [center[0] + r * dir[0], center[1] + r * dir[1], center[2] + r * dir[2]];
            let pole = if rng.gen_bool(0.5) { Pole::PlusI } else { Pole::MinusI };
            Ok(HVec::atoms([
                (cplx(rng), Atom::Green { pole, order: 1, center: p }),
                (cplx(rng), Atom::Green { pole: pole.conj(), order: 2, center: p }),
            ]))
        }
    }
}

fn random_core(model: &ModelOperator, rng: &mut ChaCha8Rng) -> Result<CoreVector> {
    let amp = cplx(rng);
    Ok(match model.spec() {
        ModelSpec::MomentumInterval | ModelSpec::LaplaceInterval => {
            let r = rng.gen_range(0.2..0.4);
            CoreVector::Profile(CoreFunc::bump(rng.gen_range(r + 0.02..0.98 - r), r, amp, rng.gen_range(-6.0..6.0)))
        }
        ModelSpec::SchrodingerHalfLine { truncation, .. } => {
            let r = rng.gen_range(8.0..10.0);
            let hi = (truncation - r - 0.5).min(20.0);
            CoreVector::Profile(CoreFunc::bump(rng.gen_range(r + 0.5..hi), r, amp, rng.gen_range(-1.0..1.0)))
        }
        ModelSpec::PointInteraction3D { center } => {
            let p = [center[0] + rng.gen_range(-1.5..1.5), center[1] + rng.gen_range(0.5..1.5), center[2]];
            let a = Atom::Green { pole: Pole::PlusI, order: 2, center: p };
            let b = Atom::Green { pole: Pole::MinusI, order: 2, center: p };
            let mu = -a.value_at(*center) / b.value_at(*center);
            CoreVector::Atomic(AtomVec::new([(amp, a), (amp * mu, b)]))
        }
    })
}

fn domain_pair(ext: &Extension, phi: Option<CoreVector>, coeffs: Vec<C64>) -> Result<GraphVec> {
    let (v, bv) = apply_extension(ext, &DomainElement::new(phi, coeffs))?;
    unit(GraphVec::new(v, bv)?)
}

fn normalised_core(model: &ModelOperator, phi: CoreVector) -> Result<CoreVector> {
    let n = model.core_vector(&phi)?.norm()?;
    Ok(phi.scaled(C64::new(1.0 / n, 0.0)))
}

fn frame_index(ext: &Extension, index: usize) -> Result<usize> {
    if index >= ext.k() {
        return Err(Error::Config(format!("frame index {index} out of range for k = {}", ext.k())));
    }
    Ok(index)
}

impl Dictionary {
    /// Seeded dictionary for the sequence target. Random vectors respect each
    /// model's resolution limits; every vector is normalised.
    pub fn generate(target: &Extension, spec: &DictionarySpec) -> Result<Self> {
        let model = target.model();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut d = Dictionary {
            provenance: format!("seed {} ({} explicit vectors)", spec.seed, spec.explicit.len()),
            ..Default::default()
        };
        for i in 0..spec.core {
            let phi = random_core(model, &mut rng)?;
            d.core.push(Named { id: format!("core_{i}"), vector: normalised_core(model, phi)? });
        }
        for i in 0..spec.h {
            d.h.push(Named { id: format!("h_{i}"), vector: unit(random_h(model, &mut rng)?)? });
        }
        for i in 0..spec.plus {
            let coeffs: Vec<C64> = (0..target.k()).map(|_| cplx(&mut rng)).collect();
            let v = target.frame().plus().combine(&coeffs)?;
            d.plus.push(Named { id: format!("plus_{i}"), vector: unit(v)? });
        }
        for i in 0..spec.graph {
            let x = GraphVec::new(random_h(model, &mut rng)?, random_h(model, &mut rng)?)?;
            d.graph.push(Named { id: format!("graph_{i}"), vector: unit(x)? });
        }
        for i in 0..spec.domain {
            let phi = random_core(model, &mut rng)?;
            let coeffs = (0..target.k()).map(|_| cplx(&mut rng)).collect();
            d.domain.push(Named { id: format!("domain_{i}"), vector: domain_pair(target, Some(phi), coeffs)? });
        }
        for e in &spec.explicit {
            d.push_explicit(target, e)?;
        }
        Ok(d)
    }

    fn push_explicit(&mut self, target: &Extension, e: &ExplicitVector) -> Result<()> {
        let model = target.model();
        let id = e.id.clone();
        let h_vector = |spec: &VectorSpec| -> Result<Option<HVec>> {
            Ok(Some(match spec {
                VectorSpec::Constant => {
                    let grid = model.grid().ok_or_else(|| Error::Config("constant vector needs a 1D model".into()))?;
                    HVec::sample(grid, |_| C64::new(1.0, 0.0))
                }
                VectorSpec::Gaussian { center, width, frequency } => gaussian(model, *center, *width, *frequency)?,
                VectorSpec::GreenAtom { pole, order, center } => {
                    if model.grid().is_some() {
                        return Err(Error::Config("green atoms need the 3D model".into()));
                    }
                    HVec::atoms([(C64::new(1.0, 0.0), Atom::Green { pole: *pole, order: *order, center: *center })])
                }
                VectorSpec::PlusFrame { index } => target.frame().plus().vectors()[frame_index(target, *index)?].clone(),
                VectorSpec::MinusFrame { index } => target.frame().minus().vectors()[frame_index(target, *index)?].clone(),
                _ => return Ok(None),
            }))
        };
        let bad = || Error::Config(format!("vector '{}' of kind {:?} cannot serve as {:?}", e.id, e.spec, e.role));
        match e.role {
            Role::Core => {
                let VectorSpec::Bump { center, radius, frequency } = e.spec else { return Err(bad()) };
                let phi = CoreVector::Profile(CoreFunc::bump(center, radius, C64::new(1.0, 0.0), frequency));
                model.validate_core(&phi)?;
                self.core.push(Named { id, vector: normalised_core(model, phi)? });
            }
            Role::H | Role::Plus => {
                let v = unit(h_vector(&e.spec)?.ok_or_else(bad)?)?;
                if e.role == Role::Plus && !matches!(e.spec, VectorSpec::PlusFrame { .. }) {
                    return Err(bad());
                }
                let list = if e.role == Role::H { &mut self.h } else { &mut self.plus };
                list.push(Named { id, vector: v });
            }
            Role::Graph | Role::Domain => {
                let x = match e.spec {
                    VectorSpec::ComplementFrame { index } => {
                        complement_frame(target)?.vectors()[frame_index(target, index)?].clone()
                    }
                    VectorSpec::DeficiencyPair { index } => {
                        let mut coeffs = vec![C64::new(0.0, 0.0); target.k()];
                        coeffs[frame_index(target, index)?] = C64::new(1.0, 0.0);
                        domain_pair(target, None, coeffs)?
                    }
                    ref other if e.role == Role::Graph => {
                        let v = h_vector(other)?.ok_or_else(bad)?;
                        GraphVec::new(v.clone(), v.scale(I))?
                    }
                    _ => return Err(bad()),
                };
                let list = if e.role == Role::Graph { &mut self.graph } else { &mut self.domain };
                list.push(Named { id, vector: unit(x)? });
            }
        }
        Ok(())
    }

    /// Every vector multiplied by `c`.
    pub fn scaled(&self, c: C64) -> Self {
        let map = |l: &Vec<Named<HVec>>| l.iter().map(|n| Named { id: n.id.clone(), vector: n.vector.scale(c) }).collect();
        let gmap = |l: &Vec<Named<GraphVec>>| l.iter().map(|n| Named { id: n.id.clone(), vector: n.vector.scale(c) }).collect();
        Dictionary {
            core: self.core.iter().map(|n| Named { id: n.id.clone(), vector: n.vector.scaled(c) }).collect(),
            h: map(&self.h),
            plus: map(&self.plus),
            graph: gmap(&self.graph),
            domain: gmap(&self.domain),
            provenance: format!("{} scaled by {c}", self.provenance),
        }
    }
}
