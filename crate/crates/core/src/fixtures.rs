//! Seeded inputs shared by the invariant suite, the acceptance tests and unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::extension::{build_extension, Extension, UnitaryParam};
use crate::hilbert::atoms::{Atom, Pole};
use crate::hilbert::{AtomVec, GraphVec, HVec};
use crate::models::{CoreFunc, CoreVector, ModelOperator, ModelSpec, PotentialSpec};
use crate::{Result, C64, I};

pub fn momentum() -> Result<ModelOperator> {
    ModelOperator::new(ModelSpec::MomentumInterval)
}

pub fn laplace() -> Result<ModelOperator> {
    ModelOperator::new(ModelSpec::LaplaceInterval)
}

/// Half-line on `[0, 40]` with a smooth bump potential of height 1 at 5.
pub fn half_line() -> Result<ModelOperator> {
    let potential = PotentialSpec::bump(5.0, 2.5, 1.0);
    ModelOperator::new(ModelSpec::SchrodingerHalfLine { potential, truncation: 40.0 })
}

pub fn point() -> Result<ModelOperator> {
    ModelOperator::new(ModelSpec::PointInteraction3D { center: [0.0; 3] })
}

/// One instance of each model family, in catalog order.
pub fn all_models() -> Result<Vec<ModelOperator>> {
    Ok(vec![momentum()?, laplace()?, half_line()?, point()?])
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Smooth test input in the model's representation.
pub fn test_input(model: &ModelOperator, rng: &mut ChaCha8Rng) -> HVec {
    let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    match model.spec() {
        ModelSpec::MomentumInterval | ModelSpec::LaplaceInterval => {
            let k = rng.gen_range(-3.0..3.0);
            HVec::sample(model.grid().expect("1D models carry a grid"), |x| a * (I * k * x).exp() + b * x * x)
        }
        ModelSpec::SchrodingerHalfLine { .. } => {
            let (c1, w) = (rng.gen_range(3.0..12.0), rng.gen_range(1.5..3.0));
            HVec::sample(model.grid().expect("1D models carry a grid"), |x| a * (-(x - c1) * (x - c1) / (2.0 * w * w)).exp() + b * (-x).exp())
        }
        ModelSpec::PointInteraction3D { center } => HVec::atoms([
            (a, Atom::Green { pole: Pole::PlusI, order: 1, center: [1.5, 0.0, 0.0] }),
            (b, Atom::Green { pole: Pole::MinusI, order: 2, center: *center }),
        ]),
    }
}

pub fn test_core(model: &ModelOperator, rng: &mut ChaCha8Rng) -> CoreVector {
    let amp = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    match model.spec() {
        ModelSpec::MomentumInterval | ModelSpec::LaplaceInterval => {
            let r = rng.gen_range(0.2..0.4);
            CoreVector::Profile(CoreFunc::bump(rng.gen_range(r + 0.01..0.99 - r), r, amp, rng.gen_range(-5.0..5.0)))
        }
        ModelSpec::SchrodingerHalfLine { .. } => {
            CoreVector::Profile(CoreFunc::bump(rng.gen_range(9.0..20.0), 8.0, amp, rng.gen_range(-1.0..1.0)))
        }
        ModelSpec::PointInteraction3D { center } => {
            let p = [0.0, rng.gen_range(0.5..2.0), 0.0];
            let a = Atom::Green { pole: Pole::PlusI, order: 2, center: p };
            let b = Atom::Green { pole: Pole::MinusI, order: 2, center: p };
            let mu = -a.value_at(*center) / b.value_at(*center);
            CoreVector::Atomic(AtomVec::new([(amp, a), (amp * mu, b)]))
        }
    }
}

pub fn random_extension(model: &ModelOperator, rng: &mut ChaCha8Rng) -> Result<Extension> {
    build_extension(model, UnitaryParam::random(model.k(), rng))
}

pub fn test_graph_vec(model: &ModelOperator, rng: &mut ChaCha8Rng) -> Result<GraphVec> {
    let a = test_input(model, rng);
    let b = test_input(model, rng);
    GraphVec::new(a, b)
}
