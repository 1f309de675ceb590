//! Unwrapping wrappers around `crate::fixtures` for unit tests.

use rand_chacha::ChaCha8Rng;

use crate::extension::Extension;
use crate::fixtures;
use crate::hilbert::GraphVec;
use crate::models::ModelOperator;
use crate::C64;

pub use crate::fixtures::{test_core, test_input};

pub fn momentum() -> ModelOperator {
    fixtures::momentum().unwrap()
}

pub fn laplace() -> ModelOperator {
    fixtures::laplace().unwrap()
}

pub fn half_line() -> ModelOperator {
    fixtures::half_line().unwrap()
}

pub fn point() -> ModelOperator {
    fixtures::point().unwrap()
}

pub fn all_models() -> Vec<ModelOperator> {
    fixtures::all_models().unwrap()
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_extension(model: &ModelOperator, rng: &mut ChaCha8Rng) -> Extension {
    fixtures::random_extension(model, rng).unwrap()
}

pub fn test_graph_vec(model: &ModelOperator, rng: &mut ChaCha8Rng) -> GraphVec {
    fixtures::test_graph_vec(model, rng).unwrap()
}
