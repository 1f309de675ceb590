use serde::Serialize;

use crate::models::{ModelOperator, ModelSpec, PotentialSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogRow {
    pub family: &'static str,
    /// Number of vectors in the constructed `H₊` frame.
    pub k: usize,
    pub reference_extension: &'static str,
    pub oracle: &'static str,
}

fn default_specs() -> [ModelSpec; 4] {
    [
        ModelSpec::MomentumInterval,
        ModelSpec::LaplaceInterval,
        ModelSpec::SchrodingerHalfLine { potential: PotentialSpec::Zero, truncation: 40.0 },
        ModelSpec::PointInteraction3D { center: [0.0; 3] },
    ]
}

fn oracle(spec: &ModelSpec) -> &'static str {
    match spec {
        ModelSpec::MomentumInterval => "closed-form resolvent (exponential kernel)",
        ModelSpec::LaplaceInterval => "closed-form resolvent (trigonometric Green function)",
        ModelSpec::SchrodingerHalfLine { .. } => "closed form for zero potential; ODE Green function otherwise",
        ModelSpec::PointInteraction3D { .. } => "closed-form Green atoms and Krein formula",
    }
}

pub fn list_models() -> Vec<CatalogRow> {
    default_specs()
        .into_iter()
        .map(|spec| {
            let k = ModelOperator::new(spec.clone()).map_or(spec.deficiency_index(), |m| m.frame().k());
            CatalogRow { family: spec.family(), k, reference_extension: spec.reference_extension(), oracle: oracle(&spec) }
        })
        .collect()
}

pub fn catalog_text() -> String {
    let mut out = format!("{:<22} {:>2}  {:<24} {}\n", "model", "k", "reference extension", "oracle");
    for r in list_models() {
        out.push_str(&format!("{:<22} {:>2}  {:<24} {}\n", r.family, r.k, r.reference_extension, r.oracle));
    }
    out
}
