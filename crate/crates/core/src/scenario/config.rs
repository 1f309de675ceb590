use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convergence::{DiagnosticSettings, DictionarySpec, MetricKind, SequenceSpec, Subsequence};
use crate::extension::{build_extension, random_hermitian, BoundaryParameters, Extension, UnitaryParam};
use crate::models::{ModelOperator, ModelSpec, Numerics, PotentialSpec};
use crate::{Error, Result, C64};

/// Version of the config and report formats (see `schema/`).
pub const SCHEMA_VERSION: &str = "1.0";

/// Closed-form rule `n ↦ (A_n, U_n)` and its limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceRule {
    /// Momentum operator with `ψ(1) = e^{iθ_n}ψ(0)`, `θ_n = theta + amplitude/n`.
    TwistedDrift { theta: f64, amplitude: f64 },
    /// `θ_n = odd` for odd `n`, `even` for even `n`; limit `target`.
    TwistedAlternating { odd: f64, even: f64, target: f64 },
    /// `k = 1`, `U_n = e^{i(phase + amplitude/n)}`.
    PhaseDrift { phase: f64, amplitude: f64 },
    /// Half-line with potential `Φ + χ/n` and `U_n = e^{i(phase + amplitude/n)}`.
    PotentialDrift { perturbation: PotentialSpec, phase: f64, amplitude: f64 },
    /// Seeded Haar `U` and Hermitian `K`, `U_n = U exp(i·amplitude·K/n)`.
    RandomUnitaryDrift { seed: u64, amplitude: f64 },
    /// 3D center `y_n = odd_center` for odd `n`, `n·even_direction` for even
    /// `n`, with the constant phase `U_n = e^{i·phase}`.
    MovingCenter { odd_center: [f64; 3], even_direction: [f64; 3], phase: f64 },
}

/// One requested diagnostic; unset fields fall back to the scenario defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticEntry {
    pub metric: MetricKind,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub subsequence: Option<Subsequence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Limit model `A`.
    pub model: ModelSpec,
    #[serde(default)]
    pub numerics: Numerics,
    pub sequence: SequenceRule,
    #[serde(rename = "N")]
    pub n: usize,
    pub dictionary: DictionarySpec,
    pub tol: f64,
    pub delta: f64,
    #[serde(default)]
    pub subsequence: Subsequence,
    pub diagnostics: Vec<DiagnosticEntry>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version: expected \"{SCHEMA_VERSION}\", got \"{}\"",
                self.schema_version
            )));
        }
        if self.name.is_empty() {
            return Err(Error::Config("name: must be nonempty".into()));
        }
        if self.n < crate::convergence::verdict::MIN_N || self.n > crate::convergence::MAX_N {
            return Err(Error::Config(format!("N: {} outside 16..=1024", self.n)));
        }
        if !(self.tol > 0.0 && self.delta > 0.0) {
            return Err(Error::Config("tol, delta: must be positive".into()));
        }
        if self.diagnostics.is_empty() {
            return Err(Error::Config("diagnostics: must list at least one metric".into()));
        }
        let family_ok = match (&self.sequence, &self.model) {
            (SequenceRule::TwistedDrift { .. } | SequenceRule::TwistedAlternating { .. }, ModelSpec::MomentumInterval) => true,
            (SequenceRule::PotentialDrift { .. }, ModelSpec::SchrodingerHalfLine { .. }) => true,
            (SequenceRule::MovingCenter { .. }, ModelSpec::PointInteraction3D { .. }) => true,
            (SequenceRule::PhaseDrift { .. }, m) => m.deficiency_index() == 1,
            (SequenceRule::RandomUnitaryDrift { .. }, _) => true,
            _ => false,
        };
        if !family_ok {
            return Err(Error::Config(format!("sequence: rule does not apply to model {}", self.model.family())));
        }
        Ok(())
    }

    pub fn settings(&self) -> Vec<DiagnosticSettings> {
        self.diagnostics
            .iter()
            .map(|d| DiagnosticSettings {
                metric: d.metric,
                tol: d.tol.unwrap_or(self.tol),
                delta: d.delta.unwrap_or(self.delta),
                subsequence: d.subsequence.unwrap_or(self.subsequence),
            })
            .collect()
    }

    /// Builds `B_1, …, B_N` and the limit `B`.
    pub fn build_sequence(&self) -> Result<SequenceSpec> {
        let model = ModelOperator::with_numerics(self.model.clone(), self.numerics)?;
        let twisted = |theta: f64| Extension::from_boundary_condition(&model, &BoundaryParameters::Twisted { theta }.to_bc());
        let n_max = self.n;
        match &self.sequence {
            SequenceRule::TwistedDrift { theta, amplitude } => {
                SequenceSpec::from_fn(twisted(*theta)?, n_max, |n| twisted(theta + amplitude / n as f64))
            }
            SequenceRule::TwistedAlternating { odd, even, target } => {
                SequenceSpec::from_fn(twisted(*target)?, n_max, |n| twisted(if n % 2 == 1 { *odd } else { *even }))
            }
            SequenceRule::PhaseDrift { phase, amplitude } => {
                let target = build_extension(&model, UnitaryParam::phase(*phase))?;
                SequenceSpec::from_fn(target, n_max, |n| {
                    build_extension(&model, UnitaryParam::phase(phase + amplitude / n as f64))
                })
            }
            SequenceRule::PotentialDrift { perturbation, phase, amplitude } => {
                let ModelSpec::SchrodingerHalfLine { potential, truncation } = &self.model else { unreachable!() };
                let target = build_extension(&model, UnitaryParam::phase(*phase))?;
                SequenceSpec::from_fn(target, n_max, |n| {
                    let spec = ModelSpec::SchrodingerHalfLine {
                        potential: potential.clone().plus(perturbation.clone().scaled(1.0 / n as f64)),
                        truncation: *truncation,
                    };
                    let m = ModelOperator::with_numerics(spec, self.numerics)?;
                    build_extension(&m, UnitaryParam::phase(phase + amplitude / n as f64))
                })
            }
            SequenceRule::RandomUnitaryDrift { seed, amplitude } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let u = UnitaryParam::random(model.k(), &mut rng);
                let h: DMatrix<C64> = random_hermitian(model.k(), &mut rng);
                let target = build_extension(&model, u.clone())?;
                SequenceSpec::from_fn(target, n_max, |n| {
                    let gen = &h * C64::new(amplitude / n as f64, 0.0);
                    build_extension(&model, u.times_exp_i(&gen)?)
                })
            }
            SequenceRule::MovingCenter { odd_center, even_direction, phase } => {
                let at = |y: [f64; 3]| -> Result<Extension> {
                    let m = ModelOperator::with_numerics(ModelSpec::PointInteraction3D { center: y }, self.numerics)?;
                    build_extension(&m, UnitaryParam::phase(*phase))
                };
                let ModelSpec::PointInteraction3D { center } = &self.model else { unreachable!() };
                SequenceSpec::from_fn(at(*center)?, n_max, |n| {
                    if n % 2 == 1 {
                        at(*odd_center)
                    } else {
                        let s = n as f64;
                        at([s * even_direction[0], s * even_direction[1], s * even_direction[2]])
                    }
                })
            }
        }
    }
}
