//! Scenario configs, report writing, the invariant suite and the model catalog.

pub mod catalog;
pub mod config;
pub mod invariants;
pub mod run;

pub use catalog::{catalog_text, list_models, CatalogRow};
pub use invariants::{invariant_suite, InvariantReport, InvariantResult, Relation};
pub use config::{DiagnosticEntry, ScenarioConfig, SequenceRule, SCHEMA_VERSION};
pub use run::{evaluate, run_scenario, ScenarioReport, EXIT_ERROR, EXIT_OK, EXIT_VIOLATION};
