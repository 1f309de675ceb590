use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::convergence::{run_diagnostic, theorem_consistency, ConsistencyRecord, ConvergenceReport, Dictionary, MetricKind};
use crate::extension::{boundary_parameters, BoundaryParameters};
use crate::models::ModelSpec;
use crate::scenario::config::{ScenarioConfig, SequenceRule, SCHEMA_VERSION};
use crate::Result;

pub const REPORT_FILE: &str = "report.json";
pub const METRICS_FILE: &str = "metrics.csv";

/// Exit codes of `deflab run`.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: String,
    pub scenario: String,
    pub description: String,
    pub model: ModelSpec,
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub sequence: SequenceRule,
    /// Boundary condition of the limit `B`.
    pub target: BoundaryParameters,
    pub reports: Vec<ConvergenceReport>,
    /// `None` when the diagnostics do not cover every metric the checks need.
    pub consistency: Option<ConsistencyRecord>,
}

impl ScenarioReport {
    pub fn violations(&self) -> usize {
        self.consistency.as_ref().map_or(0, |c| c.violations)
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations() > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        }
    }

    pub fn report(&self, metric: MetricKind) -> Option<&ConvergenceReport> {
        self.reports.iter().find(|r| r.diagnostic == metric)
    }

    /// Rows `(n, diagnostic, vector id, metric)` in report order.
    pub fn csv_rows(&self) -> Vec<(usize, &'static str, &str, f64)> {
        let mut rows = Vec::new();
        for r in &self.reports {
            for v in &r.vectors {
                for (i, e) in v.metrics.iter().enumerate() {
                    rows.push((i + 1, r.diagnostic.name(), v.id.as_str(), *e));
                }
            }
        }
        rows
    }
}

fn has_required(reports: &[ConvergenceReport]) -> bool {
    let has = |k: MetricKind| reports.iter().any(|r| r.diagnostic == k);
    has(MetricKind::CoreCertificate)
        && (has(MetricKind::UnitaryStrong) || has(MetricKind::Ucond))
        && has(MetricKind::Srs)
        && has(MetricKind::Projection)
        && has(MetricKind::AdjointCertificate)
}

/// Builds the sequence and dictionary and evaluates every diagnostic.
pub fn evaluate(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let seq = cfg.build_sequence()?;
    let dict = Dictionary::generate(seq.target(), &cfg.dictionary)?;
    let reports = cfg
        .settings()
        .iter()
        .map(|s| run_diagnostic(&seq, &dict, s))
        .collect::<Result<Vec<_>>>()?;
    let consistency = if has_required(&reports) { Some(theorem_consistency(&reports)?) } else { None };
    Ok(ScenarioReport {
        schema_version: SCHEMA_VERSION.into(),
        scenario: cfg.name.clone(),
        description: cfg.description.clone(),
        model: cfg.model.clone(),
        k: seq.target().model().k(),
        n: cfg.n,
        sequence: cfg.sequence.clone(),
        target: boundary_parameters(seq.target()),
        reports,
        consistency,
    })
}

pub fn write_report_json(report: &ScenarioReport, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_metrics_csv(report: &ScenarioReport, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "diagnostic", "vector_id", "metric"])?;
    for (n, diag, id, e) in report.csv_rows() {
        w.write_record([n.to_string(), diag.to_string(), id.to_string(), format!("{e:e}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Loads, evaluates and writes `<out>/<name>/report.json` and `metrics.csv`.
pub fn run_scenario(config: &Path, out: &Path) -> Result<(ScenarioReport, PathBuf)> {
    let cfg = ScenarioConfig::load(config)?;
    let report = evaluate(&cfg)?;
    let dir = out.join(&cfg.name);
    std::fs::create_dir_all(&dir)?;
    write_report_json(&report, &dir.join(REPORT_FILE))?;
    write_metrics_csv(&report, &dir.join(METRICS_FILE))?;
    Ok((report, dir))
}
