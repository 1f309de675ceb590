use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shortest sequence on which a verdict is issued.
pub const MIN_N: usize = 16;
/// Allowed growth factor between earlier and later entries in the last half.
pub const MONOTONE_SLACK: f64 = 1.5;
/// Absolute allowance in the monotonicity check, as a fraction of `tol`.
pub const FLOOR_FRACTION: f64 = 1e-3;
/// Fewest subsequence entries that can support a divergence verdict.
pub const MIN_SUBSEQUENCE: usize = 4;
/// Largest value treated as an exact zero by the decay fit.
pub const ZERO_LEVEL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    All,
    Even,
    Odd,
}

/// Declared subsequence `{n ≥ from : n matches parity}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subsequence {
    #[serde(default = "all")]
    pub parity: Parity,
    #[serde(default = "one")]
    pub from: usize,
}

fn all() -> Parity {
    Parity::All
}

fn one() -> usize {
    1
}

impl Default for Subsequence {
    fn default() -> Self {
        Self { parity: Parity::All, from: 1 }
    }
}

impl Subsequence {
    pub fn contains(&self, n: usize) -> bool {
        n >= self.from
            && match self.parity {
                Parity::All => true,
                Parity::Even => n % 2 == 0,
                Parity::Odd => n % 2 == 1,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Converged { final_value: f64, tol: f64 },
    Diverged { lower_bound: f64, delta: f64, subsequence: Subsequence },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self, Verdict::Diverged { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Converged { .. } => "converged",
            Verdict::Diverged { .. } => "diverged",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// `Converged` when `e_N ≤ tol` and the last half is non-increasing up to
/// [`MONOTONE_SLACK`]; otherwise `Diverged` when every subsequence entry is at
/// least `delta`; otherwise `Inconclusive`. `metrics[n-1]` is `e_n`.
pub fn verdict(metrics: &[f64], tol: f64, delta: f64, sub: &Subsequence) -> Result<Verdict> {
    let n = metrics.len();
    if n < MIN_N {
        return Err(Error::Config(format!("verdicts need N ≥ {MIN_N}, got {n}")));
    }
    if let Some(i) = metrics.iter().position(|e| !e.is_finite() || *e < 0.0) {
        return Ok(Verdict::Inconclusive { reason: format!("invalid metric value {} at n = {}", metrics[i], i + 1) });
    }
    let last = metrics[n - 1];
    if last <= tol {
        let floor = FLOOR_FRACTION * tol;
        let mut best = f64::INFINITY;
        let mut monotone = true;
        for &e in &metrics[n / 2..] {
            if e > MONOTONE_SLACK * best + floor {
                monotone = false;
                break;
            }
            best = best.min(e);
        }
        if monotone {
            return Ok(Verdict::Converged { final_value: last, tol });
        }
    }
    let picked: Vec<f64> = (1..=n).filter(|&k| sub.contains(k)).map(|k| metrics[k - 1]).collect();
    if picked.len() >= MIN_SUBSEQUENCE {
        let low = picked.iter().copied().fold(f64::INFINITY, f64::min);
        if low >= delta {
            return Ok(Verdict::Diverged { lower_bound: low, delta, subsequence: *sub });
        }
    }
    Ok(Verdict::Inconclusive {
        reason: if last > tol {
            format!("e_N = {last:.3e} above tol {tol:.1e} and no subsequence floor {delta:.1e}")
        } else {
            "last half not monotone within slack".into()
        },
    })
}

/// Verdict of a diagnostic over several vectors: diverged if any vector is,
/// converged if all are.
pub fn combine(verdicts: &[Verdict]) -> Verdict {
    if let Some(d) = verdicts.iter().filter(|v| v.is_diverged()).min_by(|a, b| {
        let key = |v: &Verdict| match v {
            Verdict::Diverged { lower_bound, .. } => -*lower_bound,
            _ => 0.0,
        };
        key(a).total_cmp(&key(b))
    }) {
        return d.clone();
    }
    if !verdicts.is_empty() && verdicts.iter().all(Verdict::is_converged) {
        let worst = verdicts
            .iter()
            .filter_map(|v| match v {
                Verdict::Converged { final_value, .. } => Some(*final_value),
                _ => None,
            })
            .fold(0.0, f64::max);
        let tol = match &verdicts[0] {
            Verdict::Converged { tol, .. } => *tol,
            _ => unreachable!(),
        };
        return Verdict::Converged { final_value: worst, tol };
    }
    Verdict::Inconclusive {
        reason: if verdicts.is_empty() {
            "empty dictionary".into()
        } else {
            format!("{} of {} vectors inconclusive", verdicts.iter().filter(|v| !v.is_converged()).count(), verdicts.len())
        },
    }
}

/// Least-squares power law over the last half of the sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum FittedDecay {
    /// Every entry of the last half is below [`ZERO_LEVEL`].
    Zero,
    /// `e_n ≈ prefactor · n^{-exponent}`.
    PowerLaw { prefactor: f64, exponent: f64 },
    Undetermined,
}

pub fn fit_decay(metrics: &[f64]) -> FittedDecay {
    let n = metrics.len();
    let tail: Vec<(f64, f64)> = (n / 2..n).map(|i| ((i + 1) as f64, metrics[i])).collect();
    if tail.iter().all(|(_, e)| *e <= ZERO_LEVEL) {
        return FittedDecay::Zero;
    }
    let pts: Vec<(f64, f64)> = tail.iter().filter(|(_, e)| *e > ZERO_LEVEL && e.is_finite()).map(|(k, e)| (k.ln(), e.ln())).collect();
    if pts.len() < 3 {
        return FittedDecay::Undetermined;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return FittedDecay::Undetermined;
    }
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    FittedDecay::PowerLaw { prefactor: (my - slope * mx).exp(), exponent: -slope }
}
