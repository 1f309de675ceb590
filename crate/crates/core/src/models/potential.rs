use serde::{Deserialize, Serialize};

use crate::hilbert::grid::gauss_legendre;
use crate::{Error, Result};

/// Real, compactly supported potential.
///
/// The building block is the polynomial bump `h·(1 - t²)^p`, `t = (x - c)/r`,
/// which is `C^{p-1}` and polynomial on each side of its support edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    Zero,
    Bump {
        center: f64,
        radius: f64,
        height: f64,
        #[serde(default = "default_power")]
        power: u32,
    },
    Scaled {
        factor: f64,
        inner: Box<PotentialSpec>,
    },
    Sum {
        terms: Vec<PotentialSpec>,
    },
}

impl Default for PotentialSpec {
    fn default() -> Self {
        PotentialSpec::Zero
    }
}

fn default_power() -> u32 {
    4
}

impl PotentialSpec {
    pub fn bump(center: f64, radius: f64, height: f64) -> Self {
        PotentialSpec::Bump { center, radius, height, power: default_power() }
    }

    pub fn scaled(self, factor: f64) -> Self {
        PotentialSpec::Scaled { factor, inner: Box::new(self) }
    }

    pub fn plus(self, other: PotentialSpec) -> Self {
        PotentialSpec::Sum { terms: vec![self, other] }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PotentialSpec::Zero => true,
            PotentialSpec::Bump { height, .. } => *height == 0.0,
            PotentialSpec::Scaled { factor, inner } => *factor == 0.0 || inner.is_zero(),
            PotentialSpec::Sum { terms } => terms.iter().all(|t| t.is_zero()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Bump { center, radius, height, power } => {
                let t = (x - center) / radius;
                if t.abs() >= 1.0 {
                    0.0
                } else {
                    height * (1.0 - t * t).powi(*power as i32)
                }
            }
            PotentialSpec::Scaled { factor, inner } => factor * inner.eval(x),
            PotentialSpec::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }

    /// Smallest interval containing the support; `None` for the zero potential.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            PotentialSpec::Zero => None,
            PotentialSpec::Bump { center, radius, height, .. } => {
                (*height != 0.0).then_some((center - radius, center + radius))
            }
            PotentialSpec::Scaled { factor, inner } => {
                if *factor == 0.0 {
                    None
                } else {
                    inner.support()
                }
            }
            PotentialSpec::Sum { terms } => terms.iter().filter_map(|t| t.support()).reduce(|a, b| (a.0.min(b.0), a.1.max(b.1))),
        }
    }

    /// Points where the potential may fail to be smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PotentialSpec::Zero => vec![],
            PotentialSpec::Bump { center, radius, .. } => vec![center - radius, center + radius],
            PotentialSpec::Scaled { inner, .. } => inner.breakpoints(),
            PotentialSpec::Sum { terms } => terms.iter().flat_map(|t| t.breakpoints()).collect(),
        }
    }

    /// At least `C²`, so that solutions of `-ψ'' + Φψ = zψ` are classical.
    pub fn is_smooth(&self) -> bool {
        match self {
            PotentialSpec::Zero => true,
            PotentialSpec::Bump { power, .. } => *power >= 3,
            PotentialSpec::Scaled { inner, .. } => inner.is_smooth(),
            PotentialSpec::Sum { terms } => terms.iter().all(|t| t.is_smooth()),
        }
    }

    pub fn validate(&self, truncation: f64) -> Result<()> {
        let finite = match self {
            PotentialSpec::Zero => true,
            PotentialSpec::Bump { center, radius, height, .. } => {
                center.is_finite() && height.is_finite() && radius.is_finite() && *radius > 0.0
            }
            PotentialSpec::Scaled { factor, inner } => {
                factor.is_finite() && inner.validate(truncation).is_ok()
            }
            PotentialSpec::Sum { terms } => terms.iter().all(|t| t.validate(truncation).is_ok()),
        };
        if !finite {
            return Err(Error::Config(format!("potential {self:?} has non-finite or degenerate parameters")));
        }
        if let Some((a, b)) = self.support() {
            if a < 0.0 || b > truncation / 2.0 {
                return Err(Error::Config(format!(
                    "potential support [{a}, {b}] not inside [0, {}]",
                    truncation / 2.0
                )));
            }
        }
        Ok(())
    }
}

/// `(∫_K |Φ1 - Φ2|²)^{1/2}` with `K = [a, b]`, by composite Gauss–Legendre
/// split at every breakpoint of either potential.
pub fn potential_l2_local_distance(p1: &PotentialSpec, p2: &PotentialSpec, k: (f64, f64)) -> f64 {
    let (a, b) = k;
    assert!(a.is_finite() && b.is_finite() && b >= a, "K must be a bounded interval");
    let mut cuts: Vec<f64> = p1
        .breakpoints()
        .into_iter()
        .chain(p2.breakpoints())
        .filter(|x| *x > a && *x < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let (nodes, weights) = gauss_legendre(16);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let panels = 8;
        let h = (hi - lo) / panels as f64;
        for p in 0..panels {
            let left = lo + p as f64 * h;
            for (x, wt) in nodes.iter().zip(&weights) {
                let t = left + 0.5 * h * (x + 1.0);
                let d = p1.eval(t) - p2.eval(t);
                total += 0.5 * h * wt * d * d;
            }
        }
    }
    total.sqrt()
}
