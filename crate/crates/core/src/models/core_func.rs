use serde::{Deserialize, Serialize};

use crate::{C64, I};

/// One term `amplitude · exp(-1/(1-t²)) · e^{iωx}` with `t = (x - center)/radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpTerm {
    pub center: f64,
    pub radius: f64,
    pub amplitude: C64,
    pub frequency: f64,
}

impl BumpTerm {
    /// Value, first and second derivative.
    pub fn jet(&self, x: f64) -> [C64; 3] {
        let t = (x - self.center) / self.radius;
        if t.abs() >= 1.0 {
            return [C64::new(0.0, 0.0); 3];
        }
        let s = 1.0 - t * t;
        let b = (-1.0 / s).exp();
        let g1 = -2.0 * t / (s * s);
        let g2 = -(2.0 + 6.0 * t * t) / (s * s * s);
        let r = self.radius;
        let b1 = b * g1 / r;
        let b2 = b * (g2 + g1 * g1) / (r * r);
        let w = self.frequency;
        let phase = self.amplitude * (I * w * x).exp();
        [
            phase * b,
            phase * (b1 + I * w * b),
            phase * (C64::new(b2 - w * w * b, 0.0) + I * 2.0 * w * b1),
        ]
    }
}

/// Smooth compactly supported function given with its first two derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreFunc {
    pub terms: Vec<BumpTerm>,
}

impl CoreFunc {
    pub fn bump(center: f64, radius: f64, amplitude: C64, frequency: f64) -> Self {
        assert!(radius > 0.0);
        Self { terms: vec![BumpTerm { center, radius, amplitude, frequency }] }
    }

    pub fn sum(parts: &[CoreFunc]) -> Self {
        Self { terms: parts.iter().flat_map(|p| p.terms.iter().copied()).collect() }
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| BumpTerm { amplitude: t.amplitude * c, ..*t })
                .collect(),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.terms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), t| {
            (a.min(t.center - t.radius), b.max(t.center + t.radius))
        })
    }

    pub fn jet(&self, x: f64) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for t in &self.terms {
            let j = t.jet(x);
            for k in 0..3 {
                out[k] += j[k];
            }
        }
        out
    }

    pub fn value(&self, x: f64) -> C64 {
        self.jet(x)[0]
    }

    /// `sup |φ|`: exact for a single bump, otherwise dense sampling refined by
    /// golden-section search around the best sample.
    pub fn sup_norm(&self) -> f64 {
        if let [t] = self.terms.as_slice() {
            return t.amplitude.norm() * (-1f64).exp();
        }
        let (a, b) = self.support();
        let n = 20_000;
        let h = (b - a) / n as f64;
        let (mut best_x, mut best) = (a, 0.0);
        for i in 0..=n {
            let x = a + i as f64 * h;
            let v = self.value(x).norm();
            if v > best {
                best = v;
                best_x = x;
            }
        }
        let (mut lo, mut hi) = ((best_x - h).max(a), (best_x + h).min(b));
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let m1 = hi - gr * (hi - lo);
            let m2 = lo + gr * (hi - lo);
            if self.value(m1).norm() > self.value(m2).norm() {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best.max(self.value(0.5 * (lo + hi)).norm())
    }
}
