//! Radial atoms in `L²(ℝ³)` and their overlap kernel.
//!
//! A Green atom of pole `z ∈ {+i, -i}` and order `m ≥ 1` is the function whose
//! Fourier transform is `(k² - z)^{-m}`; order 1 is the free Green's function
//! `e^{iκ|x-y|} / (4π|x-y|)` with `κ = √z`, `Im κ > 0`, and higher orders are
//! `(m-1)!^{-1} ∂_z^{m-1}` of it. The free resolvent maps Green atoms to
//! combinations of Green atoms, which keeps every 3D computation closed-form.
//!
//! Overlaps between Green atoms reduce, by partial fractions in `k²`, to
//! point values of single atoms. Every new kernel entry is cross-checked
//! against a two-center radial quadrature; entries are memoised in a shared
//! table behind a reader-writer lock.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{LazyLock, RwLock};

use crate::hilbert::grid::gauss_legendre;
use crate::{Error, Result, C64, I};

/// Pole of a Green atom: the spectral point `z` in `(−Δ − z)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pole {
    PlusI,
    MinusI,
}

impl Pole {
    pub fn z(self) -> C64 {
        match self {
            Pole::PlusI => I,
            Pole::MinusI => -I,
        }
    }

    /// Branch of `√z` with positive imaginary part.
    pub fn kappa(self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Pole::PlusI => C64::new(s, s),
            Pole::MinusI => C64::new(-s, s),
        }
    }

    pub fn conj(self) -> Pole {
        match self {
            Pole::PlusI => Pole::MinusI,
            Pole::MinusI => Pole::PlusI,
        }
    }

    pub fn from_z(z: C64) -> Option<Pole> {
        if (z - I).norm() < 1e-14 {
            Some(Pole::PlusI)
        } else if (z + I).norm() < 1e-14 {
            Some(Pole::MinusI)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Atom {
    Green { pole: Pole, order: u32, center: [f64; 3] },
    Gauss { center: [f64; 3], sigma: f64 },
}

impl Atom {
    pub fn green(pole: Pole, center: [f64; 3]) -> Self {
        Atom::Green { pole, order: 1, center }
    }

    pub fn center(&self) -> [f64; 3] {
        match *self {
            Atom::Green { center, .. } | Atom::Gauss { center, .. } => center,
        }
    }

    /// Same atom, bit for bit. Used for deduplication.
    pub fn same_descriptor(&self, other: &Atom) -> bool {
        self.key() == other.key()
    }

    fn key(&self) -> (u8, u8, u32, [u64; 3], u64) {
        match *self {
            Atom::Green { pole, order, center } => {
                (0, pole as u8, order, center.map(f64::to_bits), 0)
            }
            Atom::Gauss { center, sigma } => (1, 0, 0, center.map(f64::to_bits), sigma.to_bits()),
        }
    }

    /// Value at a point. Singular Green atoms are evaluated at `r > 0` only.
    pub fn value_at(&self, x: [f64; 3]) -> C64 {
        let r = distance(self.center(), x);
        match *self {
            Atom::Green { pole, order, .. } => GreenProfile::new(pole, order).eval(r),
            Atom::Gauss { sigma, .. } => C64::new((-r * r / (2.0 * sigma * sigma)).exp(), 0.0),
        }
    }
}

pub fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Radial profile of a Green atom:
/// `e^{iκr} / (4πr) · Σ_b c_b r^b`.
#[derive(Debug, Clone)]
pub struct GreenProfile {
    kappa: C64,
    coeffs: Vec<C64>,
}

impl GreenProfile {
    pub fn new(pole: Pole, order: u32) -> Self {
        assert!(order >= 1, "Green atoms have order >= 1");
        let kappa = pole.kappa();
        // Terms c · κ^a · r^b, differentiated by d/dz = (2κ)^{-1} d/dκ.
        let mut terms: HashMap<(i32, usize), C64> = HashMap::new();
        terms.insert((0, 0), C64::new(1.0, 0.0));
        let mut factorial = 1.0;
        for step in 1..order {
            let mut next: HashMap<(i32, usize), C64> = HashMap::new();
            for (&(a, b), &c) in &terms {
                if a != 0 {
                    *next.entry((a - 2, b)).or_default() += c * (a as f64 / 2.0);
                }
                *next.entry((a - 1, b + 1)).or_default() += c * I * 0.5;
            }
            terms = next;
            factorial *= step as f64;
        }
        let max_b = terms.keys().map(|&(_, b)| b).max().unwrap_or(0);
        let mut coeffs = vec![C64::new(0.0, 0.0); max_b + 1];
        for (&(a, b), &c) in &terms {
            coeffs[b] += c * kappa.powi(a) / factorial;
        }
        Self { kappa, coeffs }
    }

    /// `r · D(r)`; smooth down to `r = 0`.
    pub fn eval_times_r(&self, r: f64) -> C64 {
        let mut poly = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            poly = poly * r + c;
        }
        (I * self.kappa * r).exp() * poly / (4.0 * PI)
    }

    pub fn eval(&self, r: f64) -> C64 {
        self.eval_times_r(r) / r
    }
}

/// Regular part at the atom's own center: for order 1 the constant term
/// `iκ/(4π)` after removing `1/(4πr)`; for higher orders the value itself.
pub fn green_regular_at_center(pole: Pole, order: u32) -> C64 {
    let kappa = pole.kappa();
    // (m-1)!^{-1} ∂_z^{m-1} (i z^{1/2} / 4π) = (i/4π) binom(1/2, m-1) z^{1/2-(m-1)}
    let j = (order - 1) as i32;
    let mut binom = 1.0;
    for t in 0..j {
        binom *= (0.5 - t as f64) / (t as f64 + 1.0);
    }
    I / (4.0 * PI) * binom * kappa.powi(1 - 2 * j)
}

/// Coefficients of `(w-a)^{-p} (w-b)^{-q}` in the basis `(w-a)^{-j}`, `(w-b)^{-j}`.
fn partial_fractions(a: C64, p: u32, b: C64, q: u32) -> Vec<(bool, u32, C64)> {
    fn go(a: C64, p: u32, b: C64, q: u32, scale: C64, acc: &mut HashMap<(bool, u32), C64>) {
        if p == 0 {
            if q > 0 {
                *acc.entry((false, q)).or_default() += scale;
            }
            return;
        }
        if q == 0 {
            *acc.entry((true, p)).or_default() += scale;
            return;
        }
        let f = scale / (a - b);
        go(a, p, b, q - 1, f, acc);
        go(a, p - 1, b, q, -f, acc);
    }
    let mut acc = HashMap::new();
    go(a, p, b, q, C64::new(1.0, 0.0), &mut acc);
    let mut out: Vec<(bool, u32, C64)> = acc.into_iter().map(|((w, j), c)| (w, j, c)).collect();
    out.sort_by_key(|&(w, j, _)| (w, j));
    out
}

fn green_value_or_regular(pole: Pole, order: u32, d: f64) -> C64 {
    if d < 1e-9 {
        green_regular_at_center(pole, order)
    } else {
        GreenProfile::new(pole, order).eval(d)
    }
}

/// Closed-form `⟨G1, G2⟩` for two Green atoms at distance `d`.
pub fn green_overlap_closed_form(p1: Pole, m1: u32, p2: Pole, m2: u32, d: f64) -> C64 {
    let a = p1.conj();
    if a == p2 {
        return green_value_or_regular(a, m1 + m2, d);
    }
    partial_fractions(a.z(), m1, p2.z(), m2)
        .into_iter()
        .map(|(is_a, j, c)| c * green_value_or_regular(if is_a { a } else { p2 }, j, d))
        .sum()
}

/// `∫ exp(-|x|²/2σ1²) exp(-|x-d|²/2σ2²) dx`.
pub fn gauss_overlap_closed_form(s1: f64, s2: f64, d: f64) -> f64 {
    let v = s1 * s1 + s2 * s2;
    let s = s1 * s1 * s2 * s2 / v;
    (2.0 * PI * s).powf(1.5) * (-d * d / (2.0 * v)).exp()
}

/// `r · f(r)` for an atom's radial profile, plus a cutoff radius beyond which
/// the profile is below double precision relevance.
fn radial_times_r(atom: &Atom) -> (Box<dyn Fn(f64) -> C64 + Send + Sync>, f64) {
    match *atom {
        Atom::Green { pole, order, .. } => {
            let prof = GreenProfile::new(pole, order);
            (Box::new(move |r| prof.eval_times_r(r)), 70.0 + 10.0 * order as f64)
        }
        Atom::Gauss { sigma, .. } => {
            (Box::new(move |r| C64::new(r * (-r * r / (2.0 * sigma * sigma)).exp(), 0.0)), 10.0 * sigma)
        }
    }
}

const QUAD_PANEL: f64 = 4.0;

fn panel_integral<F: Fn(f64) -> C64>(lo: f64, hi: f64, rule: &(Vec<f64>, Vec<f64>), f: F) -> C64 {
    if hi <= lo {
        return C64::new(0.0, 0.0);
    }
    let panels = ((hi - lo) / QUAD_PANEL).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    let mut s = C64::new(0.0, 0.0);
    for p in 0..panels {
        let left = lo + p as f64 * h;
        for (x, w) in rule.0.iter().zip(&rule.1) {
            s += f(left + 0.5 * h * (x + 1.0)) * (0.5 * h * w);
        }
    }
    s
}

/// Independent quadrature for `⟨a1, a2⟩`: single-center radial integral when
/// the centers coincide, otherwise bipolar coordinates
/// `dx = (2π/d) r1 r2 dr1 dr2` over `|r1 - r2| ≤ d ≤ r1 + r2`.
pub fn overlap_by_quadrature(a1: &Atom, a2: &Atom) -> C64 {
    let rule = gauss_legendre(16);
    let d = distance(a1.center(), a2.center());
    let (f1, c1) = radial_times_r(a1);
    let (f2, c2) = radial_times_r(a2);
    if d < 1e-12 {
        let hi = c1.min(c2);
        return panel_integral(0.0, hi, &rule, |r| f1(r).conj() * f2(r) * (4.0 * PI));
    }
    let outer = |r1: f64| -> C64 {
        let lo = (d - r1).abs();
        let hi = (d + r1).min(c2);
        f1(r1).conj() * panel_integral(lo, hi, &rule, &f2)
    };
    let split = d.min(c1);
    let s = panel_integral(0.0, split, &rule, outer) + panel_integral(split, c1, &rule, outer);
    s * (2.0 * PI / d)
}

type KernelKey = ((u8, u8, u32, u64), (u8, u8, u32, u64), u64);

static KERNEL_TABLE: LazyLock<RwLock<HashMap<KernelKey, C64>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

fn shape_key(a: &Atom) -> (u8, u8, u32, u64) {
    match *a {
        Atom::Green { pole, order, .. } => (0, pole as u8, order, 0),
        Atom::Gauss { sigma, .. } => (1, 0, 0, sigma.to_bits()),
    }
}

/// Agreement required between closed form and quadrature.
pub const KERNEL_CROSS_CHECK_TOL: f64 = 1e-8;

/// `⟨a1, a2⟩` (conjugate-linear in `a1`), memoised.
pub fn kernel(a1: &Atom, a2: &Atom) -> Result<C64> {
    let d = distance(a1.center(), a2.center());
    let key = (shape_key(a1), shape_key(a2), d.to_bits());
    if let Some(v) = KERNEL_TABLE.read().expect("kernel table poisoned").get(&key) {
        return Ok(*v);
    }
    let value = match (*a1, *a2) {
        (Atom::Green { pole: p1, order: m1, .. }, Atom::Green { pole: p2, order: m2, .. }) => {
            let closed = green_overlap_closed_form(p1, m1, p2, m2, d);
            let quad = overlap_by_quadrature(a1, a2);
            if (closed - quad).norm() > KERNEL_CROSS_CHECK_TOL {
                return Err(Error::KernelMismatch {
                    pair: format!("{a1:?} / {a2:?}"),
                    closed: closed.norm(),
                    quadrature: quad.norm(),
                });
            }
            closed
        }
        (Atom::Gauss { sigma: s1, .. }, Atom::Gauss { sigma: s2, .. }) => {
            C64::new(gauss_overlap_closed_form(s1, s2, d), 0.0)
        }
        (Atom::Gauss { .. }, Atom::Green { .. }) => overlap_by_quadrature(a1, a2),
        (Atom::Green { .. }, Atom::Gauss { .. }) => overlap_by_quadrature(a2, a1).conj(),
    };
    KERNEL_TABLE.write().expect("kernel table poisoned").insert(key, value);
    Ok(value)
}

/// Result of applying the free resolvent `(−Δ − z)^{-1}` to a Green atom,
/// as a list of `(weight, pole, order)` at the same center.
pub fn free_resolvent_of_green(z: Pole, pole: Pole, order: u32) -> Vec<(C64, Pole, u32)> {
    if z == pole {
        return vec![(C64::new(1.0, 0.0), pole, order + 1)];
    }
    partial_fractions(z.z(), 1, pole.z(), order)
        .into_iter()
        .map(|(is_z, j, c)| (c, if is_z { z } else { pole }, j))
        .collect()
}
