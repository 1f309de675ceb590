//! Composite Gauss–Legendre grids on a bounded interval.
//!
//! Besides nodes and weights, each grid carries the per-panel matrices needed
//! to treat samples as piecewise polynomials: spectral differentiation,
//! cumulative integration from the panel start, and evaluation of the
//! interpolant (and its derivative) at the panel end points.

use crate::C64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = if (1.0 - x * x).abs() < 1e-300 {
        0.5 * nf * (nf + 1.0) * x.powi(n as i32 + 1)
    } else {
        nf * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, d)
}

fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
    }
    for k in 2..=n {
        let kf = k as f64;
        p[k] = ((2.0 * kf - 1.0) * x * p[k - 1] - (kf - 1.0) * p[k - 2]) / kf;
    }
    p
}

/// Composite Gauss–Legendre grid on `[a, b]` with equal panels.
#[derive(Debug, Clone)]
pub struct Grid1D {
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ref_nodes: Vec<f64>,
    // Reference-panel matrices (row-major, order × order), for [-1, 1].
    diff: Vec<f64>,
    cumint: Vec<f64>,
    left_eval: Vec<f64>,
    right_eval: Vec<f64>,
    left_deriv: Vec<f64>,
    right_deriv: Vec<f64>,
}

impl PartialEq for Grid1D {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.panels == other.panels && self.order == other.order
    }
}

impl Grid1D {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        assert!(b > a && panels >= 1 && order >= 2);
        let (rn, rw) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let left = a + p as f64 * h;
            for (x, w) in rn.iter().zip(&rw) {
                nodes.push(left + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }

        let bary: Vec<f64> = (0..order)
            .map(|j| {
                let prod: f64 = (0..order).filter(|&k| k != j).map(|k| rn[j] - rn[k]).product();
                1.0 / prod
            })
            .collect();

        let mut diff = vec![0.0; order * order];
        for i in 0..order {
            let mut diag = 0.0;
            for j in 0..order {
                if i != j {
                    let d = (bary[j] / bary[i]) / (rn[i] - rn[j]);
                    diff[i * order + j] = d;
                    diag -= d;
                }
            }
            diff[i * order + i] = diag;
        }

        // Lagrange basis in Legendre coefficients: l_j = sum_k c_jk P_k.
        let pn: Vec<Vec<f64>> = rn.iter().map(|&x| legendre_all(order, x)).collect();
        let mut cumint = vec![0.0; order * order];
        for i in 0..order {
            let p_at = legendre_all(order + 1, rn[i]);
            for j in 0..order {
                let mut s = 0.0;
                for k in 0..order {
                    let c = rw[j] * pn[j][k] * (2.0 * k as f64 + 1.0) / 2.0;
                    let integral = if k == 0 {
                        rn[i] + 1.0
                    } else {
                        (p_at[k + 1] - p_at[k - 1]) / (2.0 * k as f64 + 1.0)
                    };
                    s += c * integral;
                }
                cumint[i * order + j] = s;
            }
        }

        let lagrange_at = |x: f64| -> (Vec<f64>, Vec<f64>) {
            let mut vals = vec![0.0; order];
            let mut ders = vec![0.0; order];
            for j in 0..order {
                let l: f64 = bary[j] * (0..order).filter(|&k| k != j).map(|k| x - rn[k]).product::<f64>();
                let s: f64 = (0..order).filter(|&k| k != j).map(|k| 1.0 / (x - rn[k])).sum();
                vals[j] = l;
                ders[j] = l * s;
            }
            (vals, ders)
        };
        let (left_eval, left_deriv) = lagrange_at(-1.0);
        let (right_eval, right_deriv) = lagrange_at(1.0);

        Self {
            a,
            b,
            panels,
            order,
            nodes,
            weights,
            ref_nodes: rn,
            diff,
            cumint,
            left_eval,
            right_eval,
            left_deriv,
            right_deriv,
        }
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn panel_width(&self) -> f64 {
        (self.b - self.a) / self.panels as f64
    }

    /// Reference nodes of one panel on `[-1, 1]`.
    pub fn reference_nodes(&self) -> &[f64] {
        &self.ref_nodes
    }

    pub fn sample<F: Fn(f64) -> C64>(&self, f: F) -> Vec<C64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    pub fn integrate(&self, values: &[C64]) -> C64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// `∫_a^{x_j} f` at every node `x_j`, treating `f` as its panelwise interpolant.
    pub fn cumulative(&self, values: &[C64]) -> Vec<C64> {
        let n = self.order;
        let half = 0.5 * self.panel_width();
        let mut out = vec![C64::new(0.0, 0.0); values.len()];
        let mut offset = C64::new(0.0, 0.0);
        for p in 0..self.panels {
            let block = &values[p * n..(p + 1) * n];
            for i in 0..n {
                let row = &self.cumint[i * n..(i + 1) * n];
                let s: C64 = row.iter().zip(block).map(|(c, v)| v * *c).sum();
                out[p * n + i] = offset + s * half;
            }
            let total: C64 = block
                .iter()
                .zip(&self.weights[p * n..(p + 1) * n])
                .map(|(v, w)| v * w)
                .sum();
            offset += total;
        }
        out
    }

    /// `∫_{x_j}^b f` at every node, accumulated from the right so that
    /// rapidly decaying integrands keep their relative accuracy.
    pub fn cumulative_from_right(&self, values: &[C64]) -> Vec<C64> {
        let n = self.order;
        let half = 0.5 * self.panel_width();
        let mut out = vec![C64::new(0.0, 0.0); values.len()];
        let mut offset = C64::new(0.0, 0.0);
        for p in (0..self.panels).rev() {
            let block = &values[p * n..(p + 1) * n];
            let total: C64 = block
                .iter()
                .zip(&self.weights[p * n..(p + 1) * n])
                .map(|(v, w)| v * w)
                .sum();
            for i in 0..n {
                let row = &self.cumint[i * n..(i + 1) * n];
                let s: C64 = row.iter().zip(block).map(|(c, v)| v * *c).sum();
                out[p * n + i] = offset + (total - s * half);
            }
            offset += total;
        }
        out
    }

    /// Panelwise spectral derivative of the samples.
    pub fn differentiate(&self, values: &[C64]) -> Vec<C64> {
        let n = self.order;
        let scale = 2.0 / self.panel_width();
        let mut out = vec![C64::new(0.0, 0.0); values.len()];
        for p in 0..self.panels {
            let block = &values[p * n..(p + 1) * n];
            for i in 0..n {
                let row = &self.diff[i * n..(i + 1) * n];
                let s: C64 = row.iter().zip(block).map(|(c, v)| v * *c).sum();
                out[p * n + i] = s * scale;
            }
        }
        out
    }

    /// Interpolated value and derivative at the left end `a`.
    pub fn left_boundary(&self, values: &[C64]) -> (C64, C64) {
        let n = self.order;
        let block = &values[..n];
        let v: C64 = self.left_eval.iter().zip(block).map(|(c, v)| v * *c).sum();
        let d: C64 = self.left_deriv.iter().zip(block).map(|(c, v)| v * *c).sum();
        (v, d * (2.0 / self.panel_width()))
    }

    /// Interpolated value and derivative at the right end `b`.
    pub fn right_boundary(&self, values: &[C64]) -> (C64, C64) {
        let n = self.order;
        let block = &values[values.len() - n..];
        let v: C64 = self.right_eval.iter().zip(block).map(|(c, v)| v * *c).sum();
        let d: C64 = self.right_deriv.iter().zip(block).map(|(c, v)| v * *c).sum();
        (v, d * (2.0 / self.panel_width()))
    }
}
