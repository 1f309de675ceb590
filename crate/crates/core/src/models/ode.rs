//! Adaptive Dormand–Prince 5(4) integration of `y'' = q(x) y`.

use crate::{Error, Result, C64};

const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B_STAR: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-300, max_steps: 2_000_000 }
    }
}

type State = [C64; 2];

fn rhs(q: &impl Fn(f64) -> C64, x: f64, y: &State) -> State {
    [y[1], q(x) * y[0]]
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

/// Integrates `y'' = q(x) y` from `(x0, [y, y'])` through the monotone list
/// `targets`, landing exactly on every target. Returns `[y, y']` at each.
pub fn integrate_linear2(
    q: impl Fn(f64) -> C64,
    x0: f64,
    y0: State,
    targets: &[f64],
    opts: OdeOptions,
) -> Result<Vec<State>> {
    let Some(&last) = targets.last() else { return Ok(vec![]) };
    let dir = if last >= x0 { 1.0 } else { -1.0 };
    if targets.windows(2).any(|w| (w[1] - w[0]) * dir < 0.0) || (targets[0] - x0) * dir < 0.0 {
        return Err(Error::Ode("targets not monotone in the integration direction".into()));
    }
    let span = (last - x0).abs().max(1e-300);
    let mut h = (span * 1e-3).min(0.05) * dir;
    let mut x = x0;
    let mut y = y0;
    let mut out = Vec::with_capacity(targets.len());
    let mut steps = 0usize;
    for &t in targets {
        while (t - x) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Ode(format!("step budget exhausted near x = {x}")));
            }
            let mut landing = false;
            if (x + h - t) * dir >= 0.0 {
                h = t - x;
                landing = true;
            }
            let k1 = rhs(&q, x, &y);
            let k2 = rhs(&q, x + C[0] * h, &axpy(&y, h, &[(A[0][0], &k1)]));
            let k3 = rhs(&q, x + C[1] * h, &axpy(&y, h, &[(A[1][0], &k1), (A[1][1], &k2)]));
            let k4 = rhs(&q, x + C[2] * h, &axpy(&y, h, &[(A[2][0], &k1), (A[2][1], &k2), (A[2][2], &k3)]));
            let k5 = rhs(
                &q,
                x + C[3] * h,
                &axpy(&y, h, &[(A[3][0], &k1), (A[3][1], &k2), (A[3][2], &k3), (A[3][3], &k4)]),
            );
            let k6 = rhs(
                &q,
                x + C[4] * h,
                &axpy(&y, h, &[(A[4][0], &k1), (A[4][1], &k2), (A[4][2], &k3), (A[4][3], &k4), (A[4][4], &k5)]),
            );
            let y_new = axpy(
                &y,
                h,
                &[(A[5][0], &k1), (A[5][2], &k3), (A[5][3], &k4), (A[5][4], &k5), (A[5][5], &k6)],
            );
            let k7 = rhs(&q, x + h, &y_new);
            let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
            let mut err = 0.0f64;
            for comp in 0..2 {
                let mut e = C64::new(0.0, 0.0);
                for (j, k) in ks.iter().enumerate() {
                    e += k[comp] * (h * (B[j] - B_STAR[j]));
                }
                let scale = opts.atol + opts.rtol * y[comp].norm().max(y_new[comp].norm());
                err = err.max(e.norm() / scale);
            }
            if !err.is_finite() {
                return Err(Error::Ode(format!("non-finite error estimate at x = {x}")));
            }
            if err <= 1.0 {
                x = if landing { t } else { x + h };
                y = y_new;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
            if h.abs() < 1e-14 * span {
                return Err(Error::Ode(format!("step size underflow near x = {x}")));
            }
        }
        out.push(y);
    }
    Ok(out)
}
