//! Adaptive Dormand–Prince 5(4) integration of two-component real systems.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl StepControl {
    pub fn new(tolerance: f64) -> Self {
        Self { rtol: tolerance, atol: tolerance, max_step: f64::INFINITY, max_steps: 10_000_000 }
    }

    pub fn with_max_step(self, max_step: f64) -> Self {
        Self { max_step, ..self }
    }
}

/// Accepted steps of one integration, including the initial point.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub xs: Vec<f64>,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn last(&self) -> (f64, State) {
        let i = self.xs.len() - 1;
        (self.xs[i], self.states[i])
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = rhs(x, y)` from `(x0, y0)` to `x1 > x0`, recording every
/// accepted step.
pub fn integrate<F>(rhs: F, x0: f64, y0: State, x1: f64, control: &StepControl) -> Result<Trajectory>
where
    F: Fn(f64, &State) -> State,
{
    let mut out = Trajectory { xs: Vec::new(), states: Vec::new() };
    out.xs.push(x0);
    out.states.push(y0);
    if x1 <= x0 {
        return Ok(out);
    }

    let mut x = x0;
    let mut y = y0;
    let mut k = [[0.0; 2]; 7];
    k[0] = rhs(x, &y);
    let mut h = initial_step(x0, x1, &y, &k[0], control);

    let mut steps = 0usize;
    while x < x1 {
        if steps >= control.max_steps {
            return Err(Error::StepControl { x, step: h });
        }
        steps += 1;
        let last = x + h >= x1;
        if last {
            h = x1 - x;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s] = rhs(x + C[s] * h, &ys);
        }
        // the seventh stage is evaluated at the fifth-order solution
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new[0] += h * A[6][j] * kj[0];
            y_new[1] += h * A[6][j] * kj[1];
        }
        let mut err_sq = 0.0;
        for i in 0..2 {
            let e: f64 = h * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>();
            let scale = control.atol + control.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (0.5 * err_sq).sqrt();

        if err <= 1.0 {
            x = if last { x1 } else { x + h };
            y = y_new;
            k[0] = k[6];
            out.xs.push(x);
            out.states.push(y);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(control.max_step);
        if h <= 1e-14 * x.abs().max(1.0) {
            return Err(Error::StepControl { x, step: h });
        }
    }
    Ok(out)
}

fn initial_step(x0: f64, x1: f64, y: &State, dy: &State, control: &StepControl) -> f64 {
    let scale = |i: usize| control.atol + control.rtol * y[i].abs();
    let d0 = ((y[0] / scale(0)).powi(2) + (y[1] / scale(1)).powi(2)).sqrt();
    let d1 = ((dy[0] / scale(0)).powi(2) + (dy[1] / scale(1)).powi(2)).sqrt();
    let guess = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    guess.min(x1 - x0).min(control.max_step)
}
