//! Buchstab's function ω on a uniform grid.
//!
//! ω(u) = 1/u on [1, 2] exactly; for u > 2 it solves (u ω(u))' = ω(u-1),
//! i.e. ω'(u) = (ω(u-1) - ω(u))/u, integrated here by classical fourth-order
//! Runge-Kutta. The delayed value ω(u-1) is always at least one unit behind
//! the integration frontier, so it is read from the closed form (u-1 <= 2) or
//! by cubic interpolation from already-computed grid history.

use crate::error::{Error, Result};

/// Tabulated ω on the grid u = 1 + i·step, i = 0..=n.
#[derive(Debug, Clone)]
pub struct BuchstabTable {
    pub u_max: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl BuchstabTable {
    #[inline]
    fn u_of(&self, i: usize) -> f64 {
        1.0 + i as f64 * self.step
    }

    /// ω(u) by linear interpolation; `u` must lie in [1, u_max].
    pub fn eval(&self, u: f64) -> f64 {
        assert!(
            u >= 1.0 - 1e-12 && u <= self.u_max + 1e-9,
            "u = {u} outside [1, {}]",
            self.u_max
        );
        let t = (u - 1.0) / self.step;
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// ω extended below 1 by the reciprocal branch (ω(u) = 1/u on (0, 1))
    /// and frozen at its last value above u_max. Vanishes for u <= 0.
    pub fn eval_extended(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else if u < 1.0 {
            1.0 / u
        } else if u > self.u_max {
            *self.values.last().unwrap()
        } else {
            self.eval(u)
        }
    }

    /// Delayed-value lookup used by the stepper: exact on [something, 2],
    /// 4-point Lagrange cubic on computed history above 2.
    fn history(&self, t: f64, frontier: usize) -> f64 {
        if t <= 2.0 {
            return 1.0 / t;
        }
        let pos = (t - 1.0) / self.step;
        // center a 4-point stencil on the enclosing interval
        let mut i0 = pos.floor() as usize;
        i0 = i0.saturating_sub(1).min(frontier - 3);
        let x = pos - i0 as f64;
        let y = &self.values[i0..i0 + 4];
        // Lagrange basis at nodes 0,1,2,3
        let l0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
        let l1 = x * (x - 2.0) * (x - 3.0) / 2.0;
        let l2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
        let l3 = x * (x - 1.0) * (x - 2.0) / 6.0;
        y[0] * l0 + y[1] * l1 + y[2] * l2 + y[3] * l3
    }
}

/// Solve the delay-differential equation forward from the exact branch,
/// tabulating ω on [1, u_max] with the given grid spacing.
pub fn buchstab_omega(u_max: f64, step: f64) -> Result<BuchstabTable> {
    if step > 1e-3 {
        return Err(Error::StepTooCoarse(step));
    }
    if u_max < 2.0 || u_max.is_nan() || step <= 0.0 {
        return Err(Error::OutOfRange(format!("u_max = {u_max}, step = {step}")));
    }
    let n = ((u_max - 1.0) / step).ceil() as usize;
    let mut table = BuchstabTable {
        u_max: 1.0 + n as f64 * step,
        step,
        values: vec![0.0; n + 1],
    };

    // exact branch on [1, 2]
    let mut start = 0usize;
    for i in 0..=n {
        let u = table.u_of(i);
        if u <= 2.0 + 1e-15 {
            table.values[i] = 1.0 / u;
            start = i;
        } else {
            break;
        }
    }

    // RK4 on ω'(u) = (g(u-1) - ω(u))/u, with g read from history
    let h = step;
    for i in start..n {
        let u = table.u_of(i);
        let y = table.values[i];
        let g0 = table.history(u - 1.0, i);
        let gh = table.history(u - 1.0 + h / 2.0, i);
        let g1 = table.history(u - 1.0 + h, i);
        let k1 = (g0 - y) / u;
        let k2 = (gh - (y + h / 2.0 * k1)) / (u + h / 2.0);
        let k3 = (gh - (y + h / 2.0 * k2)) / (u + h / 2.0);
        let k4 = (g1 - (y + h * k3)) / (u + h);
        table.values[i + 1] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    Ok(table)
}
