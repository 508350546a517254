//! Fixed-step closed-loop integration and trajectory metrics.
//!
//! The plant state and the adaptive parameters integrate together as one
//! augmented RK4 state; the control is held constant across the four stages
//! (zero-order hold) while the parameter rates are re-evaluated per stage.
//! Projection onto the parameter bounds runs once per full step, keeping its
//! non-smoothness out of the stage evaluations.

use crate::controllers::{
    adaptation_rates, afsmc_control, decoupled_smc_control, surfaces, ControllerParams,
    ControllerState,
};
use crate::plants::{PlantSpec, StateVec};
use crate::{Error, Result};

/// Integration setup. `record_every` decimates the log (1 = every step).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    pub x0: StateVec,
    pub record_every: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= 0.01) {
            return Err(Error::Config(format!(
                "dt must be in (0, 0.01], got {}",
                self.dt
            )));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(format!(
                "t_end must be positive and finite, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        if !self.x0.is_finite() {
            return Err(Error::Config("initial state must be finite".into()));
        }
        Ok(())
    }

    /// Number of full integration steps (`t_end/dt` rounded to the nearest
    /// integer, so `t_end` need not be an exact float multiple of `dt`).
    pub fn step_count(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// One logged sample of the closed loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub state: StateVec,
    pub u: f64,
    pub s1: f64,
    pub s2: f64,
    pub z: f64,
    pub theta_f_norm: f64,
    pub theta_g_norm: f64,
    pub disturbance: f64,
}

/// Decimated time series of a closed-loop run. Rows are strictly increasing
/// in time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    rows: Vec<TrajectoryRow>,
}

impl TrajectoryLog {
    pub fn push(&mut self, row: TrajectoryRow) {
        debug_assert!(self.rows.last().map_or(true, |last| row.t > last.t));
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[TrajectoryRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl FromIterator<TrajectoryRow> for TrajectoryLog {
    fn from_iter<T: IntoIterator<Item = TrajectoryRow>>(iter: T) -> Self {
        TrajectoryLog {
            rows: iter.into_iter().collect(),
        }
    }
}

/// Classical fourth-order Runge-Kutta update of a flat state vector.
///
/// Fails with [`Error::Divergence`] if any stage produces a non-finite
/// derivative; other errors from the derivative closure propagate unchanged.
pub fn rk4_step<F>(mut deriv: F, x: &[f64], t: f64, dt: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let check = |k: Vec<f64>| {
        if k.iter().all(|v| v.is_finite()) {
            Ok(k)
        } else {
            Err(Error::Divergence { t })
        }
    };
    let half = 0.5 * dt;
    let at = |base: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(x, k)| x + h * k).collect()
    };

    let k1 = check(deriv(t, x)?)?;
    let k2 = check(deriv(t + half, &at(x, &k1, half))?)?;
    let k3 = check(deriv(t + half, &at(x, &k2, half))?)?;
    let k4 = check(deriv(t + dt, &at(x, &k3, dt))?)?;

    Ok(x.iter()
        .enumerate()
        .map(|(i, &xi)| xi + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Which control law closes the loop.
#[derive(Debug, Clone)]
pub enum Controller {
    /// Adaptive fuzzy sliding-mode controller; owns the evolving estimates.
    Afsmc(ControllerState),
    /// Decoupled sliding-mode baseline on the nominal model.
    DecoupledSmc,
}

/// Runs the closed loop to `t_end` and returns the decimated log.
///
/// Per step: evaluate the controller at the current state, hold the control
/// across the four RK4 stages, integrate plant state (and, for the adaptive
/// controller, the parameter vectors with per-stage rate re-evaluation), then
/// project the parameters back onto their bounds.
pub fn run_closed_loop(
    plant: &PlantSpec,
    controller: Controller,
    cparams: &ControllerParams,
    sim: &SimConfig,
) -> Result<TrajectoryLog> {
    plant.validate()?;
    cparams.validate()?;
    sim.validate()?;

    let mut controller = controller;
    let sigma = plant.input_sign.value();
    let n_steps = sim.step_count();
    let mut log = TrajectoryLog::default();
    let mut x = sim.x0;

    for k in 0..=n_steps {
        let t = k as f64 * sim.dt;
        let sample = surfaces(&x, cparams);

        // Controller-frame control u_c and the physical input applied to the
        // plant. For the baseline they coincide.
        let (u_ctrl, u_plant) = match &controller {
            Controller::Afsmc(state) => {
                let u_c = afsmc_control(&x, state, cparams)?;
                (u_c, sigma * u_c)
            }
            Controller::DecoupledSmc => {
                let u = decoupled_smc_control(&x, plant, cparams)?;
                (u, u)
            }
        };

        if k % sim.record_every == 0 {
            let (nf, ng) = match &controller {
                Controller::Afsmc(state) => (state.f_hat.theta_norm(), state.g_hat.theta_norm()),
                Controller::DecoupledSmc => (0.0, 0.0),
            };
            log.push(TrajectoryRow {
                t,
                state: x,
                u: u_plant,
                s1: sample.s1,
                s2: sample.s2,
                z: sample.z,
                theta_f_norm: nf,
                theta_g_norm: ng,
                disturbance: plant.disturbance_at(t),
            });
        }
        if k == n_steps {
            break;
        }

        match &mut controller {
            Controller::Afsmc(state) => {
                let n_f = state.f_hat.theta().len();
                let n_g = state.g_hat.theta().len();
                let mut aug = Vec::with_capacity(4 + n_f + n_g);
                aug.extend_from_slice(&x.as_array());
                aug.extend_from_slice(state.f_hat.theta());
                aug.extend_from_slice(state.g_hat.theta());

                let deriv = |tau: f64, y: &[f64]| -> Result<Vec<f64>> {
                    let xs = StateVec::new([y[0], y[1], y[2], y[3]]);
                    let xdot = plant.dynamics(&xs, u_plant, tau);
                    let s1 = surfaces(&xs, cparams).s1;
                    let xi = state.f_hat.basis_vector(&xs)?;
                    let eta = state.g_hat.basis_vector(&xs)?;
                    let rates = adaptation_rates(s1, &xi, &eta, u_ctrl, cparams);
                    let mut out = Vec::with_capacity(4 + n_f + n_g);
                    out.extend_from_slice(&xdot.as_array());
                    out.extend(rates.theta_f);
                    out.extend(rates.theta_g);
                    Ok(out)
                };
                let next = rk4_step(deriv, &aug, t, sim.dt)?;

                x = StateVec::new([next[0], next[1], next[2], next[3]]);
                if !x.is_finite() {
                    return Err(Error::Divergence { t: t + sim.dt });
                }
                state.f_hat.set_theta_projected(&next[4..4 + n_f]);
                state.g_hat.set_theta_projected(&next[4 + n_f..]);
                state.last_u = u_plant;
            }
            Controller::DecoupledSmc => {
                let deriv = |tau: f64, y: &[f64]| -> Result<Vec<f64>> {
                    let xs = StateVec::new([y[0], y[1], y[2], y[3]]);
                    Ok(plant.dynamics(&xs, u_plant, tau).as_array().to_vec())
                };
                let next = rk4_step(deriv, &x.as_array(), t, sim.dt)?;
                x = StateVec::new([next[0], next[1], next[2], next[3]]);
                if !x.is_finite() {
                    return Err(Error::Divergence { t: t + sim.dt });
                }
            }
        }
    }

    Ok(log)
}

/// One regulated output: which state component, its target, and the band
/// used for settling detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputSpec {
    pub state_index: usize,
    pub desired: f64,
    pub threshold: f64,
}

/// Scalar performance summary of one run.
///
/// `settle_time` is the earliest logged time after which every output error
/// stays inside its threshold (`f64::INFINITY` when that never happens);
/// `peak_deviation` and `ise` are per-output in the order the output specs
/// were given.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub settle_time: f64,
    pub peak_deviation: Vec<f64>,
    pub ise: Vec<f64>,
    pub max_abs_u: f64,
    pub rms_u: f64,
}

/// Computes metrics from a log. `window` restricts the peak metrics
/// (`peak_deviation`, `max_abs_u`) to `[w.0, w.1]`; settling and the
/// trapezoidal integrals always use the whole log.
pub fn compute_metrics(
    log: &TrajectoryLog,
    outputs: &[OutputSpec],
    window: Option<(f64, f64)>,
) -> Result<Metrics> {
    let rows = log.rows();
    if rows.is_empty() {
        return Err(Error::EmptyLog);
    }

    let in_window = |t: f64| window.map_or(true, |(a, b)| t >= a && t <= b);
    let errors = |row: &TrajectoryRow| -> Vec<f64> {
        outputs
            .iter()
            .map(|o| row.state[o.state_index] - o.desired)
            .collect()
    };

    // Settling: time of the row after the last threshold violation.
    let mut settle_time = rows[0].t;
    for (i, row) in rows.iter().enumerate() {
        let violated = outputs
            .iter()
            .zip(errors(row))
            .any(|(o, e)| e.abs() >= o.threshold);
        if violated {
            settle_time = match rows.get(i + 1) {
                Some(next) => next.t,
                None => f64::INFINITY,
            };
        }
    }

    let mut peak_deviation = vec![0.0f64; outputs.len()];
    let mut max_abs_u = 0.0f64;
    for row in rows {
        if !in_window(row.t) {
            continue;
        }
        for (p, e) in peak_deviation.iter_mut().zip(errors(row)) {
            *p = p.max(e.abs());
        }
        max_abs_u = max_abs_u.max(row.u.abs());
    }

    // Trapezoidal integrals over the whole log.
    let mut ise = vec![0.0f64; outputs.len()];
    let mut u_sq_integral = 0.0f64;
    for pair in rows.windows(2) {
        let dt = pair[1].t - pair[0].t;
        let e0 = errors(&pair[0]);
        let e1 = errors(&pair[1]);
        for (acc, (a, b)) in ise.iter_mut().zip(e0.iter().zip(&e1)) {
            *acc += 0.5 * dt * (a * a + b * b);
        }
        u_sq_integral += 0.5 * dt * (pair[0].u * pair[0].u + pair[1].u * pair[1].u);
    }
    let duration = rows.last().unwrap().t - rows[0].t;
    let rms_u = if duration > 0.0 {
        (u_sq_integral / duration).sqrt()
    } else {
        rows[0].u.abs()
    };

    Ok(Metrics {
        settle_time,
        peak_deviation,
        ise,
        max_abs_u,
        rms_u,
    })
}
