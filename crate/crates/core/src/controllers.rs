//! Sliding-mode controllers for the four-state underactuated plant form.
//!
//! Both controllers use two sliding surfaces in error coordinates. The
//! secondary surface is folded into the primary one through a saturated,
//! bounded transfer variable `z`, so a single input regulates both coordinate
//! pairs. The adaptive controller estimates the unknown `f₁` and `g₁` with
//! fuzzy approximators and adjusts their parameters online; the decoupled
//! baseline uses the true nominal model and no adaptation.

use crate::fuzzy::FuzzyApproximator;
use crate::plants::{PlantSpec, StateVec, GAIN_SINGULARITY_EPS};
use crate::{Error, Result};

/// Gains and layers shared by both controllers.
///
/// `c1`, `c2` are the surface slopes, `phi1` the switching boundary layer,
/// `phi2` the boundary layer smoothing the surface transfer, `kp` the
/// switching gain, `z_u` the transfer saturation level in `(0, 1)`, and
/// `gamma1`/`gamma2` the adaptation rates. `desired` is the regulation
/// target; all surfaces are formed from `x - desired`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerParams {
    pub c1: f64,
    pub c2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub kp: f64,
    pub z_u: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub desired: StateVec,
}

impl ControllerParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("phi1", self.phi1),
            ("phi2", self.phi2),
            ("Kp", self.kp),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!(
                    "controller gain {name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.z_u > 0.0 && self.z_u < 1.0) {
            return Err(Error::Config(format!(
                "zU must lie strictly inside (0, 1), got {}",
                self.z_u
            )));
        }
        if !self.desired.is_finite() {
            return Err(Error::Config("desired state must be finite".into()));
        }
        Ok(())
    }
}

/// Unit saturation: linear inside `|phi| < 1`, clipped to `±1` outside.
pub fn sat(phi: f64) -> f64 {
    if phi >= 1.0 {
        1.0
    } else if phi <= -1.0 {
        -1.0
    } else {
        phi
    }
}

/// The two sliding surfaces and the transfer variable at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub s1: f64,
    pub s2: f64,
    pub z: f64,
}

/// Surfaces in error coordinates `e = x - desired`:
/// `s₂ = c₂e₃ + e₄`, `z = sat(s₂/Φ₂)·z_U`, `s₁ = c₁(e₁ - z) + e₂`.
///
/// `|z| ≤ z_U` by construction.
pub fn surfaces(x: &StateVec, params: &ControllerParams) -> SurfaceSample {
    let e = *x - params.desired;
    let s2 = params.c2 * e[2] + e[3];
    let z = sat(s2 / params.phi2) * params.z_u;
    let s1 = params.c1 * (e[0] - z) + e[1];
    SurfaceSample { s1, s2, z }
}

/// Adaptive controller state: the two fuzzy estimates and the most recent
/// control for logging.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    pub f_hat: FuzzyApproximator,
    pub g_hat: FuzzyApproximator,
    pub last_u: f64,
}

impl ControllerState {
    /// The gain estimate must carry a positive output floor so the control
    /// law's division is always well-posed.
    pub fn new(f_hat: FuzzyApproximator, g_hat: FuzzyApproximator) -> Result<Self> {
        if !(g_hat.bounds().value_floor > 0.0) {
            return Err(Error::Config(
                "gain estimate needs a positive value floor".into(),
            ));
        }
        Ok(ControllerState {
            f_hat,
            g_hat,
            last_u: 0.0,
        })
    }
}

/// Adaptive fuzzy sliding-mode control law:
/// `u = (1/ĝ₁)·[-c₁e₂ - f̂₁ - Kp·sat(s₁ĝ₁/Φ₁)]`.
///
/// The returned value is in the controller frame; the plant input is this
/// times the plant's input sign.
pub fn afsmc_control(x: &StateVec, ctrl: &ControllerState, params: &ControllerParams) -> Result<f64> {
    let xi = ctrl.f_hat.basis_vector(x)?;
    let eta = ctrl.g_hat.basis_vector(x)?;
    let sample = surfaces(x, params);
    Ok(control_from_parts(
        x,
        ctrl.f_hat.approximate_with_basis(&xi),
        ctrl.g_hat.approximate_with_basis(&eta),
        sample.s1,
        params,
    ))
}

fn control_from_parts(
    x: &StateVec,
    f_hat: f64,
    g_hat: f64,
    s1: f64,
    params: &ControllerParams,
) -> f64 {
    let e2 = x[1] - params.desired[1];
    (-params.c1 * e2 - f_hat - params.kp * sat(s1 * g_hat / params.phi1)) / g_hat
}

/// Parameter rate vectors of the two adaptation laws.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptationRates {
    pub theta_f: Vec<f64>,
    pub theta_g: Vec<f64>,
}

/// Adaptation laws `θ̇_f = γ₁ s₁ ξ(x)` and `θ̇_g = γ₂ s₁ η(x) u`.
pub fn adaptation_rates(
    s1: f64,
    xi: &[f64],
    eta: &[f64],
    u: f64,
    params: &ControllerParams,
) -> AdaptationRates {
    AdaptationRates {
        theta_f: xi.iter().map(|v| params.gamma1 * s1 * v).collect(),
        theta_g: eta.iter().map(|v| params.gamma2 * s1 * v * u).collect(),
    }
}

/// One full controller evaluation: surfaces, control, and adaptation rates,
/// as a pure function of the state and the current parameters. The caller
/// owns integration of the rates and the subsequent projection.
pub fn afsmc_step(
    x: &StateVec,
    ctrl: &ControllerState,
    params: &ControllerParams,
) -> Result<(f64, AdaptationRates, SurfaceSample)> {
    let xi = ctrl.f_hat.basis_vector(x)?;
    let eta = ctrl.g_hat.basis_vector(x)?;
    let sample = surfaces(x, params);
    let u = control_from_parts(
        x,
        ctrl.f_hat.approximate_with_basis(&xi),
        ctrl.g_hat.approximate_with_basis(&eta),
        sample.s1,
        params,
    );
    let rates = adaptation_rates(sample.s1, &xi, &eta, u, params);
    Ok((u, rates, sample))
}

/// Decoupled sliding-mode baseline using the true nominal model:
/// `u = (-c₁e₂ - f₁)/g₁ - K₁·sat(s₁g₁/Φ₁)` with `K₁ = Kp/|g₁|`.
///
/// Errors when `|g₁|` is below the singularity threshold.
pub fn decoupled_smc_control(
    x: &StateVec,
    plant: &PlantSpec,
    params: &ControllerParams,
) -> Result<f64> {
    let (f1, g1) = plant.nominal_f1_g1(x);
    if g1.abs() < GAIN_SINGULARITY_EPS {
        return Err(Error::SingularGain { gain: g1 });
    }
    let sample = surfaces(x, params);
    let e2 = x[1] - params.desired[1];
    let k1 = params.kp / g1.abs();
    Ok((-params.c1 * e2 - f1) / g1 - k1 * sat(sample.s1 * g1 / params.phi1))
}
