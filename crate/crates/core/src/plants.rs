//! Affine four-state plant form `ẋ₁ = x₂, ẋ₂ = f₁ + g₁u, ẋ₃ = x₄,
//! ẋ₄ = f₂ + g₂u` with two concrete underactuated benchmarks: the cart-pole
//! inverted pendulum and the translational oscillator with rotational
//! actuator (TORA). Both support sinusoidal mass schedules and a windowed
//! cosine disturbance force collocated with the input.

use std::ops::{Index, Sub};

use crate::{Error, Result};

/// Minimum |g₁| accepted by model-based control before reporting a singular
/// input gain.
pub const GAIN_SINGULARITY_EPS: f64 = 1e-9;

/// Four-component plant state.
///
/// Pendulum: `[pole angle (rad), pole rate (rad/s), cart position (m),
/// cart velocity (m/s)]`. TORA: `[platform displacement (m), platform
/// velocity (m/s), rotor angle (rad), rotor rate (rad/s)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVec([f64; 4]);

impl StateVec {
    pub const ZERO: StateVec = StateVec([0.0; 4]);

    pub fn new(components: [f64; 4]) -> Self {
        StateVec(components)
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Index<usize> for StateVec {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Sub for StateVec {
    type Output = StateVec;

    fn sub(self, rhs: StateVec) -> StateVec {
        StateVec([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

/// Sinusoidal parameter schedule `value(t) = nominal + amplitude·sin(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSchedule {
    pub amplitude: f64,
}

/// Nominal mass plus the active schedule, if any.
pub fn mass_at(t: f64, schedule: Option<&MassSchedule>, nominal: f64) -> f64 {
    match schedule {
        Some(s) => nominal + s.amplitude * t.sin(),
        None => nominal,
    }
}

fn validate_schedule(name: &str, schedule: Option<&MassSchedule>, nominal: f64) -> Result<()> {
    if let Some(s) = schedule {
        if !s.amplitude.is_finite() || s.amplitude.abs() >= nominal {
            return Err(Error::Config(format!(
                "{name} schedule amplitude {} can drive the mass ({nominal}) non-positive",
                s.amplitude
            )));
        }
    }
    Ok(())
}

/// Which mass multiplies the gravity torque in the pendulum's `f₁` numerator.
///
/// `TotalMass` is the classic cart-pole benchmark form and the default;
/// `PoleMass` is a weaker-gravity variant that appears in some derivations
/// and is kept selectable for cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GravityMass {
    #[default]
    TotalMass,
    PoleMass,
}

/// Cart-pole inverted pendulum parameters. `half_length` is the pivot-to-
/// center distance of the uniform pole.
#[derive(Debug, Clone, PartialEq)]
pub struct PendulumParams {
    pub pole_mass: f64,
    pub cart_mass: f64,
    pub half_length: f64,
    pub gravity: f64,
    pub gravity_mass: GravityMass,
    pub pole_mass_schedule: Option<MassSchedule>,
    pub cart_mass_schedule: Option<MassSchedule>,
}

impl Default for PendulumParams {
    fn default() -> Self {
        PendulumParams {
            pole_mass: 0.1,
            cart_mass: 1.0,
            half_length: 0.5,
            gravity: 9.8,
            gravity_mass: GravityMass::TotalMass,
            pole_mass_schedule: None,
            cart_mass_schedule: None,
        }
    }
}

impl PendulumParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pole_mass", self.pole_mass),
            ("cart_mass", self.cart_mass),
            ("half_length", self.half_length),
            ("gravity", self.gravity),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!(
                    "pendulum {name} must be positive and finite, got {v}"
                )));
            }
        }
        validate_schedule("pole_mass", self.pole_mass_schedule.as_ref(), self.pole_mass)?;
        validate_schedule("cart_mass", self.cart_mass_schedule.as_ref(), self.cart_mass)?;
        // Denominator (4/3)m_t - m_p cos²x₁ must stay positive for every
        // cos² in [0,1]; check the worst case over the schedules.
        let m_p_max = self.pole_mass
            + self
                .pole_mass_schedule
                .map_or(0.0, |s| s.amplitude.abs());
        let m_c_min = self.cart_mass
            - self
                .cart_mass_schedule
                .map_or(0.0, |s| s.amplitude.abs());
        let m_p_min = self.pole_mass
            - self
                .pole_mass_schedule
                .map_or(0.0, |s| s.amplitude.abs());
        if (4.0 / 3.0) * (m_c_min + m_p_min) - m_p_max <= 0.0 {
            return Err(Error::Config(
                "pendulum masses make (4/3)(m_c+m_p) - m_p non-positive".into(),
            ));
        }
        Ok(())
    }

    /// `(pole_mass, cart_mass)` at time `t` with schedules applied.
    pub fn masses_at(&self, t: f64) -> (f64, f64) {
        (
            mass_at(t, self.pole_mass_schedule.as_ref(), self.pole_mass),
            mass_at(t, self.cart_mass_schedule.as_ref(), self.cart_mass),
        )
    }

    fn terms(&self, x: &StateVec, m_p: f64, m_c: f64) -> AffineTerms {
        let m_t = m_c + m_p;
        let (sin1, cos1) = x[0].sin_cos();
        let l = self.half_length;
        let denom = (4.0 / 3.0) * m_t - m_p * cos1 * cos1;
        let gravity_mass = match self.gravity_mass {
            GravityMass::TotalMass => m_t,
            GravityMass::PoleMass => m_p,
        };
        let f1 = (gravity_mass * self.gravity * sin1 - m_p * l * sin1 * cos1 * x[1] * x[1])
            / (l * denom);
        let g1 = cos1 / (l * denom);
        let f2 = (-(4.0 / 3.0) * m_p * l * x[1] * x[1] * sin1
            + m_p * self.gravity * sin1 * cos1)
            / denom;
        let g2 = (4.0 / 3.0) / denom;
        AffineTerms { f1, g1, f2, g2 }
    }
}

/// TORA parameters: eccentric rotor of mass `rotor_mass` and inertia
/// `inertia` at arm length `eccentricity`, mounted on a spring-bound platform
/// of mass `platform_mass`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToraParams {
    pub rotor_mass: f64,
    pub platform_mass: f64,
    pub inertia: f64,
    pub eccentricity: f64,
    pub rotor_mass_schedule: Option<MassSchedule>,
    pub platform_mass_schedule: Option<MassSchedule>,
}

impl Default for ToraParams {
    fn default() -> Self {
        ToraParams {
            rotor_mass: 0.5,
            platform_mass: 2.0,
            inertia: 0.1,
            eccentricity: 0.5,
            rotor_mass_schedule: None,
            platform_mass_schedule: None,
        }
    }
}

impl ToraParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rotor_mass", self.rotor_mass),
            ("platform_mass", self.platform_mass),
            ("inertia", self.inertia),
            ("eccentricity", self.eccentricity),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!(
                    "tora {name} must be positive and finite, got {v}"
                )));
            }
        }
        validate_schedule("rotor_mass", self.rotor_mass_schedule.as_ref(), self.rotor_mass)?;
        validate_schedule(
            "platform_mass",
            self.platform_mass_schedule.as_ref(),
            self.platform_mass,
        )?;
        // Conservative worst case over the schedules: coupling must stay
        // below 1 so that 1 - eps² cos²x₃ > 0 everywhere.
        let m_max = self.rotor_mass + self.rotor_mass_schedule.map_or(0.0, |s| s.amplitude.abs());
        let m_min = self.rotor_mass - self.rotor_mass_schedule.map_or(0.0, |s| s.amplitude.abs());
        let big_m_min = self.platform_mass
            - self
                .platform_mass_schedule
                .map_or(0.0, |s| s.amplitude.abs());
        let eps_bound = m_max * self.eccentricity
            / ((self.inertia + m_min * self.eccentricity * self.eccentricity)
                * (big_m_min + m_min))
                .sqrt();
        if eps_bound >= 1.0 {
            return Err(Error::Config(format!(
                "tora coupling can reach {eps_bound:.3} >= 1 under the given schedules"
            )));
        }
        Ok(())
    }

    /// `(rotor_mass, platform_mass)` at time `t` with schedules applied.
    pub fn masses_at(&self, t: f64) -> (f64, f64) {
        (
            mass_at(t, self.rotor_mass_schedule.as_ref(), self.rotor_mass),
            mass_at(t, self.platform_mass_schedule.as_ref(), self.platform_mass),
        )
    }

    /// Coupling at time `t` (recomputed when a schedule is active).
    pub fn epsilon_at(&self, t: f64) -> f64 {
        let (m, big_m) = self.masses_at(t);
        epsilon_raw(m, big_m, self.inertia, self.eccentricity)
    }

    fn terms(&self, x: &StateVec, eps: f64) -> AffineTerms {
        let (sin3, cos3) = x[2].sin_cos();
        let q = 1.0 - eps * eps * cos3 * cos3;
        let f1 = (-x[0] + eps * x[3] * x[3] * sin3) / q;
        let g1 = -eps * cos3 / q;
        let f2 = eps * cos3 * (x[0] - eps * x[3] * x[3] * sin3) / q;
        let g2 = 1.0 / q;
        AffineTerms { f1, g1, f2, g2 }
    }
}

/// TORA coupling `m·e / sqrt((I + m·e²)(M + m))`; in `(0, 1)` for physically
/// sensible parameters.
pub fn epsilon(rotor_mass: f64, platform_mass: f64, inertia: f64, eccentricity: f64) -> Result<f64> {
    for (name, v) in [
        ("rotor_mass", rotor_mass),
        ("platform_mass", platform_mass),
        ("inertia", inertia),
        ("eccentricity", eccentricity),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Config(format!(
                "epsilon: {name} must be positive and finite, got {v}"
            )));
        }
    }
    Ok(epsilon_raw(rotor_mass, platform_mass, inertia, eccentricity))
}

fn epsilon_raw(m: f64, big_m: f64, inertia: f64, e: f64) -> f64 {
    m * e / ((inertia + m * e * e) * (big_m + m)).sqrt()
}

/// Windowed cosine force `amplitude·cos(frequency·t)` for
/// `t ∈ [t_start, t_end]`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbanceSpec {
    pub amplitude: f64,
    pub frequency: f64,
    pub t_start: f64,
    pub t_end: f64,
}

impl DisturbanceSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_start < self.t_end) {
            return Err(Error::Config(format!(
                "disturbance window needs t_start < t_end, got [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        for (name, v) in [("amplitude", self.amplitude), ("frequency", self.frequency)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("disturbance {name} must be finite")));
            }
        }
        Ok(())
    }
}

/// Force exerted by the disturbance at time `t` (zero outside its window).
pub fn disturbance_force(t: f64, dist: &DisturbanceSpec) -> f64 {
    if t >= dist.t_start && t <= dist.t_end {
        dist.amplitude * (dist.frequency * t).cos()
    } else {
        0.0
    }
}

/// The four affine terms of the plant at one state and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTerms {
    pub f1: f64,
    pub g1: f64,
    pub f2: f64,
    pub g2: f64,
}

/// Pendulum state derivative. The disturbance force enters through the same
/// channel as the control (a horizontal force on the cart), so both
/// accelerations see `u + F(t)`.
pub fn pendulum_dynamics(
    x: &StateVec,
    u: f64,
    t: f64,
    params: &PendulumParams,
    dist: Option<&DisturbanceSpec>,
) -> StateVec {
    let (m_p, m_c) = params.masses_at(t);
    let terms = params.terms(x, m_p, m_c);
    let u_eff = u + dist.map_or(0.0, |d| disturbance_force(t, d));
    StateVec([
        x[1],
        terms.f1 + terms.g1 * u_eff,
        x[3],
        terms.f2 + terms.g2 * u_eff,
    ])
}

/// TORA state derivative; the coupling is recomputed from the scheduled
/// masses each call, and the disturbance is collocated with the input.
pub fn tora_dynamics(
    x: &StateVec,
    u: f64,
    t: f64,
    params: &ToraParams,
    dist: Option<&DisturbanceSpec>,
) -> StateVec {
    let terms = params.terms(x, params.epsilon_at(t));
    let u_eff = u + dist.map_or(0.0, |d| disturbance_force(t, d));
    StateVec([
        x[1],
        terms.f1 + terms.g1 * u_eff,
        x[3],
        terms.f2 + terms.g2 * u_eff,
    ])
}

/// Sign convention mapping controller-frame control onto the plant input.
///
/// The adaptive controller works with a strictly positive input-gain
/// estimate; plants whose true `g₁` is negative near the operating point
/// (TORA) carry `Negative` so the applied input is mirrored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSign {
    Positive,
    Negative,
}

impl InputSign {
    pub fn value(self) -> f64 {
        match self {
            InputSign::Positive => 1.0,
            InputSign::Negative => -1.0,
        }
    }
}

/// Concrete plant realization.
#[derive(Debug, Clone, PartialEq)]
pub enum PlantModel {
    Pendulum(PendulumParams),
    Tora(ToraParams),
}

/// A plant instance: model parameters, optional disturbance, and the input
/// sign convention used by the adaptive controller.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantSpec {
    pub model: PlantModel,
    pub disturbance: Option<DisturbanceSpec>,
    pub input_sign: InputSign,
}

impl PlantSpec {
    /// Builds a spec with the conventional input sign for the model
    /// (pendulum `+1`, TORA `-1`).
    pub fn new(model: PlantModel, disturbance: Option<DisturbanceSpec>) -> Self {
        let input_sign = match model {
            PlantModel::Pendulum(_) => InputSign::Positive,
            PlantModel::Tora(_) => InputSign::Negative,
        };
        PlantSpec {
            model,
            disturbance,
            input_sign,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.model {
            PlantModel::Pendulum(p) => p.validate()?,
            PlantModel::Tora(p) => p.validate()?,
        }
        if let Some(d) = &self.disturbance {
            d.validate()?;
        }
        Ok(())
    }

    /// State derivative under control `u` at time `t`, including schedules
    /// and the disturbance.
    pub fn dynamics(&self, x: &StateVec, u: f64, t: f64) -> StateVec {
        match &self.model {
            PlantModel::Pendulum(p) => pendulum_dynamics(x, u, t, p, self.disturbance.as_ref()),
            PlantModel::Tora(p) => tora_dynamics(x, u, t, p, self.disturbance.as_ref()),
        }
    }

    /// `(f₁, g₁)` of the nominal model: schedules frozen at their nominal
    /// values, no disturbance. This is what the non-adaptive baseline
    /// controller is allowed to know.
    pub fn nominal_f1_g1(&self, x: &StateVec) -> (f64, f64) {
        match &self.model {
            PlantModel::Pendulum(p) => {
                let terms = p.terms(x, p.pole_mass, p.cart_mass);
                (terms.f1, terms.g1)
            }
            PlantModel::Tora(p) => {
                let eps = epsilon_raw(p.rotor_mass, p.platform_mass, p.inertia, p.eccentricity);
                let terms = p.terms(x, eps);
                (terms.f1, terms.g1)
            }
        }
    }

    /// Disturbance force at time `t` (zero when none is configured).
    pub fn disturbance_at(&self, t: f64) -> f64 {
        self.disturbance
            .as_ref()
            .map_or(0.0, |d| disturbance_force(t, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn epsilon_reproduces_benchmark_value() {
        let eps = epsilon(0.5, 2.0, 0.1, 0.5).unwrap();
        assert_abs_diff_eq!(eps, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn epsilon_unit_arguments() {
        // 1 / sqrt(2 * 2) by direct substitution.
        assert_eq!(epsilon(1.0, 1.0, 1.0, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn epsilon_decreasing_in_platform_mass() {
        let mut prev = f64::INFINITY;
        for big_m in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
            let eps = epsilon(0.5, big_m, 0.1, 0.5).unwrap();
            assert!(eps < prev, "epsilon not decreasing at M = {big_m}");
            prev = eps;
        }
    }

    #[test]
    fn epsilon_rejects_non_positive() {
        assert!(epsilon(0.0, 2.0, 0.1, 0.5).is_err());
        assert!(epsilon(0.5, -2.0, 0.1, 0.5).is_err());
        assert!(epsilon(0.5, 2.0, 0.0, 0.5).is_err());
        assert!(epsilon(0.5, 2.0, 0.1, f64::NAN).is_err());
    }

    #[test]
    fn pendulum_upright_is_equilibrium() {
        let params = PendulumParams::default();
        let xdot = pendulum_dynamics(&StateVec::ZERO, 0.0, 0.0, &params, None);
        assert_eq!(xdot.as_array(), [0.0; 4]);
    }

    #[test]
    fn pendulum_f_terms_odd_in_angle() {
        let params = PendulumParams::default();
        for angle in [0.05, 0.2, 0.45] {
            let plus = pendulum_dynamics(&StateVec::new([angle, 0.0, 0.0, 0.0]), 0.0, 0.0, &params, None);
            let minus =
                pendulum_dynamics(&StateVec::new([-angle, 0.0, 0.0, 0.0]), 0.0, 0.0, &params, None);
            assert_relative_eq!(plus[1], -minus[1], max_relative = 1e-14);
            assert_relative_eq!(plus[3], -minus[3], max_relative = 1e-14);
        }
    }

    // Frozen from a by-hand substitution of the cart-pole equations at
    // x = [0.1, 0.2, 0, 0], u = 1, m_p = 0.1, m_c = 1, L = 0.5, g = 9.8.
    #[test]
    fn pendulum_matches_substitution_oracle() {
        let params = PendulumParams {
            gravity_mass: GravityMass::PoleMass,
            ..PendulumParams::default()
        };
        let xdot = pendulum_dynamics(&StateVec::new([0.1, 0.2, 0.0, 0.0]), 1.0, 0.0, &params, None);
        let expected = [0.2, 1.5978234030006488, 0.0, 1.045882450359475];
        for (got, want) in xdot.as_array().iter().zip(expected) {
            assert_relative_eq!(*got, want, max_relative = 1e-13);
        }

        // Same point under the total-mass gravity term; only f1 changes:
        // numerator gains (m_t - m_p) g sin x1 = 1.0 * 9.8 * sin(0.1).
        let total = PendulumParams::default();
        let xdot_t = pendulum_dynamics(&StateVec::new([0.1, 0.2, 0.0, 0.0]), 1.0, 0.0, &total, None);
        let m_p = 0.1_f64;
        let m_t = 1.1_f64;
        let cos1 = 0.1_f64.cos();
        let denom = 0.5 * ((4.0 / 3.0) * m_t - m_p * cos1 * cos1);
        let delta = (m_t - m_p) * 9.8 * 0.1_f64.sin() / denom;
        assert_relative_eq!(xdot_t[1], expected[1] + delta, max_relative = 1e-12);
        assert_relative_eq!(xdot_t[3], expected[3], max_relative = 1e-13);
    }

    #[test]
    fn pendulum_denominator_positive_under_schedules() {
        let params = PendulumParams {
            pole_mass_schedule: Some(MassSchedule { amplitude: 0.05 }),
            cart_mass_schedule: Some(MassSchedule { amplitude: 0.5 }),
            ..PendulumParams::default()
        };
        params.validate().unwrap();
        let mut t = 0.0;
        while t <= 2.0 * PI {
            let (m_p, m_c) = params.masses_at(t);
            let m_t = m_c + m_p;
            for cos_sq in [0.0, 0.5, 1.0] {
                let denom = (4.0 / 3.0) * m_t - m_p * cos_sq;
                assert!(denom >= (4.0 / 3.0) * m_t - m_p);
                assert!((4.0 / 3.0) * m_t - m_p > 0.0);
            }
            t += 0.01;
        }
    }

    #[test]
    fn tora_origin_is_equilibrium() {
        let params = ToraParams::default();
        let xdot = tora_dynamics(&StateVec::ZERO, 0.0, 0.0, &params, None);
        assert_eq!(xdot.as_array(), [0.0; 4]);
    }

    #[test]
    fn tora_g2_at_least_one() {
        let params = ToraParams::default();
        for angle in [-PI, -1.3, -PI / 2.0, 0.0, 0.7, PI / 2.0, 2.9] {
            let terms = params.terms(&StateVec::new([0.0, 0.0, angle, 0.0]), 1.0 / 3.0);
            assert!(terms.g2 >= 1.0);
            if angle.cos().abs() < 1e-12 {
                assert_relative_eq!(terms.g2, 1.0, max_relative = 1e-12);
            }
        }
    }

    // Frozen from a by-hand substitution of the TORA equations at
    // x = [0.2, 0, pi/6, 0.5], u = 0.1, eps = 1/3.
    #[test]
    fn tora_matches_substitution_oracle() {
        let params = ToraParams::default(); // epsilon = 1/3
        let x = StateVec::new([0.2, 0.0, PI / 6.0, 0.5]);
        let xdot = tora_dynamics(&x, 0.1, 0.0, &params, None);
        let expected = [0.0, -0.20421910559216144, 0.5, 0.15895297779364953];
        for (got, want) in xdot.as_array().iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn tora_q_range_at_one_third_coupling() {
        let eps: f64 = 1.0 / 3.0;
        let mut angle = -PI;
        while angle <= PI {
            let q = 1.0 - eps * eps * angle.cos() * angle.cos();
            assert!((8.0 / 9.0 - 1e-12..=1.0).contains(&q));
            angle += 0.005;
        }
    }

    #[test]
    fn mass_at_schedule_points() {
        let sched = MassSchedule { amplitude: 0.05 };
        assert_eq!(mass_at(0.0, Some(&sched), 0.1), 0.1);
        assert_relative_eq!(mass_at(PI / 2.0, Some(&sched), 0.1), 0.15, max_relative = 1e-15);
        // sin(pi) in floating point is ~1.2e-16; the product falls below
        // half an ulp of the nominal.
        assert_abs_diff_eq!(mass_at(PI, Some(&sched), 0.1), 0.1, epsilon = 1e-15);
        assert_eq!(mass_at(123.4, None, 0.1), 0.1);
    }

    #[test]
    fn schedule_rejects_non_positive_mass() {
        let params = PendulumParams {
            pole_mass_schedule: Some(MassSchedule { amplitude: 0.1 }),
            ..PendulumParams::default()
        };
        assert!(matches!(params.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn disturbance_window_and_values() {
        let dist = DisturbanceSpec {
            amplitude: 2.5,
            frequency: 5.0,
            t_start: 15.0,
            t_end: 25.0,
        };
        dist.validate().unwrap();
        assert_eq!(disturbance_force(10.0, &dist), 0.0);
        assert_relative_eq!(
            disturbance_force(15.0, &dist),
            2.304378174311873,
            max_relative = 1e-14
        );
        assert_eq!(disturbance_force(25.0 + 1e-12, &dist), 0.0);
        assert_eq!(disturbance_force(30.0, &dist), 0.0);
    }

    #[test]
    fn disturbance_continuous_inside_window() {
        let dist = DisturbanceSpec {
            amplitude: 0.25,
            frequency: 1.0,
            t_start: 30.0,
            t_end: 40.0,
        };
        let mut t = 30.0;
        let mut prev = disturbance_force(t, &dist);
        while t < 40.0 {
            t += 1e-3;
            let cur = disturbance_force(t.min(40.0), &dist);
            assert!((cur - prev).abs() < 1e-3 * dist.amplitude.abs() * 2.0);
            prev = cur;
        }
    }

    #[test]
    fn disturbance_rejects_inverted_window() {
        let dist = DisturbanceSpec {
            amplitude: 1.0,
            frequency: 1.0,
            t_start: 5.0,
            t_end: 5.0,
        };
        assert!(dist.validate().is_err());
    }

    #[test]
    fn plant_spec_default_signs() {
        let pend = PlantSpec::new(PlantModel::Pendulum(PendulumParams::default()), None);
        assert_eq!(pend.input_sign, InputSign::Positive);
        let tora = PlantSpec::new(PlantModel::Tora(ToraParams::default()), None);
        assert_eq!(tora.input_sign, InputSign::Negative);
    }

    #[test]
    fn tora_coupling_schedule_validation() {
        let params = ToraParams {
            rotor_mass_schedule: Some(MassSchedule { amplitude: 0.1 }),
            platform_mass_schedule: Some(MassSchedule { amplitude: 0.4 }),
            ..ToraParams::default()
        };
        params.validate().unwrap();
        // Epsilon stays below 1 over a full schedule period.
        let mut t = 0.0;
        while t <= 2.0 * PI {
            assert!(params.epsilon_at(t) < 1.0);
            t += 0.01;
        }
    }
}
