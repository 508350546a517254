//! Scenario config schema, parsing, and validation.
//!
//! A config file holds one or more `[[scenario]]` tables. Controller gains
//! appear under their conventional symbols (`c1`, `phi1`, `Kp`, `zU`,
//! `gamma1`, ...); plant parameters and fuzzy grids are optional and fall
//! back to the per-plant defaults documented in the repository README.
//! Validation reports the offending key path and, where it can be located,
//! the line in the source text.

use std::f64::consts::PI;

use serde::Deserialize;

use afsmc_core::controllers::{ControllerParams, ControllerState};
use afsmc_core::fuzzy::{FuzzyApproximator, GridInput, MembershipGrid, ProjectionBounds};
use afsmc_core::plants::{
    DisturbanceSpec, GravityMass, InputSign, MassSchedule, PendulumParams, PlantModel, PlantSpec,
    StateVec, ToraParams,
};
use afsmc_core::sim::{Controller, OutputSpec, SimConfig};

use crate::{CliError, CliResult};

/// Default settle bands for the two regulated outputs (x1, x3).
pub const DEFAULT_SETTLE_THRESHOLDS: [f64; 2] = [0.02, 0.05];

const DEFAULT_NORM_MAX: f64 = 50.0;
const DEFAULT_NORM_MIN_G: f64 = 0.05;
const DEFAULT_G_FLOOR: f64 = 0.05;

/// Which control laws a scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerKind {
    Afsmc,
    Smc,
}

impl ControllerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ControllerKind::Afsmc => "afsmc",
            ControllerKind::Smc => "smc",
        }
    }
}

/// A fully validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub plant: PlantSpec,
    pub controller_params: ControllerParams,
    pub fuzzy: FuzzySetup,
    pub sim: SimConfig,
    pub controllers: Vec<ControllerKind>,
    pub metrics_window: Option<(f64, f64)>,
    pub settle_thresholds: [f64; 2],
}

/// Grids, bounds, and initial parameters for the two fuzzy estimates.
#[derive(Debug, Clone)]
pub struct FuzzySetup {
    pub f_grid: MembershipGrid,
    pub g_grid: MembershipGrid,
    pub f_bounds: ProjectionBounds,
    pub g_bounds: ProjectionBounds,
    pub theta_g_init: f64,
}

impl Scenario {
    /// Fresh controller instance of the requested kind (adaptive parameters
    /// at their initial values).
    pub fn build_controller(&self, kind: ControllerKind) -> CliResult<Controller> {
        match kind {
            ControllerKind::Smc => Ok(Controller::DecoupledSmc),
            ControllerKind::Afsmc => {
                let f_hat = FuzzyApproximator::constant(
                    self.fuzzy.f_grid.clone(),
                    0.0,
                    self.fuzzy.f_bounds,
                )
                .map_err(|e| CliError::Validation(format!("scenario '{}': {e}", self.name)))?;
                let g_hat = FuzzyApproximator::constant(
                    self.fuzzy.g_grid.clone(),
                    self.fuzzy.theta_g_init,
                    self.fuzzy.g_bounds,
                )
                .map_err(|e| CliError::Validation(format!("scenario '{}': {e}", self.name)))?;
                let state = ControllerState::new(f_hat, g_hat)
                    .map_err(|e| CliError::Validation(format!("scenario '{}': {e}", self.name)))?;
                Ok(Controller::Afsmc(state))
            }
        }
    }

    /// The two regulated outputs (x1, x3) with their targets and bands.
    pub fn output_specs(&self) -> [OutputSpec; 2] {
        [
            OutputSpec {
                state_index: 0,
                desired: self.controller_params.desired[0],
                threshold: self.settle_thresholds[0],
            },
            OutputSpec {
                state_index: 2,
                desired: self.controller_params.desired[2],
                threshold: self.settle_thresholds[1],
            },
        ]
    }
}

// ---------------------------------------------------------------------------
// Raw deserialization schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    scenario: Vec<RawScenario>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    plant: RawPlantKind,
    #[serde(default = "default_controllers")]
    controllers: Vec<ControllerKind>,
    controller: RawController,
    sim: RawSim,
    pendulum: Option<RawPendulum>,
    tora: Option<RawTora>,
    disturbance: Option<RawDisturbance>,
    fuzzy: Option<RawFuzzy>,
    metrics: Option<RawMetrics>,
    input_sign: Option<i8>,
}

fn default_controllers() -> Vec<ControllerKind> {
    vec![ControllerKind::Afsmc, ControllerKind::Smc]
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawPlantKind {
    Pendulum,
    Tora,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawController {
    c1: f64,
    c2: f64,
    phi1: f64,
    phi2: f64,
    #[serde(rename = "Kp")]
    kp: f64,
    #[serde(rename = "zU")]
    z_u: f64,
    gamma1: f64,
    gamma2: f64,
    desired: [f64; 4],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    dt: f64,
    t_end: f64,
    x0: [f64; 4],
    #[serde(default = "default_record_every")]
    record_every: usize,
}

fn default_record_every() -> usize {
    10
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPendulum {
    #[serde(default = "default_pole_mass")]
    m_p: f64,
    #[serde(default = "default_cart_mass")]
    m_c: f64,
    #[serde(rename = "L", default = "default_half_length")]
    half_length: f64,
    #[serde(rename = "g", default = "default_gravity")]
    gravity: f64,
    #[serde(default)]
    m_p_amplitude: Option<f64>,
    #[serde(default)]
    m_c_amplitude: Option<f64>,
    #[serde(default)]
    f1_gravity_mass: Option<String>,
}

fn default_pole_mass() -> f64 {
    0.1
}
fn default_cart_mass() -> f64 {
    1.0
}
fn default_half_length() -> f64 {
    0.5
}
fn default_gravity() -> f64 {
    9.8
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTora {
    #[serde(default = "default_rotor_mass")]
    m: f64,
    #[serde(rename = "M", default = "default_platform_mass")]
    platform_mass: f64,
    #[serde(rename = "I", default = "default_inertia")]
    inertia: f64,
    #[serde(rename = "e", default = "default_eccentricity")]
    eccentricity: f64,
    #[serde(default)]
    m_amplitude: Option<f64>,
    #[serde(rename = "M_amplitude", default)]
    platform_amplitude: Option<f64>,
}

fn default_rotor_mass() -> f64 {
    0.5
}
fn default_platform_mass() -> f64 {
    2.0
}
fn default_inertia() -> f64 {
    0.1
}
fn default_eccentricity() -> f64 {
    0.5
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisturbance {
    amplitude: f64,
    frequency: f64,
    window: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFuzzy {
    #[serde(rename = "M_f", default)]
    norm_max_f: Option<f64>,
    #[serde(rename = "M_g", default)]
    norm_max_g: Option<f64>,
    #[serde(rename = "eps_g", default)]
    norm_min_g: Option<f64>,
    #[serde(default)]
    g_floor: Option<f64>,
    #[serde(default)]
    theta_g_init: Option<f64>,
    #[serde(default)]
    f_inputs: Option<Vec<RawGridInput>>,
    #[serde(default)]
    g_inputs: Option<Vec<RawGridInput>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGridInput {
    index: usize,
    range: [f64; 2],
    count: usize,
    #[serde(default)]
    width: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetrics {
    #[serde(default)]
    window: Option<[f64; 2]>,
    #[serde(default)]
    settle_thresholds: Option<[f64; 2]>,
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Best-effort line lookup: first occurrence of `key` inside the scenario's
/// `[[scenario]]` block.
fn locate_line(text: &str, scenario_name: &str, key: &str) -> Option<usize> {
    let lines: Vec<&str> = text.lines().collect();
    let mut block_start = None;
    for (i, line) in lines.iter().enumerate() {
        if line.trim_start().starts_with("[[scenario]]") {
            block_start = Some(i);
        }
        if line.contains("name")
            && line.contains(scenario_name)
            && block_start.is_some()
        {
            let start = block_start.unwrap();
            let end = lines[i + 1..]
                .iter()
                .position(|l| l.trim_start().starts_with("[[scenario]]"))
                .map(|p| i + 1 + p)
                .unwrap_or(lines.len());
            let bare_key = key.rsplit('.').next().unwrap_or(key);
            for (j, line) in lines[start..end].iter().enumerate() {
                if line.trim_start().starts_with(bare_key) {
                    return Some(start + j + 1);
                }
            }
            return Some(start + 1);
        }
    }
    None
}

struct Ctx<'a> {
    text: &'a str,
    name: &'a str,
}

impl Ctx<'_> {
    fn err(&self, key: &str, msg: impl std::fmt::Display) -> CliError {
        let loc = locate_line(self.text, self.name, key)
            .map(|l| format!(" (line {l})"))
            .unwrap_or_default();
        CliError::Validation(format!("scenario '{}': {key}: {msg}{loc}", self.name))
    }
}

/// Parses and validates a config document into runnable scenarios.
pub fn parse_config(text: &str) -> CliResult<Vec<Scenario>> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config parse error: {e}")))?;
    if raw.scenario.is_empty() {
        return Err(CliError::Validation(
            "config defines no [[scenario]] tables".into(),
        ));
    }

    let mut seen = std::collections::HashSet::new();
    let mut scenarios = Vec::with_capacity(raw.scenario.len());
    for raw_scenario in &raw.scenario {
        if !seen.insert(raw_scenario.name.clone()) {
            return Err(CliError::Validation(format!(
                "duplicate scenario name '{}'",
                raw_scenario.name
            )));
        }
        scenarios.push(validate_scenario(raw_scenario, text)?);
    }
    Ok(scenarios)
}

fn validate_scenario(raw: &RawScenario, text: &str) -> CliResult<Scenario> {
    let ctx = Ctx {
        text,
        name: &raw.name,
    };

    if raw.name.trim().is_empty() {
        return Err(CliError::Validation("scenario name must not be empty".into()));
    }
    if raw.controllers.is_empty() {
        return Err(ctx.err("controllers", "at least one controller is required"));
    }

    // Plant.
    let model = match raw.plant {
        RawPlantKind::Pendulum => {
            if raw.tora.is_some() {
                return Err(ctx.err("tora", "plant is 'pendulum'; [scenario.tora] does not apply"));
            }
            let p = raw.pendulum.as_ref();
            let gravity_mass = match p.and_then(|p| p.f1_gravity_mass.as_deref()) {
                None | Some("total") => GravityMass::TotalMass,
                Some("pole") => GravityMass::PoleMass,
                Some(other) => {
                    return Err(ctx.err(
                        "pendulum.f1_gravity_mass",
                        format!("expected \"total\" or \"pole\", got \"{other}\""),
                    ))
                }
            };
            PlantModel::Pendulum(PendulumParams {
                pole_mass: p.map_or(0.1, |p| p.m_p),
                cart_mass: p.map_or(1.0, |p| p.m_c),
                half_length: p.map_or(0.5, |p| p.half_length),
                gravity: p.map_or(9.8, |p| p.gravity),
                gravity_mass,
                pole_mass_schedule: p
                    .and_then(|p| p.m_p_amplitude)
                    .map(|amplitude| MassSchedule { amplitude }),
                cart_mass_schedule: p
                    .and_then(|p| p.m_c_amplitude)
                    .map(|amplitude| MassSchedule { amplitude }),
            })
        }
        RawPlantKind::Tora => {
            if raw.pendulum.is_some() {
                return Err(ctx.err("pendulum", "plant is 'tora'; [scenario.pendulum] does not apply"));
            }
            let p = raw.tora.as_ref();
            PlantModel::Tora(ToraParams {
                rotor_mass: p.map_or(0.5, |p| p.m),
                platform_mass: p.map_or(2.0, |p| p.platform_mass),
                inertia: p.map_or(0.1, |p| p.inertia),
                eccentricity: p.map_or(0.5, |p| p.eccentricity),
                rotor_mass_schedule: p
                    .and_then(|p| p.m_amplitude)
                    .map(|amplitude| MassSchedule { amplitude }),
                platform_mass_schedule: p
                    .and_then(|p| p.platform_amplitude)
                    .map(|amplitude| MassSchedule { amplitude }),
            })
        }
    };

    let disturbance = raw
        .disturbance
        .as_ref()
        .map(|d| DisturbanceSpec {
            amplitude: d.amplitude,
            frequency: d.frequency,
            t_start: d.window[0],
            t_end: d.window[1],
        });

    let mut plant = PlantSpec::new(model, disturbance);
    match raw.input_sign {
        None => {}
        Some(1) => plant.input_sign = InputSign::Positive,
        Some(-1) => plant.input_sign = InputSign::Negative,
        Some(other) => {
            return Err(ctx.err("input_sign", format!("must be 1 or -1, got {other}")));
        }
    }
    plant.validate().map_err(|e| ctx.err("plant", e))?;

    // Controller gains.
    let controller_params = ControllerParams {
        c1: raw.controller.c1,
        c2: raw.controller.c2,
        phi1: raw.controller.phi1,
        phi2: raw.controller.phi2,
        kp: raw.controller.kp,
        z_u: raw.controller.z_u,
        gamma1: raw.controller.gamma1,
        gamma2: raw.controller.gamma2,
        desired: StateVec::new(raw.controller.desired),
    };
    controller_params
        .validate()
        .map_err(|e| ctx.err("controller", e))?;

    // Simulation.
    let sim = SimConfig {
        dt: raw.sim.dt,
        t_end: raw.sim.t_end,
        x0: StateVec::new(raw.sim.x0),
        record_every: raw.sim.record_every,
    };
    sim.validate().map_err(|e| ctx.err("sim", e))?;

    // Fuzzy setup: per-plant defaults unless overridden.
    let fuzzy = build_fuzzy(raw.fuzzy.as_ref(), raw.plant, &ctx)?;

    // Metrics options.
    let metrics_window = match raw.metrics.as_ref().and_then(|m| m.window) {
        Some([a, b]) if a < b => Some((a, b)),
        Some([a, b]) => {
            return Err(ctx.err(
                "metrics.window",
                format!("window must satisfy start < end, got [{a}, {b}]"),
            ))
        }
        None => None,
    };
    let settle_thresholds = match raw.metrics.as_ref().and_then(|m| m.settle_thresholds) {
        Some(t) if t.iter().all(|v| *v > 0.0) => t,
        Some(t) => {
            return Err(ctx.err(
                "metrics.settle_thresholds",
                format!("thresholds must be positive, got {t:?}"),
            ))
        }
        None => DEFAULT_SETTLE_THRESHOLDS,
    };

    Ok(Scenario {
        name: raw.name.clone(),
        plant,
        controller_params,
        fuzzy,
        sim,
        controllers: raw.controllers.clone(),
        metrics_window,
        settle_thresholds,
    })
}

fn build_fuzzy(raw: Option<&RawFuzzy>, plant: RawPlantKind, ctx: &Ctx) -> CliResult<FuzzySetup> {
    let (default_f, default_g, default_theta_g) = match plant {
        RawPlantKind::Pendulum => (
            vec![(0, -PI / 6.0, PI / 6.0, 5), (1, -2.0, 2.0, 5)],
            vec![(0, -PI / 6.0, PI / 6.0, 5), (1, -2.0, 2.0, 5)],
            1.0,
        ),
        RawPlantKind::Tora => (
            vec![(0, -1.0, 1.0, 3), (2, -PI, PI, 5), (3, -2.0, 2.0, 3)],
            vec![(2, -PI, PI, 5)],
            0.35,
        ),
    };

    let build_default = |spec: &[(usize, f64, f64, usize)]| -> CliResult<MembershipGrid> {
        let inputs = spec
            .iter()
            .map(|&(idx, lo, hi, n)| GridInput::uniform(idx, lo, hi, n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ctx.err("fuzzy", e))?;
        MembershipGrid::new(inputs).map_err(|e| ctx.err("fuzzy", e))
    };
    let build_custom = |key: &str, raw_inputs: &[RawGridInput]| -> CliResult<MembershipGrid> {
        let inputs = raw_inputs
            .iter()
            .map(|ri| {
                let mut input = GridInput::uniform(ri.index, ri.range[0], ri.range[1], ri.count)
                    .map_err(|e| ctx.err(key, e))?;
                if let Some(w) = ri.width {
                    input.width = w;
                }
                Ok(input)
            })
            .collect::<CliResult<Vec<_>>>()?;
        MembershipGrid::new(inputs).map_err(|e| ctx.err(key, e))
    };

    let f_grid = match raw.and_then(|r| r.f_inputs.as_ref()) {
        Some(inputs) => build_custom("fuzzy.f_inputs", inputs)?,
        None => build_default(&default_f)?,
    };
    let g_grid = match raw.and_then(|r| r.g_inputs.as_ref()) {
        Some(inputs) => build_custom("fuzzy.g_inputs", inputs)?,
        None => build_default(&default_g)?,
    };

    let norm_max_f = raw.and_then(|r| r.norm_max_f).unwrap_or(DEFAULT_NORM_MAX);
    let norm_max_g = raw.and_then(|r| r.norm_max_g).unwrap_or(DEFAULT_NORM_MAX);
    let norm_min_g = raw.and_then(|r| r.norm_min_g).unwrap_or(DEFAULT_NORM_MIN_G);
    let g_floor = raw.and_then(|r| r.g_floor).unwrap_or(DEFAULT_G_FLOOR);
    let theta_g_init = raw.and_then(|r| r.theta_g_init).unwrap_or(default_theta_g);

    let f_bounds =
        ProjectionBounds::new(norm_max_f, 0.0, 0.0).map_err(|e| ctx.err("fuzzy.M_f", e))?;
    let g_bounds = ProjectionBounds::new(norm_max_g, norm_min_g, g_floor)
        .map_err(|e| ctx.err("fuzzy.M_g", e))?;
    if !(g_floor > 0.0) {
        return Err(ctx.err("fuzzy.g_floor", "gain-estimate floor must be positive"));
    }

    Ok(FuzzySetup {
        f_grid,
        g_grid,
        f_bounds,
        g_bounds,
        theta_g_init,
    })
}
