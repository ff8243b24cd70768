use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use ib_model::Scenario;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{
    dhk_torus, finite_stochastic, hyperplane_scenario, linear_bandit, lower_r_scenario,
    lower_s_scenario, moment_scenario, pcb_desk, pcb_scenario, rot_triangle, square_isometries,
    traffic_abcde, zerosum_scenario, PcbSpec, Result, ScenarioError,
};

/// Where an experiment gets its scenario from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioSource {
    Named {
        builder: String,
        #[serde(default)]
        params: Value,
    },
    File {
        file: PathBuf,
    },
    Inline(Box<Scenario>),
}

impl ScenarioSource {
    /// Resolve to a scenario; relative file paths are taken from `base`.
    pub fn load(&self, base: Option<&Path>) -> Result<Scenario> {
        match self {
            ScenarioSource::Named { builder, params } => build_named(builder, params),
            ScenarioSource::File { file } => {
                let path = match base {
                    Some(b) if file.is_relative() => b.join(file),
                    _ => file.clone(),
                };
                let text = std::fs::read_to_string(&path).map_err(|e| ScenarioError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                let sc = Scenario::from_json(&text)?;
                sc.ensure_valid()?;
                Ok(sc)
            }
            ScenarioSource::Inline(sc) => {
                sc.ensure_valid()?;
                Ok((**sc).clone())
            }
        }
    }
}

fn parse<T: DeserializeOwned>(params: &Value) -> Result<T> {
    let v = if params.is_null() {
        Value::Object(Default::default())
    } else {
        params.clone()
    };
    Ok(serde_json::from_value(v)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeansParams {
    means: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearParams {
    arms: Vec<Vec<f64>>,
    thetas: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusParams {
    #[serde(default = "two")]
    n: usize,
    #[serde(default = "eight")]
    arm_res: usize,
    #[serde(default = "eight")]
    h_res: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RotParams {
    #[serde(default = "rot_arm_res")]
    arm_res: usize,
    #[serde(default = "rot_h_res")]
    h_res: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareParams {
    #[serde(default = "three")]
    h_res: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperplaneParams {
    #[serde(default)]
    arms: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    thetas: Option<Vec<Vec<f64>>>,
    #[serde(default = "five")]
    arm_res: usize,
    #[serde(default = "five")]
    h_res: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentParams {
    #[serde(default = "two")]
    n: usize,
    #[serde(default = "moment_samples")]
    curve_samples: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TrafficParams {
    #[serde(default = "one")]
    tau_min: f64,
    #[serde(default = "three_f")]
    tau_max: f64,
    #[serde(default = "two")]
    grid: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZerosumParams {
    #[serde(default = "default_payoffs")]
    payoffs: Vec<Vec<Vec<f64>>>,
    #[serde(default = "default_x_grid")]
    x_grid: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LowerSParams {
    #[serde(rename = "D", default = "four")]
    d: usize,
    #[serde(default = "lower_s_alpha")]
    alpha: f64,
    #[serde(default = "four")]
    h_extra: usize,
    #[serde(default)]
    seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LowerRParams {
    #[serde(default = "ten")]
    lambda: f64,
    #[serde(default = "lower_r_alpha")]
    alpha: f64,
    #[serde(default = "nine")]
    arm_res: usize,
    #[serde(default = "nine")]
    h_res: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

fn one() -> f64 {
    1.0
}
fn two() -> usize {
    2
}
fn three() -> usize {
    3
}
fn three_f() -> f64 {
    3.0
}
fn four() -> usize {
    4
}
fn five() -> usize {
    5
}
fn eight() -> usize {
    8
}
fn nine() -> usize {
    9
}
fn ten() -> f64 {
    10.0
}
fn rot_arm_res() -> usize {
    24
}
fn rot_h_res() -> usize {
    12
}
fn moment_samples() -> usize {
    65
}
fn lower_s_alpha() -> f64 {
    0.1
}
fn lower_r_alpha() -> f64 {
    1.3
}

/// Two games that are mirror images of each other; their optimal rows differ.
pub(crate) fn default_payoffs() -> Vec<Vec<Vec<f64>>> {
    vec![
        vec![vec![0.8, 0.6], vec![-0.6, -0.8]],
        vec![vec![-0.6, -0.8], vec![0.8, 0.6]],
    ]
}

pub(crate) fn default_x_grid() -> Vec<Vec<f64>> {
    vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]]
}

/// Square arm matrices `[[cos φ, 0.2], [sin φ, -0.2]]` and unit hypotheses,
/// both with angles in `[π/8, 3π/8]`; every hyperplane meets the disk.
fn default_hyperplane(arm_res: usize, h_res: usize) -> (Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>) {
    let ang = |k: usize, n: usize| {
        if n == 1 {
            PI / 4.0
        } else {
            PI / 8.0 + PI / 4.0 * k as f64 / (n - 1) as f64
        }
    };
    let arms = (0..arm_res)
        .map(|k| {
            let (s, c) = ang(k, arm_res).sin_cos();
            vec![vec![c, 0.2], vec![s, -0.2]]
        })
        .collect();
    let thetas = (0..h_res)
        .map(|k| {
            let (s, c) = ang(k, h_res).sin_cos();
            vec![c, s]
        })
        .collect();
    (arms, thetas)
}

const NAMES: &[&str] = &[
    "finite_stochastic",
    "linear_bandit",
    "dhk_torus",
    "rot_triangle",
    "square_isometries",
    "hyperplane",
    "moment",
    "traffic_abcde",
    "pcb",
    "pcb_desk",
    "zerosum",
    "lower_s",
    "lower_r",
];

pub fn builder_names() -> &'static [&'static str] {
    NAMES
}

/// Build a scenario by name; parameters not given take the defaults above.
pub fn build_named(name: &str, params: &Value) -> Result<Scenario> {
    match name {
        "finite_stochastic" => {
            let p: MeansParams = parse(params)?;
            finite_stochastic(&p.means)
        }
        "linear_bandit" => {
            let p: LinearParams = parse(params)?;
            linear_bandit(&p.arms, &p.thetas)
        }
        "dhk_torus" => {
            let p: TorusParams = parse(params)?;
            dhk_torus(p.n, p.arm_res, p.h_res)
        }
        "rot_triangle" => {
            let p: RotParams = parse(params)?;
            rot_triangle(p.arm_res, p.h_res)
        }
        "square_isometries" => {
            let p: SquareParams = parse(params)?;
            square_isometries(p.h_res)
        }
        "hyperplane" => {
            let p: HyperplaneParams = parse(params)?;
            let (da, dt) = default_hyperplane(p.arm_res, p.h_res);
            hyperplane_scenario(&p.arms.unwrap_or(da), &p.thetas.unwrap_or(dt))
        }
        "moment" => {
            let p: MomentParams = parse(params)?;
            moment_scenario(p.n, p.curve_samples)
        }
        "traffic_abcde" => {
            let p: TrafficParams = parse(params)?;
            traffic_abcde(p.tau_min, p.tau_max, p.grid)
        }
        "pcb" => {
            let spec: PcbSpec = parse(params)?;
            pcb_scenario("pcb", &spec)
        }
        "pcb_desk" => {
            let _: Empty = parse(params)?;
            pcb_desk()
        }
        "zerosum" => {
            let p: ZerosumParams = parse(params)?;
            zerosum_scenario(&p.payoffs, &p.x_grid)
        }
        "lower_s" => {
            let p: LowerSParams = parse(params)?;
            lower_s_scenario(p.d, p.alpha, p.h_extra, p.seed)
        }
        "lower_r" => {
            let p: LowerRParams = parse(params)?;
            lower_r_scenario(p.lambda, p.alpha, p.arm_res, p.h_res)
        }
        other => Err(ScenarioError::UnknownBuilder(other.into())),
    }
}
