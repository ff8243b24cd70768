use std::fmt::Write as _;
use std::path::Path;

use ib_certificates::{
    bound_gap, bound_main, bound_simplex, certify, delta_default, eta_main, eta_simplex,
    CertificateReport, CertifyOptions, SineMethod,
};
use ib_model::{CellReport, Scenario};
use ib_scenarios::ScenarioSource;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{base_dir, load_unchecked, read_json};
use crate::output::{write_file, write_json};
use crate::{CliError, Outcome, Result};

/// Scenario files hold a scenario source: `{"builder": .., "params": ..}`,
/// `{"file": ..}` or a full inline scenario.
pub fn read_scenario(path: &Path) -> Result<Scenario> {
    let (src, _) = read_json::<ScenarioSource>(path)?;
    Ok(src.load(base_dir(path))?)
}

/// `auto`, `simplex_lb`, ... or a full JSON object such as
/// `{"kind": "bruteforce", "samples": 4000, "seed": 1, "chart": false}`.
pub fn parse_sine(s: &str) -> Result<SineMethod> {
    let v: Value = if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map_err(|e| CliError::Schema(format!("sine method: {e}")))?
    } else {
        json!({ "kind": s })
    };
    serde_json::from_value(v).map_err(|e| CliError::Schema(format!("sine method `{s}`: {e}")))
}

fn certify_with(
    sc: &Scenario,
    sine: Option<&str>,
    horizons: Vec<usize>,
    gap: bool,
    c_exp: f64,
) -> Result<CertificateReport> {
    let opts = CertifyOptions {
        sine: sine
            .map(parse_sine)
            .transpose()?
            .unwrap_or(SineMethod::Auto),
        horizons,
        c_exp,
        compute_gap: gap,
        ..CertifyOptions::default()
    };
    Ok(certify(sc, &opts)?)
}

/// Certificate report (`R`, `S`, `C`, gap, bound values) as
/// `<out>/certificate.json`. A `null` gap means no hypothesis pair
/// qualifies, i.e. the gap is infinite.
pub fn cmd_params(
    scenario: &Path,
    out: &Path,
    sine: Option<&str>,
    horizons: &[usize],
) -> Result<Outcome> {
    let sc = read_scenario(scenario)?;
    let horizons = if horizons.is_empty() {
        vec![500]
    } else {
        horizons.to_vec()
    };
    let rep = certify_with(&sc, sine, horizons, true, 1.0)?;
    let path = write_json(&out.join("certificate.json"), &rep)?;
    Ok(Outcome::ok(vec![path]))
}

#[derive(Debug, Serialize)]
struct ValidationOutput<'a> {
    scenario: &'a str,
    passed: bool,
    structural: &'a [String],
    cells: usize,
    failures: Vec<&'a CellReport>,
}

/// Structural and per-cell checks as `<out>/validation.json`; exit code 3
/// when anything fails.
pub fn cmd_validate(scenario: &Path, out: &Path) -> Result<Outcome> {
    let (src, _) = read_json::<ScenarioSource>(scenario)?;
    let sc = load_unchecked(&src, base_dir(scenario))?;
    let rep = sc.validate();
    let summary = ValidationOutput {
        scenario: &sc.name,
        passed: rep.passed(),
        structural: &rep.structural,
        cells: rep.cells.len(),
        failures: rep.failures(),
    };
    let path = write_json(&out.join("validation.json"), &summary)?;
    let failure = (!summary.passed).then(|| {
        let mut msg = rep.structural.join("; ");
        if let Some(c) = summary.failures.first() {
            let _ = write!(
                msg,
                "{}cell (arm {}, theta {}) onto={} feasible={}",
                if msg.is_empty() { "" } else { "; " },
                c.arm,
                c.theta,
                c.onto,
                c.feasible
            );
        }
        CliError::Validation(msg)
    });
    Ok(Outcome {
        paths: vec![path],
        failure,
    })
}

/// How the gap for the gap bound is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapChoice {
    Computed,
    Value(f64),
}

impl GapChoice {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(GapChoice::Computed);
        }
        s.parse()
            .map(GapChoice::Value)
            .map_err(|_| CliError::Schema(format!("gap must be `auto` or a number, got `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct BoundsOptions {
    pub horizons: Vec<usize>,
    /// Fixed `η`; the recommended value per horizon when absent.
    pub eta: Option<f64>,
    /// Fixed `δ`; `1/√N` when absent.
    pub delta: Option<f64>,
    pub gap: Option<GapChoice>,
    pub c_exp: f64,
    pub sine: Option<String>,
}

/// Bound curves over a list of horizons as `<out>/bounds.csv` with header
/// `theorem,N,eta,delta,value`. The simplex rows appear only for simplex
/// bodies and the gap rows only when a gap is requested.
pub fn cmd_bounds(scenario: &Path, out: &Path, opts: &BoundsOptions) -> Result<Outcome> {
    if opts.horizons.is_empty() || opts.horizons.contains(&0) {
        return Err(CliError::Schema(
            "horizons must be a nonempty list of positive integers".into(),
        ));
    }
    for (name, v) in [("eta", opts.eta), ("delta", opts.delta)] {
        if v.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
            return Err(CliError::Schema(format!("{name} must be positive")));
        }
    }
    if let Some(GapChoice::Value(g)) = opts.gap {
        if !(g > 0.0) {
            return Err(CliError::NonPositiveGap(g));
        }
    }
    let sc = read_scenario(scenario)?;
    let rep = certify_with(
        &sc,
        opts.sine.as_deref(),
        Vec::new(),
        opts.gap == Some(GapChoice::Computed),
        opts.c_exp,
    )?;
    let gap = match opts.gap {
        None => None,
        Some(GapChoice::Value(g)) => Some(g),
        Some(GapChoice::Computed) => match rep.gap {
            Some(g) if g > 0.0 => Some(g),
            Some(g) => return Err(CliError::NonPositiveGap(g)),
            None if rep
                .methods
                .get("gap")
                .is_some_and(|m| m.starts_with("unavailable")) =>
            {
                return Err(CliError::Validation(format!("gap: {}", rep.methods["gap"])));
            }
            None => Some(f64::INFINITY),
        },
    };
    let (cert, dims) = (rep.values(), rep.dims());
    let mut csv = String::from("theorem,N,eta,delta,value\n");
    for &n in &opts.horizons {
        let delta = opts.delta.unwrap_or_else(|| delta_default(n));
        let eta = opts.eta.unwrap_or_else(|| eta_main(&cert, &dims, n, 1.0));
        let _ = writeln!(
            csv,
            "main,{n},{eta},{delta},{}",
            bound_main(&cert, &dims, n, eta, delta, opts.c_exp)
        );
        if sc.space.is_simplex() {
            let labels = sc.space.dim;
            let eta = opts
                .eta
                .unwrap_or_else(|| eta_simplex(&cert, &dims, n, labels));
            let _ = writeln!(
                csv,
                "simplex,{n},{eta},{delta},{}",
                bound_simplex(&cert, &dims, n, eta, delta, labels)
            );
        }
        if let Some(g) = gap {
            let _ = writeln!(
                csv,
                "gap,{n},{eta},,{}",
                bound_gap(&cert, &dims, n, eta, g, opts.c_exp)?
            );
        }
    }
    let path = write_file(&out.join("bounds.csv"), &csv)?;
    Ok(Outcome::ok(vec![path]))
}
