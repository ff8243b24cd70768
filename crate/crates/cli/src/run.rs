use std::path::PathBuf;

use ib_sim::{monte_carlo, write_outputs};

use ib_scenarios::ScenarioSource;

use crate::config::{base_dir, read_json, ExperimentConfig, ThetaChoice};
use crate::output::{ensure_dir, write_file, write_json, Manifest};
use crate::{CliError, Outcome, Result};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

pub(crate) fn out_dir(flag: &Option<PathBuf>, config: &Option<PathBuf>) -> Result<PathBuf> {
    flag.clone().or_else(|| config.clone()).ok_or_else(|| {
        CliError::Schema("no output directory: set `out` in the config or pass --out".into())
    })
}

/// Simulate the configured experiment. Writes per-rep and summary CSVs (one
/// `theta_{t}/` directory per hypothesis under a sweep), a copy of the
/// effective config, the resolved scenario and `manifest.json`.
pub fn cmd_run(opts: &RunOptions) -> Result<Outcome> {
    let (mut cfg, _) = read_json::<ExperimentConfig>(&opts.config)?;
    cfg.check()?;
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    let out = out_dir(&opts.out, &cfg.out)?;
    let sc = cfg.scenario.load(base_dir(&opts.config))?;
    let thetas = cfg.theta.resolve(&sc)?;
    let factory = cfg.agent.factory(&sc, cfg.horizon)?;
    cfg.nature.make()?;

    ensure_dir(&out)?;
    let sc_json = sc
        .to_json()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut effective = cfg.clone();
    effective.out = None;
    let cfg_value = serde_json::to_value(&effective).expect("config serializes");
    let manifest_cfg = cfg_value.clone();
    // The copy next to the outputs points at the resolved scenario, so the
    // directory alone is enough to rerun.
    effective.scenario = ScenarioSource::File {
        file: "scenario.json".into(),
    };
    let cfg_value = serde_json::to_value(&effective).expect("config serializes");
    let mut manifest = Manifest::new("run", manifest_cfg, &sc.name, &sc_json, cfg.seed);
    let mut paths = vec![
        write_json(&out.join("config.json"), &cfg_value)?,
        write_file(&out.join("scenario.json"), &sc_json)?,
    ];

    let sweep = matches!(cfg.theta, ThetaChoice::Sweep(_));
    for &t in &thetas {
        let dir = if sweep {
            out.join(format!("theta_{t}"))
        } else {
            out.clone()
        };
        let mc = crate::output::with_pool(opts.threads, || {
            monte_carlo(
                &sc,
                &factory,
                &cfg.nature,
                t,
                cfg.horizon,
                cfg.reps,
                cfg.seed,
            )
        })??;
        for (rep, msg) in mc.errors() {
            manifest.errors.push(format!("theta {t} rep {rep}: {msg}"));
        }
        paths.extend(write_outputs(&mc, &dir)?);
    }
    manifest.add_files(&out, &paths);
    paths.push(write_json(&out.join("manifest.json"), &manifest)?);

    let failure = (!manifest.errors.is_empty()).then(|| {
        CliError::Runtime(format!(
            "{} episode(s) stopped early; first: {}",
            manifest.errors.len(),
            manifest.errors[0]
        ))
    });
    Ok(Outcome {
        paths: reported(&paths),
        failure,
    })
}

/// Only summaries and the manifest go to stdout; per-rep files are listed in
/// the manifest.
fn reported(paths: &[PathBuf]) -> Vec<PathBuf> {
    paths
        .iter()
        .filter(|p| {
            p.file_name()
                .is_some_and(|n| n == "summary.csv" || n == "manifest.json")
        })
        .cloned()
        .collect()
}
