use std::fmt::Write as _;
use std::path::PathBuf;

use ib_scenarios::ScenarioSource;
use ib_sim::concentration_experiment;

use crate::config::{base_dir, read_json, ConcentrationConfig};
use crate::output::{ensure_dir, with_pool, write_file, write_json, Manifest};
use crate::run::{out_dir, RunOptions};
use crate::{CliError, Outcome, Result};

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Empirical violation rates against both bounds, one row per `τ`, as
/// `<out>/concentration.csv` with header
/// `tau,delta,reps,violations,rate,std_error,simplex_bound,generic_bound`.
/// The simplex column is empty on other bodies.
pub fn cmd_concentration(opts: &RunOptions) -> Result<Outcome> {
    let (mut cfg, _) = read_json::<ConcentrationConfig>(&opts.config)?;
    cfg.check()?;
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    let out = out_dir(&opts.out, &cfg.out)?;
    let sc = cfg.scenario.load(base_dir(&opts.config))?;
    if cfg.theta >= sc.family.num_hypotheses() || cfg.arm >= sc.family.num_arms() {
        return Err(CliError::Validation(format!(
            "theta {} or arm {} is off the grid",
            cfg.theta, cfg.arm
        )));
    }
    cfg.nature.make()?;
    ensure_dir(&out)?;

    let mut csv =
        String::from("tau,delta,reps,violations,rate,std_error,simplex_bound,generic_bound\n");
    for &tau in &cfg.tau {
        let r = with_pool(opts.threads, || {
            concentration_experiment(
                &sc,
                cfg.theta,
                &cfg.nature,
                cfg.arm,
                tau,
                cfg.delta,
                cfg.reps,
                cfg.seed,
                cfg.c_exp,
            )
        })??;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            r.tau,
            r.delta,
            r.reps,
            r.violations,
            r.rate,
            r.std_error,
            opt(r.simplex_bound),
            r.generic_bound
        );
    }
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
    let mut manifest = Manifest::new("concentration", manifest_cfg, &sc.name, &sc_json, cfg.seed);
    let mut paths: Vec<PathBuf> = vec![
        write_json(&out.join("config.json"), &cfg_value)?,
        write_file(&out.join("scenario.json"), &sc_json)?,
        write_file(&out.join("concentration.csv"), &csv)?,
    ];
    manifest.add_files(&out, &paths);
    paths.push(write_json(&out.join("manifest.json"), &manifest)?);
    Ok(Outcome::ok(paths.split_off(2)))
}
