//! Scenario registry, runner and deterministic report emission.

mod report;
mod scenarios;

pub use report::{determinism_hash, emit_report, emit_suite, suite_hash, Estimate, EstimateDetail, Report, ReportFormat};
pub use scenarios::{default_config, list_scenarios};

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundVerdict;
use crate::error::{Error, Result};
use crate::modelspaces::SpaceConfig;

/// Everything a scenario reads. Parameters absent from a config take the
/// scenario's defaults; keys the scenario does not know are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceConfig>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    /// Sample counts, restarts, trial counts and grid sizes.
    #[serde(default)]
    pub budgets: BTreeMap<String, u64>,
    #[serde(default)]
    pub schedules: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::usage(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
    }

    fn merge_into(&self, defaults: &ScenarioConfig) -> Result<ScenarioConfig> {
        fn merge<V: Clone>(section: &str, given: &BTreeMap<String, V>, base: &BTreeMap<String, V>) -> Result<BTreeMap<String, V>> {
            let mut out = base.clone();
            for (k, v) in given {
                if !base.contains_key(k) {
                    let known: Vec<&str> = base.keys().map(String::as_str).collect();
                    return Err(Error::usage(format!("{section}.{k}"), format!("unknown key; expected one of {known:?}")));
                }
                out.insert(k.clone(), v.clone());
            }
            Ok(out)
        }
        let space = match (&self.space, &defaults.space) {
            (None, base) => base.clone(),
            (Some(_), None) => return Err(Error::usage("space", "this scenario does not take a space")),
            (Some(given), Some(base)) => {
                if std::mem::discriminant(given) != std::mem::discriminant(base) {
                    return Err(Error::usage("space.variant", "space variant differs from the scenario's"));
                }
                Some(given.clone())
            }
        };
        Ok(ScenarioConfig {
            name: self.name.clone(),
            space,
            params: merge("params", &self.params, &defaults.params)?,
            seed: self.seed,
            budgets: merge("budgets", &self.budgets, &defaults.budgets)?,
            schedules: merge("schedules", &self.schedules, &defaults.schedules)?,
            output_path: self.output_path.clone(),
        })
    }

    pub(crate) fn param(&self, key: &str) -> Result<f64> {
        self.params.get(key).copied().ok_or_else(|| Error::usage(format!("params.{key}"), "missing"))
    }

    pub(crate) fn budget(&self, key: &str) -> Result<usize> {
        let v = self.budgets.get(key).copied().ok_or_else(|| Error::usage(format!("budgets.{key}"), "missing"))?;
        usize::try_from(v).map_err(|_| Error::usage(format!("budgets.{key}"), "too large"))
    }

    pub(crate) fn schedule(&self, key: &str) -> Result<&[f64]> {
        self.schedules.get(key).map(Vec::as_slice).ok_or_else(|| Error::usage(format!("schedules.{key}"), "missing"))
    }
}

/// Raw outcome of a scenario body.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub verdicts: Vec<BoundVerdict>,
    pub estimates: Vec<Estimate>,
    pub notes: Vec<String>,
}

/// Runs one scenario. Domain failures inside a scenario whose inputs came
/// from the config are reported as usage errors naming the config.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Report> {
    let scenario = scenarios::find(&config.name).ok_or_else(|| Error::usage("name", format!("unknown scenario `{}`", config.name)))?;
    let effective = config.merge_into(&(scenario.defaults)())?;
    let start = Instant::now();
    let outcome = (scenario.run)(&effective)?;
    Ok(Report {
        scenario: scenario.name.to_string(),
        description: scenario.description.to_string(),
        inputs: effective,
        verdicts: outcome.verdicts,
        estimates: outcome.estimates,
        notes: outcome.notes,
        runtime_ms: start.elapsed().as_millis() as u64,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Runs every registered scenario with its default config and the given seed.
pub fn run_all(seed: Option<u64>) -> Result<Vec<Report>> {
    list_scenarios()
        .into_iter()
        .map(|(name, _)| {
            let mut cfg = default_config(name).expect("registered scenario");
            if let Some(s) = seed {
                cfg.seed = s;
            }
            run_scenario(&cfg)
        })
        .collect()
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    Ok(pool.install(f))
}

/// Whether every non-vacuous verdict of every report holds.
pub fn all_hold(reports: &[Report]) -> bool {
    reports.iter().flat_map(|r| &r.verdicts).all(|v| v.holds || v.vacuous)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let mut cfg = default_config("f-nonneg").unwrap();
        cfg.params.insert("bogus".into(), 1.0);
        match run_scenario(&cfg) {
            Err(Error::Usage { path, .. }) => assert_eq!(path, "params.bogus"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"name": "f-nonneg", "seed": 1, "extra": 2}"#;
        assert!(matches!(ScenarioConfig::from_json(text), Err(Error::Usage { .. })));
    }

    #[test]
    fn unknown_scenario() {
        let mut cfg = default_config("f-nonneg").unwrap();
        cfg.name = "nope".into();
        assert!(matches!(run_scenario(&cfg), Err(Error::Usage { .. })));
    }

    #[test]
    fn config_round_trip() {
        for (name, _) in list_scenarios() {
            let cfg = default_config(name).unwrap();
            let text = serde_json::to_string(&cfg).unwrap();
            assert_eq!(ScenarioConfig::from_json(&text).unwrap(), cfg);
        }
    }
}
