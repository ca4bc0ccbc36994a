use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::ScenarioConfig;
use crate::bounds::{BoundVerdict, FCheck, Lemma13Report, PsiEstimate};
use crate::error::{Error, Result};
use crate::loops::TurningEstimate;
use crate::measure::{McEstimate, PackingResult, RoughVolumeEstimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum EstimateDetail {
    Scalar,
    MonteCarlo(McEstimate),
    Packing(PackingResult),
    RoughVolume(RoughVolumeEstimate),
    Turning(TurningEstimate),
    Psi(PsiEstimate),
    Lemma13(Lemma13Report),
    FCheck(FCheck),
}

/// A measured or computed quantity, with its analytic value when one is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub detail: EstimateDetail,
}

impl Estimate {
    pub fn scalar(name: impl Into<String>, value: f64, reference: Option<f64>) -> Self {
        Estimate { name: name.into(), value, reference, detail: EstimateDetail::Scalar }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub description: String,
    pub inputs: ScenarioConfig,
    pub verdicts: Vec<BoundVerdict>,
    pub estimates: Vec<Estimate>,
    pub notes: Vec<String>,
    pub runtime_ms: u64,
    pub toolkit_version: String,
}

impl Report {
    pub fn verdict(&self, name: &str) -> Option<&BoundVerdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn estimate(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::usage("format", format!("unsupported format `{other}`; expected json or csv"))),
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON with sorted keys and every float written with 17 significant digits.
fn write_value(out: &mut String, v: &Value, indent: usize) -> Result<()> {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&serde_json::to_string(v)?),
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("f64 number");
                out.push_str(&fmt_f64(x));
            } else {
                write!(out, "{n}").expect("write to string");
            }
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2)?;
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(k)?);
                out.push_str(": ");
                write_value(out, item, indent + 2)?;
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(x: &T) -> Result<String> {
    let value = serde_json::to_value(x)?;
    let mut out = String::new();
    write_value(&mut out, &value, 0)?;
    out.push('\n');
    Ok(out)
}

fn check_finite(report: &Report) -> Result<()> {
    for v in &report.verdicts {
        if !(v.lhs.is_finite() && v.rhs.is_finite()) || v.context.values().any(|x| !x.is_finite()) {
            return Err(Error::Serialization(format!("non-finite value in verdict `{}`", v.name)));
        }
    }
    Ok(())
}

fn csv_rows(w: &mut csv::Writer<Vec<u8>>, report: &Report) -> Result<()> {
    for v in &report.verdicts {
        w.write_record([report.scenario.as_str(), &v.name, &fmt_f64(v.lhs), &fmt_f64(v.rhs), &fmt_f64(v.margin), if v.holds { "true" } else { "false" }])
            .map_err(|e| Error::Serialization(e.to_string()))?;
    }
    Ok(())
}

const CSV_HEADER: [&str; 6] = ["scenario", "name", "lhs", "rhs", "margin", "holds"];

/// Serializes a report. CSV carries one row per verdict.
pub fn emit_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            check_finite(report)?;
            Ok(to_json(report)?.into_bytes())
        }
        ReportFormat::Csv => emit_suite(std::slice::from_ref(report), format),
    }
}

/// Serializes several reports: a JSON array, or CSV rows under one header.
pub fn emit_suite(reports: &[Report], format: ReportFormat) -> Result<Vec<u8>> {
    for r in reports {
        check_finite(r)?;
    }
    match format {
        ReportFormat::Json => Ok(to_json(&reports)?.into_bytes()),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(|e| Error::Serialization(e.to_string()))?;
            for r in reports {
                csv_rows(&mut w, r)?;
            }
            w.into_inner().map_err(|e| Error::Serialization(e.to_string()))
        }
    }
}

/// SHA-256 of the JSON report with `runtime_ms` zeroed, as lowercase hex.
pub fn determinism_hash(report: &Report) -> Result<String> {
    let mut r = report.clone();
    r.runtime_ms = 0;
    let bytes = emit_report(&r, ReportFormat::Json)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Hash over the per-report hashes, in order.
pub fn suite_hash(reports: &[Report]) -> Result<String> {
    let mut h = Sha256::new();
    for r in reports {
        h.update(determinism_hash(r)?.as_bytes());
    }
    Ok(hex::encode(h.finalize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn sample() -> Report {
        Report {
            scenario: "demo".into(),
            description: "d".into(),
            inputs: ScenarioConfig {
                name: "demo".into(),
                space: None,
                params: BTreeMap::from([("a".into(), 0.1)]),
                seed: 3,
                budgets: BTreeMap::new(),
                schedules: BTreeMap::new(),
                output_path: None,
            },
            verdicts: vec![BoundVerdict::new("v", 1.0 / 3.0, 0.1).with("k", 2.0), BoundVerdict::new("w", 0.0, 1e-300)],
            estimates: vec![Estimate::scalar("e", std::f64::consts::PI, None)],
            notes: vec![],
            runtime_ms: 17,
            toolkit_version: "0.1.0".into(),
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = String::from_utf8(emit_report(&r, ReportFormat::Json).unwrap()).unwrap();
        assert!(text.contains("3.3333333333333331e-1"));
        assert_eq!(Report::from_json(&text).unwrap(), r);
    }

    #[test]
    fn csv_shape() {
        let r = sample();
        let text = String::from_utf8(emit_report(&r, ReportFormat::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), r.verdicts.len() + 1);
        assert_eq!(lines[0], "scenario,name,lhs,rhs,margin,holds");
    }

    #[test]
    fn hash_ignores_runtime() {
        let a = sample();
        let mut b = sample();
        b.runtime_ms = 999;
        assert_eq!(determinism_hash(&a).unwrap(), determinism_hash(&b).unwrap());
        b.verdicts[0].lhs += 1e-15;
        assert_ne!(determinism_hash(&a).unwrap(), determinism_hash(&b).unwrap());
    }

    #[test]
    fn bad_format() {
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
