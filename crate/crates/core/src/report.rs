//! Versioned JSON reports shared by the command line and the Python bindings.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::classify::{Classification, ClassifyOptions, Evidence};
use crate::group::SchottkyConfig;
use crate::lab::{Outcome, WitnessReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: SchottkyConfig,
    pub inputs: Value,
    pub verdicts: Value,
    pub witnesses: Value,
    pub exhaustion: Value,
    pub timings: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, config: SchottkyConfig) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command: command.into(),
            config,
            inputs: Value::Object(Map::new()),
            verdicts: Value::Object(Map::new()),
            witnesses: Value::Array(Vec::new()),
            exhaustion: Value::Array(Vec::new()),
            timings: Value::Object(Map::new()),
        }
    }

    /// Pretty JSON with a trailing newline. Key order is fixed, so equal reports give equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are serializable");
        s.push('\n');
        s
    }

    /// Adds a search report under `witnesses` or `exhaustion`.
    pub fn record_search<C: Serialize>(&mut self, kind: &str, label: &str, report: &WitnessReport<C>) {
        let entry = match &report.outcome {
            Outcome::Witness { word } => (
                &mut self.witnesses,
                json!({
                    "kind": kind,
                    "label": label,
                    "word": word,
                    "words_examined": report.words_examined,
                    "verification": report.verification,
                }),
            ),
            Outcome::Exhausted { max_len } => (
                &mut self.exhaustion,
                json!({ "kind": kind, "label": label, "max_len": max_len, "words_examined": report.words_examined }),
            ),
        };
        entry.0.as_array_mut().expect("lists").push(entry.1);
        let total = self.timings.get("words_examined").and_then(Value::as_u64).unwrap_or(0) + report.words_examined;
        self.timings["words_examined"] = json!(total);
    }
}

fn evidence_text(property: &str, e: Evidence) -> String {
    match e {
        Evidence::Witnessed => format!("{property}-witnessed"),
        Evidence::Refuted => format!("certified-not-{property}"),
        Evidence::Exhausted => format!("{property}-not-found"),
        Evidence::Untested => format!("{property}-untested"),
    }
}

pub fn classification_report(config: SchottkyConfig, c: &Classification, options: &ClassifyOptions) -> Report {
    let mut r = Report::new("classify", config);
    r.inputs = json!({
        "sequence": c.sequence,
        "depth": c.depth,
        "max_len": options.max_len,
        "max_window": options.max_window,
        "target": options.target,
    });
    let max_distance = c.conical.distances.iter().copied().fold(0.0, f64::max);
    r.verdicts = json!({
        "point": c.point,
        "controlled": {
            "evidence": evidence_text("controlled", c.evidence.controlled),
            "certification": c.certification,
            "recurrence": c.recurrence,
        },
        "concentration": { "evidence": evidence_text("concentration", c.evidence.concentration), "target": c.target },
        "separation": {
            "evidence": evidence_text("separation", c.evidence.separation),
            "directions": c.separation.iter().map(|s| json!({
                "label": s.label,
                "direction": s.report.verification.as_ref().and_then(|v| v.direction),
            })).collect::<Vec<_>>(),
        },
        "conical": {
            "evidence": evidence_text("conical", c.evidence.conical),
            "summary": c.conical.evidence,
            "threshold": c.conical.threshold,
            "last_quartile_minimum": c.conical.last_quartile_minimum,
            "max_distance": max_distance,
            "distances": c.conical.distances,
        },
        "hierarchy": c.hierarchy,
    });
    r.record_search("controlled-chain", "U1", &c.chain);
    for s in &c.concentration {
        r.record_search("concentration", &s.label, &s.report);
    }
    for s in &c.separation {
        r.record_search("separation", &s.label, &s.report);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::Outcome;

    #[test]
    fn schema_and_fields() {
        let mut r = Report::new("decode", SchottkyConfig::default());
        let exhausted: WitnessReport<()> = WitnessReport { outcome: Outcome::Exhausted { max_len: 3 }, words_examined: 53, verification: None };
        r.record_search("concentration", "U1", &exhausted);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        for key in ["command", "config", "inputs", "verdicts", "witnesses", "exhaustion", "timings"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["exhaustion"][0]["max_len"], 3);
        assert_eq!(v["timings"]["words_examined"], 53);
        assert_eq!(r.to_json(), r.clone().to_json());
    }
}
