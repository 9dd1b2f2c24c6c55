use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

/// One checked step of a proof pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    /// The mathematical statement this step is checking.
    pub anchor: String,
    pub witness: Value,
    pub pass: bool,
}

/// Ordered proof steps plus the limits they were checked to.
///
/// Timings are kept beside the report but never serialized, so two runs
/// produce byte-identical JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofReport {
    pub claim: String,
    pub steps: Vec<Step>,
    pub pass: bool,
    pub limits: BTreeMap<String, Value>,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl PartialEq for ProofReport {
    fn eq(&self, other: &Self) -> bool {
        self.claim == other.claim
            && self.steps == other.steps
            && self.pass == other.pass
            && self.limits == other.limits
    }
}

impl ProofReport {
    pub fn new(claim: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            steps: Vec::new(),
            pass: true,
            limits: BTreeMap::new(),
            timings: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, anchor: &str, witness: Value, pass: bool, started: Instant) {
        self.timings.push((name.to_string(), started.elapsed()));
        self.steps.push(Step {
            name: name.to_string(),
            anchor: anchor.to_string(),
            witness,
            pass,
        });
        self.pass &= pass;
    }

    pub fn limit(&mut self, key: &str, value: impl Into<Value>) {
        self.limits.insert(key.to_string(), value.into());
    }

    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn first_failure(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Plain-text rendering, one line per step.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.claim);
        for s in &self.steps {
            out.push_str(&format!(
                "  [{}] {}: {}\n        {}\n",
                if s.pass { "ok" } else { "FAIL" },
                s.name,
                s.anchor,
                s.witness
            ));
        }
        for (k, v) in &self.limits {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        out.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        out
    }
}
