//! JSON reports with sorted keys.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// An operation declined its input as designed, e.g. the injectivity
    /// statement over a field that is not a number field.
    Refused,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witnesses: Vec<String>,
    pub dims: Option<Value>,
    pub matrix: Option<Vec<Vec<String>>>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Check {
        Check {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            witnesses: Vec::new(),
            dims: None,
            matrix: None,
        }
    }

    pub fn failed(name: impl Into<String>, why: impl Into<String>) -> Check {
        Check::new(name, false).witness(why)
    }

    pub fn witness(mut self, w: impl Into<String>) -> Check {
        self.witnesses.push(w.into());
        self
    }

    pub fn dims(mut self, d: Value) -> Check {
        self.dims = Some(d);
        self
    }

    pub fn matrix(mut self, m: Vec<Vec<String>>) -> Check {
        self.matrix = Some(m);
        self
    }

    pub fn failing(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Map<String, Value>,
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn pass(&self) -> bool {
        !self.checks.iter().any(Check::failing)
    }

    /// Pretty JSON; `serde_json` maps are ordered by key, so the output is
    /// byte-stable for equal reports.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Refused => "REFUSED",
            };
            out.push(format!("{tag} {}", c.name));
            if c.status != Status::Pass {
                for w in &c.witnesses {
                    out.push(format!("    {w}"));
                }
            }
        }
        let failed = self.checks.iter().filter(|c| c.failing()).count();
        out.push(format!("{}: {} checks, {failed} failed", self.command, self.checks.len()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted() {
        let r = Report {
            command: "x".into(),
            config: Map::new(),
            checks: vec![Check::new("a", true).dims(serde_json::json!({"z": 1, "a": 2}))],
            runtime_ms: 0,
        };
        let j = r.to_json();
        assert!(j.find("\"checks\"").unwrap() < j.find("\"command\"").unwrap());
        assert!(j.find("\"a\": 2").unwrap() < j.find("\"z\": 1").unwrap());
    }
}
