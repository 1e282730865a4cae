//! Check records and suite reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: Value,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(id: impl Into<String>, params: Value, measured: f64, tolerance: f64) -> Self {
        CheckRecord {
            id: id.into(),
            params,
            measured,
            tolerance,
            pass: measured <= tolerance && measured.is_finite(),
            note: None,
        }
    }

    /// Exact check: `measured` is 0 on success and 1 on failure.
    pub fn exact(id: impl Into<String>, params: Value, ok: bool) -> Self {
        CheckRecord {
            id: id.into(),
            params,
            measured: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
            note: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(id: impl Into<String>, params: Value, reason: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            params,
            measured: f64::NAN,
            tolerance: 0.0,
            pass: false,
            note: Some(reason.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl SuiteReport {
    /// Sorts records by id (stable) and sets the overall verdict.
    pub fn new(suite: impl Into<String>, seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.into(),
            seed,
            checks,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Pretty JSON. Non-finite numbers serialize as `null`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn verdict_and_order() {
        let r = SuiteReport::new(
            "x",
            1,
            vec![
                CheckRecord::at_most("b", json!({}), 0.5, 1.0),
                CheckRecord::exact("a", json!({}), false),
            ],
        );
        assert!(!r.pass);
        assert_eq!(r.checks[0].id, "a");
        assert_eq!(r.failures().count(), 1);
        let nan = CheckRecord::at_most("c", json!({}), f64::NAN, 1.0);
        assert!(!nan.pass);
        assert!(SuiteReport::new("y", 1, vec![nan]).to_json().contains("null"));
    }
}
