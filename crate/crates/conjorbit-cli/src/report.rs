//! Verification-suite report format.

use serde::{Deserialize, Serialize};

/// One verification check: identifier, topic anchor, outcome, and the
/// measured residual against its tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// Topic label tying the check to the theory it exercises.
    pub anchor: String,
    /// `"pass"` or `"fail"`.
    pub status: String,
    pub residual: f64,
    pub tolerance: f64,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    /// `"pass"` when every record passed.
    pub overall: String,
}

impl SuiteReport {
    pub fn new(seed: u64, mut records: Vec<CheckRecord>) -> SuiteReport {
        records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let overall = if records.iter().all(|r| r.status == "pass") {
            "pass".to_string()
        } else {
            "fail".to_string()
        };
        SuiteReport {
            seed,
            records,
            overall,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == "pass"
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Deterministic serialization: identical for identical seeds.  Wall
    /// clock is the only run-dependent field, so it is zeroed here.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        for r in &mut clone.records {
            r.runtime_ms = 0;
        }
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    /// Fixed-width human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<28} {:<24} {:>6} {:>12} {:>10} {:>8}\n",
            "check", "anchor", "status", "residual", "tolerance", "ms"
        ));
        for r in &self.records {
            out.push_str(&format!(
                "{:<28} {:<24} {:>6} {:>12.3e} {:>10.1e} {:>8}\n",
                r.check_id, r.anchor, r.status, r.residual, r.tolerance, r.runtime_ms
            ));
        }
        out.push_str(&format!("overall: {} (seed {})\n", self.overall, self.seed));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, status: &str, ms: u64) -> CheckRecord {
        CheckRecord {
            check_id: id.into(),
            anchor: "topic".into(),
            status: status.into(),
            residual: 1e-9,
            tolerance: 1e-8,
            runtime_ms: ms,
        }
    }

    #[test]
    fn records_sort_and_overall_aggregates() {
        let report = SuiteReport::new(7, vec![rec("02-b", "pass", 3), rec("01-a", "pass", 1)]);
        assert_eq!(report.records[0].check_id, "01-a");
        assert!(report.passed());
        let failing = SuiteReport::new(7, vec![rec("01-a", "fail", 1)]);
        assert!(!failing.passed());
        assert_eq!(failing.overall, "fail");
    }

    #[test]
    fn canonical_json_hides_wall_clock() {
        let a = SuiteReport::new(7, vec![rec("01-a", "pass", 17)]);
        let b = SuiteReport::new(7, vec![rec("01-a", "pass", 93)]);
        assert_ne!(a.json(), b.json());
        assert_eq!(a.canonical_json(), b.canonical_json());
    }
}
