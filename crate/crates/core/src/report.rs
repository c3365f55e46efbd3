//! Structured pass/fail records shared by every verification suite.

use std::fmt::Display;

use serde::Serialize;
use serde_json::{json, Value};

/// One checked claim. `pass` holds exactly when `expected == computed` as
/// canonical strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub claim_id: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `expected` against `computed` by exact textual equality.
    pub fn check(
        &mut self,
        claim_id: impl Into<String>,
        expected: impl Display,
        computed: impl Display,
    ) -> bool {
        let expected = expected.to_string();
        let computed = computed.to_string();
        let pass = expected == computed;
        self.entries.push(ReportEntry {
            claim_id: claim_id.into(),
            expected,
            computed,
            pass,
        });
        pass
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    /// Prefixes every claim id, for aggregation.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for e in &mut self.entries {
            e.claim_id = format!("{prefix}{}", e.claim_id);
        }
        self
    }

    pub fn pass_count(&self) -> usize {
        self.entries.iter().filter(|e| e.pass).count()
    }

    pub fn fail_count(&self) -> usize {
        self.entries.len() - self.pass_count()
    }

    pub fn all_pass(&self) -> bool {
        self.fail_count() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn get(&self, claim_id: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.claim_id == claim_id)
    }

    /// `{"entries": [...], "pass": p, "fail": f}`.
    pub fn to_json(&self) -> Value {
        json!({ "entries": self.entries, "pass": self.pass_count(), "fail": self.fail_count() })
    }

    /// One line per entry, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let tag = if e.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{tag} {} expected={} computed={}\n",
                e.claim_id, e.expected, e.computed
            ));
        }
        out.push_str(&format!(
            "pass={} fail={}\n",
            self.pass_count(),
            self.fail_count()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_json() {
        let mut r = VerificationReport::new();
        assert!(r.check("a", 1, 1));
        assert!(!r.check("b", 2, 3));
        assert_eq!((r.pass_count(), r.fail_count()), (1, 1));
        let j = r.to_json();
        assert_eq!(j["fail"], 1);
        assert_eq!(j["entries"][1]["computed"], "3");
    }
}
