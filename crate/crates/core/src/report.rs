//! The common report schema: one record per check with the compared
//! dimension vectors, sorted canonically so identical inputs produce
//! byte-identical JSON.

use serde::Serialize;

use crate::window::Window;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub subject: String,
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn dims(check_id: &str, subject: String, lhs: Vec<i64>, rhs: Vec<i64>) -> Self {
        let pass = lhs == rhs;
        CheckRecord { check_id: check_id.to_string(), subject, lhs, rhs, pass, note: None }
    }

    pub fn flag(check_id: &str, subject: String, pass: bool, note: Option<String>) -> Self {
        CheckRecord { check_id: check_id.to_string(), subject, lhs: Vec::new(), rhs: Vec::new(), pass, note }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub input_digest: String,
    pub window: Window,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    pub records: Vec<CheckRecord>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(command: &str, input_digest: String, window: Window, cap: Option<u32>) -> Self {
        VerificationReport {
            command: command.to_string(),
            input_digest,
            window,
            cap,
            records: Vec::new(),
            overall: true,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.overall &= record.pass;
        self.records.push(record);
    }

    /// Canonical order: record identity, then subject. Report assembly may
    /// happen in any order; emission may not.
    pub fn finalize(&mut self) {
        self.records.sort_by(|a, b| {
            a.check_id.cmp(&b.check_id).then_with(|| a.subject.cmp(&b.subject))
        });
        self.overall = self.records.iter().all(|r| r.pass);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} (window {}{})\n",
            self.command,
            if self.overall { "PASS" } else { "FAIL" },
            self.window,
            self.cap.map(|c| format!(", cap {c}")).unwrap_or_default()
        ));
        for r in &self.records {
            let dims = if r.lhs.is_empty() && r.rhs.is_empty() {
                String::new()
            } else {
                format!(" lhs={:?} rhs={:?}", r.lhs, r.rhs)
            };
            let note = r.note.as_deref().map(|n| format!(" [{n}]")).unwrap_or_default();
            out.push_str(&format!(
                "  {} {:<28} {}{}{}\n",
                if r.pass { "ok  " } else { "FAIL" },
                r.check_id,
                r.subject,
                dims,
                note
            ));
        }
        out.push_str(&format!("overall: {}\n", if self.overall { "pass" } else { "fail" }));
        out
    }

    /// 0 pass, 1 verification failure (input and cap errors map elsewhere).
    pub fn exit_code(&self) -> i32 {
        if self.overall {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_sorted_and_overall_joined() {
        let mut report = VerificationReport::new("verify-duality", "sha256:x".into(), Window::new(0, 1, -1, 1), None);
        report.push(CheckRecord::dims("b.check", "t=0".into(), vec![1], vec![1]));
        report.push(CheckRecord::dims("a.check", "t=0".into(), vec![1], vec![2]));
        report.finalize();
        assert_eq!(report.records[0].check_id, "a.check");
        assert!(!report.overall);
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn json_deterministic() {
        let mut a = VerificationReport::new("hilbert", "sha256:y".into(), Window::new(0, 1, 0, 1), Some(4));
        a.push(CheckRecord::dims("dim", "x=0,t=0".into(), vec![1], vec![1]));
        a.finalize();
        let mut b = VerificationReport::new("hilbert", "sha256:y".into(), Window::new(0, 1, 0, 1), Some(4));
        b.push(CheckRecord::dims("dim", "x=0,t=0".into(), vec![1], vec![1]));
        b.finalize();
        assert_eq!(a.to_json(), b.to_json());
    }
}
