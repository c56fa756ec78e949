//! Machine-readable verification reports.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// An exact computation that contradicts a published display.
    Deviation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Deviation => "deviation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub k: Option<usize>,
    pub suite: String,
    pub entries: Vec<CheckEntry>,
    pub exit_status: i32,
}

impl RunReport {
    pub fn new(suite: &str, k: Option<usize>) -> Self {
        RunReport {
            version: VERSION.into(),
            k,
            suite: suite.into(),
            entries: Vec::new(),
            exit_status: 0,
        }
    }

    pub fn push(&mut self, id: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.entries.push(CheckEntry {
            id: id.into(),
            status,
            detail: detail.into(),
        });
    }

    /// Records `pass` if `ok`, `fail` otherwise.
    pub fn check(&mut self, id: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(id, status, detail);
    }

    pub fn extend(&mut self, other: RunReport) {
        self.entries.extend(other.entries);
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    /// No failures; with `strict_paper`, no deviations either.
    pub fn passed(&self, strict_paper: bool) -> bool {
        self.entries.iter().all(|e| match e.status {
            Status::Pass => true,
            Status::Fail => false,
            Status::Deviation => !strict_paper,
        })
    }

    /// Sets and returns the exit status: 0 if passed, 2 otherwise.
    pub fn finish(&mut self, strict_paper: bool) -> i32 {
        self.exit_status = if self.passed(strict_paper) { 0 } else { 2 };
        self.exit_status
    }

    /// One aligned line per entry followed by a summary line.
    pub fn to_text(&self) -> String {
        let width = self.entries.iter().map(|e| e.id.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for e in &self.entries {
            let pad = width - e.id.chars().count();
            out.push_str(&format!("{:<9} {}{}", e.status.to_string(), e.id, " ".repeat(pad)));
            if !e.detail.is_empty() {
                out.push_str("  ");
                out.push_str(&e.detail);
            }
            out = out.trim_end().to_string();
            out.push('\n');
        }
        let k = self.k.map(|k| format!(" k={k}")).unwrap_or_default();
        out.push_str(&format!(
            "{}{k}: {} pass, {} fail, {} deviation\n",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Deviation)
        ));
        out
    }
}

/// `"1 term"`, `"3 terms"`.
pub fn count_noun(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_mode_flips_deviations() {
        let mut r = RunReport::new("demo", Some(2));
        r.check("a", true, "");
        r.push("b", Status::Deviation, "sign differs");
        assert_eq!(r.finish(false), 0);
        assert_eq!(r.finish(true), 2);
        r.check("c", false, "nonzero");
        assert_eq!(r.finish(false), 2);
    }

    #[test]
    fn text_layout() {
        let mut r = RunReport::new("demo", None);
        r.check("short", true, "");
        r.check("longer-id", false, "why");
        let text = r.to_text();
        assert_eq!(text.lines().next().unwrap(), "pass      short");
        assert_eq!(text.lines().nth(1).unwrap(), "fail      longer-id  why");
        assert!(text.ends_with("demo: 1 pass, 1 fail, 0 deviation\n"));
    }

    #[test]
    fn json_shape() {
        let mut r = RunReport::new("demo", Some(3));
        r.check("x", true, "");
        r.finish(false);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["entries"][0]["status"], "pass");
        assert!(v["entries"][0].get("detail").is_none());
        assert_eq!(v["exit_status"], 0);
    }
}
