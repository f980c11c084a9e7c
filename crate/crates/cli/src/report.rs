//! Report documents and their json/markdown renderings.

use std::fmt::Write as _;

use gqs_core::algebras::Algebra;
use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: Verdict,
    pub details: String,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, ok: bool, details: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            verdict: Verdict::from_bool(ok),
            details: details.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, details: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            verdict: Verdict::Skipped,
            details: details.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraDescriptor {
    pub name: String,
    pub family: String,
    pub m: usize,
    pub n: usize,
    pub dim: usize,
    pub rank: usize,
    pub matrix_size: usize,
}

impl AlgebraDescriptor {
    pub fn of(alg: &Algebra) -> Self {
        AlgebraDescriptor {
            name: alg.tag.to_string(),
            family: alg.tag.family.to_string(),
            m: alg.tag.m,
            n: alg.tag.n,
            dim: alg.dim(),
            rank: alg.rank(),
            matrix_size: alg.tag.matrix_size(),
        }
    }
}

/// A table attached to a report (roots, coefficients, signatures, ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Section {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub algebra: AlgebraDescriptor,
    pub verdict: Verdict,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<Section>,
    /// Only present with `--timing`, so default reports stay byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ReportDocument {
    pub fn new(command: &str, alg: &Algebra, checks: Vec<CheckRecord>, sections: Vec<Section>) -> Self {
        let verdict = Verdict::from_bool(checks.iter().all(|c| c.verdict != Verdict::Fail));
        ReportDocument {
            tool: "gqs",
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            algebra: AlgebraDescriptor::of(alg),
            verdict,
            checks,
            sections,
            timing: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let a = &self.algebra;
        let _ = writeln!(out, "# gqs {}\n", self.command);
        let _ = writeln!(out, "- tool version: {}", self.tool_version);
        let _ = writeln!(
            out,
            "- algebra: {} (dim {}, rank {}, matrix size {})",
            a.name, a.dim, a.rank, a.matrix_size
        );
        let _ = writeln!(
            out,
            "- verdict: {} ({} pass, {} fail, {} skipped)",
            self.verdict.as_str(),
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Skipped)
        );
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "- elapsed: {} ms", t.elapsed_ms);
        }
        if !self.checks.is_empty() {
            out.push_str("\n## Checks\n\n");
            let rows: Vec<Vec<String>> = self
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), c.verdict.as_str().to_string(), c.details.clone()])
                .collect();
            markdown_table(&mut out, &["name", "verdict", "details"], &rows);
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n## {}\n", s.title);
            let cols: Vec<&str> = s.columns.iter().map(String::as_str).collect();
            markdown_table(&mut out, &cols, &s.rows);
        }
        out
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', "<br>")
}

fn markdown_table(out: &mut String, columns: &[&str], rows: &[Vec<String>]) {
    let header: Vec<String> = columns.iter().map(|c| cell(c)).collect();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(columns.len()));
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| cell(c)).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gqs_core::algebras::{build, FamilyTag};

    #[test]
    fn any_failure_fails_the_report() {
        let alg = build(FamilyTag::b(0, 1).unwrap()).unwrap();
        let ok = vec![CheckRecord::new("a", true, ""), CheckRecord::skipped("b", "")];
        assert!(ReportDocument::new("x", &alg, ok.clone(), vec![]).passed());
        let mut bad = ok;
        bad.push(CheckRecord::new("c", false, "boom"));
        let doc = ReportDocument::new("x", &alg, bad, vec![]);
        assert!(!doc.passed());
        assert!(doc.to_json().contains("\"verdict\": \"fail\""));
    }

    #[test]
    fn markdown_escapes_pipes() {
        let alg = build(FamilyTag::b(0, 1).unwrap()).unwrap();
        let mut s = Section::new("T", &["a|b"]);
        s.push(vec!["sl(1|1)".into()]);
        let md = ReportDocument::new("x", &alg, vec![], vec![s]).to_markdown();
        assert!(md.contains("| a\\|b |") && md.contains("| sl(1\\|1) |"));
    }
}
