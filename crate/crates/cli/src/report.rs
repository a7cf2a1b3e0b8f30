//! Plain-text reports and the artifact manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One assertion of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// The statement being checked, in words.
    pub expected: String,
    pub observed: String,
    pub status: Status,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            status: Status::from_bool(ok),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: expected {}; observed {}",
            self.status.label(),
            self.name,
            self.expected,
            self.observed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub title: String,
    /// Plain statement of the mathematical result the experiment targets.
    pub statement: String,
    pub checks: Vec<Check>,
    /// Named preformatted tables.
    pub tables: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, statement: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            statement: statement.into(),
            ..Report::default()
        }
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn table(&mut self, name: impl Into<String>, header: &[&str], rows: &[Vec<String>]) {
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for r in rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let fmt_row = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut s = fmt_row(header.to_vec());
        s.push('\n');
        for r in rows {
            s.push_str(&fmt_row(r.iter().map(String::as_str).collect()));
            s.push('\n');
        }
        self.tables.push((name.into(), s));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn render(&self, files: &[PathBuf]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.title);
        let _ = writeln!(s, "{}", "=".repeat(self.title.len()));
        let _ = writeln!(s, "\nTarget: {}\n", self.statement);
        if !self.checks.is_empty() {
            let _ = writeln!(s, "Checks:");
            for c in &self.checks {
                let _ = writeln!(s, "  {}", c.line());
            }
            let _ = writeln!(s);
        }
        for (name, table) in &self.tables {
            let _ = writeln!(s, "{name}:");
            for line in table.lines() {
                let _ = writeln!(s, "  {line}");
            }
            let _ = writeln!(s);
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s, "Notes:");
            for n in &self.notes {
                let _ = writeln!(s, "  - {n}");
            }
            let _ = writeln!(s);
        }
        if !files.is_empty() {
            let _ = writeln!(s, "Files:");
            for f in files {
                let _ = writeln!(s, "  {}", f.display());
            }
        }
        let _ = writeln!(s, "\nOverall: {}", if self.all_pass() { "PASS" } else { "FAIL" });
        s
    }
}

/// Files written by an experiment, relative to `output_dir`, and its checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub preset: String,
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

impl Manifest {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn paths(&self) -> impl Iterator<Item = PathBuf> + '_ {
        self.files.iter().map(|f| self.output_dir.join(f))
    }

    pub fn missing(&self) -> Vec<PathBuf> {
        self.paths().filter(|p| !p.is_file()).collect()
    }
}

/// Collects files while an experiment runs, then writes `report.txt`.
#[derive(Debug)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    /// Absolute path for `name`, recorded in the manifest.
    pub fn path(&mut self, name: &str) -> PathBuf {
        let rel = PathBuf::from(name);
        if !self.files.contains(&rel) {
            self.files.push(rel);
        }
        self.dir.join(name)
    }

    pub fn record(&mut self, abs: &Path) {
        if let Ok(rel) = abs.strip_prefix(&self.dir) {
            let rel = rel.to_path_buf();
            if !self.files.contains(&rel) {
                self.files.push(rel);
            }
        }
    }

    pub fn finish(mut self, preset: &str, report: &Report) -> CliResult<Manifest> {
        let report_path = self.path("report.txt");
        let listed: Vec<PathBuf> = self
            .files
            .iter()
            .filter(|f| f.as_os_str() != "report.txt")
            .cloned()
            .collect();
        std::fs::write(report_path, report.render(&listed))?;
        Ok(Manifest {
            preset: preset.to_string(),
            output_dir: self.dir,
            files: self.files,
            checks: report.checks.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment_and_verdict() {
        let mut r = Report::new("T", "something holds");
        r.table("tab", &["a", "long"], &[vec!["1".into(), "2".into()]]);
        r.check(Check::new("c", "x", "y", true));
        assert!(r.all_pass());
        r.check(Check::new("d", "x", "y", false));
        let text = r.render(&[]);
        assert!(text.contains("  a  long\n  1     2\n"));
        assert!(text.contains("FAIL d: expected x; observed y"));
        assert!(text.trim_end().ends_with("Overall: FAIL"));
    }
}
