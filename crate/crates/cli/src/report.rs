//! Line-oriented `key=value` reports with an optional CSV table.
//!
//! Non-finite numbers never appear raw: they print as the sentinels `INF`,
//! `-INF` and `NAN`. Bounds carry sign, base-10 log magnitude and the plain
//! value when it is representable as a normal `f64`.

use std::fmt::Write as _;
use std::path::Path;

use eigpert::LogScalar;

use crate::CliError;

pub const UNREPRESENTABLE: &str = "UNREPRESENTABLE";

/// Shortest round-trip scientific form, or a sentinel.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NAN".into()
    } else if x == f64::INFINITY {
        "INF".into()
    } else if x == f64::NEG_INFINITY {
        "-INF".into()
    } else {
        format!("{x:e}")
    }
}

/// One report line: a kind and ordered fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn text(mut self, key: &str, value: impl Into<String>) -> Self {
        let v: String = value.into();
        // Keep one record per line and one token per value.
        let v = v.replace(char::is_whitespace, "_");
        self.fields.push((key.into(), v));
        self
    }

    pub fn int(self, key: &str, value: usize) -> Self {
        self.text(key, value.to_string())
    }

    pub fn float(self, key: &str, value: f64) -> Self {
        self.text(key, fmt_f64(value))
    }

    pub fn opt_float(self, key: &str, value: Option<f64>) -> Self {
        match value {
            Some(v) => self.float(key, v),
            None => self.text(key, "NONE"),
        }
    }

    pub fn flag(self, key: &str, value: bool) -> Self {
        self.text(key, if value { "true" } else { "false" })
    }

    /// `{key}_sign`, `{key}_log10` and `{key}` (plain value or sentinel).
    pub fn bound(self, key: &str, b: LogScalar) -> Self {
        let plain = match b.to_f64() {
            Some(v) => fmt_f64(v),
            None if b.log10() == f64::INFINITY => "INF".into(),
            None => UNREPRESENTABLE.into(),
        };
        self.text(&format!("{key}_sign"), b.sign().to_string())
            .text(&format!("{key}_log10"), fmt_log10(b.log10()))
            .text(key, plain)
    }

    pub fn opt_bound(self, key: &str, b: Option<LogScalar>) -> Self {
        match b {
            Some(b) => self.bound(key, b),
            None => self
                .text(&format!("{key}_sign"), "NONE")
                .text(&format!("{key}_log10"), "NONE")
                .text(key, "NONE"),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Fixed six-decimal log magnitudes keep reports stable across platforms.
fn fmt_log10(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        fmt_f64(x)
    }
}

/// A command's full output.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub command: String,
    pub records: Vec<Record>,
    pub summary: Vec<(String, String)>,
    /// Number of soundness verdicts issued.
    pub verified: usize,
    pub violations: Vec<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn summary(&mut self, key: &str, value: impl Into<String>) {
        self.summary.push((key.into(), value.into()));
    }

    /// Records one verdict; a failure is listed under `violation` lines.
    pub fn verdict(&mut self, sound: bool, what: impl FnOnce() -> String) -> bool {
        self.verified += 1;
        if !sound {
            self.violations.push(what());
        }
        sound
    }

    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command={}", self.command).unwrap();
        for r in &self.records {
            write!(out, "record kind={}", r.kind).unwrap();
            for (k, v) in &r.fields {
                write!(out, " {k}={v}").unwrap();
            }
            out.push('\n');
        }
        write!(out, "summary records={}", self.records.len()).unwrap();
        for (k, v) in &self.summary {
            write!(out, " {k}={v}").unwrap();
        }
        writeln!(out, " verified={} violations={}", self.verified, self.violations.len()).unwrap();
        for v in &self.violations {
            writeln!(out, "violation {}", v.replace('\n', " ")).unwrap();
        }
        let status = match (self.verified, self.is_sound()) {
            (0, _) => "unverified",
            (_, true) => "sound",
            (_, false) => "unsound",
        };
        writeln!(out, "status={status}").unwrap();
        out
    }

    /// All records as one table; columns are `kind` followed by every key in
    /// order of first appearance. Missing cells are empty.
    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut columns: Vec<&str> = Vec::new();
        for r in &self.records {
            for (k, _) in &r.fields {
                if !columns.contains(&k.as_str()) {
                    columns.push(k);
                }
            }
        }
        let io = |e: csv::Error| CliError::Input(format!("cannot write {}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        w.write_record(std::iter::once("kind").chain(columns.iter().copied())).map_err(io)?;
        for r in &self.records {
            let row = columns.iter().map(|c| r.get(c).unwrap_or(""));
            w.write_record(std::iter::once(r.kind.as_str()).chain(row)).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinels_replace_non_finite() {
        assert_eq!(fmt_f64(f64::INFINITY), "INF");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-INF");
        assert_eq!(fmt_f64(f64::NAN), "NAN");
        assert_eq!(fmt_f64(0.005), "5e-3");
        assert_eq!(fmt_f64(0.1 + 0.2).parse::<f64>().unwrap(), 0.1 + 0.2);
    }

    #[test]
    fn bound_fields() {
        let r = Record::new("x").bound("b", LogScalar::from_parts(1, -320.5));
        assert_eq!(r.get("b"), Some(UNREPRESENTABLE));
        assert_eq!(r.get("b_log10"), Some("-320.500000"));
        let z = Record::new("x").bound("b", LogScalar::ZERO);
        assert_eq!((z.get("b"), z.get("b_sign"), z.get("b_log10")), (Some("0e0"), Some("0"), Some("-INF")));
        let inf = Record::new("x").bound("b", LogScalar::INFINITY);
        assert_eq!(inf.get("b"), Some("INF"));
    }

    #[test]
    fn render_status() {
        let mut rep = RunReport::new("test");
        rep.push(Record::new("a").int("index", 1).text("tag", "two words"));
        assert!(rep.render().contains("record kind=a index=1 tag=two_words\n"));
        assert!(rep.render().ends_with("status=unverified\n"));
        rep.verdict(true, String::new);
        assert!(rep.render().ends_with("status=sound\n"));
        rep.verdict(false, || "index=1 observed=2".into());
        let text = rep.render();
        assert!(text.contains("violation index=1 observed=2\n") && text.ends_with("status=unsound\n"));
    }
}
