//! Check/report types shared by the verification suites and the CLI, plus a
//! JSON writer that serializes doubles with 17 significant digits.

use serde::Serialize;
use serde_json::ser::Formatter;
use std::io;

/// One verification check: a measured quantity against a budget.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub budget: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    /// Pass when `measured <= budget`.
    pub fn le(name: impl Into<String>, measured: f64, budget: f64) -> Self {
        CheckResult { name: name.into(), measured, budget, pass: measured <= budget, note: None }
    }

    /// Informational entry, always passing.
    pub fn info(name: impl Into<String>, measured: f64, note: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            budget: f64::INFINITY,
            pass: true,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, checks: Vec<CheckResult>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport { suite: suite.into(), checks, pass }
    }
}

/// serde_json formatter printing every f64 with 17 significant digits, so
/// output is bit-faithful and byte-deterministic.
pub struct SigDigitFormatter;

impl Formatter for SigDigitFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value == value.trunc() && value.abs() < 1e15 {
            // integral values keep a compact, still-exact form
            write!(writer, "{:.1}", value)
        } else {
            write!(writer, "{:.16e}", value)
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize to a JSON string with 17-significant-digit doubles.
pub fn to_json_17<T: Serialize>(value: &T) -> crate::error::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("JSON is UTF-8"))
}

/// Pretty variant used for files.
pub fn to_json_17_pretty<T: Serialize>(value: &T) -> crate::error::Result<String> {
    // serde_json's pretty formatter is separate from the float formatter;
    // compact 17-digit output is canonical, pretty is for humans.
    let compact = to_json_17(value)?;
    let v: serde_json::Value = serde_json::from_str(&compact)?;
    Ok(serde_json::to_string_pretty(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: f64,
        }
        let s = to_json_17(&S { a: 0.1, b: 2.0 }).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("2.0"), "{s}");
        // round-trips exactly
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["a"].as_f64().unwrap(), 0.1);
    }

    #[test]
    fn check_result_semantics() {
        assert!(CheckResult::le("x", 1e-7, 1e-6).pass);
        assert!(!CheckResult::le("x", 2e-6, 1e-6).pass);
        let r = SuiteReport::new("s", vec![CheckResult::le("a", 0.0, 1.0)]);
        assert!(r.pass);
    }
}
