//! Plain-text run reports: ordered `key: value` lines.

use std::fmt;

/// Values below this magnitude print as `0`.
const PRINT_ZERO: f64 = 1e-12;

/// Formats with at most 12 significant digits, shortest form.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < PRINT_ZERO {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub fn format_floats(xs: &[f64]) -> String {
    xs.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    entries: Vec<(String, String)>,
}

impl RunReport {
    /// Starts with a `version` line.
    pub fn new() -> Self {
        Self {
            entries: vec![("version".into(), env!("CARGO_PKG_VERSION").into())],
        }
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn push_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.push(key, format_float(value))
    }

    pub fn push_floats(&mut self, key: &str, values: &[f64]) -> &mut Self {
        self.push(key, format_floats(values))
    }

    pub fn extend(&mut self, other: &RunReport) -> &mut Self {
        self.entries
            .extend(other.entries.iter().filter(|(k, _)| k != "version").cloned());
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// First value stored under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl Default for RunReport {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}
