use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::convergence::ConvergenceTable;

pub const SCHEMA_VERSION: u32 = 1;

/// Assumptions every report carries verbatim.
pub const ASSUMPTIONS: &[&str] = &[
    "gauge: g = conj(mu) for rho = |mu|^2 and g = exp(conj(H)) for rho = exp(2 Re H); the weighted Green's function is G_rho(z,w) = g(z) conj(g(w)) G(z,w)",
    "distance: Skwarczynski distance d(z,w) = sqrt(1 - |K(z,w)| / sqrt(K(z,z) K(w,w)))",
    "delta-normalization: discrete Green's functions solve P_rho G = -(pi/2) delta_h, delta_h = 1/cell_area at the source snapped to the nearest node, so rho = 1 reproduces G = -ln|z-w| + harmonic",
    "finite differences: closed-form mixed derivatives use the 16-point central Wirtinger stencil on g(z) conj(g(w)) h(z,w); grid mixed derivatives use source-shifted solves at 1 and 2 cells with Richardson extrapolation",
    "approximating weights: the sequence mu_j is mu restricted to each exhaustion step",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Comparison {
    fn symbol(self) -> &'static str {
        match self {
            Comparison::Less => "<",
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        }
    }
}

/// One pass/fail line, judged as `value <comparison> tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, comparison: Comparison, tolerance: f64) -> Self {
        let passed = match comparison {
            Comparison::Less => value < tolerance,
            Comparison::AtMost => value <= tolerance,
            Comparison::AtLeast => value >= tolerance,
        };
        Self {
            name: name.into(),
            value,
            comparison,
            tolerance,
            passed,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Comparison::Less, tolerance)
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Comparison::AtLeast, tolerance)
    }

    /// A boolean property, recorded as a count of violations `<= 0`.
    pub fn holds(name: impl Into<String>, violations: usize) -> Self {
        Self::new(name, violations as f64, Comparison::AtMost, 0.0)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:.3e} {} {:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.comparison.symbol(),
            self.tolerance
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub z: [f64; 2],
    pub w: [f64; 2],
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub name: String,
    pub count: usize,
    pub max: f64,
    pub median: f64,
}

impl Summary {
    /// `None` when `values` has no finite entry.
    pub fn of(name: impl Into<String>, values: &[f64]) -> Option<Self> {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        Some(Self {
            name: name.into(),
            count: n,
            max: v[n - 1],
            median,
        })
    }
}

/// Numbers are written with `{:.17e}`, which round-trips `f64` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub file: String,
    pub columns: Vec<String>,
    rows: Vec<String>,
}

impl CsvTable {
    pub fn new(file: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            file: file.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns.len(), "row width of {}", self.file);
        let cells: Vec<String> = values.iter().map(|v| format!("{v:.17e}")).collect();
        self.rows.push(cells.join(","));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub experiment: String,
    pub config: ExperimentConfig,
    pub assumptions: Vec<String>,
    /// Column names of every CSV file written next to the report.
    pub csv_columns: BTreeMap<String, Vec<String>>,
    pub records: Vec<PointRecord>,
    pub summaries: Vec<Summary>,
    pub convergence: Vec<ConvergenceTable>,
    pub checks: Vec<Check>,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            experiment: config.experiment.name().to_string(),
            config: config.clone(),
            assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
            csv_columns: BTreeMap::new(),
            records: Vec::new(),
            summaries: Vec::new(),
            convergence: Vec::new(),
            checks: Vec::new(),
            diagnostics: BTreeMap::new(),
            notes: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn summarize(&mut self, name: &str, values: &[f64]) {
        if let Some(s) = Summary::of(name, values) {
            self.summaries.push(s);
        }
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.diagnostics.insert(key.to_string(), v);
    }

    pub fn assume(&mut self, text: impl Into<String>) {
        self.assumptions.push(text.into());
    }
}

/// Report plus the CSV tables it documents.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub tables: Vec<CsvTable>,
}

impl RunOutput {
    pub fn new(report: Report) -> Self {
        Self {
            report,
            tables: Vec::new(),
        }
    }

    pub fn add_table(&mut self, t: CsvTable) {
        self.report.csv_columns.insert(t.file.clone(), t.columns.clone());
        self.tables.push(t);
    }

    pub fn table(&self, file: &str) -> Option<&CsvTable> {
        self.tables.iter().find(|t| t.file == file)
    }

    pub fn passed(&self) -> bool {
        self.report.passed
    }

    /// Writes `report.json` and every CSV table into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(&self.report).map_err(io::Error::other)?;
        fs::write(dir.join("report.json"), json + "\n")?;
        for t in &self.tables {
            fs::write(dir.join(&t.file), t.to_csv())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lines_cite_tolerance() {
        let c = Check::below("residual", 2e-6, 1e-5);
        assert!(c.passed);
        assert_eq!(c.to_string(), "PASS residual: 2.000e-6 < 1.000e-5");
        assert!(!Check::at_least("order", 1.2, 1.5).passed);
        assert!(!Check::below("nan", f64::NAN, 1.0).passed);
    }

    #[test]
    fn csv_round_trips_f64() {
        let mut t = CsvTable::new("a.csv", &["x", "y"]);
        t.push(&[0.1, -1.0 / 3.0]);
        let text = t.to_csv();
        let row = text.lines().nth(1).unwrap();
        let parsed: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(parsed, vec![0.1, -1.0 / 3.0]);
    }

    #[test]
    fn summary_median() {
        let s = Summary::of("r", &[3.0, 1.0, f64::NAN, 2.0, 10.0]).unwrap();
        assert_eq!((s.count, s.max, s.median), (4, 10.0, 2.5));
        assert!(Summary::of("r", &[f64::NAN]).is_none());
    }
}
