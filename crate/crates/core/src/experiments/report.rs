use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Version of the JSON and CSV layouts written by [`ExperimentReport`].
pub const SCHEMA_VERSION: u32 = 1;

/// One pass/fail decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// The quantity that was tested.
    pub statistic: f64,
    /// The bound it was compared against.
    pub threshold: f64,
    /// Band width in standard errors, when the check is statistical.
    pub sigma_multiple: Option<f64>,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, passed: bool, statistic: f64, threshold: f64) -> Self {
        Verdict {
            name: name.into(),
            passed,
            statistic,
            threshold,
            sigma_multiple: None,
            detail: String::new(),
        }
    }

    pub fn with_sigma(mut self, k: f64) -> Self {
        self.sigma_multiple = Some(k);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Machine-readable result of one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub params: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    pub verdicts: Vec<Verdict>,
    /// `None` when wall time is suppressed for byte-identical output.
    pub runtime_s: Option<f64>,
    #[serde(skip)]
    columns: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, columns: &[&str]) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.into(),
            params: Map::new(),
            rows: Vec::new(),
            verdicts: Vec::new(),
            runtime_s: None,
            columns: columns.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Appends a row; `row` must serialize to an object holding every column.
    pub fn push_row<T: Serialize>(&mut self, row: &T) -> Result<()> {
        match serde_json::to_value(row)? {
            Value::Object(map) => {
                if let Some(missing) = self.columns.iter().find(|c| !map.contains_key(*c)) {
                    return Err(Error::Output(format!("row is missing column `{missing}`")));
                }
                self.rows.push(map);
                Ok(())
            }
            _ => Err(Error::Output("row must serialize to an object".into())),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }

    /// Rows only, in column order. Numbers use Rust's shortest round-trip form.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(self.columns.iter().map(|c| cell(&row[c])))?;
        }
        out.flush()?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        n: usize,
        mean: f64,
        label: &'static str,
    }

    #[test]
    fn csv_and_json_layout() {
        let mut r = ExperimentReport::new("demo", &["n", "mean", "label"]).param("d", 2);
        r.push_row(&Row { n: 1, mean: 0.5, label: "a" }).unwrap();
        r.push_row(&Row { n: 2, mean: 0.25, label: "b,c" }).unwrap();
        r.verdicts.push(Verdict::new("ok", true, 1.0, 2.0).with_sigma(4.0));
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "n,mean,label\n1,0.5,a\n2,0.25,\"b,c\"\n"
        );
        let mut json = Vec::new();
        r.write_json(&mut json).unwrap();
        let v: Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["experiment"], "demo");
        assert_eq!(v["params"]["d"], 2);
        assert_eq!(v["rows"][1]["mean"], 0.25);
        assert_eq!(v["verdicts"][0]["sigma_multiple"], 4.0);
        assert!(v["runtime_s"].is_null());
        assert!(r.passed());
    }

    #[test]
    fn missing_column_rejected() {
        let mut r = ExperimentReport::new("demo", &["n", "other"]);
        assert!(r.push_row(&Row { n: 1, mean: 0.5, label: "a" }).is_err());
        assert!(r.push_row(&3.0).is_err());
    }
}
