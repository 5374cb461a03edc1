use std::io::Write;
use std::path::Path;

use opo_epr::format::{fmt_real, Real};
use opo_epr::OpoParams;
use serde_json::{json, Value};

use crate::{params, CliError};

pub const SCHEMA: &str = "1";

/// A grid of reals with named columns.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<f64>>,
    pub mode: Option<&'static str>,
    pub params: OpoParams,
}

impl Table {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut head = format!("# schema: {SCHEMA}\n# command: {}\n", self.command);
        if let Some(mode) = self.mode {
            head.push_str(&format!("# mode: {mode}\n"));
        }
        head.push_str(&format!("# params: {}\n", params::to_comment(&self.params)));
        let mut w = csv::Writer::from_writer(head.into_bytes());
        w.write_record(self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| fmt_real(x))).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<Real>> = self.rows.iter().map(|r| r.iter().map(|&x| Real(x)).collect()).collect();
        let mut v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
            "params": params::to_json(&self.params),
        });
        if let Some(mode) = self.mode {
            v["mode"] = json!(mode);
        }
        v
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

/// Stamps a report object with the schema version and command name.
pub fn report(command: &'static str, mut body: Value) -> Value {
    body["schema"] = json!(SCHEMA);
    body["command"] = json!(command);
    body
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}
