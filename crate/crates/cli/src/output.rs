use wqed::observables::{CellRecord, Quantity, SweepResult};

use crate::CliError;

pub const CSV_SCHEMA: &str = "wqed-csv/1";
pub const JSON_SCHEMA: &str = "wqed-json/1";

/// Seventeen significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// A CSV document: `#` comment lines with schema and replay config, then a
/// header row and data rows, LF-terminated.
pub struct CsvDoc {
    comments: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvDoc {
    pub fn new(command: &str, config: &serde_json::Value, header: Vec<&'static str>) -> Self {
        Self {
            comments: vec![format!("schema: {CSV_SCHEMA} {command}"), format!("config: {config}")],
            header,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: String) {
        self.comments.push(line);
    }

    pub fn row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(CliError::io)?;
        for r in &self.rows {
            w.write_record(r).map_err(CliError::io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }
}

pub fn json_doc(command: &str, config: &serde_json::Value, body: impl serde::Serialize) -> Result<String, CliError> {
    let doc = serde_json::json!({ "schema": JSON_SCHEMA, "command": command, "config": config, "result": body });
    let mut s = serde_json::to_string_pretty(&doc).map_err(CliError::io)?;
    s.push('\n');
    Ok(s)
}

/// Flags joined by `;`, with a cell failure as a trailing `error: ...` entry.
pub fn flags(record: &CellRecord) -> String {
    let mut parts = record.flags.clone();
    if let Some(e) = &record.error {
        parts.push(format!("error: {e}"));
    }
    parts.join(";")
}

/// Rows of a single-quantity map: h_over_J, alpha, value, flags, optionally
/// preceded by gamma_over_J.
pub fn map_rows(doc: &mut CsvDoc, result: &SweepResult, quantity: Quantity, with_gamma: bool) {
    let j = result.metadata.params.j;
    for r in &result.records {
        let mut row = Vec::with_capacity(5);
        if with_gamma {
            row.push(num(r.gamma / j));
        }
        row.extend([num(r.h / j), r.alpha.to_string(), opt(r.get(quantity)), flags(r)]);
        doc.row(row);
    }
}

/// Long-format rows of a multi-quantity sweep: N, h_over_J, alpha, quantity, value, flags.
pub fn long_rows(doc: &mut CsvDoc, result: &SweepResult, quantities: &[Quantity]) {
    let j = result.metadata.params.j;
    for r in &result.records {
        for &q in quantities {
            doc.row(vec![r.n.to_string(), num(r.h / j), r.alpha.to_string(), q.name().to_string(), opt(r.get(q)), flags(r)]);
        }
    }
}
