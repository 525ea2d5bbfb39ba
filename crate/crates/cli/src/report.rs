//! Tabular results: CSV with LF line endings, and a JSON mirror.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "CANTOR_OUT_DIR";

/// One experiment's rows. The first column is always `experiment`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub experiment: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(experiment: &str, columns: &[&str]) -> Self {
        let columns = std::iter::once("experiment").chain(columns.iter().copied());
        Table {
            experiment: experiment.to_string(),
            columns: columns.map(String::from).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; the experiment id is prepended.
    pub fn push(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len() + 1, self.columns.len(), "row width for {}", self.experiment);
        let mut row = Vec::with_capacity(self.columns.len());
        row.push(self.experiment.clone());
        row.extend(cells);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    /// `{"experiment", "columns", "rows": [{column: cell}]}` with every cell
    /// kept as the same string the CSV holds.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), Value::String(v.clone())))
                    .collect();
                Value::Object(map)
            })
            .collect();
        json!({ "experiment": self.experiment, "columns": self.columns, "rows": rows })
    }

    pub fn to_json_text(&self) -> Result<String, CliError> {
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        Ok(text)
    }

    /// Writes `path` (CSV) and the same path with a `.json` extension.
    pub fn write_files(&self, path: &Path) -> Result<PathBuf, CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_csv()?)?;
        let json_path = path.with_extension("json");
        fs::write(&json_path, self.to_json_text()?)?;
        Ok(json_path)
    }
}

/// Where a table goes: an explicit path, else `$CANTOR_OUT_DIR/<id>.csv`,
/// else standard output.
pub fn destination(explicit: Option<&Path>, experiment: &str) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        std::env::var_os(OUT_DIR_VAR)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{experiment}.csv")))
    })
}

pub fn emit(table: &Table, explicit: Option<&Path>, json_stdout: bool) -> Result<(), CliError> {
    match destination(explicit, &table.experiment) {
        Some(path) => {
            let json_path = table.write_files(&path)?;
            eprintln!("wrote {} and {}", path.display(), json_path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            if json_stdout {
                out.write_all(table.to_json_text()?.as_bytes())?;
            } else {
                out.write_all(&table.to_csv()?)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Shortest round-trip form, so reruns reproduce the same bytes.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

pub fn flag(b: bool) -> String {
    b.to_string()
}

/// Space-separated integers.
pub fn joined<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_lf_terminated_and_quoted() {
        let mut t = Table::new("demo", &["cantor", "value"]);
        t.push(vec!["b=3;D=0,2".into(), "1".into()]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "experiment,cantor,value\ndemo,\"b=3;D=0,2\",1\n");
        let json = t.to_json();
        assert_eq!(json["rows"][0]["cantor"], "b=3;D=0,2");
        assert_eq!(json["columns"][0], "experiment");
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0, 1e-300, 0.4142135623730951] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }
}
