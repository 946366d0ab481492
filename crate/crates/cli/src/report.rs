use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub value: String,
    pub target: Option<String>,
    pub abs_error: Option<String>,
    pub tail_bound: Option<String>,
    /// "PASS" or "FAIL"; absent for pure data rows
    pub verdict: Option<String>,
}

impl Item {
    pub fn data(id: impl Into<String>, value: impl Into<String>) -> Self {
        Item { id: id.into(), value: value.into(), target: None, abs_error: None, tail_bound: None, verdict: None }
    }

    pub fn passes(&self) -> bool {
        self.verdict.as_deref() != Some("FAIL")
    }
}

pub fn verdict(pass: bool) -> Option<String> {
    Some(if pass { "PASS" } else { "FAIL" }.to_owned())
}

/// Command output. Numbers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub digits_used: u32,
    pub items: Vec<Item>,
    /// Command-specific CSV layout; items are used when absent.
    #[serde(skip)]
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Report {
    pub fn new(command: &str, digits_used: u32) -> Self {
        Report { command: command.to_owned(), params: BTreeMap::new(), digits_used, items: Vec::new(), table: None }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_owned(), value.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(Item::passes)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        match &self.table {
            Some((header, rows)) => {
                w.write_record(header).map_err(io)?;
                for r in rows {
                    w.write_record(r).map_err(io)?;
                }
            }
            None => {
                w.write_record(["id", "value", "target", "abs_error", "tail_bound", "verdict"]).map_err(io)?;
                for it in &self.items {
                    let o = |x: &Option<String>| x.clone().unwrap_or_default();
                    w.write_record([
                        it.id.clone(),
                        it.value.clone(),
                        o(&it.target),
                        o(&it.abs_error),
                        o(&it.tail_bound),
                        o(&it.verdict),
                    ])
                    .map_err(io)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("verify", 120);
        r.param("trunc", 40);
        r.items.push(Item {
            id: "cor3/a=1".into(),
            value: "0.0416666666666666666666666666667".into(),
            target: Some("0.0416666666666666666666666666667".into()),
            abs_error: Some("1.2e-150".into()),
            tail_bound: Some("3.4e-100".into()),
            verdict: verdict(true),
        });
        r.items.push(Item::data("x=1", "0.5"));
        r
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let r = sample();
        let s = r.to_json();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn csv_layouts() {
        let mut r = sample();
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("id,value,target,abs_error,tail_bound,verdict\n"));
        assert!(csv.contains("x=1,0.5,,,,\n"));
        r.table = Some((vec!["n".into(), "m".into()], vec![vec!["2".into(), "3".into()]]));
        assert_eq!(r.to_csv().unwrap(), "n,m\n2,3\n");
    }

    #[test]
    fn verdicts() {
        let mut r = sample();
        assert!(r.all_pass());
        r.items[0].verdict = verdict(false);
        assert!(!r.all_pass());
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
