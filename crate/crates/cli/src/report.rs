//! Report records and their JSONL / CSV encodings.

use serde::Serialize;
use std::io::Write;

use crate::CliError;

/// One check. `anchor` names the identity or bound being tested.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: String,
    pub check_id: String,
    pub anchor: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Record {
    /// A check of the form `residual ≤ tol`. NaN residuals fail.
    pub fn new(
        suite: &str,
        check_id: impl Into<String>,
        anchor: &str,
        value: f64,
        reference: Option<f64>,
        residual: f64,
        tol: f64,
    ) -> Self {
        Record {
            suite: suite.to_string(),
            check_id: check_id.into(),
            anchor: anchor.to_string(),
            value,
            reference,
            residual,
            tol,
            pass: residual <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub suite: String,
    pub checks: usize,
    pub failed: usize,
}

pub fn summarize(records: &[Record]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    for r in records {
        match rows.iter_mut().find(|s| s.suite == r.suite) {
            Some(s) => {
                s.checks += 1;
                s.failed += usize::from(!r.pass);
            }
            None => rows.push(SummaryRow { suite: r.suite.clone(), checks: 1, failed: usize::from(!r.pass) }),
        }
    }
    rows
}

pub fn write_jsonl(mut w: impl Write, records: &[Record]) -> Result<(), CliError> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(w, "{line}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

pub fn write_csv<T: Serialize>(w: impl Write, rows: &[T]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        assert!(!Record::new("s", "c", "a", 0.0, None, f64::NAN, 1.0).pass);
        assert!(Record::new("s", "c", "a", 0.0, None, 0.5, 1.0).pass);
    }

    #[test]
    fn encodings() {
        let recs = vec![
            Record::new("algebra", "x", "a", 1.0, Some(1.0), 0.0, 1e-12),
            Record::new("algebra", "y", "b", 2.0, None, 3.0, 1e-12),
        ];
        let mut j = Vec::new();
        write_jsonl(&mut j, &recs).unwrap();
        let text = String::from_utf8(j).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.contains("\"reference\":null"));
        let mut c = Vec::new();
        write_csv(&mut c, &recs).unwrap();
        let text = String::from_utf8(c).unwrap();
        assert!(text.starts_with("suite,check_id,anchor,value,reference,residual,tol,pass"));
        let s = summarize(&recs);
        assert_eq!(s, vec![SummaryRow { suite: "algebra".into(), checks: 2, failed: 1 }]);
    }
}
