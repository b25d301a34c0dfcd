//! Benchmark suite runner with CSV and HTML reports.

use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{compare_source, CompareConfig, Mode, Outcome};
use crate::corpus::CorpusCase;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchCase {
    pub name: String,
    pub source: String,
    pub expected: Option<String>,
    pub timeout: Duration,
    pub mode: Mode,
}

impl From<&CorpusCase> for BenchCase {
    fn from(c: &CorpusCase) -> Self {
        BenchCase {
            name: c.name.to_string(),
            source: c.source.to_string(),
            expected: c.expected.map(str::to_string),
            timeout: Duration::from_secs(c.timeout_s),
            mode: c.mode,
        }
    }
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    name: String,
    file: String,
    expected: Option<String>,
    timeout: Option<f64>,
    #[serde(default)]
    mode: Option<Mode>,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("duplicate case name {0}")]
    Duplicate(String),
    #[error("bad timeout for {0}")]
    BadTimeout(String),
}

/// Reads a manifest (`name,file,expected,timeout[,mode]`, files relative
/// to it).
pub fn load_manifest(path: &Path) -> Result<Vec<BenchCase>, SuiteError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out: Vec<BenchCase> = Vec::new();
    for row in rdr.deserialize() {
        let row: ManifestRow = row?;
        if out.iter().any(|c| c.name == row.name) {
            return Err(SuiteError::Duplicate(row.name));
        }
        let secs = row.timeout.unwrap_or(5.0);
        if !(secs > 0.0 && secs.is_finite()) {
            return Err(SuiteError::BadTimeout(row.name));
        }
        out.push(BenchCase {
            source: std::fs::read_to_string(dir.join(&row.file))?,
            name: row.name,
            expected: row.expected.filter(|e| !e.is_empty()),
            timeout: Duration::from_secs_f64(secs),
            mode: row.mode.unwrap_or(Mode::Auto),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub variant: String,
    pub result: String,
    pub ms_parse: f64,
    pub ms_algebraize: f64,
    pub ms_delin: f64,
    pub ms_eliminate: f64,
    pub ms_bounds: f64,
    /// `pass`, `fail`, `timeout`, `error` or `done` (no expectation).
    pub status: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub fn run_case(case: &BenchCase, base: &CompareConfig) -> BenchRow {
    let cfg = CompareConfig {
        timeout: case.timeout,
        mode: case.mode,
        ..base.clone()
    };
    match compare_source(&case.source, &cfg) {
        Err(e) => BenchRow {
            name: case.name.clone(),
            variant: "error".into(),
            result: e.to_string(),
            ms_parse: 0.0,
            ms_algebraize: 0.0,
            ms_delin: 0.0,
            ms_eliminate: 0.0,
            ms_bounds: 0.0,
            status: "error".into(),
        },
        Ok(r) => {
            let variant = match &r.outcome {
                Outcome::ExactRatio { .. } => "exact-ratio",
                Outcome::Bounds { .. } => "bounds",
                Outcome::Inconclusive { .. } => "inconclusive",
            };
            let status = match (&case.expected, r.result.as_str()) {
                (Some(e), got) if e == got => "pass",
                (_, "timeout") => "timeout",
                (Some(_), _) => "fail",
                (None, _) => "done",
            };
            let t = &r.timings;
            BenchRow {
                name: case.name.clone(),
                variant: variant.into(),
                result: r.result.clone(),
                ms_parse: t.parse,
                ms_algebraize: t.algebraize,
                ms_delin: t.delinearize,
                ms_eliminate: t.eliminate,
                ms_bounds: t.bounds,
                status: status.into(),
            }
        }
    }
}

/// Runs every case in order; a failing case never stops the suite.
pub fn run_benchmarks(suite: &[BenchCase], base: &CompareConfig) -> BenchReport {
    BenchReport {
        rows: suite.iter().map(|c| run_case(c, base)).collect(),
    }
}

impl BenchReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.status == "pass").count()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record([
                "name",
                "variant",
                "result",
                "ms_parse",
                "ms_algebraize",
                "ms_delin",
                "ms_eliminate",
                "ms_bounds",
                "status",
            ])
            .expect("in-memory write");
        }
        for r in &self.rows {
            let mut rounded = r.clone();
            for x in [
                &mut rounded.ms_parse,
                &mut rounded.ms_algebraize,
                &mut rounded.ms_delin,
                &mut rounded.ms_eliminate,
                &mut rounded.ms_bounds,
            ] {
                *x = (*x * 1000.0).round() / 1000.0;
            }
            w.serialize(rounded).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_html(&self) -> String {
        let esc = |s: &str| {
            s.replace('&', "&amp;")
                .replace('<', "&lt;")
                .replace('>', "&gt;")
                .replace('"', "&quot;")
        };
        let mut h = String::new();
        h.push_str(
            "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>geocompare benchmark</title>\n\
             <style>body{font-family:sans-serif}table{border-collapse:collapse}\
             td,th{border:1px solid #999;padding:2px 8px}td.n{text-align:right}\
             .pass{background:#cfc}.fail,.error{background:#fcc}.timeout{background:#ffc}</style>\n\
             </head><body>\n",
        );
        let _ = writeln!(h, "<h1>geocompare benchmark</h1>\n<p>{} of {} passed</p>", self.passed(), self.rows.len());
        h.push_str(
            "<table>\n<tr><th>name</th><th>variant</th><th>result</th><th>parse</th><th>algebraize</th>\
             <th>delin</th><th>eliminate</th><th>bounds</th><th>total ms</th><th>status</th></tr>\n",
        );
        for r in &self.rows {
            let total = r.ms_parse + r.ms_algebraize + r.ms_delin + r.ms_eliminate + r.ms_bounds;
            let _ = write!(h, "<tr class=\"{}\"><td>{}</td><td>{}</td><td>{}</td>", esc(&r.status), esc(&r.name), esc(&r.variant), esc(&r.result));
            for x in [r.ms_parse, r.ms_algebraize, r.ms_delin, r.ms_eliminate, r.ms_bounds, total] {
                let _ = write!(h, "<td class=\"n\">{x:.1}</td>");
            }
            let _ = writeln!(h, "<td>{}</td></tr>", esc(&r.status));
        }
        h.push_str("</table>\n</body></html>\n");
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite() {
        let r = run_benchmarks(&[], &CompareConfig::default());
        assert_eq!(r.rows.len(), 0);
        assert_eq!(
            r.to_csv(),
            "name,variant,result,ms_parse,ms_algebraize,ms_delin,ms_eliminate,ms_bounds,status\n"
        );
        assert!(r.to_html().contains("0 of 0 passed"));
    }

    #[test]
    fn rows_and_escaping() {
        let cases = [
            BenchCase::from(&crate::corpus::PYTHAGORAS),
            BenchCase {
                name: "broken".into(),
                source: "point A; frobnicate A".into(),
                expected: Some("m = 1".into()),
                timeout: Duration::from_secs(1),
                mode: Mode::Auto,
            },
            BenchCase {
                name: "wrong".into(),
                expected: Some("m = 2".into()),
                ..BenchCase::from(&crate::corpus::PYTHAGORAS)
            },
        ];
        let r = run_benchmarks(&cases, &CompareConfig::default());
        let st: Vec<_> = r.rows.iter().map(|r| r.status.as_str()).collect();
        assert_eq!(st, ["pass", "error", "fail"]);
        let csv = r.to_csv();
        assert!(csv.lines().nth(1).unwrap().starts_with("pythagoras,exact-ratio,m = 1,"));
        assert_eq!(csv.lines().count(), 4);
        let html = r.to_html();
        assert!(html.contains("1 of 3 passed"));
        assert!(!html.contains("<script"));
    }

    #[test]
    fn manifest_matches_corpus() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/suite.csv");
        let m = load_manifest(&path).unwrap();
        let builtin: Vec<BenchCase> = crate::corpus::SUITE.iter().map(BenchCase::from).collect();
        assert_eq!(m, builtin);
    }
}
