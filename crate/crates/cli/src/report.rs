//! Experiment reports: comma-separated rows plus a one-line summary.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReportRow {
    pub id: String,
    pub experiment: String,
    pub parameters: String,
    pub vertices: Option<usize>,
    pub bins: Option<usize>,
    pub colors: Option<usize>,
    pub chi: Option<usize>,
    pub opt: Option<usize>,
    pub ratio: Option<String>,
    pub bound: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    rows: Vec<ReportRow>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    /// Rows ordered by experiment id.
    pub fn rows(&self) -> Vec<&ReportRow> {
        let mut rows: Vec<&ReportRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.id.cmp(&b.id));
        rows
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn write_to<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record([
                "id",
                "experiment",
                "parameters",
                "vertices",
                "bins",
                "colors",
                "chi",
                "opt",
                "ratio",
                "bound",
                "pass",
            ])?;
        }
        for row in self.rows() {
            w.serialize(row)?;
        }
        let mut out = w.into_inner().map_err(|e| anyhow::anyhow!("{}", e.error()))?;
        writeln!(
            out,
            "# summary: rows={} passed={} failed={} status={}",
            self.rows.len(),
            self.rows.len() - self.failures(),
            self.failures(),
            if self.passed() { "pass" } else { "fail" }
        )?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}
