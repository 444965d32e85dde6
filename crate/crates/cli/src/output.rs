use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use num_bigint::BigUint;
use serde::Serialize;

use digraph_parking::enumerate::{IdentityReport, ScanRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct CountRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    /// Decimal digits; counts can outgrow JSON numbers.
    pub count: String,
    pub instances: u64,
    pub millis: u64,
}

impl CountRow {
    pub fn new(family: &str, n: usize, m: usize, count: &BigUint, instances: u64, millis: u64) -> Self {
        CountRow { family: family.to_string(), n, m, count: count.to_string(), instances, millis }
    }
}

pub struct Emitter {
    pub pretty: bool,
    pub format: Format,
    pub deterministic: bool,
}

impl Emitter {
    pub fn value<T: Serialize + ?Sized>(&self, v: &T) -> Result<()> {
        let text = if self.pretty { serde_json::to_string_pretty(v)? } else { serde_json::to_string(v)? };
        let mut stdout = std::io::stdout().lock();
        writeln!(stdout, "{text}")?;
        Ok(())
    }

    fn csv(&self, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
        let mut stdout = std::io::stdout().lock();
        writeln!(stdout, "{}", header.join(","))?;
        for row in rows {
            writeln!(stdout, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn count_rows(&self, rows: &[CountRow]) -> Result<()> {
        let millis = |r: &CountRow| if self.deterministic { 0 } else { r.millis };
        match self.format {
            Format::Csv => self.csv(
                &["family", "n", "m", "count", "instances", "millis"],
                rows.iter().map(|r| {
                    vec![
                        r.family.clone(),
                        r.n.to_string(),
                        r.m.to_string(),
                        r.count.clone(),
                        r.instances.to_string(),
                        millis(r).to_string(),
                    ]
                }),
            ),
            Format::Json => {
                let rows: Vec<CountRow> = rows
                    .iter()
                    .map(|r| CountRow { family: r.family.clone(), count: r.count.clone(), millis: millis(r), ..*r })
                    .collect();
                self.value(&rows)
            }
        }
    }

    pub fn identity(&self, report: &IdentityReport) -> Result<()> {
        match self.format {
            Format::Csv => self.csv(
                &["identity", "n", "m", "lhs", "rhs", "checked", "failures", "pass"],
                report.rows.iter().map(|r| {
                    vec![
                        report.identity.to_string(),
                        r.n.to_string(),
                        r.m.to_string(),
                        r.lhs.to_string(),
                        r.rhs.to_string(),
                        r.checked.to_string(),
                        r.failures.to_string(),
                        r.pass.to_string(),
                    ]
                }),
            ),
            Format::Json => self.value(report),
        }
    }

    pub fn scan(&self, rows: &[ScanRow]) -> Result<()> {
        match self.format {
            Format::Csv => self.csv(
                &["n", "m", "shape", "labelled", "sink", "source", "sign", "path", "star"],
                rows.iter().map(|r| {
                    vec![
                        r.n.to_string(),
                        r.m.to_string(),
                        r.shape.clone(),
                        r.labelled.to_string(),
                        r.sink.to_string(),
                        r.source.to_string(),
                        r.sign.to_string(),
                        r.path.to_string(),
                        r.star.to_string(),
                    ]
                }),
            ),
            Format::Json => self.value(rows),
        }
    }
}
