//! Flat result rows shared by the experiments and the command-line runner.

use std::io::Write;

use serde::Serialize;

/// One measured quantity. CSV columns: `experiment,knot,r,quantity,value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    /// Knot name, polynomial or other subject; empty when not applicable.
    pub knot: String,
    pub r: Option<u32>,
    pub quantity: String,
    pub value: f64,
}

impl ReportRow {
    pub fn new(experiment: &str, knot: &str, r: Option<u32>, quantity: &str, value: f64) -> Self {
        Self {
            experiment: experiment.to_string(),
            knot: knot.to_string(),
            r,
            quantity: quantity.to_string(),
            value,
        }
    }
}

pub const CSV_HEADER: [&str; 5] = ["experiment", "knot", "r", "quantity", "value"];

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> csv::Result<()> {
    // explicit header so an empty report still has one
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ReportRow], out: W) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(out, rows)
}
