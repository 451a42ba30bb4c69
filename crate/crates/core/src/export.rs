//! CSV and JSON shapes for tables, convergence rows and sampling tallies.
//!
//! JSON rationals are always `"p/q"` strings, `"4/1"` included, and every
//! decimal rendering carries the number of digits it was rounded to. The CSV
//! layouts are listed in `docs/formats.md`.

use std::fmt;
use std::io::Write;

use serde::{Serialize, Serializer};

use crate::bounds::BoundReport;
use crate::error::Error;
use crate::limits::{ConstantRow, ConvergenceRow};
use crate::montecarlo::BatchTally;
use crate::rational::ExactQ;
use crate::stats::{Method, ProbTable};

/// Fractional digits in the `decimal_50dp` column.
pub const CSV_PLACES: u32 = 50;

/// A single `n` or an inclusive range, for rows that sum over `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowIndex {
    Single(u32),
    Range(u32, u32),
}

impl fmt::Display for RowIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowIndex::Single(n) => write!(f, "{n}"),
            RowIndex::Range(a, b) => write!(f, "{a}..{b}"),
        }
    }
}

impl Serialize for RowIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RowIndex::Single(n) => s.serialize_u32(*n),
            range => s.collect_str(range),
        }
    }
}

/// A decimal rendering with its precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decimal {
    pub value: String,
    /// fractional digits
    pub places: u32,
}

impl Decimal {
    pub fn fixed(v: &ExactQ, places: u32) -> Decimal {
        Decimal { value: v.to_fixed(places), places }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: RowIndex,
    pub quantity: String,
    pub value: ExactQ,
    pub decimal: Decimal,
    pub method: Method,
}

impl TableRow {
    pub fn new(n: RowIndex, quantity: impl Into<String>, value: ExactQ, method: Method, places: u32) -> TableRow {
        let decimal = Decimal::fixed(&value, places);
        TableRow { n, quantity: quantity.into(), value, decimal, method }
    }
}

pub fn table_rows(table: &ProbTable, places: u32) -> Vec<TableRow> {
    table
        .values
        .iter()
        .map(|(&n, v)| TableRow::new(RowIndex::Single(n), table.quantity.to_string(), v.clone(), table.method, places))
        .collect()
}

fn csv_error(e: impl fmt::Display) -> Error {
    Error::Output(e.to_string())
}

/// `n, quantity, numerator, denominator, decimal_50dp`.
pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "quantity", "numerator", "denominator", "decimal_50dp"]).map_err(csv_error)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.quantity.clone(),
            r.value.numer().to_string(),
            r.value.denom().to_string(),
            r.value.to_fixed(CSV_PLACES),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

/// `n, parity, n2_kappa_e, n2_q, n2_kappa_alt, mid_distance`, exact, followed
/// by the same four values as decimals with `places` fractional digits.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], places: u32, out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "parity",
        "n2_kappa_e",
        "n2_q",
        "n2_kappa_alt",
        "mid_distance",
        "n2_kappa_e_decimal",
        "n2_q_decimal",
        "n2_kappa_alt_decimal",
        "mid_distance_decimal",
    ])
    .map_err(csv_error)?;
    for r in rows {
        let values = [&r.value_n2_kappa_e, &r.value_n2_q, &r.value_n2_kappa_alt, &r.enclosure_mid_distance];
        let mut record = vec![r.n.to_string(), r.parity.to_string()];
        record.extend(values.iter().map(|v| v.to_string()));
        record.extend(values.iter().map(|v| v.to_fixed(places)));
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

/// `worker, batch, samples, hits`.
pub fn write_batches_csv<W: Write>(batches: &[BatchTally], out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    for b in batches {
        w.serialize(b).map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

/// `constant, D, lo, hi, width, decimal_mid`.
pub fn write_limits_csv<W: Write>(rows: &[ConstantRow], out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["constant", "D", "lo", "hi", "width", "decimal_mid"]).map_err(csv_error)?;
    for r in rows {
        w.write_record([
            r.constant.to_string(),
            r.d.to_string(),
            r.lo.to_string(),
            r.hi.to_string(),
            r.width.to_string(),
            r.decimal_mid.clone(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

/// `claim_id, holds, checks, worst_margin, counterexamples`, one row per report.
pub fn write_verify_csv<W: Write>(reports: &[BoundReport], out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["claim_id", "holds", "checks", "worst_margin", "counterexamples"]).map_err(csv_error)?;
    for r in reports {
        w.write_record([
            r.claim_id.clone(),
            r.holds.to_string(),
            r.range_checked.len().to_string(),
            r.worst_margin.as_ref().map(ToString::to_string).unwrap_or_default(),
            r.counterexamples.len().to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{Engine, Quantity};

    #[test]
    fn table_csv_layout() {
        let engine = Engine::new(20);
        let table = engine.table(Quantity::KappaAlt, Method::Enumeration, 3..=4).unwrap();
        let mut buf = Vec::new();
        write_table_csv(&table_rows(&table, 10), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,quantity,numerator,denominator,decimal_50dp");
        assert_eq!(lines[1], format!("3,kappa_alt,1,3,0.{}", "3".repeat(50)));
        assert!(lines[2].starts_with("4,kappa_alt,7,24,0.29166"));
    }

    #[test]
    fn batches_have_a_header() {
        let mut buf = Vec::new();
        let b = BatchTally { worker: 0, batch: 0, samples: 10, hits: 3 };
        write_batches_csv(&[b], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "worker,batch,samples,hits\n0,0,10,3\n");
    }

    #[test]
    fn row_index_rendering() {
        assert_eq!(RowIndex::Range(0, 15).to_string(), "0..15");
        assert_eq!(RowIndex::Single(7).to_string(), "7");
    }
}
