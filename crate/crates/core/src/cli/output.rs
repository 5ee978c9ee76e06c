//! CSV output and read-back.

use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::sweep::SweepRow;

pub const HEADER: [&str; 10] = [
    "length",
    "rate_reference",
    "rate_effective_error",
    "rate_gllp",
    "q_bob",
    "q_bob_delta",
    "chi",
    "chi_delta",
    "e1",
    "e_mu",
];

/// Rounds to 12 significant digits and prints the shortest decimal form.
pub fn format_number(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            format_number(r.length),
            format_number(r.rate_reference),
            opt(r.rate_effective_error),
            opt(r.rate_gllp),
            format_number(r.q_bob),
            format_number(r.q_bob_delta),
            format_number(r.chi),
            format_number(r.chi_delta),
            format_number(r.e1),
            format_number(r.e_mu),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

/// Reads a file produced by [`emit_csv`]. Empty rate cells become `None`.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::DimensionMismatch(format!(
            "unexpected CSV header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        let cell = |i: usize| -> Result<Option<f64>> {
            let s = rec.get(i).unwrap_or("").trim();
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| {
                Error::DimensionMismatch(format!("row {}: `{s}` in {} is not a number", line + 1, HEADER[i]))
            })
        };
        let req = |i: usize| -> Result<f64> {
            cell(i)?.ok_or_else(|| Error::DimensionMismatch(format!("row {}: {} is empty", line + 1, HEADER[i])))
        };
        rows.push(SweepRow {
            length: req(0)?,
            rate_reference: req(1)?,
            rate_effective_error: cell(2)?,
            rate_gllp: cell(3)?,
            q_bob: req(4)?,
            q_bob_delta: req(5)?,
            chi: req(6)?,
            chi_delta: req(7)?,
            e1: req(8)?,
            e_mu: req(9)?,
        });
    }
    Ok(rows)
}

/// Two-column table `visibility,delta`.
pub fn emit_fig3_csv<W: Write>(table: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["visibility", "delta"])?;
    for &(v, d) in table {
        w.write_record([format_number(v), format_number(d)])?;
    }
    w.flush()?;
    Ok(())
}
