//! Outcome-file format: one header line, then one record per line as
//! tab-separated ASCII decimal integers, newline-terminated.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use epsilometer::OutcomeRecord;

use crate::Failure;

pub const HEADER: &str = "model_id\ttrial_id\tb\tb_hat";

fn parse_bit(field: &str, name: &str, row: usize) -> Result<bool, Failure> {
    match field {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Failure::Data(format!(
            "row {row}: {name} must be 0 or 1, got {other:?}"
        ))),
    }
}

fn parse_id(field: &str, name: &str, row: usize) -> Result<u64, Failure> {
    field.parse().map_err(|_| {
        Failure::Data(format!(
            "row {row}: {name} must be an unsigned integer, got {field:?}"
        ))
    })
}

/// Reads an outcome file. Row numbers in errors are 1-based over the data
/// rows (the header is row 0). An empty data section is valid.
pub fn read_outcomes(path: &Path) -> Result<Vec<OutcomeRecord>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == HEADER => {}
        Some(h) => {
            return Err(Failure::Data(format!(
                "bad header in {}: expected {HEADER:?}, got {h:?}",
                path.display()
            )))
        }
        None => return Err(Failure::Data(format!("{} is empty", path.display()))),
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Failure::Data(format!(
                "row {row}: expected 4 tab-separated fields, got {}",
                fields.len()
            )));
        }
        records.push(OutcomeRecord {
            model_id: parse_id(fields[0], "model_id", row)?,
            trial_id: parse_id(fields[1], "trial_id", row)?,
            b: parse_bit(fields[2], "b", row)?,
            b_hat: parse_bit(fields[3], "b_hat", row)?,
        });
    }
    Ok(records)
}

/// Writes an outcome file in the format [`read_outcomes`] accepts.
pub fn write_outcomes(path: &Path, records: &[OutcomeRecord]) -> Result<(), Failure> {
    let file = fs::File::create(path)
        .map_err(|e| Failure::Data(format!("cannot create {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    let io_err = |e: std::io::Error| Failure::Data(format!("cannot write {}: {e}", path.display()));
    writeln!(w, "{HEADER}").map_err(io_err)?;
    for r in records {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            r.model_id,
            r.trial_id,
            u8::from(r.b),
            u8::from(r.b_hat)
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
