//! CSV form of a sweep.

use std::io::{Read, Write};
use std::path::Path;

use super::{MethodTag, SweepResult, SweepRow};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["tau", "tau_over_pi", "E_N", "diagnostic", "method"];

fn csv_err(path: &Path, source: csv::Error) -> Error {
    if source.is_io_error() {
        if let csv::ErrorKind::Io(e) = source.into_kind() {
            return Error::Io {
                path: path.to_path_buf(),
                source: e,
            };
        }
        unreachable!("is_io_error checked");
    }
    Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the header and one record per row. Numbers use shortest round-trip
/// scientific notation, so reading the file back recovers every bit.
pub fn write_csv_to<W: Write>(
    result: &SweepResult,
    sink: W,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for row in &result.rows {
        w.write_record([
            format!("{:e}", row.tau),
            format!("{:e}", row.tau_over_pi),
            format!("{:e}", row.e_n),
            format!("{:e}", row.diagnostic),
            row.method.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    write_csv_to(result, std::io::BufWriter::new(file)).map_err(|e| csv_err(path, e))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn csv_parse_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    parse_err(line, e.to_string())
}

/// Reads a sweep written by [`write_csv_to`]. Parse errors carry the file line.
pub fn read_csv_from<R: Read>(source: R) -> Result<SweepResult> {
    let mut r = csv::Reader::from_reader(source);
    let header = r.headers().map_err(csv_parse_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(parse_err(
            1,
            format!("expected header `{}`", CSV_HEADER.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_parse_err)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad number `{}`", &rec[k])))
        };
        rows.push(SweepRow {
            tau: num(0)?,
            tau_over_pi: num(1)?,
            e_n: num(2)?,
            diagnostic: num(3)?,
            method: rec[4]
                .parse()
                .map_err(|e: Error| parse_err(line, e.to_string()))?,
        });
    }
    Ok(SweepResult { rows })
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<SweepResult> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    read_csv_from(std::io::BufReader::new(file))
}

impl std::str::FromStr for MethodTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "analytic" => Ok(MethodTag::Analytic),
            "numeric" => Ok(MethodTag::Numeric),
            other => Err(Error::Domain(format!("unknown method tag `{other}`"))),
        }
    }
}
