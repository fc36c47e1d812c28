//! CSV and JSON-lines serialisation of spectrum tables.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! `f64`. In CSV an error row carries `error: <message>` in the energy column
//! and leaves `zero_used` and `small_x0_flag` empty; JSON lines use `null`
//! and an extra `error` field.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use spiral_dirac_core::spectrum::Method;

use crate::config::Format;
use crate::error::CliError;
use crate::table::{Outcome, Row, SpectrumTable};

pub const CSV_HEADER: [&str; 13] = [
    "n", "l", "s", "zeta", "beta", "omega", "r0_eff", "rho0", "method", "branch", "zero_used",
    "energy", "small_x0_flag",
];

const ERROR_PREFIX: &str = "error: ";

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn bad(context: &str, message: impl Into<String>) -> CliError {
    CliError::Format { context: context.to_string(), message: message.into() }
}

fn csv_record(row: &Row) -> [String; 13] {
    let (zero_used, energy, flag) = match &row.outcome {
        Outcome::Level { zero_used, energy, small_x0 } => {
            (format_real(*zero_used), format_real(*energy), small_x0.to_string())
        }
        Outcome::Error(msg) => (String::new(), format!("{ERROR_PREFIX}{msg}"), String::new()),
    };
    [
        row.n.to_string(),
        row.l.to_string(),
        row.s.to_string(),
        row.zeta.to_string(),
        format_real(row.beta),
        format_real(row.omega),
        format_opt(row.r0_eff),
        format_opt(row.rho0),
        row.method.name().to_string(),
        row.branch.to_string(),
        zero_used,
        energy,
        flag,
    ]
}

pub fn write_csv<W: Write>(table: &SpectrumTable, out: W) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| bad("csv", e.to_string());
    writer.write_record(CSV_HEADER).map_err(to_err)?;
    for row in &table.rows {
        writer.write_record(csv_record(row)).map_err(to_err)?;
    }
    writer.flush().map_err(|e| bad("csv", e.to_string()))
}

pub fn to_csv_string(table: &SpectrumTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

fn parse_field<T: std::str::FromStr>(line: usize, name: &str, text: &str) -> Result<T, CliError> {
    text.parse().map_err(|_| bad(&format!("csv line {line}"), format!("bad {name} `{text}`")))
}

fn parse_opt(line: usize, name: &str, text: &str) -> Result<Option<f64>, CliError> {
    if text.is_empty() {
        Ok(None)
    } else {
        parse_field(line, name, text).map(Some)
    }
}

fn parse_method(context: &str, text: &str) -> Result<Method, CliError> {
    Method::from_name(text).ok_or_else(|| bad(context, format!("unknown method `{text}`")))
}

pub fn read_csv<R: Read>(input: R) -> Result<SpectrumTable, CliError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| bad("csv header", e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(bad("csv header", "unexpected columns"));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| bad(&format!("csv line {line}"), e.to_string()))?;
        let f = |k: usize| record.get(k).unwrap_or("");
        let outcome = match f(11).strip_prefix(ERROR_PREFIX) {
            Some(msg) => Outcome::Error(msg.to_string()),
            None => Outcome::Level {
                zero_used: parse_field(line, "zero_used", f(10))?,
                energy: parse_field(line, "energy", f(11))?,
                small_x0: parse_field(line, "small_x0_flag", f(12))?,
            },
        };
        rows.push(Row {
            n: parse_field(line, "n", f(0))?,
            l: parse_field(line, "l", f(1))?,
            s: parse_field(line, "s", f(2))?,
            zeta: parse_field(line, "zeta", f(3))?,
            beta: parse_field(line, "beta", f(4))?,
            omega: parse_field(line, "omega", f(5))?,
            r0_eff: parse_opt(line, "r0_eff", f(6))?,
            rho0: parse_opt(line, "rho0", f(7))?,
            method: parse_method(&format!("csv line {line}"), f(8))?,
            branch: parse_field(line, "branch", f(9))?,
            outcome,
        });
    }
    Ok(SpectrumTable { rows })
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    n: u32,
    l: i32,
    s: i32,
    zeta: i32,
    beta: f64,
    omega: f64,
    r0_eff: Option<f64>,
    rho0: Option<f64>,
    method: String,
    branch: i32,
    zero_used: Option<f64>,
    energy: Option<f64>,
    small_x0_flag: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl From<&Row> for JsonRow {
    fn from(row: &Row) -> Self {
        let (zero_used, energy, small_x0_flag, error) = match &row.outcome {
            Outcome::Level { zero_used, energy, small_x0 } => {
                (Some(*zero_used), Some(*energy), Some(*small_x0), None)
            }
            Outcome::Error(msg) => (None, None, None, Some(msg.clone())),
        };
        Self {
            n: row.n,
            l: row.l,
            s: row.s,
            zeta: row.zeta,
            beta: row.beta,
            omega: row.omega,
            r0_eff: row.r0_eff,
            rho0: row.rho0,
            method: row.method.name().to_string(),
            branch: row.branch,
            zero_used,
            energy,
            small_x0_flag,
            error,
        }
    }
}

impl JsonRow {
    fn into_row(self, context: &str) -> Result<Row, CliError> {
        let outcome = match (self.error, self.zero_used, self.energy, self.small_x0_flag) {
            (Some(msg), ..) => Outcome::Error(msg),
            (None, Some(zero_used), Some(energy), Some(small_x0)) => {
                Outcome::Level { zero_used, energy, small_x0 }
            }
            _ => return Err(bad(context, "row has neither an energy nor an error")),
        };
        Ok(Row {
            n: self.n,
            l: self.l,
            s: self.s,
            zeta: self.zeta,
            beta: self.beta,
            omega: self.omega,
            r0_eff: self.r0_eff,
            rho0: self.rho0,
            method: parse_method(context, &self.method)?,
            branch: self.branch,
            outcome,
        })
    }
}

pub fn write_json_lines<W: Write>(table: &SpectrumTable, mut out: W) -> Result<(), CliError> {
    for row in &table.rows {
        serde_json::to_writer(&mut out, &JsonRow::from(row)).map_err(|e| bad("json", e.to_string()))?;
        out.write_all(b"\n").map_err(|e| bad("json", e.to_string()))?;
    }
    out.flush().map_err(|e| bad("json", e.to_string()))
}

pub fn read_json_lines<R: Read>(input: R) -> Result<SpectrumTable, CliError> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let context = format!("json line {}", i + 1);
        let line = line.map_err(|e| bad(&context, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: JsonRow = serde_json::from_str(&line).map_err(|e| bad(&context, e.to_string()))?;
        rows.push(row.into_row(&context)?);
    }
    Ok(SpectrumTable { rows })
}

pub fn write_table<W: Write>(table: &SpectrumTable, format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::JsonLines => write_json_lines(table, out),
    }
}

/// Writes `table` to `path`, surfacing I/O failures with the path.
pub fn export(table: &SpectrumTable, format: Format, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let result = write_table(table, format, &mut out);
    let flushed = out.flush().map_err(|e| CliError::io(path, e));
    result.map_err(|e| match e {
        CliError::Format { message, .. } => {
            CliError::io(path, std::io::Error::other(message))
        }
        other => other,
    })?;
    flushed
}

pub fn import(format: Format, path: &Path) -> Result<SpectrumTable, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    match format {
        Format::Csv => read_csv(file),
        Format::JsonLines => read_json_lines(file),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SpectrumTable {
        let level = |energy: f64| Outcome::Level { zero_used: 2.404825557695773, energy, small_x0: true };
        let row = |outcome| Row {
            n: 0,
            l: -1,
            s: -1,
            zeta: 0,
            beta: 0.1,
            omega: 0.0,
            r0_eff: Some(1.0),
            rho0: Some(1.0f64.hypot(0.1)),
            method: Method::Exact,
            branch: 1,
            outcome,
        };
        SpectrumTable {
            rows: vec![
                row(level(1.0 / 3.0)),
                row(level(-0.0)),
                row(level(f64::MIN_POSITIVE)),
                Row { r0_eff: None, rho0: None, ..row(Outcome::Error("parameter error: a, \"b\"".into())) },
            ],
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(to_csv_string(&SpectrumTable::default()), CSV_HEADER.join(",") + "\n");
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let table = sample();
        let text = to_csv_string(&table);
        let back = read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, table);
        assert_eq!(back.rows[1].energy().unwrap().to_bits(), (-0.0f64).to_bits());
        assert!(text.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let table = sample();
        let mut buf = Vec::new();
        write_json_lines(&table, &mut buf).unwrap();
        assert_eq!(read_json_lines(buf.as_slice()).unwrap(), table);
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let err = export(&sample(), Format::Csv, Path::new("/nonexistent/dir/x.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
    }
}
