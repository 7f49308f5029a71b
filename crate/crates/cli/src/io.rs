//! CSV input and number formatting.
//!
//! The dialect is comma-separated with `.` decimals. Lines whose first
//! non-blank character is `#` and blank lines are ignored.

use std::fs;
use std::io::Read;

use crate::CliError;

/// Table read from a CSV file: an optional header and numeric rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

/// Parses CSV text. Every data row must have the same number of fields.
pub fn parse_table(text: &str, header: bool) -> Result<Table, CliError> {
    let cleaned = blank_comments(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(cleaned.as_bytes());
    let mut table = Table::default();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let offset = e.position().map_or(0, |p| p.byte() as usize);
            tropml::Error::Parse { offset, message: e.to_string() }
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let offset = record.position().map_or(0, |p| p.byte() as usize);
        if header && table.header.is_none() {
            table.header = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| tropml::Error::Parse {
                    offset,
                    message: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let expected = *width.get_or_insert(row.len());
        if row.len() != expected {
            return Err(tropml::Error::RaggedRows { row: table.rows.len(), expected, found: row.len() }.into());
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Replaces comment lines with spaces so byte offsets stay valid.
fn blank_comments(text: &str) -> String {
    text.split_inclusive('\n')
        .map(|line| {
            if line.trim_start().starts_with('#') {
                line.chars().map(|c| if c == '\n' || c == '\r' { c } else { ' ' }).collect()
            } else {
                line.to_string()
            }
        })
        .collect()
}

pub fn read_table(path: &str, header: bool) -> Result<Table, CliError> {
    parse_table(&read_text(path)?, header)
}

pub fn read_rows(path: &str, header: bool) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = read_table(path, header)?.rows;
    if rows.is_empty() {
        return Err(tropml::Error::Empty.into());
    }
    Ok(rows)
}

/// Parses an inline point such as `"0,6,2"`.
pub fn parse_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .enumerate()
        .map(|(i, f)| {
            f.trim().parse::<f64>().map_err(|_| {
                tropml::Error::Parse { offset: i, message: format!("not a number: {f:?}") }.into()
            })
        })
        .collect()
}

/// Rounds to 10 significant digits and prints the shortest form of the
/// rounded value. Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let r: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    if r == 0.0 {
        return "0".to_string();
    }
    let a = r.abs();
    if (1e-6..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Value rounded the same way as [`fmt_num`], for JSON output.
pub fn round10(x: f64) -> f64 {
    fmt_num(x).parse().unwrap_or(x)
}

pub fn fmt_row(row: &[f64]) -> String {
    row.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")
}

pub fn push_row(out: &mut String, row: &[f64]) {
    out.push_str(&fmt_row(row));
    out.push('\n');
}
