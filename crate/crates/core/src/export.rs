//! CSV and JSON tables.
//!
//! Numbers are written with 17 significant digits in the style of C's
//! `%.17g`, which round-trips every `f64` exactly. Output depends only on the
//! rows, never on locale or platform.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::scan::{ExtremumRecord, ScanRow};

pub const SCAN_HEADER: &str = "alpha,tau,c21,c32,c31,k3";
pub const EXTREMUM_HEADER: &str = "alpha,k3_max,tau_min_arg";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("failed to write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("malformed table at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Formats `x` like `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    // `{:.16e}` yields exactly 17 correctly rounded significant digits
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let mut digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }

    let mut out = String::with_capacity(26);
    if x < 0.0 {
        out.push('-');
    }
    if !(-4..17).contains(&exp) {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        let sign = if exp < 0 { '-' } else { '+' };
        let _ = write!(out, "e{sign}{:02}", exp.abs());
    } else if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

fn scan_fields(row: &ScanRow) -> [(&'static str, f64); 6] {
    [
        ("alpha", row.alpha),
        ("tau", row.tau),
        ("c21", row.c21),
        ("c32", row.c32),
        ("c31", row.c31),
        ("k3", row.k3),
    ]
}

fn extremum_fields(rec: &ExtremumRecord) -> [(&'static str, f64); 3] {
    [
        ("alpha", rec.alpha),
        ("k3_max", rec.k3_max),
        ("tau_min_arg", rec.tau_min_arg),
    ]
}

fn render<const N: usize>(header: &str, records: &[[(&str, f64); N]], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(header);
            out.push('\n');
            for fields in records {
                let line: Vec<String> = fields.iter().map(|&(_, v)| format_g17(v)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        Format::Json => {
            if records.is_empty() {
                out.push_str("[]\n");
                return out;
            }
            out.push_str("[\n");
            for (i, fields) in records.iter().enumerate() {
                let body: Vec<String> = fields
                    .iter()
                    .map(|&(k, v)| format!("\"{k}\": {}", format_g17(v)))
                    .collect();
                let sep = if i + 1 == records.len() { "" } else { "," };
                let _ = writeln!(out, "  {{{}}}{sep}", body.join(", "));
            }
            out.push_str("]\n");
        }
    }
    out
}

pub fn render_scan(rows: &[ScanRow], format: Format) -> String {
    let records: Vec<_> = rows.iter().map(scan_fields).collect();
    render(SCAN_HEADER, &records, format)
}

pub fn render_extrema(records: &[ExtremumRecord], format: Format) -> String {
    let records: Vec<_> = records.iter().map(extremum_fields).collect();
    render(EXTREMUM_HEADER, &records, format)
}

/// Writes already-rendered text to stdout or a file.
pub fn write_text(text: &str, destination: &Destination) -> Result<(), ExportError> {
    match destination {
        Destination::Stdout => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| ExportError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
        Destination::File(path) => write_file(path, text),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), ExportError> {
    let wrap = |source| ExportError::Write {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(wrap)?);
    w.write_all(text.as_bytes()).map_err(wrap)?;
    w.flush().map_err(wrap)
}

pub fn export_table(
    rows: &[ScanRow],
    format: Format,
    destination: &Destination,
) -> Result<(), ExportError> {
    write_text(&render_scan(rows, format), destination)
}

/// Reads a table written with [`SCAN_HEADER`].
pub fn parse_scan_csv(text: &str) -> Result<Vec<ScanRow>, ExportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == SCAN_HEADER => {}
        _ => {
            return Err(ExportError::Parse {
                line: 1,
                reason: format!("expected header '{SCAN_HEADER}'"),
            })
        }
    }
    lines
        .map(|(i, line)| {
            let values = line
                .split(',')
                .map(f64::from_str)
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| ExportError::Parse {
                    line: i + 1,
                    reason: e.to_string(),
                })?;
            match values[..] {
                [alpha, tau, c21, c32, c31, k3] => Ok(ScanRow {
                    alpha,
                    tau,
                    c21,
                    c32,
                    c31,
                    k3,
                }),
                _ => Err(ExportError::Parse {
                    line: i + 1,
                    reason: format!("expected 6 fields, got {}", values.len()),
                }),
            }
        })
        .collect()
}
