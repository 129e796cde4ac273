//! CSV and JSON serialization of sweep results.
//!
//! Numbers are written with 9 significant digits in the style of C's `%.9g`,
//! so output is byte-stable across runs and platforms.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::sweep::{CriticalPoint, SweepRow};

pub const SIGNIFICANT_DIGITS: usize = 9;

pub const ROW_HEADER: &str =
    "r,gamma,g,mean_qfi,lambda_x,lambda_yz_hi,lambda_yz_lo,concurrence,negativity,opt_nx,opt_ny,opt_nz";

pub const CRITICAL_HEADER: &str = "vary,value,bracket_width";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParams(format!("unknown output format '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// `%.9g`: shortest of fixed or exponent notation, trailing zeros removed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to the printed precision.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

fn row_fields(row: &SweepRow) -> [f64; 12] {
    [
        row.r,
        row.gamma,
        row.g,
        row.mean_f,
        row.lambda_x,
        row.lambda_yz_hi,
        row.lambda_yz_lo,
        row.concurrence,
        row.negativity,
        row.opt_nx,
        row.opt_ny,
        row.opt_nz,
    ]
}

fn rounded_row(row: &SweepRow) -> SweepRow {
    let f = row_fields(row).map(round_sig);
    SweepRow {
        r: f[0],
        gamma: f[1],
        g: f[2],
        mean_f: f[3],
        lambda_x: f[4],
        lambda_yz_hi: f[5],
        lambda_yz_lo: f[6],
        concurrence: f[7],
        negativity: f[8],
        opt_nx: f[9],
        opt_ny: f[10],
        opt_nz: f[11],
    }
}

fn write_json<W: Write + ?Sized, T: Serialize>(out: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::other)?;
    out.write_all(b"\n")
}

pub fn write_rows<W: Write + ?Sized>(out: &mut W, rows: &[SweepRow], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{ROW_HEADER}")?;
            for row in rows {
                let line: Vec<String> = row_fields(row).iter().map(|&x| format_sig(x)).collect();
                writeln!(out, "{}", line.join(","))?;
            }
            Ok(())
        }
        Format::Json => {
            let rounded: Vec<SweepRow> = rows.iter().map(rounded_row).collect();
            write_json(out, &rounded)
        }
    }
}

pub fn write_critical<W: Write + ?Sized>(out: &mut W, cp: &CriticalPoint, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{CRITICAL_HEADER}")?;
            writeln!(out, "{},{},{}", cp.vary, format_sig(cp.value), format_sig(cp.bracket_width))
        }
        Format::Json => {
            let rounded = CriticalPoint {
                vary: cp.vary,
                value: round_sig(cp.value),
                bracket_width: round_sig(cp.bracket_width),
            };
            write_json(out, &rounded)
        }
    }
}
