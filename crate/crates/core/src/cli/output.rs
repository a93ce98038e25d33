//! CSV and JSON writers. Numbers in CSV use C's `%.17g` rendering so that
//! every value round-trips exactly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::EvaluationBreakdown;
use crate::report::VerificationReport;

pub const SWEEP_HEADER: [&str; 5] = ["t", "value", "coefficient", "integral", "quad_err"];

/// `printf("%.17g", v)`.
pub fn format_g17(v: f64) -> String {
    const PRECISION: i32 = 17;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // the exponent after rounding to 17 significant digits decides the style
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io {
        path: "<csv>".into(),
        source: io::Error::other(e),
    }
}

/// Sweep rows as CSV with the fixed `t,value,coefficient,integral,quad_err` header.
pub fn sweep_csv(rows: &[EvaluationBreakdown]) -> Result<Vec<u8>> {
    let mut w = csv_writer(Vec::new());
    w.write_record(SWEEP_HEADER).map_err(csv_error)?;
    for r in rows {
        w.write_record([r.t, r.value, r.coefficient, r.integral, r.quad_err].map(format_g17))
            .map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| csv_error(e.into_error().into()))
}

/// One row per check: `suite,check,status,worst_slack,witness_t`.
pub fn report_csv(report: &VerificationReport) -> Result<Vec<u8>> {
    let mut w = csv_writer(Vec::new());
    w.write_record(["suite", "check", "status", "worst_slack", "witness_t"])
        .map_err(csv_error)?;
    let opt = |v: Option<f64>| v.map(format_g17).unwrap_or_default();
    for c in &report.checks {
        let status = if c.passed() { "pass" } else { "fail" };
        w.write_record([
            report.suite.clone(),
            c.name.clone(),
            status.to_string(),
            opt(c.worst_slack),
            opt(c.witness_t),
        ])
        .map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| csv_error(e.into_error().into()))
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| Error::Io {
        path: "<json>".into(),
        source: io::Error::other(e),
    })?;
    out.push(b'\n');
    Ok(out)
}

/// Write to `path`, or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
