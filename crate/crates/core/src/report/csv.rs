use std::io::{BufRead, Write};

use super::{Histogram, ReportError};
use crate::format::sig9;

pub const CSV_HEADER: &str = "bin_lo,bin_hi,count";

/// Writes `bin_lo,bin_hi,count` rows followed by `underflow` and `overflow`.
pub fn emit_csv<W: Write>(h: &Histogram, sink: &mut W) -> Result<(), ReportError> {
    writeln!(sink, "{CSV_HEADER}")?;
    for (i, c) in h.counts().iter().enumerate() {
        let (lo, hi) = h.bin_edges(i);
        writeln!(sink, "{},{},{}", sig9(lo), sig9(hi), sig9(*c))?;
    }
    writeln!(sink, "underflow,,{}", sig9(h.underflow))?;
    writeln!(sink, "overflow,,{}", sig9(h.overflow))?;
    Ok(())
}

pub fn csv_string(h: &Histogram) -> String {
    let mut buf = Vec::new();
    emit_csv(h, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads a histogram written by [`emit_csv`].
pub fn parse_csv<R: BufRead>(source: R) -> Result<Histogram, ReportError> {
    let mut lo = None;
    let mut hi = 0.0;
    let mut counts = Vec::new();
    let (mut under, mut over) = (None, None);
    let num = |s: &str, line: usize| {
        s.trim().parse::<f64>().map_err(|_| ReportError::Parse { line, msg: format!("bad number '{s}'") })
    };
    for (n, line) in source.lines().enumerate() {
        let line = line?;
        let ln = n + 1;
        if ln == 1 {
            if line.trim() != CSV_HEADER {
                return Err(ReportError::Parse { line: ln, msg: "missing header".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(ReportError::Parse { line: ln, msg: "expected 3 fields".into() });
        }
        match fields[0] {
            "underflow" => under = Some(num(fields[2], ln)?),
            "overflow" => over = Some(num(fields[2], ln)?),
            _ => {
                if under.is_some() || over.is_some() {
                    return Err(ReportError::Parse { line: ln, msg: "bin row after under/overflow".into() });
                }
                let a = num(fields[0], ln)?;
                lo.get_or_insert(a);
                hi = num(fields[1], ln)?;
                counts.push(num(fields[2], ln)?);
            }
        }
    }
    let (Some(lo), Some(under), Some(over)) = (lo, under, over) else {
        return Err(ReportError::Parse { line: 0, msg: "incomplete histogram".into() });
    };
    Histogram::from_parts(lo, hi, counts, under, over)
}
