//! Plain-text event files.
//!
//! ```text
//! E <event_id> <seed> <flavour>
//! P <index> <pdg> <status> <mother> <e> <px> <py> <pz> <vx> <vy> <vz>
//! ```
//!
//! One block per event, blocks separated by blank lines, `#` starts a comment.
//! Momenta in GeV and vertices in mm, both with nine significant digits.

use std::io::{BufRead, Write};

use super::record::{Event, Flavour, ParticleRecord, Status};
use super::EvtGenError;
use crate::format::sig9;
use crate::kinematics::{FourVector, Vec3};

pub fn write_event<W: Write>(event: &Event, sink: &mut W) -> std::io::Result<()> {
    writeln!(sink, "E {} {} {}", event.event_id, event.seed, event.primary_flavour)?;
    for (i, r) in event.records.iter().enumerate() {
        writeln!(
            sink,
            "P {} {} {} {} {} {} {} {} {} {} {}",
            i,
            r.pdg_id,
            r.status,
            r.mother_index,
            sig9(r.p.e),
            sig9(r.p.px),
            sig9(r.p.py),
            sig9(r.p.pz),
            sig9(r.production_vertex.x),
            sig9(r.production_vertex.y),
            sig9(r.production_vertex.z),
        )?;
    }
    Ok(())
}

pub fn write_events<'a, W, I>(events: I, sink: &mut W) -> std::io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a Event>,
{
    writeln!(sink, "# ecalsim event file")?;
    for (k, ev) in events.into_iter().enumerate() {
        if k > 0 {
            writeln!(sink)?;
        }
        write_event(ev, sink)?;
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> EvtGenError {
    EvtGenError::Parse { line, msg: msg.into() }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, what: &str, line: usize) -> Result<T, EvtGenError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

/// Reads every event from `source`, validating indices and mother links.
pub fn read_events<R: BufRead>(source: R) -> Result<Vec<Event>, EvtGenError> {
    let mut events: Vec<Event> = Vec::new();
    let mut current: Option<Event> = None;
    for (n, line) in source.lines().enumerate() {
        let lineno = n + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            if let Some(ev) = current.take() {
                events.push(ev);
            }
            continue;
        }
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("E") => {
                if let Some(ev) = current.take() {
                    events.push(ev);
                }
                let event_id: u64 = field(toks.next(), "event id", lineno)?;
                let seed: u64 = field(toks.next(), "seed", lineno)?;
                let flavour: Flavour = field(toks.next(), "flavour", lineno)?;
                if toks.next().is_some() {
                    return Err(parse_err(lineno, "trailing fields on event header"));
                }
                current = Some(Event { event_id, seed, records: Vec::new(), primary_flavour: flavour, signal_root: None });
            }
            Some("P") => {
                let ev = current
                    .as_mut()
                    .ok_or_else(|| parse_err(lineno, "particle line outside an event block"))?;
                let index: usize = field(toks.next(), "index", lineno)?;
                let pdg: i32 = field(toks.next(), "pdg code", lineno)?;
                let status: Status = field(toks.next(), "status", lineno)?;
                let mother: i64 = field(toks.next(), "mother index", lineno)?;
                let mut v = [0.0f64; 7];
                for (k, name) in ["e", "px", "py", "pz", "vx", "vy", "vz"].iter().enumerate() {
                    v[k] = field(toks.next(), name, lineno)?;
                    if !v[k].is_finite() {
                        return Err(parse_err(lineno, format!("non-finite {name}")));
                    }
                }
                if toks.next().is_some() {
                    return Err(parse_err(lineno, "trailing fields on particle line"));
                }
                if index != ev.records.len() {
                    return Err(EvtGenError::Validation {
                        line: lineno,
                        msg: format!("expected particle index {}, found {index}", ev.records.len()),
                    });
                }
                if mother < -1 || mother >= index as i64 {
                    return Err(EvtGenError::Validation {
                        line: lineno,
                        msg: format!("mother index {mother} is not an earlier record of particle {index}"),
                    });
                }
                ev.records.push(ParticleRecord {
                    pdg_id: pdg,
                    status,
                    mother_index: mother,
                    p: FourVector::new(v[0], v[1], v[2], v[3]),
                    production_vertex: Vec3::new(v[4], v[5], v[6]),
                });
            }
            Some(other) => return Err(parse_err(lineno, format!("unknown record type '{other}'"))),
            None => unreachable!("empty content handled above"),
        }
    }
    if let Some(ev) = current.take() {
        events.push(ev);
    }
    Ok(events)
}
