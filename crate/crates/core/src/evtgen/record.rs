use std::fmt;
use std::str::FromStr;

use crate::kinematics::{FourVector, Vec3};

/// Life-cycle state of a generated particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Z boson and primary quarks.
    Initial,
    Decayed,
    Final,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Initial => "initial",
            Status::Decayed => "decayed",
            Status::Final => "final",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "initial" => Ok(Status::Initial),
            "decayed" => Ok(Status::Decayed),
            "final" => Ok(Status::Final),
            other => Err(format!("unknown status '{other}'")),
        }
    }
}

/// Flavour of the primary quark pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavour {
    B,
    C,
    Uds,
}

impl Flavour {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavour::B => "b",
            Flavour::C => "c",
            Flavour::Uds => "uds",
        }
    }
}

impl fmt::Display for Flavour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavour {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "b" => Ok(Flavour::B),
            "c" => Ok(Flavour::C),
            "uds" => Ok(Flavour::Uds),
            other => Err(format!("unknown flavour '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleRecord {
    pub pdg_id: i32,
    pub status: Status,
    /// Index of the mother record, `-1` for primaries.
    pub mother_index: i64,
    pub p: FourVector,
    /// Production vertex in mm.
    pub production_vertex: Vec3,
}

impl ParticleRecord {
    pub fn mother(&self) -> Option<usize> {
        usize::try_from(self.mother_index).ok()
    }
}

/// One generated Z decay.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub event_id: u64,
    pub seed: u64,
    pub records: Vec<ParticleRecord>,
    pub primary_flavour: Flavour,
    /// Record index of the forced signal hadron, if any. Not part of the file format.
    pub signal_root: Option<usize>,
}

impl Event {
    pub fn final_state(&self) -> impl Iterator<Item = (usize, &ParticleRecord)> {
        self.records.iter().enumerate().filter(|(_, r)| r.status == Status::Final)
    }

    pub fn final_state_sum(&self) -> FourVector {
        self.final_state().map(|(_, r)| r.p).sum()
    }

    /// Indices of the direct daughters of record `i`.
    pub fn daughters(&self, i: usize) -> Vec<usize> {
        self.records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.mother() == Some(i))
            .map(|(j, _)| j)
            .collect()
    }

    /// True when `i` equals `ancestor` or descends from it.
    pub fn descends_from(&self, i: usize, ancestor: usize) -> bool {
        let mut cur = Some(i);
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            if c < ancestor {
                return false;
            }
            cur = self.records[c].mother();
        }
        false
    }

    pub fn is_signal(&self, i: usize) -> bool {
        self.signal_root.is_some_and(|root| self.descends_from(i, root))
    }

    /// Final-state descendants of `root`.
    pub fn final_descendants(&self, root: usize) -> Vec<usize> {
        self.final_state()
            .map(|(i, _)| i)
            .filter(|&i| self.descends_from(i, root))
            .collect()
    }

    /// Direction of the primary quark (records 1 and 2 by construction), if present.
    pub fn quark_axis(&self) -> Option<Vec3> {
        self.records
            .iter()
            .find(|r| r.status == Status::Initial && (1..=5).contains(&r.pdg_id.abs()))
            .and_then(|r| r.p.p3().unit())
    }

    /// Largest four-momentum mismatch between any decayed particle and its daughters.
    pub fn max_decay_imbalance(&self) -> f64 {
        let mut sums = vec![FourVector::ZERO; self.records.len()];
        for r in &self.records {
            if let Some(m) = r.mother() {
                sums[m] += r.p;
            }
        }
        self.records
            .iter()
            .zip(&sums)
            .filter(|(r, _)| r.status == Status::Decayed)
            .map(|(r, s)| r.p.max_abs_diff(s))
            .fold(0.0, f64::max)
    }
}
