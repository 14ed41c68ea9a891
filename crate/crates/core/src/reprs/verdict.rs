use std::fmt;

use serde::{Deserialize, Serialize};

use super::ReprError;
use crate::rings::{parse_ring, Ring};
use crate::ut3::UT3Elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "HOLDS",
            Status::Violated => "VIOLATED",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactLattice,
    BoundedSearch,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactLattice => "exact_lattice",
            Method::BoundedSearch => "bounded_search",
        })
    }
}

/// Outcome of a check. A violation always carries a witness assignment
/// that can be re-evaluated on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub method: Method,
    pub bound: Option<u32>,
    pub witness: Vec<(String, UT3Elem)>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(check: &str, status: Status, method: Method) -> Self {
        Verdict {
            check: check.to_string(),
            status,
            method,
            bound: None,
            witness: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_bound(mut self, bound: u32) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_witness(mut self, name: &str, g: UT3Elem) -> Self {
        self.witness.push((name.to_string(), g));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn witness(&self, name: &str) -> Option<&UT3Elem> {
        self.witness.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn record(&self, ring: &Ring) -> VerdictRecord {
        VerdictRecord {
            check: self.check.clone(),
            status: self.status,
            method: self.method,
            bound: self.bound,
            ring: ring.to_string(),
            witness: self
                .witness
                .iter()
                .map(|(n, g)| WitnessRecord {
                    name: n.clone(),
                    element: g.to_string(),
                })
                .collect(),
            notes: self.notes.clone(),
        }
    }

    pub fn to_json(&self, ring: &Ring) -> String {
        serde_json::to_string(&self.record(ring)).expect("plain data")
    }

    /// Line-oriented report: status line, then the witness block and notes.
    pub fn to_text(&self) -> String {
        let bound = self.bound.map_or("none".to_string(), |b| b.to_string());
        let mut out = format!(
            "{} check={} method={} bound={}\n",
            self.status, self.check, self.method, bound
        );
        if !self.witness.is_empty() {
            out.push_str("witness:\n");
            for (n, g) in &self.witness {
                out.push_str(&format!("  {n} = {g}\n"));
            }
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Serialisable form of a [`Verdict`]; elements are written as text over
/// the named ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub check: String,
    pub status: Status,
    pub method: Method,
    pub bound: Option<u32>,
    pub ring: String,
    pub witness: Vec<WitnessRecord>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub name: String,
    pub element: String,
}

impl VerdictRecord {
    pub fn to_verdict(&self) -> Result<Verdict, ReprError> {
        let ring = parse_ring(&self.ring)?;
        let mut witness = Vec::new();
        for w in &self.witness {
            witness.push((w.name.clone(), UT3Elem::parse(&ring, &w.element)?));
        }
        Ok(Verdict {
            check: self.check.clone(),
            status: self.status,
            method: self.method,
            bound: self.bound,
            witness,
            notes: self.notes.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingDesc;

    #[test]
    fn text_and_json() {
        let r = RingDesc::integers_pow(2);
        let g = UT3Elem::parse(&r, "{e23: (1,0)}").unwrap();
        let v = Verdict::new("lame", Status::Violated, Method::ExactLattice)
            .with_witness("b", g)
            .with_note("e23 is a zero divisor");
        assert_eq!(
            v.to_text(),
            "VIOLATED check=lame method=exact_lattice bound=none\nwitness:\n  b = {e12: 0, e13: 0, e23: (1, 0)}\nnote: e23 is a zero divisor\n"
        );
        let json = v.to_json(&r);
        assert!(json.contains("\"status\":\"violated\""));
        let back: VerdictRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_verdict().unwrap(), v);
    }
}
