//! Transition traces: one JSON record per line, each naming the rule
//! applied, its payload and a digest of the resulting state.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::asp::{AtomTable, Denial, Lit, Record};
use crate::ca::Semantics;

/// Payload entry standing for ⊥.
pub const BOTTOM: &str = "⊥";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleName {
    /// Header record; the payload names the semantics.
    Init,
    Decide,
    Fail,
    Backtrack,
    UnitPropagate,
    Unfounded,
    /// Propagation justified semantically rather than by a clause or an
    /// unfounded set. Never emitted by the engine.
    #[serde(rename = "ASP-Propagate")]
    AspPropagate,
    #[serde(rename = "CP-Propagate")]
    CpPropagate,
    Learn,
    #[serde(rename = "Learn_t")]
    LearnT,
    Restart,
    #[serde(rename = "Restart_t")]
    RestartT,
    /// M together with one solution α is reported.
    Answer,
    /// A blocking denial is added to the program to continue enumeration.
    Block,
    /// The run is complete.
    End,
}

impl RuleName {
    pub fn is_restart(self) -> bool {
        matches!(self, RuleName::Restart | RuleName::RestartT)
    }

    pub fn is_learn(self) -> bool {
        matches!(self, RuleName::Learn | RuleName::LearnT)
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(s.trim_matches('"'))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleName,
    /// Literal names (`-a` for ¬a, `⊥`); for learned and blocking denials
    /// the body literals.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub payload: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<(String, i64)>>,
    /// Digest of the state after the step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
}

impl TraceStep {
    pub fn new(rule: RuleName, payload: Vec<String>) -> TraceStep {
        TraceStep {
            rule,
            payload,
            alpha: None,
            digest: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub semantics: Semantics,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("trace does not start with an Init record")]
    MissingInit,
    #[error("Init record: {0}")]
    BadInit(String),
}

impl Trace {
    pub fn new(semantics: Semantics) -> Trace {
        Trace {
            semantics,
            steps: Vec::new(),
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let init = TraceStep::new(RuleName::Init, vec![self.semantics.to_string()]);
        for s in std::iter::once(&init).chain(&self.steps) {
            out.push_str(&serde_json::to_string(s).expect("trace records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Trace, TraceError> {
        let mut records = Vec::new();
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let s: TraceStep = serde_json::from_str(line).map_err(|source| TraceError::Json {
                line: i + 1,
                source,
            })?;
            records.push(s);
        }
        let mut it = records.into_iter();
        let init = it
            .next()
            .filter(|s| s.rule == RuleName::Init)
            .ok_or(TraceError::MissingInit)?;
        let semantics = match init.payload.as_slice() {
            [s] => s.parse().map_err(TraceError::BadInit)?,
            _ => return Err(TraceError::BadInit("expected one payload entry".into())),
        };
        Ok(Trace {
            semantics,
            steps: it.collect(),
        })
    }
}

pub fn lit_names(lits: &[Lit], atoms: &AtomTable) -> Vec<String> {
    lits.iter().map(|&l| atoms.lit_name(l)).collect()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn feed_denials(h: &mut Sha256, tag: u8, ds: &[Denial]) {
    let mut sorted: Vec<&Denial> = ds.iter().collect();
    sorted.sort();
    h.update([tag]);
    h.update((sorted.len() as u32).to_le_bytes());
    for d in sorted {
        h.update((d.0.len() as u32).to_le_bytes());
        for l in &d.0 {
            h.update((l.code() as u32).to_le_bytes());
        }
    }
}

/// Digest of a state M‖Γ‖Λ of the program extended by `blocks`. The state
/// is encoded by literal codes, so two processes agree on it whenever they
/// build the same atom table.
pub fn state_digest(m: &Record, gamma: &[Denial], lambda: &[Denial], blocks: &[Denial]) -> String {
    let mut h = Sha256::new();
    h.update(b"M");
    for e in m.entries() {
        h.update((2 * e.lit.code() as u32 + u32::from(e.decision)).to_le_bytes());
    }
    if m.has_bottom() {
        h.update(u32::MAX.to_le_bytes());
    }
    feed_denials(&mut h, b'G', gamma);
    feed_denials(&mut h, b'L', lambda);
    feed_denials(&mut h, b'B', blocks);
    hex(&h.finalize())
}

pub fn failstate_digest() -> String {
    hex(&Sha256::digest(b"Failstate"))
}
