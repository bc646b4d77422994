//! Message logs of protocol runs.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::field::{FieldElement, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Exchange,
    Repair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub phase: Phase,
    pub from: usize,
    pub to: usize,
    pub payload: Vec<FieldElement>,
}

/// Ordered list of every message sent during a run. Within a phase a
/// sender addresses each receiver at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Transcript {
    messages: Vec<Message>,
}

#[derive(Deserialize)]
struct MessageRecord {
    phase: Phase,
    from: usize,
    to: usize,
    payload: Vec<u64>,
}

impl Transcript {
    pub fn new() -> Self {
        Transcript::default()
    }

    pub fn push(
        &mut self,
        phase: Phase,
        from: usize,
        to: usize,
        payload: Vec<FieldElement>,
    ) -> Result<()> {
        if from == to {
            return param(format!("player {from} cannot message itself"));
        }
        if self
            .messages
            .iter()
            .any(|m| m.phase == phase && m.from == from && m.to == to)
        {
            return param(format!(
                "player {from} already sent a {phase:?} message to player {to}"
            ));
        }
        self.messages.push(Message {
            phase,
            from,
            to,
            payload,
        });
        Ok(())
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn count_in(&self, phase: Phase) -> usize {
        self.messages.iter().filter(|m| m.phase == phase).count()
    }

    /// Total number of field elements carried by all messages.
    pub fn field_elements(&self) -> usize {
        self.messages.iter().map(|m| m.payload.len()).sum()
    }

    /// Messages a player sent or received.
    pub fn involving(&self, player: usize) -> impl Iterator<Item = &Message> {
        self.messages
            .iter()
            .filter(move |m| m.from == player || m.to == player)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serialization cannot fail")
    }

    /// Parses a saved transcript, re-checking the one-message-per-pair rule.
    pub fn from_json(text: &str, field: PrimeField) -> Result<Self> {
        let records: Vec<MessageRecord> =
            serde_json::from_str(text).map_err(|e| crate::error::Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
        let mut t = Transcript::new();
        let mut seen = HashSet::new();
        for r in records {
            if r.payload.iter().any(|&v| v >= field.modulus()) {
                return param(format!("payload value out of range for {field}"));
            }
            if !seen.insert((r.phase, r.from, r.to)) {
                return param(format!(
                    "duplicate {:?} message from {} to {}",
                    r.phase, r.from, r.to
                ));
            }
            t.push(
                r.phase,
                r.from,
                r.to,
                r.payload.into_iter().map(|v| field.element(v)).collect(),
            )?;
        }
        Ok(t)
    }
}
