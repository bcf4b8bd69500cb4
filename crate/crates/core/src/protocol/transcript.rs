//! Transcripts: the ordered evidence for structural security claims.

use serde::{Deserialize, Serialize};

use super::message::{Direction, Message, MessageKind};

/// One recorded channel step. `forced_measurements` counts the registers
/// destructively measured when this message was delivered (nonzero only for
/// stalls that caught live registers).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub step: usize,
    pub direction: Direction,
    pub kind: MessageKind,
    pub payload_hex: String,
    pub forced_measurements: u32,
}

/// Ordered message log with per-direction classical byte accounting.
#[derive(Clone, Debug, Default)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
    classical_bytes_a_to_b: u64,
    classical_bytes_b_to_a: u64,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record(&mut self, direction: Direction, message: &Message, forced: u32) {
        let payload = message.payload_bytes();
        if message.kind() == MessageKind::Classical {
            match direction {
                Direction::AToB => self.classical_bytes_a_to_b += payload.len() as u64,
                Direction::BToA => self.classical_bytes_b_to_a += payload.len() as u64,
            }
        }
        self.entries.push(TranscriptEntry {
            step: self.entries.len(),
            direction,
            kind: message.kind(),
            payload_hex: hex(&payload),
            forced_measurements: forced,
        });
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total classical payload bytes sent in one direction.
    pub fn classical_bytes(&self, direction: Direction) -> u64 {
        match direction {
            Direction::AToB => self.classical_bytes_a_to_b,
            Direction::BToA => self.classical_bytes_b_to_a,
        }
    }

    /// Classical payload bytes in one direction among the first
    /// `entry_count` steps.
    pub fn classical_bytes_before(&self, direction: Direction, entry_count: usize) -> u64 {
        self.entries
            .iter()
            .take(entry_count)
            .filter(|e| e.direction == direction && e.kind == MessageKind::Classical)
            .map(|e| e.payload_hex.len() as u64 / 2)
            .sum()
    }

    pub fn total_forced_measurements(&self) -> u32 {
        self.entries.iter().map(|e| e.forced_measurements).sum()
    }

    /// The stable JSON form: an array of
    /// `{step, direction, kind, payload_hex, forced_measurements}`.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.entries).expect("transcript serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, serde_json::Error> {
        let entries: Vec<TranscriptEntry> = serde_json::from_str(s)?;
        let mut t = Self::new();
        for e in &entries {
            if e.kind == MessageKind::Classical {
                let bytes = e.payload_hex.len() as u64 / 2;
                match e.direction {
                    Direction::AToB => t.classical_bytes_a_to_b += bytes,
                    Direction::BToA => t.classical_bytes_b_to_a += bytes,
                }
            }
        }
        t.entries = entries;
        Ok(t)
    }
}

fn hex(bytes: &[u8]) -> String {
    const DIGITS: &[u8; 16] = b"0123456789abcdef";
    let mut s = Vec::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push(DIGITS[(b >> 4) as usize]);
        s.push(DIGITS[(b & 0xF) as usize]);
    }
    String::from_utf8(s).expect("hex digits are ascii")
}
