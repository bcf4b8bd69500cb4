//! Protocol messages and their bit-exact wire encoding.
//!
//! A message on the wire is a 4-byte big-endian body length followed by the
//! body: one kind byte (0x01 quantum, 0x02 stall, 0x03 classical) and the
//! payload. Classical payloads open with a tag byte (0x10 reveal, 0x11
//! hashes, 0x12 coin bit). Bit strings are encoded as a big-endian u16 bit
//! count followed by the bits packed most-significant-bit first. Quantum
//! payloads carry the qubit count and the raw amplitude vector as
//! little-endian f64 (re, im) pairs; this is a simulation artifact with no
//! physical counterpart, and exists so transcripts are self-contained.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::ProtocolError;
use crate::hashing::HashDescriptor;
use crate::quantum::QuantumRegister;

pub const KIND_QUANTUM: u8 = 0x01;
pub const KIND_STALL: u8 = 0x02;
pub const KIND_CLASSICAL: u8 = 0x03;
pub const TAG_REVEAL: u8 = 0x10;
pub const TAG_HASHES: u8 = 0x11;
pub const TAG_COIN_BIT: u8 = 0x12;

/// Who is talking. Every session fixes which concrete party is `A`; the
/// first sender of a protocol is documented on its runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "a_to_b")]
    AToB,
    #[serde(rename = "b_to_a")]
    BToA,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::AToB => Direction::BToA,
            Direction::BToA => Direction::AToB,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MessageKind {
    #[serde(rename = "quantum")]
    Quantum,
    #[serde(rename = "stall")]
    Stall,
    #[serde(rename = "classical")]
    Classical,
}

/// Tagged classical message bodies.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassicalPayload {
    /// The committed bit and the claimed measurement outcomes.
    Reveal { bit: bool, opening: BitString },
    /// Hash descriptions for both branches plus the preparation bases.
    Hashes {
        h0: HashDescriptor,
        h1: HashDescriptor,
        bases: BitString,
    },
    /// A plain coin bit.
    CoinBit { bit: bool },
}

impl ClassicalPayload {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            ClassicalPayload::Reveal { bit, opening } => {
                out.push(TAG_REVEAL);
                out.push(u8::from(*bit));
                push_bits(&mut out, opening);
            }
            ClassicalPayload::Hashes { h0, h1, bases } => {
                out.push(TAG_HASHES);
                out.extend_from_slice(&h0.to_bytes());
                out.extend_from_slice(&h1.to_bytes());
                push_bits(&mut out, bases);
            }
            ClassicalPayload::CoinBit { bit } => {
                out.push(TAG_COIN_BIT);
                out.push(u8::from(*bit));
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, ProtocolError> {
        let (&tag, rest) = bytes
            .split_first()
            .ok_or_else(|| malformed("empty classical payload"))?;
        match tag {
            TAG_REVEAL => {
                let (&bit, rest) = rest
                    .split_first()
                    .ok_or_else(|| malformed("reveal missing bit"))?;
                if bit > 1 {
                    return Err(malformed("reveal bit must be 0 or 1"));
                }
                let (opening, rest) = take_bits(rest)?;
                expect_empty(rest)?;
                Ok(ClassicalPayload::Reveal {
                    bit: bit == 1,
                    opening,
                })
            }
            TAG_HASHES => {
                let (h0, rest) = take_hash(rest)?;
                let (h1, rest) = take_hash(rest)?;
                let (bases, rest) = take_bits(rest)?;
                expect_empty(rest)?;
                Ok(ClassicalPayload::Hashes { h0, h1, bases })
            }
            TAG_COIN_BIT => {
                let (&bit, rest) = rest
                    .split_first()
                    .ok_or_else(|| malformed("coin message missing bit"))?;
                if bit > 1 {
                    return Err(malformed("coin bit must be 0 or 1"));
                }
                expect_empty(rest)?;
                Ok(ClassicalPayload::CoinBit { bit: bit == 1 })
            }
            other => Err(malformed(&format!("unknown classical tag {other:#04x}"))),
        }
    }
}

/// A single protocol message. Quantum messages own their register: sending
/// one moves the state onto the channel.
#[derive(Clone, Debug)]
pub enum Message {
    Quantum(QuantumRegister),
    Stall,
    Classical(ClassicalPayload),
}

impl Message {
    pub fn kind(&self) -> MessageKind {
        match self {
            Message::Quantum(_) => MessageKind::Quantum,
            Message::Stall => MessageKind::Stall,
            Message::Classical(_) => MessageKind::Classical,
        }
    }

    /// The payload bytes (everything after the kind byte).
    pub fn payload_bytes(&self) -> Vec<u8> {
        match self {
            Message::Quantum(reg) => {
                let mut out = Vec::with_capacity(1 + reg.amplitudes().len() * 16);
                out.push(reg.n() as u8);
                for a in reg.amplitudes() {
                    out.extend_from_slice(&a.re.to_le_bytes());
                    out.extend_from_slice(&a.im.to_le_bytes());
                }
                out
            }
            Message::Stall => Vec::new(),
            Message::Classical(p) => p.encode(),
        }
    }

    /// Full wire form: u32 big-endian body length, kind byte, payload.
    pub fn to_wire(&self) -> Vec<u8> {
        let payload = self.payload_bytes();
        let mut out = Vec::with_capacity(5 + payload.len());
        out.extend_from_slice(&(1 + payload.len() as u32).to_be_bytes());
        out.push(match self.kind() {
            MessageKind::Quantum => KIND_QUANTUM,
            MessageKind::Stall => KIND_STALL,
            MessageKind::Classical => KIND_CLASSICAL,
        });
        out.extend_from_slice(&payload);
        out
    }

    /// Decodes one message, returning it and the bytes consumed.
    pub fn from_wire(bytes: &[u8]) -> Result<(Self, usize), ProtocolError> {
        if bytes.len() < 5 {
            return Err(malformed("truncated frame header"));
        }
        let body_len = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as usize;
        if bytes.len() < 4 + body_len || body_len == 0 {
            return Err(malformed("truncated frame body"));
        }
        let kind = bytes[4];
        let payload = &bytes[5..4 + body_len];
        let msg = match kind {
            KIND_STALL => {
                expect_empty(payload)?;
                Message::Stall
            }
            KIND_CLASSICAL => Message::Classical(ClassicalPayload::decode(payload)?),
            KIND_QUANTUM => {
                let (&n, rest) = payload
                    .split_first()
                    .ok_or_else(|| malformed("quantum payload missing size"))?;
                let n = n as usize;
                let count = 1usize
                    .checked_shl(n as u32)
                    .ok_or_else(|| malformed("quantum payload size overflow"))?;
                if rest.len() != count * 16 {
                    return Err(malformed("quantum payload length mismatch"));
                }
                let amps: Vec<Complex64> = rest
                    .chunks_exact(16)
                    .map(|c| {
                        Complex64::new(
                            f64::from_le_bytes(c[..8].try_into().unwrap()),
                            f64::from_le_bytes(c[8..].try_into().unwrap()),
                        )
                    })
                    .collect();
                Message::Quantum(QuantumRegister::from_amplitudes(amps)?)
            }
            other => return Err(malformed(&format!("unknown message kind {other:#04x}"))),
        };
        Ok((msg, 4 + body_len))
    }
}

fn push_bits(out: &mut Vec<u8>, bits: &BitString) {
    out.extend_from_slice(&(bits.len() as u16).to_be_bytes());
    out.extend_from_slice(&bits.pack_msb_first());
}

fn take_bits(bytes: &[u8]) -> Result<(BitString, &[u8]), ProtocolError> {
    if bytes.len() < 2 {
        return Err(malformed("truncated bit string length"));
    }
    let len = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
    let body_len = len.div_ceil(8);
    let rest = &bytes[2..];
    if rest.len() < body_len {
        return Err(malformed("truncated bit string body"));
    }
    let bits = BitString::unpack_msb_first(&rest[..body_len], len)
        .ok_or_else(|| malformed("bit string unpack failed"))?;
    if bits.pack_msb_first() != rest[..body_len] {
        return Err(malformed("non-canonical bit string padding"));
    }
    Ok((bits, &rest[body_len..]))
}

fn take_hash(bytes: &[u8]) -> Result<(HashDescriptor, &[u8]), ProtocolError> {
    if bytes.len() < 4 {
        return Err(malformed("truncated hash description"));
    }
    let max = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
    let ell = u16::from_be_bytes([bytes[2], bytes[3]]) as usize;
    if max == 0 || ell == 0 {
        return Err(malformed("hash description with zero lengths"));
    }
    let total = HashDescriptor::encoded_len(max, ell);
    if bytes.len() < total {
        return Err(malformed("truncated hash seed"));
    }
    let h = HashDescriptor::from_bytes(&bytes[..total]).map_err(ProtocolError::Hash)?;
    Ok((h, &bytes[total..]))
}

fn expect_empty(rest: &[u8]) -> Result<(), ProtocolError> {
    if rest.is_empty() {
        Ok(())
    } else {
        Err(malformed("trailing bytes"))
    }
}

fn malformed(what: &str) -> ProtocolError {
    ProtocolError::MalformedWire(what.to_string())
}
