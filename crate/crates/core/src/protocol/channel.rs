//! The simulated channel and the stall rule.
//!
//! Each session has two endpoints. Registers in flight are deposited into
//! the receiving endpoint; when a stall passes through the channel, every
//! live register on either side is measured in the standard basis and
//! replaced by its classical outcome. Honest parties measure before the
//! stall arrives, so they are never caught; nothing a party can do bypasses
//! the sweep.

use crate::bits::BitString;
use crate::error::ProtocolError;
use crate::quantum::QuantumRegister;
use crate::rng::SessionRng;

use super::message::{Direction, Message};
use super::transcript::Transcript;

/// A party's quantum holdings, visible to the channel.
#[derive(Debug, Default)]
pub struct Endpoint {
    live: Vec<QuantumRegister>,
    mementos: Vec<BitString>,
}

impl Endpoint {
    pub fn new() -> Self {
        Self::default()
    }

    /// Removes the oldest held register, if any.
    pub fn take_register(&mut self) -> Option<QuantumRegister> {
        if self.live.is_empty() {
            None
        } else {
            Some(self.live.remove(0))
        }
    }

    pub fn holds_live_register(&self) -> bool {
        self.live.iter().any(QuantumRegister::is_alive)
    }

    /// Classical outcomes deposited by stall sweeps, oldest first.
    pub fn mementos(&self) -> &[BitString] {
        &self.mementos
    }

    pub(crate) fn deposit(&mut self, register: QuantumRegister) {
        self.live.push(register);
    }

    fn sweep(&mut self, rng: &mut SessionRng) -> Result<u32, ProtocolError> {
        let mut forced = 0;
        for mut reg in std::mem::take(&mut self.live) {
            if reg.is_alive() {
                self.mementos.push(reg.force_measure_standard(rng)?);
                forced += 1;
            }
        }
        Ok(forced)
    }
}

/// What the receiving party sees after a channel step.
#[derive(Debug)]
pub enum Delivered {
    /// A register was deposited into the receiving endpoint.
    Quantum,
    Stall,
    Classical(super::message::ClassicalPayload),
}

/// A transcript-recording channel between endpoints `a` and `b`.
#[derive(Debug, Default)]
pub struct Channel {
    transcript: Transcript,
}

impl Channel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Delivers one message, enforcing the stall rule. Stalls sweep both
    /// endpoints, the sender's included.
    pub fn send(
        &mut self,
        direction: Direction,
        message: Message,
        a: &mut Endpoint,
        b: &mut Endpoint,
        rng: &mut SessionRng,
    ) -> Result<Delivered, ProtocolError> {
        let mut forced = 0;
        if matches!(message, Message::Stall) {
            forced += a.sweep(rng)?;
            forced += b.sweep(rng)?;
        }
        self.transcript.record(direction, &message, forced);
        let receiver = match direction {
            Direction::AToB => b,
            Direction::BToA => a,
        };
        match message {
            Message::Stall => Ok(Delivered::Stall),
            Message::Classical(p) => Ok(Delivered::Classical(p)),
            Message::Quantum(reg) => {
                // Route through the wire form so what the transcript records
                // is exactly what arrives.
                let (decoded, _) = Message::from_wire(&Message::Quantum(reg).to_wire())?;
                match decoded {
                    Message::Quantum(r) => {
                        receiver.deposit(r);
                        Ok(Delivered::Quantum)
                    }
                    _ => unreachable!("quantum frames decode as quantum"),
                }
            }
        }
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }
}
