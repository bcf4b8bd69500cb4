//! Bit commitment from BB84 transmission and a stall.
//!
//! The receiver prepares a random BB84 register and sends it, followed by a
//! stall; the committer measures every qubit in the basis matching its bit
//! before the stall lands. No classical data flows committer-to-receiver
//! until the reveal, so the commitment hides perfectly by construction; the
//! stall is what makes it binding.
//!
//! Session roles: party A is the receiver (it speaks first), party B the
//! committer.

use serde::Serialize;

use crate::bits::BitString;
use crate::error::ProtocolError;
use crate::quantum::{Bb84Secret, QuantumRegister, MAX_QUBITS};
use crate::rng::{self, SessionRng};

use super::channel::{Channel, Delivered, Endpoint};
use super::message::{ClassicalPayload, Direction, Message};
use super::transcript::Transcript;

/// Receiver state: the preparation secret, kept until the reveal.
#[derive(Clone, Debug)]
pub struct CommitReceiver {
    secret: Bb84Secret,
}

/// Committer state after measuring: the bit and its opening string.
#[derive(Clone, Debug)]
pub struct Committer {
    bit: bool,
    opening: BitString,
}

/// First-class verification outcome; failures are values, not errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerifyOutcome {
    Accept(bool),
    Abort,
}

impl CommitReceiver {
    /// Samples (payload, bases) and emits the register followed by a stall.
    pub fn init(
        lambda: usize,
        rng: &mut SessionRng,
    ) -> Result<(Self, [Message; 2]), ProtocolError> {
        check_lambda(lambda)?;
        Self::init_with(Bb84Secret::random(lambda, rng))
    }

    /// Deterministic variant for replay and exhaustive tests.
    pub fn init_with(secret: Bb84Secret) -> Result<(Self, [Message; 2]), ProtocolError> {
        check_lambda(secret.len())?;
        let register = QuantumRegister::prepare_bb84(&secret)?;
        Ok((Self { secret }, [Message::Quantum(register), Message::Stall]))
    }

    pub fn secret(&self) -> &Bb84Secret {
        &self.secret
    }

    /// Accepts iff the opening matches the payload on every position
    /// prepared in the claimed basis. Length mismatches abort.
    pub fn verify(&self, bit: bool, opening: &BitString) -> VerifyOutcome {
        if opening.len() != self.secret.len() {
            return VerifyOutcome::Abort;
        }
        for i in 0..self.secret.len() {
            if self.secret.bases[i] == bit && opening[i] != self.secret.bits[i] {
                return VerifyOutcome::Abort;
            }
        }
        VerifyOutcome::Accept(bit)
    }
}

impl Committer {
    /// Measures the whole register in the basis selected by `bit`.
    pub fn commit(
        bit: bool,
        mut register: QuantumRegister,
        rng: &mut SessionRng,
    ) -> Result<Self, ProtocolError> {
        let bases: BitString = (0..register.n()).map(|_| bit).collect();
        let opening = register.measure_in_bases(&bases, rng)?;
        Ok(Self { bit, opening })
    }

    pub fn bit(&self) -> bool {
        self.bit
    }

    pub fn opening(&self) -> &BitString {
        &self.opening
    }

    pub fn reveal_message(&self) -> Message {
        Message::Classical(ClassicalPayload::Reveal {
            bit: self.bit,
            opening: self.opening.clone(),
        })
    }
}

pub(crate) fn check_lambda(lambda: usize) -> Result<(), ProtocolError> {
    if lambda == 0 || lambda > MAX_QUBITS {
        return Err(ProtocolError::LambdaOutOfRange {
            lambda,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Committer-side behavior in a full session. `before_stall` runs once the
/// register has arrived and before the stall is delivered; whatever is not
/// measured there is lost to the sweep.
pub trait CommitterBehavior {
    fn before_stall(
        &mut self,
        endpoint: &mut Endpoint,
        rng: &mut SessionRng,
    ) -> Result<(), ProtocolError>;

    /// The reveal to send once the commit phase is over.
    fn reveal(&mut self, endpoint: &Endpoint, rng: &mut SessionRng) -> (bool, BitString);
}

/// The honest committer: measure immediately in the basis of the bit.
pub struct HonestCommitter {
    bit: bool,
    state: Option<Committer>,
}

impl HonestCommitter {
    pub fn new(bit: bool) -> Self {
        Self { bit, state: None }
    }
}

impl CommitterBehavior for HonestCommitter {
    fn before_stall(
        &mut self,
        endpoint: &mut Endpoint,
        rng: &mut SessionRng,
    ) -> Result<(), ProtocolError> {
        let register = endpoint.take_register().ok_or(ProtocolError::Quantum(
            crate::error::QuantumError::DeadRegister,
        ))?;
        self.state = Some(Committer::commit(self.bit, register, rng)?);
        Ok(())
    }

    fn reveal(&mut self, _endpoint: &Endpoint, _rng: &mut SessionRng) -> (bool, BitString) {
        let state = self.state.as_ref().expect("commit ran");
        (state.bit(), state.opening().clone())
    }
}

/// A committer that ignores the register and lets the stall measure it,
/// then opens the target bit with the forced standard-basis memento.
pub struct StallingCommitter {
    pub target: bool,
}

impl CommitterBehavior for StallingCommitter {
    fn before_stall(
        &mut self,
        _endpoint: &mut Endpoint,
        _rng: &mut SessionRng,
    ) -> Result<(), ProtocolError> {
        Ok(())
    }

    fn reveal(&mut self, endpoint: &Endpoint, _rng: &mut SessionRng) -> (bool, BitString) {
        let memento = endpoint.mementos()[0].clone();
        (self.target, memento)
    }
}

/// Result of one full commitment session.
#[derive(Debug)]
pub struct CommitSessionReport {
    pub outcome: VerifyOutcome,
    pub transcript: Transcript,
    /// Transcript entries that belong to the commit phase (everything before
    /// the reveal).
    pub commit_phase_entries: usize,
    pub receiver_secret: Bb84Secret,
}

/// Runs a full session against an arbitrary committer. RNG streams are
/// derived from (seed, session): 0 receiver, 1 committer, 2 channel.
pub fn run_commitment(
    lambda: usize,
    committer: &mut dyn CommitterBehavior,
    seed: u64,
    session: u64,
) -> Result<CommitSessionReport, ProtocolError> {
    let mut receiver_rng = rng::derived(seed, session * 8);
    let mut committer_rng = rng::derived(seed, session * 8 + 1);
    let mut channel_rng = rng::derived(seed, session * 8 + 2);

    let mut channel = Channel::new();
    let (mut receiver_ep, mut committer_ep) = (Endpoint::new(), Endpoint::new());

    let (receiver, [quantum, stall]) = CommitReceiver::init(lambda, &mut receiver_rng)?;
    channel.send(
        Direction::AToB,
        quantum,
        &mut receiver_ep,
        &mut committer_ep,
        &mut channel_rng,
    )?;
    committer.before_stall(&mut committer_ep, &mut committer_rng)?;
    channel.send(
        Direction::AToB,
        stall,
        &mut receiver_ep,
        &mut committer_ep,
        &mut channel_rng,
    )?;
    debug_assert!(!receiver_ep.holds_live_register() && !committer_ep.holds_live_register());
    let commit_phase_entries = channel.transcript().len();

    let (bit, opening) = committer.reveal(&committer_ep, &mut committer_rng);
    let reveal = Message::Classical(ClassicalPayload::Reveal {
        bit,
        opening: opening.clone(),
    });
    let delivered = channel.send(
        Direction::BToA,
        reveal,
        &mut receiver_ep,
        &mut committer_ep,
        &mut channel_rng,
    )?;
    let outcome = match delivered {
        Delivered::Classical(ClassicalPayload::Reveal { bit, opening }) => {
            receiver.verify(bit, &opening)
        }
        _ => unreachable!("reveal frames decode as reveal"),
    };
    Ok(CommitSessionReport {
        outcome,
        transcript: channel.into_transcript(),
        commit_phase_entries,
        receiver_secret: receiver.secret().clone(),
    })
}
