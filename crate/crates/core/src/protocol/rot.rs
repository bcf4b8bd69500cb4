//! Random oblivious transfer over the stalled channel.
//!
//! The sender transmits a random BB84 register and stalls; the receiver
//! measures everything in the basis of its choice bit. The sender then
//! reveals the bases together with two fresh hash descriptions and outputs
//! the hashes of its payload restricted to each basis class; the receiver
//! can reconstruct exactly the branch matching its choice. The receiver
//! never transmits, so the sender learns nothing at all.
//!
//! Session roles: party A is the sender (it speaks first), party B the
//! receiver.

use crate::bits::BitString;
use crate::error::ProtocolError;
use crate::hashing::HashDescriptor;
use crate::quantum::{Bb84Secret, QuantumRegister};
use crate::rng::{self, SessionRng};

use super::channel::{Channel, Delivered, Endpoint};
use super::commitment::check_lambda;
use super::message::{ClassicalPayload, Direction, Message};
use super::transcript::Transcript;

/// Sender state: the transmitted secret, then the branch outputs.
#[derive(Clone, Debug)]
pub struct RotSender {
    secret: Bb84Secret,
    outputs: Option<(BitString, BitString)>,
}

impl RotSender {
    pub fn init(
        lambda: usize,
        rng: &mut SessionRng,
    ) -> Result<(Self, [Message; 2]), ProtocolError> {
        check_lambda(lambda)?;
        Self::init_with(Bb84Secret::random(lambda, rng))
    }

    pub fn init_with(secret: Bb84Secret) -> Result<(Self, [Message; 2]), ProtocolError> {
        check_lambda(secret.len())?;
        let register = QuantumRegister::prepare_bb84(&secret)?;
        Ok((
            Self {
                secret,
                outputs: None,
            },
            [Message::Quantum(register), Message::Stall],
        ))
    }

    pub fn secret(&self) -> &Bb84Secret {
        &self.secret
    }

    /// Samples two independent hash functions, computes both branch outputs
    /// `m_c = h_c(payload restricted to basis-c positions)`, and builds the
    /// disclosure message. An empty basis class is fine: the branch hashes
    /// the empty string.
    pub fn hash_message(
        &mut self,
        ell: usize,
        rng: &mut SessionRng,
    ) -> Result<((BitString, BitString), Message), ProtocolError> {
        let lambda = self.secret.len();
        let h0 = HashDescriptor::sample(lambda, ell, rng)?;
        let h1 = HashDescriptor::sample(lambda, ell, rng)?;
        let x0 = self.secret.bits.restrict_by(&self.secret.bases, false);
        let x1 = self.secret.bits.restrict_by(&self.secret.bases, true);
        let m0 = h0.eval(&x0)?;
        let m1 = h1.eval(&x1)?;
        self.outputs = Some((m0.clone(), m1.clone()));
        let message = Message::Classical(ClassicalPayload::Hashes {
            h0,
            h1,
            bases: self.secret.bases.clone(),
        });
        Ok(((m0, m1), message))
    }

    pub fn outputs(&self) -> Option<&(BitString, BitString)> {
        self.outputs.as_ref()
    }
}

/// Receiver state after measuring: the choice bit and the sifted string.
#[derive(Clone, Debug)]
pub struct RotReceiver {
    choice: bool,
    sifted: BitString,
}

impl RotReceiver {
    /// Measures the whole register in the basis of the choice bit.
    pub fn measure(
        choice: bool,
        mut register: QuantumRegister,
        rng: &mut SessionRng,
    ) -> Result<Self, ProtocolError> {
        let bases: BitString = (0..register.n()).map(|_| choice).collect();
        let sifted = register.measure_in_bases(&bases, rng)?;
        Ok(Self { choice, sifted })
    }

    pub fn choice(&self) -> bool {
        self.choice
    }

    pub fn sifted(&self) -> &BitString {
        &self.sifted
    }

    /// `r = h_b(sifted restricted to the positions prepared in basis b)`.
    pub fn finish(
        &self,
        h0: &HashDescriptor,
        h1: &HashDescriptor,
        bases: &BitString,
    ) -> Result<BitString, ProtocolError> {
        if bases.len() != self.sifted.len() {
            return Err(ProtocolError::Quantum(
                crate::error::QuantumError::LengthMismatch {
                    expected: self.sifted.len(),
                    actual: bases.len(),
                },
            ));
        }
        let mine = self.sifted.restrict_by(bases, self.choice);
        let h = if self.choice { h1 } else { h0 };
        Ok(h.eval(&mine)?)
    }
}

/// Receiver-side behavior in a full session.
pub trait RotReceiverBehavior {
    fn before_stall(
        &mut self,
        endpoint: &mut Endpoint,
        rng: &mut SessionRng,
    ) -> Result<(), ProtocolError>;

    /// Consumes the disclosure and produces this party's final output.
    fn finish(
        &mut self,
        h0: &HashDescriptor,
        h1: &HashDescriptor,
        bases: &BitString,
        endpoint: &Endpoint,
        rng: &mut SessionRng,
    ) -> Result<RotReceiverOutput, ProtocolError>;
}

/// Either the honest branch value or a malicious guess at both branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotReceiverOutput {
    Honest(BitString),
    Guess { m0: BitString, m1: BitString },
}

/// The honest receiver.
pub struct HonestRotReceiver {
    choice: bool,
    state: Option<RotReceiver>,
}

impl HonestRotReceiver {
    pub fn new(choice: bool) -> Self {
        Self {
            choice,
            state: None,
        }
    }
}

impl RotReceiverBehavior for HonestRotReceiver {
    fn before_stall(
        &mut self,
        endpoint: &mut Endpoint,
        rng: &mut SessionRng,
    ) -> Result<(), ProtocolError> {
        let register = endpoint.take_register().ok_or(ProtocolError::Quantum(
            crate::error::QuantumError::DeadRegister,
        ))?;
        self.state = Some(RotReceiver::measure(self.choice, register, rng)?);
        Ok(())
    }

    fn finish(
        &mut self,
        h0: &HashDescriptor,
        h1: &HashDescriptor,
        bases: &BitString,
        _endpoint: &Endpoint,
        _rng: &mut SessionRng,
    ) -> Result<RotReceiverOutput, ProtocolError> {
        let state = self.state.as_ref().expect("measure ran");
        Ok(RotReceiverOutput::Honest(state.finish(h0, h1, bases)?))
    }
}

/// Result of one full transfer session.
#[derive(Debug)]
pub struct RotSessionReport {
    pub sender_outputs: (BitString, BitString),
    pub receiver_output: RotReceiverOutput,
    pub transcript: Transcript,
    pub sender_secret: Bb84Secret,
}

/// Runs a full session against an arbitrary receiver. RNG streams are
/// derived from (seed, session): 0 sender, 1 receiver, 2 channel.
pub fn run_rot(
    lambda: usize,
    ell: usize,
    receiver: &mut dyn RotReceiverBehavior,
    seed: u64,
    session: u64,
) -> Result<RotSessionReport, ProtocolError> {
    let mut sender_rng = rng::derived(seed, session * 8);
    let mut receiver_rng = rng::derived(seed, session * 8 + 1);
    let mut channel_rng = rng::derived(seed, session * 8 + 2);

    let mut channel = Channel::new();
    let (mut sender_ep, mut receiver_ep) = (Endpoint::new(), Endpoint::new());

    let (mut sender, [quantum, stall]) = RotSender::init(lambda, &mut sender_rng)?;
    channel.send(
        Direction::AToB,
        quantum,
        &mut sender_ep,
        &mut receiver_ep,
        &mut channel_rng,
    )?;
    receiver.before_stall(&mut receiver_ep, &mut receiver_rng)?;
    channel.send(
        Direction::AToB,
        stall,
        &mut sender_ep,
        &mut receiver_ep,
        &mut channel_rng,
    )?;
    debug_assert!(!sender_ep.holds_live_register() && !receiver_ep.holds_live_register());

    // The disclosure goes out strictly after the stall has taken effect.
    let (outputs, hashes) = sender.hash_message(ell, &mut sender_rng)?;
    let delivered = channel.send(
        Direction::AToB,
        hashes,
        &mut sender_ep,
        &mut receiver_ep,
        &mut channel_rng,
    )?;
    let receiver_output = match delivered {
        Delivered::Classical(ClassicalPayload::Hashes { h0, h1, bases }) => {
            receiver.finish(&h0, &h1, &bases, &receiver_ep, &mut receiver_rng)?
        }
        _ => unreachable!("hash frames decode as hashes"),
    };
    Ok(RotSessionReport {
        sender_outputs: outputs,
        receiver_output,
        transcript: channel.into_transcript(),
        sender_secret: sender.secret().clone(),
    })
}

/// Honest-honest convenience wrapper.
pub fn run_rot_honest(
    lambda: usize,
    ell: usize,
    choice: bool,
    seed: u64,
    session: u64,
) -> Result<RotSessionReport, ProtocolError> {
    let mut receiver = HonestRotReceiver::new(choice);
    run_rot(lambda, ell, &mut receiver, seed, session)
}
