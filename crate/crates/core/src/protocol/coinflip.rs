//! Strong coin flipping built on the commitment scheme.
//!
//! Alice commits to a coin, Bob replies with his own coin in the clear,
//! Alice opens, and both sides output the XOR. Bob cannot bias the result
//! at all: Alice's coin is fixed (hidden) before his is sent. Alice can
//! only cheat by opening a value chosen after seeing Bob's coin, which the
//! commitment's binding makes exponentially unlikely to succeed both ways.
//!
//! Session roles: party A is Alice (the committer), party B is Bob (the
//! commitment receiver); Bob speaks first.

use serde::Serialize;

use crate::bits::BitString;
use crate::error::ProtocolError;
use crate::rng::{self, SessionRng};

use super::channel::{Channel, Delivered, Endpoint};
use super::commitment::{check_lambda, CommitReceiver, Committer, VerifyOutcome};
use super::message::{ClassicalPayload, Direction, Message};
use super::transcript::Transcript;

/// A party's final coin value; disagreement or failed reveals surface as
/// aborts, never as exceptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoinOutcome {
    #[serde(rename = "bit")]
    Bit(bool),
    #[serde(rename = "abort")]
    Abort,
}

/// Alice-side behavior for a cheating run.
pub trait FlipCheat {
    /// Runs when the commitment register has arrived, before the stall.
    fn before_stall(
        &mut self,
        endpoint: &mut Endpoint,
        rng: &mut SessionRng,
    ) -> Result<(), ProtocolError>;

    /// The reveal to send after seeing Bob's coin.
    fn reveal(&mut self, bob_coin: bool, rng: &mut SessionRng) -> (bool, BitString);

    /// Candidate openings (for coin 0, for coin 1) if the strategy prepared
    /// both; used by callers to score double-opening after the run.
    fn openings(&self) -> Option<(BitString, BitString)>;
}

/// Alice's role in a session.
pub enum FlipAlice<'a> {
    /// Follow the protocol; `coin: None` samples it from Alice's RNG.
    Honest { coin: Option<bool> },
    Cheating(&'a mut dyn FlipCheat),
}

/// Result of one coin-flipping session.
#[derive(Debug)]
pub struct FlipReport {
    pub alice: CoinOutcome,
    pub bob: CoinOutcome,
    pub transcript: Transcript,
    /// For cheating runs that exposed both candidate openings: whether each
    /// opening would have been accepted by Bob.
    pub double_open: Option<bool>,
}

impl FlipReport {
    /// The protocol output: the common bit, or abort on disagreement.
    pub fn output(&self) -> CoinOutcome {
        match (self.alice, self.bob) {
            (CoinOutcome::Bit(a), CoinOutcome::Bit(b)) if a == b => CoinOutcome::Bit(a),
            _ => CoinOutcome::Abort,
        }
    }
}

/// Runs one session. `bob_coin: None` samples Bob's coin from his RNG.
/// RNG streams are derived from (seed, session): 0 Alice, 1 Bob, 2 channel.
pub fn run_coinflip(
    lambda: usize,
    alice: FlipAlice<'_>,
    bob_coin: Option<bool>,
    seed: u64,
    session: u64,
) -> Result<FlipReport, ProtocolError> {
    check_lambda(lambda)?;
    let mut alice_rng = rng::derived(seed, session * 8);
    let mut bob_rng = rng::derived(seed, session * 8 + 1);
    let mut channel_rng = rng::derived(seed, session * 8 + 2);

    let mut channel = Channel::new();
    let (mut alice_ep, mut bob_ep) = (Endpoint::new(), Endpoint::new());

    // Commit phase: Bob plays the commitment receiver.
    let (bob_receiver, [quantum, stall]) = CommitReceiver::init(lambda, &mut bob_rng)?;
    channel.send(
        Direction::BToA,
        quantum,
        &mut alice_ep,
        &mut bob_ep,
        &mut channel_rng,
    )?;

    enum AliceState<'a> {
        Honest(Committer, bool),
        Cheating(&'a mut dyn FlipCheat),
    }
    let mut state = match alice {
        FlipAlice::Honest { coin } => {
            let coin = coin.unwrap_or_else(|| rand::Rng::random(&mut alice_rng));
            let register = alice_ep.take_register().ok_or(ProtocolError::Quantum(
                crate::error::QuantumError::DeadRegister,
            ))?;
            AliceState::Honest(Committer::commit(coin, register, &mut alice_rng)?, coin)
        }
        FlipAlice::Cheating(cheat) => {
            cheat.before_stall(&mut alice_ep, &mut alice_rng)?;
            AliceState::Cheating(cheat)
        }
    };
    channel.send(
        Direction::BToA,
        stall,
        &mut alice_ep,
        &mut bob_ep,
        &mut channel_rng,
    )?;
    debug_assert!(!alice_ep.holds_live_register() && !bob_ep.holds_live_register());

    // Bob's coin, in the clear.
    let bob_coin = bob_coin.unwrap_or_else(|| rand::Rng::random(&mut bob_rng));
    channel.send(
        Direction::BToA,
        Message::Classical(ClassicalPayload::CoinBit { bit: bob_coin }),
        &mut alice_ep,
        &mut bob_ep,
        &mut channel_rng,
    )?;

    // Reveal phase.
    let (claimed, opening, alice_out, double_open) = match &mut state {
        AliceState::Honest(committer, coin) => (
            committer.bit(),
            committer.opening().clone(),
            CoinOutcome::Bit(*coin ^ bob_coin),
            None,
        ),
        AliceState::Cheating(cheat) => {
            let (claimed, opening) = cheat.reveal(bob_coin, &mut alice_rng);
            let double = cheat.openings().map(|(open0, open1)| {
                bob_receiver.verify(false, &open0) == VerifyOutcome::Accept(false)
                    && bob_receiver.verify(true, &open1) == VerifyOutcome::Accept(true)
            });
            (
                claimed,
                opening,
                CoinOutcome::Bit(claimed ^ bob_coin),
                double,
            )
        }
    };
    let delivered = channel.send(
        Direction::AToB,
        Message::Classical(ClassicalPayload::Reveal {
            bit: claimed,
            opening,
        }),
        &mut alice_ep,
        &mut bob_ep,
        &mut channel_rng,
    )?;
    let bob_out = match delivered {
        Delivered::Classical(ClassicalPayload::Reveal { bit, opening }) => {
            match bob_receiver.verify(bit, &opening) {
                VerifyOutcome::Accept(a) => CoinOutcome::Bit(a ^ bob_coin),
                VerifyOutcome::Abort => CoinOutcome::Abort,
            }
        }
        _ => unreachable!("reveal frames decode as reveal"),
    };

    Ok(FlipReport {
        alice: alice_out,
        bob: bob_out,
        transcript: channel.into_transcript(),
        double_open,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;

    #[test]
    fn honest_parties_agree_and_the_coin_is_unbiased() {
        let trials = 10_000u64;
        let mut ones = 0u64;
        for session in 0..trials {
            let report =
                run_coinflip(4, FlipAlice::Honest { coin: None }, None, 1234, session).unwrap();
            assert_eq!(report.alice, report.bob);
            match report.output() {
                CoinOutcome::Bit(true) => ones += 1,
                CoinOutcome::Bit(false) => {}
                CoinOutcome::Abort => panic!("honest run aborted"),
            }
        }
        let bias = (ones as f64 / trials as f64 - 0.5).abs();
        assert!(bias < 3.0 * stats::binomial_sigma(0.5, trials), "bias {bias}");
    }

    #[test]
    fn output_is_exactly_uniform_for_any_fixed_bob_coin() {
        // Exhaust Alice's coin with Bob's message pinned: the two runs give
        // the two outputs, so the coin is uniform because Alice's coin is.
        for lambda in [1usize, 3, 8] {
            for bob_coin in [false, true] {
                let mut outputs = Vec::new();
                for alice_coin in [false, true] {
                    let report = run_coinflip(
                        lambda,
                        FlipAlice::Honest {
                            coin: Some(alice_coin),
                        },
                        Some(bob_coin),
                        7,
                        u64::from(alice_coin) + 2 * u64::from(bob_coin),
                    )
                    .unwrap();
                    assert_eq!(report.output(), CoinOutcome::Bit(alice_coin ^ bob_coin));
                    outputs.push(report.output());
                }
                assert_eq!(outputs.len(), 2);
                assert_ne!(outputs[0], outputs[1]);
            }
        }
    }

    #[test]
    fn transcript_shape_is_commit_stall_coin_reveal() {
        let report = run_coinflip(4, FlipAlice::Honest { coin: None }, None, 3, 0).unwrap();
        let kinds: Vec<_> = report
            .transcript
            .entries()
            .iter()
            .map(|e| (e.direction, e.kind))
            .collect();
        use crate::protocol::message::{Direction::*, MessageKind::*};
        assert_eq!(
            kinds,
            vec![(BToA, Quantum), (BToA, Stall), (BToA, Classical), (AToB, Classical)]
        );
    }
}
