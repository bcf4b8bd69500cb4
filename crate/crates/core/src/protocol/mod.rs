//! Message-driven protocol state machines over a stall-enforcing channel.
//!
//! Three protocols are implemented on the same substrate: bit commitment,
//! random oblivious transfer, and coin flipping. Each has a pure
//! state-machine layer (the per-operation API) and a session runner that
//! wires the state machines, an arbitrary counterparty behavior, the
//! channel and the transcript together.

mod channel;
pub mod coinflip;
pub mod commitment;
mod message;
pub mod rot;
mod transcript;

pub use channel::{Channel, Delivered, Endpoint};
pub use message::{ClassicalPayload, Direction, Message, MessageKind};
pub use transcript::{Transcript, TranscriptEntry};
