//! Argument structs. Every knob reads `--flag`, then the `BQS_*`
//! environment variable, then its default, in that order.

use clap::{Args, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifySuite {
    Binding,
    Moe,
    Split,
    Lhl,
    All,
}

#[derive(Args, Debug)]
pub struct CommitArgs {
    /// Qubits per commitment (1..=24).
    #[arg(long, env = "BQS_LAMBDA", default_value_t = 8)]
    pub lambda: usize,
    /// Sessions to run.
    #[arg(long, env = "BQS_TRIALS", default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, env = "BQS_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Committer behavior: honest, stalling, or breidbart.
    #[arg(long, env = "BQS_ADVERSARY", default_value = "honest")]
    pub adversary: String,
    /// Report file; stdout when omitted.
    #[arg(long, env = "BQS_OUT")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, env = "BQS_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct RotArgs {
    #[arg(long, env = "BQS_LAMBDA", default_value_t = 16)]
    pub lambda: usize,
    /// Branch output length in bits.
    #[arg(long, env = "BQS_ELL", default_value_t = 2)]
    pub ell: usize,
    #[arg(long, env = "BQS_TRIALS", default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, env = "BQS_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Fix the receiver's choice bit (random per trial when omitted).
    #[arg(long)]
    pub choice: Option<u8>,
    #[arg(long, env = "BQS_OUT")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, env = "BQS_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct FlipArgs {
    #[arg(long, env = "BQS_LAMBDA", default_value_t = 8)]
    pub lambda: usize,
    #[arg(long, env = "BQS_TRIALS", default_value_t = 10000)]
    pub trials: u64,
    #[arg(long, env = "BQS_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Alice's behavior: honest or breidbart.
    #[arg(long, env = "BQS_ADVERSARY", default_value = "honest")]
    pub adversary: String,
    /// The coin value a cheating Alice steers toward.
    #[arg(long, default_value_t = 1)]
    pub target: u8,
    #[arg(long, env = "BQS_OUT")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, env = "BQS_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct OtWrapArgs {
    #[arg(long, env = "BQS_LAMBDA", default_value_t = 8)]
    pub lambda: usize,
    #[arg(long, env = "BQS_ELL", default_value_t = 4)]
    pub ell: usize,
    /// Sender input for branch 0, as bits (random per trial when omitted).
    #[arg(long)]
    pub m0: Option<String>,
    /// Sender input for branch 1, as bits (random per trial when omitted).
    #[arg(long)]
    pub m1: Option<String>,
    /// Receiver choice bit.
    #[arg(long, default_value_t = 0)]
    pub choice: u8,
    #[arg(long, env = "BQS_TRIALS", default_value_t = 1)]
    pub trials: u64,
    #[arg(long, env = "BQS_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "BQS_OUT")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, env = "BQS_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    /// Attack id: standard-basis, breidbart, constant-strings, honest-0,
    /// or constant-value.
    #[arg(long, env = "BQS_ADVERSARY", default_value = "breidbart")]
    pub adversary: String,
    #[arg(long, env = "BQS_LAMBDA", default_value_t = 4)]
    pub lambda: usize,
    #[arg(long, env = "BQS_ELL", default_value_t = 1)]
    pub ell: usize,
    #[arg(long, env = "BQS_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Force exact evaluation (errors when the instance is too large).
    #[arg(long, env = "BQS_EXACT", default_value_t = false)]
    pub exact: bool,
    /// Monte Carlo trials; implies sampled mode.
    #[arg(long, env = "BQS_TRIALS")]
    pub trials: Option<u64>,
    #[arg(long, env = "BQS_OUT")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, env = "BQS_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: VerifySuite,
    #[arg(long, env = "BQS_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "BQS_OUT")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, env = "BQS_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}
