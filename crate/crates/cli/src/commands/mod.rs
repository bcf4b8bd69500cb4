pub mod attack;
pub mod commit;
pub mod flip;
pub mod otwrap;
pub mod rot;
pub mod verify;

use bqs_core::quantum::MAX_QUBITS;

pub fn check_lambda(lambda: usize) -> anyhow::Result<()> {
    anyhow::ensure!(
        (1..=MAX_QUBITS).contains(&lambda),
        "lambda must be between 1 and {MAX_QUBITS}, got {lambda}"
    );
    Ok(())
}

pub fn check_trials(trials: u64) -> anyhow::Result<()> {
    anyhow::ensure!(trials >= 1, "trials must be at least 1");
    Ok(())
}

pub fn parse_bit(value: u8, what: &str) -> anyhow::Result<bool> {
    match value {
        0 => Ok(false),
        1 => Ok(true),
        other => anyhow::bail!("{what} must be 0 or 1, got {other}"),
    }
}
