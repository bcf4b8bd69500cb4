//! The JSON record emitted for every attack evaluation.

use serde::{Deserialize, Serialize};

/// One attack evaluation, ready for machine consumption.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttackRecord {
    pub attack_id: String,
    pub lambda: usize,
    pub ell: usize,
    /// "exact", "enumerated" or "sampled".
    pub mode: String,
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// The bound the value is compared against.
    pub bound: f64,
    pub seed: u64,
}

impl AttackRecord {
    pub fn within_bound(&self) -> bool {
        match (self.ci_low, self.ci_high) {
            (_, Some(high)) => high <= self.bound,
            _ => self.value <= self.bound,
        }
    }
}
