//! Per-qubit outcome probability tables shared by the exact evaluators.

use num_complex::Complex64;

use crate::quantum::SingleQubitMeasurement;

/// The single-qubit state encoding `bit` in `basis`.
pub(crate) fn bb84_state(bit: bool, basis: bool) -> [Complex64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match (basis, bit) {
        (false, false) => [Complex64::ONE, Complex64::ZERO],
        (false, true) => [Complex64::ZERO, Complex64::ONE],
        (true, false) => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        (true, true) => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    }
}

/// `table[o][bit][basis]` = probability of outcome `o` on the BB84 state
/// for (bit, basis).
pub(crate) fn outcome_table(m: &SingleQubitMeasurement) -> Vec<[[f64; 2]; 2]> {
    (0..m.len())
        .map(|o| {
            let mut cell = [[0.0f64; 2]; 2];
            for basis in 0..2 {
                for bit in 0..2 {
                    let state = bb84_state(bit == 1, basis == 1);
                    cell[bit][basis] = m.outcomes()[o].operator.expectation(state).max(0.0);
                }
            }
            cell
        })
        .collect()
}
