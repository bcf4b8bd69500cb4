//! Closed-form security bounds shared across the attack evaluators and the
//! verification suites.

use std::f64::consts::SQRT_2;

use crate::error::InfoError;

/// The optimal probability of answering both basis challenges on one qubit:
/// `1/2 + 1/(2 sqrt 2)`, equal to `cos^2(pi/8)`.
pub fn per_qubit_guess_bound() -> f64 {
    0.5 + SQRT_2 / 4.0
}

/// `log2(4 - 2 sqrt 2)`: bits of joint min-entropy per transmitted qubit.
/// `4 - 2 sqrt 2` is the reciprocal of [`per_qubit_guess_bound`].
pub fn joint_guess_rate_log2() -> f64 {
    (4.0 - 2.0 * SQRT_2).log2()
}

/// Closed-form ceiling on a malicious receiver's excess guessing
/// probability: `2 (2^{l - 0.0071 lambda} + 2^{-lambda/20})`.
pub fn eq3_bound(lambda: usize, ell: usize) -> Result<f64, InfoError> {
    if lambda == 0 || ell == 0 {
        return Err(InfoError::BadParameter);
    }
    let l = lambda as f64;
    Ok(2.0 * ((ell as f64 - 0.0071 * l).exp2() + (-l / 20.0).exp2()))
}
