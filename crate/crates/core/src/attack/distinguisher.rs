//! Turning a guessing attack into a distinguisher between hashed and
//! uniform extraction tuples.
//!
//! The tuple is (<h>, m~, memento, bases, c): in the "hashed" world m~ is
//! the disclosed hash applied to the still-hidden branch substring, in the
//! "uniform" world it is a fresh uniform string. The distinguisher plants
//! the tuple's hash in slot c, samples the other slot fresh, replays the
//! attack's guessing stage and accepts iff the guess for branch c equals
//! m~. On uniform inputs it accepts with probability exactly 2^-ell; on
//! hashed inputs it accepts at least as often as the attack guesses both
//! branches, so its advantage witnesses the attack's advantage.

use std::sync::Arc;

use crate::bits::BitString;
use crate::error::AttackError;
use crate::hashing::HashDescriptor;
use crate::info::min_entropy_split;
use crate::rng::SessionRng;

use super::rot_receiver::{
    guess_probability_exact, induced_joint_distribution, next_mixed_radix, short_string_index,
    BranchGuess, ReceiverStrategy,
};
use super::tables::outcome_table;
use crate::quantum::SingleQubitMeasurement;

/// The replayable decision procedure.
pub struct Distinguisher {
    strategy: Arc<dyn ReceiverStrategy>,
    ell: usize,
}

/// Builds the decision procedure for one attack and output length.
pub fn build_distinguisher(strategy: Arc<dyn ReceiverStrategy>, ell: usize) -> Distinguisher {
    Distinguisher { strategy, ell }
}

impl Distinguisher {
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// One decision: plant `h` in slot `c`, sample the other slot fresh,
    /// replay the guessing stage, accept iff the branch-c guess equals
    /// `m_tilde`.
    pub fn decide(
        &self,
        h: &HashDescriptor,
        m_tilde: &BitString,
        memento: &[usize],
        bases: &BitString,
        c: bool,
        rng: &mut SessionRng,
    ) -> Result<bool, AttackError> {
        let fresh = HashDescriptor::sample(h.max_input_len(), h.out_len(), rng)?;
        let (h0, h1) = if c {
            (fresh, h.clone())
        } else {
            (h.clone(), fresh)
        };
        let (g0, g1) = self.strategy.guess(memento, bases, self.ell);
        let (guess, slot_h) = if c { (g1, &h1) } else { (g0, &h0) };
        let value = match guess {
            BranchGuess::Substring(g) => slot_h.eval(&g)?,
            BranchGuess::RawValue(g) => g,
            BranchGuess::Uniform => BitString::random(self.ell, rng),
        };
        Ok(value == *m_tilde)
    }
}

/// Exact acceptance rates of the distinguisher against one attack.
#[derive(Clone, Debug)]
pub struct DistinguisherReport {
    /// Acceptance on genuine tuples (m~ = hash of the hidden branch).
    pub acceptance_hashed: f64,
    /// Acceptance on uniform m~; exactly `2^-ell` by construction.
    pub acceptance_uniform: f64,
    /// `acceptance_hashed - acceptance_uniform`.
    pub advantage: f64,
    /// The attack's probability of guessing both branches.
    pub attack_success: f64,
    /// `2^-ell`.
    pub baseline: f64,
    /// The smoothing parameter used for the split, `2^{-lambda/20}`.
    pub delta: f64,
}

/// Computes the exact acceptance rates. The choice bit in the tuple is the
/// complement of the split variable built from the attack's own induced
/// distribution, so the hashed slot always holds the still-hidden branch.
pub fn distinguisher_advantage_exact(
    strategy: &Arc<dyn ReceiverStrategy>,
    lambda: usize,
    ell: usize,
) -> Result<DistinguisherReport, AttackError> {
    let d = induced_joint_distribution(strategy.as_ref(), lambda)?;
    let delta = (-(lambda as f64) / 20.0).exp2();
    let split = min_entropy_split(&d, delta)?;

    let povms = strategy.memento_measurements(lambda);
    let tables: Vec<_> = povms.iter().map(outcome_table).collect();
    let counts: Vec<usize> = povms.iter().map(SingleQubitMeasurement::len).collect();
    let inv_out = 0.5f64.powi(ell as i32);
    let n_strings = (1usize << (lambda + 1)) - 1;
    let nz = counts.iter().product::<usize>() << lambda;

    let mut acceptance_hashed = 0.0f64;
    for bases_raw in 0..1usize << lambda {
        let bases = BitString::from_index(bases_raw, lambda);
        for bits_raw in 0..1usize << lambda {
            let payload = BitString::from_index(bits_raw, lambda);
            let x0 = payload.restrict_by(&bases, false);
            let x1 = payload.restrict_by(&bases, true);
            let (i0, i1) = (short_string_index(&x0), short_string_index(&x1));
            let mut memento = vec![0usize; lambda];
            let mut w_flat = 0usize;
            loop {
                let mut p = 1.0f64;
                for i in 0..lambda {
                    p *= tables[i][memento[i]][usize::from(payload[i])]
                        [usize::from(bases[i])];
                }
                if p > 0.0 {
                    let z = w_flat * (1 << lambda) + bases_raw;
                    let atom = (i0 * n_strings + i1) * nz + z;
                    // The hidden branch is the complement of the split bit.
                    let c_in = !split.choice[atom];
                    let hidden = if c_in { &x1 } else { &x0 };
                    let (g0, g1) = strategy.guess(&memento, &bases, ell);
                    let guess = if c_in { g1 } else { g0 };
                    acceptance_hashed += p * hash_match_probability(&guess, hidden, inv_out)?;
                }
                w_flat += 1;
                if !next_mixed_radix(&mut memento, &counts) {
                    break;
                }
            }
        }
    }
    acceptance_hashed /= 4f64.powi(lambda as i32);
    let attack_success = guess_probability_exact(strategy.as_ref(), lambda, ell)?.value;
    Ok(DistinguisherReport {
        acceptance_hashed,
        acceptance_uniform: inv_out,
        advantage: acceptance_hashed - inv_out,
        attack_success,
        baseline: inv_out,
        delta,
    })
}

/// Probability over the planted hash that the branch guess matches the
/// hash of the true hidden substring.
fn hash_match_probability(
    guess: &BranchGuess,
    hidden: &BitString,
    inv_out: f64,
) -> Result<f64, AttackError> {
    Ok(match guess {
        BranchGuess::Substring(g) => {
            if g.len() != hidden.len() {
                return Err(AttackError::GuessLengthMismatch {
                    expected: hidden.len(),
                    actual: g.len(),
                });
            }
            if g == hidden {
                1.0
            } else {
                // Distinct equal-length inputs pad distinctly, so they
                // collide with probability exactly 2^-ell.
                inv_out
            }
        }
        BranchGuess::RawValue(g) => {
            if hidden.is_empty() {
                // Hash of the empty string is all-zero under every seed.
                if g.count_ones() == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                inv_out
            }
        }
        BranchGuess::Uniform => inv_out,
    })
}
