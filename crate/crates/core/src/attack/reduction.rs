//! Reducing a transfer attack to a correlation-game strategy.
//!
//! A deterministic string-guessing receiver attack maps to the memento
//! class directly: play its per-qubit measurement on the entangled halves,
//! copy the outcome to both guessers, and respond with its substring
//! guesses reassembled by the disclosed bases. The game value of the image
//! equals the attack's probability of guessing both substrings, because
//! the referee's (outcome, bases) pair is distributed exactly like the
//! protocol's (payload, bases) and "both substrings right" is the same
//! event as "the reassembled string equals the payload".

use std::sync::Arc;

use crate::bits::BitString;
use crate::error::AttackError;
use crate::quantum::SingleQubitMeasurement;

use super::moe::{reassemble_by_bases, MoeResponse, MoeStrategy};
use super::rot_receiver::{next_mixed_radix, ReceiverStrategy, EXACT_LAMBDA_CAP};
use super::tables::outcome_table;

/// Builds the game image of a deterministic string-guessing attack.
pub fn reduce_to_moe(strategy: Arc<dyn ReceiverStrategy>, lambda: usize) -> MoeStrategy {
    MoeStrategy::new(
        strategy.memento_measurements(lambda),
        MoeResponse::Reassemble(strategy),
    )
}

/// The attack-side quantity the reduction preserves: the probability that
/// both substring guesses are right, evaluated by direct enumeration of
/// (payload, bases, memento) with no algebraic shortcuts.
pub fn joint_string_guess_probability(
    strategy: &dyn ReceiverStrategy,
    lambda: usize,
) -> Result<f64, AttackError> {
    if lambda == 0 || lambda > EXACT_LAMBDA_CAP {
        return Err(AttackError::LambdaTooLarge {
            lambda,
            max: EXACT_LAMBDA_CAP,
        });
    }
    let povms = strategy.memento_measurements(lambda);
    let tables: Vec<_> = povms.iter().map(outcome_table).collect();
    let counts: Vec<usize> = povms.iter().map(SingleQubitMeasurement::len).collect();

    let mut total = 0.0f64;
    for bases_raw in 0..1usize << lambda {
        let bases = BitString::from_index(bases_raw, lambda);
        for bits_raw in 0..1usize << lambda {
            let payload = BitString::from_index(bits_raw, lambda);
            let mut memento = vec![0usize; lambda];
            loop {
                let (g0, g1) = strategy
                    .guess_strings(&memento, &bases)
                    .ok_or(AttackError::NonDeterministicGuesser)?;
                if reassemble_by_bases(&g0, &g1, &bases)? == payload {
                    let mut p = 1.0f64;
                    for i in 0..lambda {
                        p *= tables[i][memento[i]][usize::from(payload[i])]
                            [usize::from(bases[i])];
                    }
                    total += p;
                }
                if !next_mixed_radix(&mut memento, &counts) {
                    break;
                }
            }
        }
    }
    Ok(total / 4f64.powi(lambda as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::moe::moe_game_value;
    use crate::attack::rot_receiver::{string_attacks, HonestGuessReceiver};
    use crate::info::per_qubit_guess_bound;

    #[test]
    fn reduction_preserves_the_joint_guess_probability() {
        for attack in string_attacks() {
            for lambda in 1..=4usize {
                let direct = joint_string_guess_probability(attack.as_ref(), lambda).unwrap();
                let image = reduce_to_moe(attack.clone(), lambda);
                let game = moe_game_value(&image, lambda).unwrap();
                assert!(
                    (direct - game).abs() < 1e-9,
                    "{} lambda {lambda}: direct {direct} vs game {game}",
                    attack.name()
                );
            }
        }
    }

    #[test]
    fn breidbart_image_attains_the_bound_at_one_qubit() {
        let attack = string_attacks()
            .into_iter()
            .find(|a| a.name() == "breidbart")
            .unwrap();
        let game = moe_game_value(&reduce_to_moe(attack, 1), 1).unwrap();
        assert!((game - per_qubit_guess_bound()).abs() < 1e-12);
    }

    #[test]
    fn constant_string_guesses_win_exactly_on_the_all_zero_payload() {
        let attack = string_attacks()
            .into_iter()
            .find(|a| a.name() == "constant-strings")
            .unwrap();
        for lambda in 1..=4usize {
            let direct = joint_string_guess_probability(attack.as_ref(), lambda).unwrap();
            assert!((direct - 0.5f64.powi(lambda as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn randomized_guessers_are_rejected() {
        let honest = HonestGuessReceiver { choice: false };
        assert!(matches!(
            joint_string_guess_probability(&honest, 2),
            Err(AttackError::NonDeterministicGuesser)
        ));
    }
}
