//! Malicious-receiver attacks on the random oblivious transfer and their
//! evaluators.
//!
//! An attack is split in two: a memento stage measuring each incoming qubit
//! before the stall (everything else is lost), and a guessing stage that
//! sees the memento plus the sender's disclosure and outputs guesses for
//! both branch values. The quantity of interest is the probability of
//! guessing both branches at once; the trivial baseline is `2^-ell` (one
//! branch is free, the other is a blind hash guess).
//!
//! Three evaluators are provided: exact (integrating the hash choice
//! analytically through exact universality), enumerated (brute force over
//! every pair of hash seeds; the oracle for the exact path), and sampled
//! (Monte Carlo sessions at any lambda).

use std::sync::Arc;

use rand::Rng;

use crate::bits::BitString;
use crate::error::AttackError;
use crate::hashing::{self, HashDescriptor};
use crate::info::{Axis, JointDistribution};
use crate::quantum::SingleQubitMeasurement;
use crate::rng::{self};
use crate::stats;

use super::tables::outcome_table;

/// Exact evaluation is capped at this many qubits.
pub const EXACT_LAMBDA_CAP: usize = 6;
/// Brute-force seed enumeration is capped at this much work.
pub const ENUMERATION_WORK_CAP: u64 = 1 << 26;
/// Dense induced distributions are capped at this many atoms.
pub const INDUCED_ATOM_CAP: usize = 1 << 24;

/// A guess for one branch output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchGuess {
    /// A guess for the branch's raw substring; the implied output guess is
    /// its hash under the disclosed descriptor.
    Substring(BitString),
    /// A direct guess at the `ell`-bit branch output.
    RawValue(BitString),
    /// A fresh uniform `ell`-bit guess (randomized guesser).
    Uniform,
}

/// A malicious receiver: memento measurements plus a guessing rule.
pub trait ReceiverStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    /// One measurement per incoming qubit.
    fn memento_measurements(&self, lambda: usize) -> Vec<SingleQubitMeasurement>;

    /// Deterministic substring guesses for (x0, x1), when this strategy is a
    /// string guesser. `memento` holds per-qubit outcome indices.
    fn guess_strings(
        &self,
        memento: &[usize],
        bases: &BitString,
    ) -> Option<(BitString, BitString)>;

    /// Branch guesses from the memento and the disclosure.
    fn guess(
        &self,
        memento: &[usize],
        bases: &BitString,
        _ell: usize,
    ) -> (BranchGuess, BranchGuess) {
        let (g0, g1) = self
            .guess_strings(memento, bases)
            .expect("strategies must implement guess_strings or override guess");
        (BranchGuess::Substring(g0), BranchGuess::Substring(g1))
    }
}

/// Measure every qubit in the standard basis and read substring guesses
/// straight off the outcomes.
pub struct StandardBasisReceiver;

/// Measure every qubit in the intermediate basis; the outcome is the best
/// simultaneous guess for either preparation basis.
pub struct BreidbartReceiver;

/// Follow the honest receiver for one branch and guess the other branch
/// output uniformly at random.
pub struct HonestGuessReceiver {
    pub choice: bool,
}

/// Keep nothing and guess the all-zero substring on both branches.
pub struct ConstantStringsReceiver;

/// Keep nothing and guess a fixed output value on both branches. Against a
/// branch with at least one position this matches with probability exactly
/// `2^-ell`, making it the canonical zero-advantage attack.
pub struct ConstantValueReceiver;

impl ReceiverStrategy for StandardBasisReceiver {
    fn name(&self) -> &'static str {
        "standard-basis"
    }

    fn memento_measurements(&self, lambda: usize) -> Vec<SingleQubitMeasurement> {
        vec![SingleQubitMeasurement::standard_basis(); lambda]
    }

    fn guess_strings(
        &self,
        memento: &[usize],
        bases: &BitString,
    ) -> Option<(BitString, BitString)> {
        Some(split_outcomes(memento, bases))
    }
}

impl ReceiverStrategy for BreidbartReceiver {
    fn name(&self) -> &'static str {
        "breidbart"
    }

    fn memento_measurements(&self, lambda: usize) -> Vec<SingleQubitMeasurement> {
        vec![SingleQubitMeasurement::breidbart_basis(); lambda]
    }

    fn guess_strings(
        &self,
        memento: &[usize],
        bases: &BitString,
    ) -> Option<(BitString, BitString)> {
        Some(split_outcomes(memento, bases))
    }
}

impl ReceiverStrategy for HonestGuessReceiver {
    fn name(&self) -> &'static str {
        if self.choice {
            "honest-1"
        } else {
            "honest-0"
        }
    }

    fn memento_measurements(&self, lambda: usize) -> Vec<SingleQubitMeasurement> {
        vec![SingleQubitMeasurement::basis(self.choice); lambda]
    }

    fn guess_strings(&self, _: &[usize], _: &BitString) -> Option<(BitString, BitString)> {
        None
    }

    fn guess(
        &self,
        memento: &[usize],
        bases: &BitString,
        _ell: usize,
    ) -> (BranchGuess, BranchGuess) {
        let (g0, g1) = split_outcomes(memento, bases);
        if self.choice {
            (BranchGuess::Uniform, BranchGuess::Substring(g1))
        } else {
            (BranchGuess::Substring(g0), BranchGuess::Uniform)
        }
    }
}

impl ReceiverStrategy for ConstantStringsReceiver {
    fn name(&self) -> &'static str {
        "constant-strings"
    }

    fn memento_measurements(&self, lambda: usize) -> Vec<SingleQubitMeasurement> {
        vec![SingleQubitMeasurement::trivial(); lambda]
    }

    fn guess_strings(
        &self,
        _memento: &[usize],
        bases: &BitString,
    ) -> Option<(BitString, BitString)> {
        let n1 = bases.count_ones();
        Some((
            BitString::zeros(bases.len() - n1),
            BitString::zeros(n1),
        ))
    }
}

impl ReceiverStrategy for ConstantValueReceiver {
    fn name(&self) -> &'static str {
        "constant-value"
    }

    fn memento_measurements(&self, lambda: usize) -> Vec<SingleQubitMeasurement> {
        vec![SingleQubitMeasurement::trivial(); lambda]
    }

    fn guess_strings(&self, _: &[usize], _: &BitString) -> Option<(BitString, BitString)> {
        None
    }

    fn guess(
        &self,
        _memento: &[usize],
        _bases: &BitString,
        ell: usize,
    ) -> (BranchGuess, BranchGuess) {
        (
            BranchGuess::RawValue(BitString::zeros(ell)),
            BranchGuess::RawValue(BitString::zeros(ell)),
        )
    }
}

/// Splits per-qubit outcomes (interpreted as bit guesses) by basis class.
fn split_outcomes(memento: &[usize], bases: &BitString) -> (BitString, BitString) {
    let as_bits: BitString = memento.iter().map(|&o| o == 1).collect();
    (
        as_bits.restrict_by(bases, false),
        as_bits.restrict_by(bases, true),
    )
}

/// All shipped attacks.
pub fn builtin_attacks() -> Vec<Arc<dyn ReceiverStrategy>> {
    vec![
        Arc::new(StandardBasisReceiver),
        Arc::new(BreidbartReceiver),
        Arc::new(ConstantStringsReceiver),
        Arc::new(HonestGuessReceiver { choice: false }),
        Arc::new(ConstantValueReceiver),
    ]
}

/// The deterministic string-guessing attacks (the class the correlation
/// game reduction applies to).
pub fn string_attacks() -> Vec<Arc<dyn ReceiverStrategy>> {
    vec![
        Arc::new(StandardBasisReceiver),
        Arc::new(BreidbartReceiver),
        Arc::new(ConstantStringsReceiver),
    ]
}

pub fn attack_by_name(name: &str) -> Result<Arc<dyn ReceiverStrategy>, AttackError> {
    builtin_attacks()
        .into_iter()
        .find(|a| a.name() == name)
        .ok_or_else(|| AttackError::UnknownAttack(name.to_string()))
}

/// Result of evaluating an attack's joint guessing probability.
#[derive(Clone, Debug)]
pub struct GuessEvaluation {
    pub value: f64,
    /// `2^-ell`.
    pub baseline: f64,
    pub advantage: f64,
    /// 95% Clopper-Pearson interval, sampled mode only.
    pub ci: Option<(f64, f64)>,
    pub mode: &'static str,
    pub trials: Option<u64>,
}

impl GuessEvaluation {
    fn new(value: f64, ell: usize, mode: &'static str) -> Self {
        let baseline = 0.5f64.powi(ell as i32);
        Self {
            value,
            baseline,
            advantage: value - baseline,
            ci: None,
            mode,
            trials: None,
        }
    }
}

/// Exact joint-guess probability. The hash draw is integrated analytically:
/// a wrong substring guess collides with probability exactly `2^-ell`
/// (exact universality of the family), a right one always matches.
pub fn guess_probability_exact(
    strategy: &dyn ReceiverStrategy,
    lambda: usize,
    ell: usize,
) -> Result<GuessEvaluation, AttackError> {
    if lambda == 0 || lambda > EXACT_LAMBDA_CAP {
        return Err(AttackError::LambdaTooLarge {
            lambda,
            max: EXACT_LAMBDA_CAP,
        });
    }
    let povms = strategy.memento_measurements(lambda);
    let tables: Vec<_> = povms.iter().map(outcome_table).collect();
    let counts: Vec<usize> = povms.iter().map(SingleQubitMeasurement::len).collect();
    let inv_out = 0.5f64.powi(ell as i32);

    let mut total = 0.0f64;
    for bases_raw in 0..1usize << lambda {
        let bases = BitString::from_index(bases_raw, lambda);
        let mut memento = vec![0usize; lambda];
        loop {
            let (g0, g1) = strategy.guess(&memento, &bases, ell);
            let f0 = branch_factor(&g0, false, &bases, &memento, &tables, inv_out, ell)?;
            let f1 = branch_factor(&g1, true, &bases, &memento, &tables, inv_out, ell)?;
            total += f0 * f1;
            if !next_mixed_radix(&mut memento, &counts) {
                break;
            }
        }
    }
    Ok(GuessEvaluation::new(
        total / 4f64.powi(lambda as i32),
        ell,
        "exact",
    ))
}

/// The branch's contribution summed over its substring values:
/// `sum_{x_c} prod_i P(w_i | x_i, c) * Pr_h[guess matches h(x_c)]`.
fn branch_factor(
    guess: &BranchGuess,
    branch: bool,
    bases: &BitString,
    memento: &[usize],
    tables: &[Vec<[[f64; 2]; 2]>],
    inv_out: f64,
    ell: usize,
) -> Result<f64, AttackError> {
    let positions: Vec<usize> = (0..bases.len()).filter(|&i| bases[i] == branch).collect();
    let c = usize::from(branch);
    let mut sum_prod = 1.0f64;
    for &i in &positions {
        let cell = &tables[i][memento[i]];
        sum_prod *= cell[0][c] + cell[1][c];
    }
    match guess {
        BranchGuess::Substring(g) => {
            if g.len() != positions.len() {
                return Err(AttackError::GuessLengthMismatch {
                    expected: positions.len(),
                    actual: g.len(),
                });
            }
            let mut match_prod = 1.0f64;
            for (rank, &i) in positions.iter().enumerate() {
                match_prod *= tables[i][memento[i]][usize::from(g[rank])][c];
            }
            Ok(inv_out * sum_prod + (1.0 - inv_out) * match_prod)
        }
        BranchGuess::RawValue(g) => {
            if g.len() != ell {
                return Err(AttackError::GuessLengthMismatch {
                    expected: ell,
                    actual: g.len(),
                });
            }
            if positions.is_empty() {
                // The branch output is the hash of the empty string, which
                // is the all-zero string under every seed.
                Ok(if g.count_ones() == 0 { 1.0 } else { 0.0 })
            } else {
                Ok(inv_out * sum_prod)
            }
        }
        BranchGuess::Uniform => Ok(inv_out * sum_prod),
    }
}

/// Brute-force oracle: enumerates preparation strings, bases, memento
/// outcomes and both hash seeds, materializing every guess. Exponentially
/// expensive; used to validate [`guess_probability_exact`].
pub fn guess_probability_enumerated(
    strategy: &dyn ReceiverStrategy,
    lambda: usize,
    ell: usize,
) -> Result<GuessEvaluation, AttackError> {
    if lambda == 0 || lambda > EXACT_LAMBDA_CAP {
        return Err(AttackError::LambdaTooLarge {
            lambda,
            max: EXACT_LAMBDA_CAP,
        });
    }
    let povms = strategy.memento_measurements(lambda);
    let tables: Vec<_> = povms.iter().map(outcome_table).collect();
    let counts: Vec<usize> = povms.iter().map(SingleQubitMeasurement::len).collect();
    let seed_bits = hashing::seed_len(lambda, ell);
    let seeds = 1u64 << seed_bits;
    let w_count: u64 = counts.iter().map(|&c| c as u64).product();
    let work = seeds
        .saturating_mul(seeds)
        .saturating_mul(1 << (2 * lambda))
        .saturating_mul(w_count);
    if work > ENUMERATION_WORK_CAP {
        return Err(AttackError::LambdaTooLarge {
            lambda,
            max: EXACT_LAMBDA_CAP,
        });
    }
    let descriptors: Vec<HashDescriptor> = (0..seeds)
        .map(|s| {
            HashDescriptor::new(
                lambda,
                ell,
                BitString::from_index(s as usize, seed_bits),
            )
        })
        .collect::<Result<_, _>>()?;

    let mut total = 0.0f64;
    for bases_raw in 0..1usize << lambda {
        let bases = BitString::from_index(bases_raw, lambda);
        for bits_raw in 0..1usize << lambda {
            let payload = BitString::from_index(bits_raw, lambda);
            let x0 = payload.restrict_by(&bases, false);
            let x1 = payload.restrict_by(&bases, true);
            let mut memento = vec![0usize; lambda];
            loop {
                let mut p_w = 1.0f64;
                for i in 0..lambda {
                    p_w *= tables[i][memento[i]][usize::from(payload[i])]
                        [usize::from(bases[i])];
                }
                if p_w > 0.0 {
                    let (g0, g1) = strategy.guess(&memento, &bases, ell);
                    let mut hits = 0.0f64;
                    for h0 in &descriptors {
                        for h1 in &descriptors {
                            let m0 = h0.eval(&x0)?;
                            let m1 = h1.eval(&x1)?;
                            hits += materialized_match(&g0, &m0, h0, ell)?
                                * materialized_match(&g1, &m1, h1, ell)?;
                        }
                    }
                    total += p_w * hits / (seeds as f64 * seeds as f64);
                }
                if !next_mixed_radix(&mut memento, &counts) {
                    break;
                }
            }
        }
    }
    Ok(GuessEvaluation::new(
        total / 4f64.powi(lambda as i32),
        ell,
        "enumerated",
    ))
}

fn materialized_match(
    guess: &BranchGuess,
    actual: &BitString,
    h: &HashDescriptor,
    ell: usize,
) -> Result<f64, AttackError> {
    Ok(match guess {
        BranchGuess::Substring(g) => {
            if h.eval(g)? == *actual {
                1.0
            } else {
                0.0
            }
        }
        BranchGuess::RawValue(g) => {
            if g == actual {
                1.0
            } else {
                0.0
            }
        }
        BranchGuess::Uniform => {
            // Explicit average over every possible uniform guess.
            let mut hits = 0u64;
            for g in 0..1usize << ell {
                if BitString::from_index(g, ell) == *actual {
                    hits += 1;
                }
            }
            hits as f64 / (1u64 << ell) as f64
        }
    })
}

/// Monte Carlo sessions at arbitrary lambda: product measurements on
/// product states sample qubit by qubit, so no state vector is needed and
/// lambda is not capped by register width.
pub fn guess_probability_sampled(
    strategy: &dyn ReceiverStrategy,
    lambda: usize,
    ell: usize,
    trials: u64,
    seed: u64,
) -> Result<GuessEvaluation, AttackError> {
    if lambda == 0 {
        return Err(AttackError::LambdaTooLarge { lambda, max: 1 << 14 });
    }
    let povms = strategy.memento_measurements(lambda);
    let tables: Vec<_> = povms.iter().map(outcome_table).collect();
    let counts: Vec<usize> = povms.iter().map(SingleQubitMeasurement::len).collect();

    let mut successes = 0u64;
    for trial in 0..trials {
        let mut rng = rng::derived(seed, trial);
        let payload = BitString::random(lambda, &mut rng);
        let bases = BitString::random(lambda, &mut rng);
        let mut memento = Vec::with_capacity(lambda);
        for i in 0..lambda {
            let cell = &tables[i];
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut picked = counts[i] - 1;
            for o in 0..counts[i] {
                acc += cell[o][usize::from(payload[i])][usize::from(bases[i])];
                if u < acc {
                    picked = o;
                    break;
                }
            }
            memento.push(picked);
        }
        let h0 = HashDescriptor::sample(lambda, ell, &mut rng)?;
        let h1 = HashDescriptor::sample(lambda, ell, &mut rng)?;
        let m0 = h0.eval(&payload.restrict_by(&bases, false))?;
        let m1 = h1.eval(&payload.restrict_by(&bases, true))?;
        let (g0, g1) = strategy.guess(&memento, &bases, ell);
        let ok0 = sampled_match(&g0, &m0, &h0, ell, &mut rng)?;
        let ok1 = sampled_match(&g1, &m1, &h1, ell, &mut rng)?;
        if ok0 && ok1 {
            successes += 1;
        }
    }
    let value = successes as f64 / trials as f64;
    let mut eval = GuessEvaluation::new(value, ell, "sampled");
    eval.ci = Some(stats::clopper_pearson(successes, trials, 0.95));
    eval.trials = Some(trials);
    Ok(eval)
}

fn sampled_match(
    guess: &BranchGuess,
    actual: &BitString,
    h: &HashDescriptor,
    ell: usize,
    rng: &mut rng::SessionRng,
) -> Result<bool, AttackError> {
    Ok(match guess {
        BranchGuess::Substring(g) => h.eval(g)? == *actual,
        BranchGuess::RawValue(g) => g == actual,
        BranchGuess::Uniform => BitString::random(ell, rng) == *actual,
    })
}

/// Advances a mixed-radix counter; false once it wraps to all zeros.
pub(crate) fn next_mixed_radix(digits: &mut [usize], radices: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Index of a variable-length bit string among all strings of length at
/// most some cap, ordered by length then value.
pub(crate) fn short_string_index(b: &BitString) -> usize {
    (1usize << b.len()) - 1 + b.to_index()
}

/// Labels for every bit string of length `0..=cap`, in index order.
pub(crate) fn short_string_labels(cap: usize) -> Vec<String> {
    let mut labels = Vec::with_capacity((1 << (cap + 1)) - 1);
    for len in 0..=cap {
        for i in 0..1usize << len {
            labels.push(BitString::from_index(i, len).to_string());
        }
    }
    labels
}

/// The exact joint distribution of (X0, X1, Z) induced by an attack's
/// memento stage, where Z enumerates (memento outcome, bases) pairs with
/// flat index `w_flat * 2^lambda + bases_raw`.
pub fn induced_joint_distribution(
    strategy: &dyn ReceiverStrategy,
    lambda: usize,
) -> Result<JointDistribution, AttackError> {
    if lambda == 0 || lambda > EXACT_LAMBDA_CAP {
        return Err(AttackError::LambdaTooLarge {
            lambda,
            max: EXACT_LAMBDA_CAP,
        });
    }
    let povms = strategy.memento_measurements(lambda);
    let tables: Vec<_> = povms.iter().map(outcome_table).collect();
    let counts: Vec<usize> = povms.iter().map(SingleQubitMeasurement::len).collect();
    let w_count: usize = counts.iter().product();
    let n_strings = (1usize << (lambda + 1)) - 1;
    let nz = w_count << lambda;
    let atoms = n_strings * n_strings * nz;
    if atoms > INDUCED_ATOM_CAP {
        return Err(AttackError::LambdaTooLarge {
            lambda,
            max: EXACT_LAMBDA_CAP,
        });
    }

    let mut probs = vec![0.0f64; atoms];
    let base_p = 1.0 / 4f64.powi(lambda as i32);
    for bases_raw in 0..1usize << lambda {
        let bases = BitString::from_index(bases_raw, lambda);
        for bits_raw in 0..1usize << lambda {
            let payload = BitString::from_index(bits_raw, lambda);
            let i0 = short_string_index(&payload.restrict_by(&bases, false));
            let i1 = short_string_index(&payload.restrict_by(&bases, true));
            let mut memento = vec![0usize; lambda];
            let mut w_flat = 0usize;
            loop {
                let mut p = base_p;
                for i in 0..lambda {
                    p *= tables[i][memento[i]][usize::from(payload[i])]
                        [usize::from(bases[i])];
                }
                let z = w_flat * (1 << lambda) + bases_raw;
                probs[(i0 * n_strings + i1) * nz + z] += p;
                w_flat += 1;
                if !next_mixed_radix(&mut memento, &counts) {
                    break;
                }
            }
        }
    }
    let z_labels = (0..nz)
        .map(|z| format!("{}|{}", z >> lambda, z & ((1 << lambda) - 1)))
        .collect();
    let axes = vec![
        Axis::new("x0", short_string_labels(lambda)),
        Axis::new("x1", short_string_labels(lambda)),
        Axis::new("z", z_labels),
    ];
    Ok(JointDistribution::from_floats_with_tolerance(
        axes, probs, 1e-9,
    )?)
}
