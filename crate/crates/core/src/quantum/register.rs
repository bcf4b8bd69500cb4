//! Registers, BB84 preparation and destructive measurement.

use num_complex::Complex64;
use rand::Rng;

use super::povm::{bb84_vector, Mat2, SingleQubitMeasurement};
use super::STATE_TOLERANCE;
use crate::bits::BitString;
use crate::error::QuantumError;
use crate::info::{Axis, JointDistribution};

/// Hard cap on register width; 2^24 amplitudes is the memory ceiling.
pub const MAX_QUBITS: usize = 24;

/// The sender-side classical description of a BB84 register: a payload bit
/// string and a basis bit string of equal length (basis bit 0 = standard,
/// 1 = Hadamard).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bb84Secret {
    pub bits: BitString,
    pub bases: BitString,
}

impl Bb84Secret {
    pub fn new(bits: BitString, bases: BitString) -> Result<Self, QuantumError> {
        if bits.len() != bases.len() {
            return Err(QuantumError::LengthMismatch {
                expected: bits.len(),
                actual: bases.len(),
            });
        }
        Ok(Self { bits, bases })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            bits: BitString::random(n, rng),
            bases: BitString::random(n, rng),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// A simulated n-qubit pure state. Dead registers (already measured, or
/// force-measured by a stall) reject every further operation.
#[derive(Clone, Debug)]
pub struct QuantumRegister {
    n: usize,
    amps: Vec<Complex64>,
    alive: bool,
}

impl QuantumRegister {
    /// Prepares the product state encoding `secret.bits` in `secret.bases`:
    /// qubit i is the BB84 state for (bit_i, basis_i).
    pub fn prepare_bb84(secret: &Bb84Secret) -> Result<Self, QuantumError> {
        let n = secret.len();
        if n == 0 {
            return Err(QuantumError::EmptyRegister);
        }
        if n > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits { n, max: MAX_QUBITS });
        }
        let mut amps = vec![Complex64::ONE];
        for i in 0..n {
            let v = bb84_vector(secret.bits[i], secret.bases[i]);
            let mut next = vec![Complex64::ZERO; amps.len() * 2];
            for (j, &a) in amps.iter().enumerate() {
                next[2 * j] = a * v[0];
                next[2 * j + 1] = a * v[1];
            }
            amps = next;
        }
        Ok(Self {
            n,
            amps,
            alive: true,
        })
    }

    /// Rebuilds a register from raw amplitudes (wire decoding).
    pub(crate) fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() < 2 || amps.len() != 1 << n {
            return Err(QuantumError::EmptyRegister);
        }
        if n > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits { n, max: MAX_QUBITS });
        }
        Ok(Self {
            n,
            amps,
            alive: true,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_alive(&self) -> bool {
        self.alive
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn ensure_alive(&self) -> Result<(), QuantumError> {
        if self.alive {
            Ok(())
        } else {
            Err(QuantumError::DeadRegister)
        }
    }

    /// Measures every qubit, applying a Hadamard first on qubits whose basis
    /// bit is 1. Consumes the register.
    pub fn measure_in_bases<R: Rng + ?Sized>(
        &mut self,
        bases: &BitString,
        rng: &mut R,
    ) -> Result<BitString, QuantumError> {
        self.ensure_alive()?;
        if bases.len() != self.n {
            return Err(QuantumError::LengthMismatch {
                expected: self.n,
                actual: bases.len(),
            });
        }
        let h = Mat2::hadamard();
        for qubit in 0..self.n {
            if bases[qubit] {
                apply_single_qubit(&h, &mut self.amps, self.n, qubit);
            }
        }
        let index = sample_index(&self.amps, rng);
        self.alive = false;
        Ok(BitString::from_index(index, self.n))
    }

    /// Standard-basis measurement of every qubit; this is the stall rule.
    pub fn force_measure_standard<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<BitString, QuantumError> {
        self.ensure_alive()?;
        let index = sample_index(&self.amps, rng);
        self.alive = false;
        Ok(BitString::from_index(index, self.n))
    }

    /// Samples a joint outcome of one single-qubit measurement per qubit,
    /// with the exact product-POVM probabilities. Consumes the register.
    pub fn measure_product_povm<R: Rng + ?Sized>(
        &mut self,
        per_qubit: &[SingleQubitMeasurement],
        rng: &mut R,
    ) -> Result<Vec<String>, QuantumError> {
        let indices = self.measure_product_povm_indices(per_qubit, rng)?;
        Ok(indices
            .iter()
            .zip(per_qubit)
            .map(|(&o, m)| m.label(o).to_string())
            .collect())
    }

    /// As [`Self::measure_product_povm`] but returning outcome indices.
    pub fn measure_product_povm_indices<R: Rng + ?Sized>(
        &mut self,
        per_qubit: &[SingleQubitMeasurement],
        rng: &mut R,
    ) -> Result<Vec<usize>, QuantumError> {
        self.ensure_alive()?;
        if per_qubit.len() != self.n {
            return Err(QuantumError::LengthMismatch {
                expected: self.n,
                actual: per_qubit.len(),
            });
        }
        // Sample qubit by qubit: the joint probability of a prefix is the
        // squared norm of the state after applying sqrt(E_o) per chosen
        // outcome, so conditionals come from norms of candidate branches.
        let mut state = self.amps.clone();
        let mut outcome = Vec::with_capacity(self.n);
        let mut prefix_norm2 = 1.0f64;
        for (qubit, m) in per_qubit.iter().enumerate() {
            let mut branch_norm2 = Vec::with_capacity(m.len());
            let mut branches = Vec::with_capacity(m.len());
            for o in 0..m.len() {
                let mut branch = state.clone();
                apply_single_qubit(m.sqrt_operator(o), &mut branch, self.n, qubit);
                branch_norm2.push(branch.iter().map(|a| a.norm_sqr()).sum::<f64>());
                branches.push(branch);
            }
            let u: f64 = rng.random::<f64>() * prefix_norm2;
            let mut acc = 0.0;
            let mut chosen = m.len() - 1;
            for (o, &p) in branch_norm2.iter().enumerate() {
                acc += p;
                if u < acc {
                    chosen = o;
                    break;
                }
            }
            prefix_norm2 = branch_norm2[chosen];
            state = branches.swap_remove(chosen);
            outcome.push(chosen);
        }
        self.alive = false;
        Ok(outcome)
    }

    /// Exact joint outcome distribution of a product measurement, one axis
    /// per qubit. Does not consume the register.
    pub fn outcome_distribution(
        &self,
        per_qubit: &[SingleQubitMeasurement],
    ) -> Result<JointDistribution, QuantumError> {
        self.ensure_alive()?;
        if per_qubit.len() != self.n {
            return Err(QuantumError::LengthMismatch {
                expected: self.n,
                actual: per_qubit.len(),
            });
        }
        let mut probs = Vec::new();
        let mut state = self.amps.clone();
        collect_joint_probabilities(&mut state, per_qubit, 0, self.n, &mut probs);
        let axes = per_qubit
            .iter()
            .enumerate()
            .map(|(i, m)| Axis::new(format!("q{i}"), m.labels()))
            .collect();
        JointDistribution::from_floats_with_tolerance(axes, probs, STATE_TOLERANCE)
            .map_err(|_| QuantumError::IncompleteMeasurement {
                deviation: f64::NAN,
                tolerance: STATE_TOLERANCE,
            })
    }
}

/// Depth-first walk over joint outcomes: at depth `qubit` the state carries
/// sqrt(E) applications for the chosen prefix; leaves emit squared norms.
fn collect_joint_probabilities(
    state: &mut [Complex64],
    per_qubit: &[SingleQubitMeasurement],
    qubit: usize,
    n: usize,
    out: &mut Vec<f64>,
) {
    if qubit == n {
        out.push(state.iter().map(|a| a.norm_sqr()).sum());
        return;
    }
    for o in 0..per_qubit[qubit].len() {
        let mut branch = state.to_vec();
        apply_single_qubit(per_qubit[qubit].sqrt_operator(o), &mut branch, n, qubit);
        collect_joint_probabilities(&mut branch, per_qubit, qubit + 1, n, out);
    }
}

/// Applies a 2x2 matrix to one qubit of a dense state vector, in place.
pub(crate) fn apply_single_qubit(m: &Mat2, amps: &mut [Complex64], n: usize, qubit: usize) {
    let stride = 1usize << (n - 1 - qubit);
    let mut base = 0;
    while base < amps.len() {
        for offset in 0..stride {
            let i0 = base + offset;
            let i1 = i0 + stride;
            let a0 = amps[i0];
            let a1 = amps[i1];
            amps[i0] = m.m[0][0] * a0 + m.m[0][1] * a1;
            amps[i1] = m.m[1][0] * a0 + m.m[1][1] * a1;
        }
        base += stride * 2;
    }
}

fn sample_index<R: Rng + ?Sized>(amps: &[Complex64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, a) in amps.iter().enumerate() {
        acc += a.norm_sqr();
        if u < acc {
            return i;
        }
    }
    amps.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn secret(bits: &str, bases: &str) -> Bb84Secret {
        Bb84Secret::new(
            BitString::parse(bits).unwrap(),
            BitString::parse(bases).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn prepare_computational_basis_state() {
        let reg = QuantumRegister::prepare_bb84(&secret("0", "0")).unwrap();
        assert_eq!(reg.amplitudes()[0], Complex64::ONE);
        assert_eq!(reg.amplitudes()[1], Complex64::ZERO);
        assert!(reg.is_alive());
    }

    #[test]
    fn prepare_hadamard_of_one_is_minus() {
        let reg = QuantumRegister::prepare_bb84(&secret("1", "1")).unwrap();
        assert!((reg.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((reg.amplitudes()[1].re + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn prepare_two_qubit_tensor_product() {
        // (bits=01, bases=10) is |+> (x) |1>: amplitude 1/sqrt(2) on indices
        // 01 and 11, i.e. [0, h, 0, h].
        let reg = QuantumRegister::prepare_bb84(&secret("01", "10")).unwrap();
        let a = reg.amplitudes();
        assert!(a[0].norm() < 1e-15);
        assert!((a[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(a[2].norm() < 1e-15);
        assert!((a[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn normalization_preserved_by_preparation() {
        let mut r = rng::seeded(11);
        for n in 1..=8 {
            let reg = QuantumRegister::prepare_bb84(&Bb84Secret::random(n, &mut r)).unwrap();
            assert!((reg.norm_squared() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn size_limits_enforced() {
        let s = Bb84Secret::new(BitString::zeros(25), BitString::zeros(25)).unwrap();
        assert!(matches!(
            QuantumRegister::prepare_bb84(&s),
            Err(QuantumError::TooManyQubits { .. })
        ));
        let s = Bb84Secret::new(BitString::new(), BitString::new()).unwrap();
        assert!(matches!(
            QuantumRegister::prepare_bb84(&s),
            Err(QuantumError::EmptyRegister)
        ));
        assert!(Bb84Secret::new(BitString::zeros(2), BitString::zeros(3)).is_err());
    }

    #[test]
    fn matched_bases_recover_payload_exhaustively() {
        let mut r = rng::seeded(3);
        for n in 1..=6 {
            for a_idx in 0..1usize << n {
                for t_idx in 0..1usize << n {
                    let s = Bb84Secret::new(
                        BitString::from_index(a_idx, n),
                        BitString::from_index(t_idx, n),
                    )
                    .unwrap();
                    let mut reg = QuantumRegister::prepare_bb84(&s).unwrap();
                    let out = reg.measure_in_bases(&s.bases, &mut r).unwrap();
                    assert_eq!(out, s.bits, "n={n} a={a_idx} theta={t_idx}");
                    assert!(!reg.is_alive());
                }
            }
        }
    }

    #[test]
    fn dead_register_rejected() {
        let mut reg = QuantumRegister::prepare_bb84(&secret("0", "0")).unwrap();
        let mut r = rng::seeded(1);
        reg.measure_in_bases(&BitString::zeros(1), &mut r).unwrap();
        assert!(matches!(
            reg.measure_in_bases(&BitString::zeros(1), &mut r),
            Err(QuantumError::DeadRegister)
        ));
        assert!(matches!(
            reg.force_measure_standard(&mut r),
            Err(QuantumError::DeadRegister)
        ));
    }

    #[test]
    fn basis_length_mismatch_rejected() {
        let mut reg = QuantumRegister::prepare_bb84(&secret("01", "00")).unwrap();
        let mut r = rng::seeded(1);
        assert!(matches!(
            reg.measure_in_bases(&BitString::zeros(3), &mut r),
            Err(QuantumError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mismatched_first_qubit_stays_deterministic_on_matched_one() {
        // bits=00, bases=01, measured all-standard: qubit 0 always reads 0,
        // qubit 1 ends up uniform.
        let mut ones = 0;
        let mut r = rng::seeded(5);
        let trials = 20_000;
        for _ in 0..trials {
            let mut reg = QuantumRegister::prepare_bb84(&secret("00", "01")).unwrap();
            let out = reg.measure_in_bases(&BitString::zeros(2), &mut r).unwrap();
            assert!(!out[0]);
            if out[1] {
                ones += 1;
            }
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 3.0 * crate::stats::binomial_sigma(0.5, trials));
    }

    #[test]
    fn double_hadamard_is_identity_distributionally() {
        // Measuring H-conjugated |-> in the Hadamard basis equals measuring
        // |1> in the standard basis: a point mass.
        let reg = QuantumRegister::prepare_bb84(&secret("1", "1")).unwrap();
        let dist = reg
            .outcome_distribution(&[SingleQubitMeasurement::hadamard_basis()])
            .unwrap();
        let p = dist.probabilities_f64();
        assert!(p[0].abs() < 1e-12);
        assert!((p[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcome_distribution_examples() {
        // Standard basis on |+>: uniform.
        let reg = QuantumRegister::prepare_bb84(&secret("0", "1")).unwrap();
        let d = reg
            .outcome_distribution(&[SingleQubitMeasurement::standard_basis()])
            .unwrap();
        assert!((d.probabilities_f64()[0] - 0.5).abs() < 1e-12);

        // Matching basis: point mass on the payload.
        let reg = QuantumRegister::prepare_bb84(&secret("10", "01")).unwrap();
        let d = reg
            .outcome_distribution(&[
                SingleQubitMeasurement::standard_basis(),
                SingleQubitMeasurement::hadamard_basis(),
            ])
            .unwrap();
        let p = d.probabilities_f64();
        assert!((p[BitString::parse("10").unwrap().to_index()] - 1.0).abs() < 1e-12);

        // Breidbart on |->: cos^2(pi/8) on the near-1 outcome.
        let reg = QuantumRegister::prepare_bb84(&secret("1", "1")).unwrap();
        let d = reg
            .outcome_distribution(&[SingleQubitMeasurement::breidbart_basis()])
            .unwrap();
        let p = d.probabilities_f64();
        let cos2 = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert!((p[1] - cos2).abs() < 1e-9);
        assert!((p[0] - (1.0 - cos2)).abs() < 1e-9);
    }

    #[test]
    fn product_povm_sampling_matches_exact_distribution() {
        let reg = QuantumRegister::prepare_bb84(&secret("01", "10")).unwrap();
        let povms = [
            SingleQubitMeasurement::four_state_povm(),
            SingleQubitMeasurement::breidbart_basis(),
        ];
        let exact = reg.outcome_distribution(&povms).unwrap();
        let probs = exact.probabilities_f64();

        let trials = 100_000u64;
        let mut counts = vec![0u64; probs.len()];
        let mut r = rng::seeded(17);
        for _ in 0..trials {
            let mut fresh = reg.clone();
            let out = fresh.measure_product_povm_indices(&povms, &mut r).unwrap();
            counts[out[0] * povms[1].len() + out[1]] += 1;
        }
        for (i, &p) in probs.iter().enumerate() {
            let freq = counts[i] as f64 / trials as f64;
            let sigma = crate::stats::binomial_sigma(p.max(1e-12), trials);
            assert!(
                (freq - p).abs() <= 3.0 * sigma + 1e-9,
                "cell {i}: freq {freq} vs exact {p}"
            );
        }
    }

    #[test]
    fn product_povm_on_projective_point_mass() {
        let mut reg = QuantumRegister::prepare_bb84(&secret("0", "0")).unwrap();
        let mut r = rng::seeded(2);
        let labels = reg
            .measure_product_povm(&[SingleQubitMeasurement::standard_basis()], &mut r)
            .unwrap();
        assert_eq!(labels, vec!["0".to_string()]);
        assert!(!reg.is_alive());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn outcome_distributions_sum_to_one(n in 1usize..5, seed in any::<u64>()) {
            let mut r = rng::seeded(seed);
            let s = Bb84Secret::random(n, &mut r);
            let reg = QuantumRegister::prepare_bb84(&s).unwrap();
            let povms: Vec<_> = (0..n).map(|i| match i % 3 {
                0 => SingleQubitMeasurement::four_state_povm(),
                1 => SingleQubitMeasurement::breidbart_basis(),
                _ => SingleQubitMeasurement::standard_basis(),
            }).collect();
            let d = reg.outcome_distribution(&povms).unwrap();
            let total: f64 = d.probabilities_f64().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
