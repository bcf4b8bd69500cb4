//! Single-qubit measurements as labelled positive operators.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::STATE_TOLERANCE;
use crate::error::QuantumError;

/// A 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub const fn new(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self::new([[Complex64::ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.m[0][0] = Complex64::ONE;
        m.m[1][1] = Complex64::ONE;
        m
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::new([[h, h], [h, -h]])
    }

    /// Rank-1 projector |v><v| onto a (not necessarily normalized) vector.
    pub fn projector(v: [Complex64; 2]) -> Self {
        let norm2 = v[0].norm_sqr() + v[1].norm_sqr();
        let mut m = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                m.m[r][c] = v[r] * v[c].conj() / norm2;
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = self.m[r][c] + other.m[r][c];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in &mut out.m {
            for e in row {
                *e *= s;
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.m[0][0].im).abs() <= tol
            && (self.m[1][1].im).abs() <= tol
            && (self.m[0][1] - self.m[1][0].conj()).norm() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let off = self.m[0][1].norm_sqr();
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + off).sqrt();
        (mid - rad, mid + rad)
    }

    /// Principal square root of a positive semidefinite Hermitian matrix.
    /// Tiny negative eigenvalues (within tolerance) are clamped to zero.
    pub fn psd_sqrt(&self) -> Self {
        let (lo, hi) = self.hermitian_eigenvalues();
        let b = self.m[0][1];
        let a = self.m[0][0].re;
        // Eigenvector for eigenvalue `hi`. If the off-diagonal vanishes the
        // matrix is diagonal and the basis vectors are eigenvectors.
        if b.norm() <= STATE_TOLERANCE {
            let d = self.m[1][1].re;
            let (s0, s1) = (a.max(0.0).sqrt(), d.max(0.0).sqrt());
            return Self::new([
                [Complex64::new(s0, 0.0), Complex64::ZERO],
                [Complex64::ZERO, Complex64::new(s1, 0.0)],
            ]);
        }
        let v_hi = [b, Complex64::new(hi - a, 0.0)];
        let v_lo = [Complex64::new(-(hi - a), 0.0), b.conj()];
        let p_hi = Self::projector(v_hi);
        let p_lo = Self::projector(v_lo);
        p_hi.scale(hi.max(0.0).sqrt())
            .add(&p_lo.scale(lo.max(0.0).sqrt()))
    }

    /// <phi| M |phi> for a single-qubit state vector; real part only (exact
    /// for Hermitian M).
    pub fn expectation(&self, phi: [Complex64; 2]) -> f64 {
        let m0 = self.m[0][0] * phi[0] + self.m[0][1] * phi[1];
        let m1 = self.m[1][0] * phi[0] + self.m[1][1] * phi[1];
        (phi[0].conj() * m0 + phi[1].conj() * m1).re
    }
}

/// One labelled outcome of a single-qubit measurement.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub label: String,
    pub operator: Mat2,
}

/// A single-qubit POVM: positive operators summing to the identity.
#[derive(Clone, Debug)]
pub struct SingleQubitMeasurement {
    outcomes: Vec<MeasurementOutcome>,
    sqrts: Vec<Mat2>,
}

impl SingleQubitMeasurement {
    pub fn new(outcomes: Vec<MeasurementOutcome>) -> Result<Self, QuantumError> {
        if outcomes.is_empty() {
            return Err(QuantumError::NoOutcomes);
        }
        let mut sum = Mat2::zero();
        for o in &outcomes {
            if !o.operator.is_hermitian(STATE_TOLERANCE) {
                return Err(QuantumError::NonHermitianOperator {
                    label: o.label.clone(),
                });
            }
            let (lo, _) = o.operator.hermitian_eigenvalues();
            if lo < -STATE_TOLERANCE {
                return Err(QuantumError::NegativeOperator {
                    label: o.label.clone(),
                    eigenvalue: lo,
                });
            }
            sum = sum.add(&o.operator);
        }
        let mut deviation: f64 = 0.0;
        let id = Mat2::identity();
        for r in 0..2 {
            for c in 0..2 {
                deviation = deviation.max((sum.m[r][c] - id.m[r][c]).norm());
            }
        }
        if deviation > STATE_TOLERANCE {
            return Err(QuantumError::IncompleteMeasurement {
                deviation,
                tolerance: STATE_TOLERANCE,
            });
        }
        let sqrts = outcomes.iter().map(|o| o.operator.psd_sqrt()).collect();
        Ok(Self { outcomes, sqrts })
    }

    pub fn outcomes(&self) -> &[MeasurementOutcome] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.outcomes[index].label
    }

    pub fn labels(&self) -> Vec<String> {
        self.outcomes.iter().map(|o| o.label.clone()).collect()
    }

    pub(crate) fn sqrt_operator(&self, index: usize) -> &Mat2 {
        &self.sqrts[index]
    }

    /// Outcome probabilities on a single-qubit state vector.
    pub fn probabilities(&self, phi: [Complex64; 2]) -> Vec<f64> {
        self.outcomes
            .iter()
            .map(|o| o.operator.expectation(phi).max(0.0))
            .collect()
    }

    /// Projective measurement in the standard basis, labels "0" / "1".
    pub fn standard_basis() -> Self {
        Self::projective_pair(
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        )
    }

    /// Projective measurement in the Hadamard basis, labels "0" / "1"
    /// (outcome "0" is |+>).
    pub fn hadamard_basis() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::projective_pair([h, h], [h, -h])
    }

    /// Standard basis when `basis` is false, Hadamard basis otherwise.
    pub fn basis(basis: bool) -> Self {
        if basis {
            Self::hadamard_basis()
        } else {
            Self::standard_basis()
        }
    }

    /// The basis rotated pi/8 between standard and Hadamard; outcome "0" is
    /// the vector nearest both |0> and |+>.
    pub fn breidbart_basis() -> Self {
        let (s, c) = (PI / 8.0).sin_cos();
        Self::projective_pair(
            [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
        )
    }

    /// Projective two-outcome measurement onto the Bloch vector with polar
    /// angle `theta` and azimuth `phi`; labels "0" / "1".
    pub fn bloch_projective(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        Self::projective_pair(
            [Complex64::new(c, 0.0), e * s],
            [-e.conj() * s, Complex64::new(c, 0.0)],
        )
    }

    /// The four-outcome POVM {E_0, E_1, E_+, E_-} with each operator half a
    /// basis projector; labels "0", "1", "+", "-".
    pub fn four_state_povm() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let ops = [
            ("0", [Complex64::ONE, Complex64::ZERO]),
            ("1", [Complex64::ZERO, Complex64::ONE]),
            ("+", [h, h]),
            ("-", [h, -h]),
        ];
        let outcomes = ops
            .into_iter()
            .map(|(label, v)| MeasurementOutcome {
                label: label.to_string(),
                operator: Mat2::projector(v).scale(0.5),
            })
            .collect();
        Self::new(outcomes).expect("four-state POVM is valid")
    }

    /// A single-outcome measurement that learns nothing (operator = identity),
    /// label "_".
    pub fn trivial() -> Self {
        Self::new(vec![MeasurementOutcome {
            label: "_".to_string(),
            operator: Mat2::identity(),
        }])
        .expect("identity POVM is valid")
    }

    fn projective_pair(v0: [Complex64; 2], v1: [Complex64; 2]) -> Self {
        Self::new(vec![
            MeasurementOutcome {
                label: "0".to_string(),
                operator: Mat2::projector(v0),
            },
            MeasurementOutcome {
                label: "1".to_string(),
                operator: Mat2::projector(v1),
            },
        ])
        .expect("orthonormal projectors form a valid measurement")
    }
}

/// The four single-qubit BB84 state vectors indexed by (bit, basis).
pub(crate) fn bb84_vector(bit: bool, basis: bool) -> [Complex64; 2] {
    let h = FRAC_1_SQRT_2;
    match (basis, bit) {
        (false, false) => [Complex64::ONE, Complex64::ZERO],
        (false, true) => [Complex64::ZERO, Complex64::ONE],
        (true, false) => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        (true, true) => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    }
}
