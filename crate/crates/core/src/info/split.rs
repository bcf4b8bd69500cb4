//! Min-entropy splitting: extracting a choice bit C from a jointly hard
//! pair (X0, X1) given side information Z so that the unchosen variable
//! stays hard given (Z, C).

use num_rational::BigRational;
use num_traits::Zero;

use super::entropy::{
    conditional_guessing_probability, smooth_guessing_probability, MassScalar, SmoothingMethod,
};
use super::table::{Axis, JointDistribution, Mass};
use super::FLOAT_TOLERANCE;
use crate::error::InfoError;

/// Exhaustive search over choice functions is limited to this many atoms
/// (2^12 assignments).
pub const EXHAUSTIVE_ATOM_CAP: usize = 12;

/// The constructed choice variable and its certificate.
#[derive(Clone, Debug)]
pub struct SplitOutcome {
    /// Joint min-entropy `H(X0, X1 | Z)` in bits.
    pub alpha: f64,
    /// The choice bit per (x0, x1, z) atom, row-major.
    pub choice: Vec<bool>,
    /// `alpha/2 - 1 - log2(1/delta)`.
    pub bound: f64,
    /// `H^delta(X_{1-C} | Z, C)` for the constructed C.
    pub achieved: f64,
    /// Whether `achieved >= bound` (exactly, in rational mode).
    pub holds: bool,
}

impl SplitOutcome {
    pub fn choice_at(&self, d: &JointDistribution, coords: &[usize]) -> bool {
        self.choice[d.flat_index(coords)]
    }
}

/// Builds C by thresholding: C = 0 iff `p(x1 | z) <= 2^{-alpha/2}` (ties
/// to 0), then certifies the smooth min-entropy bound for `X_{1-C}`.
///
/// The distribution must have exactly three axes, in the order
/// (X0, X1, Z).
pub fn min_entropy_split(d: &JointDistribution, delta: f64) -> Result<SplitOutcome, InfoError> {
    let [x0_name, x1_name, z_name] = axis_names(d)?;
    if !(0.0..1.0).contains(&delta) {
        return Err(InfoError::BadDelta(delta));
    }
    let joint_guess =
        conditional_guessing_probability(d, &[&x0_name, &x1_name], &[&z_name])?;
    let alpha = joint_guess.to_bits();

    let choice = threshold_choice(d, &joint_guess)?;
    let mux = mux_distribution(d, &choice);
    let smooth_guess =
        smooth_guessing_probability(&mux, &["y"], &["z", "c"], delta, SmoothingMethod::Greedy)?;
    let achieved = smooth_guess.to_bits();
    let bound = alpha / 2.0 - 1.0 + delta.log2();
    let holds = certify(&joint_guess, &smooth_guess, delta, achieved, bound);
    Ok(SplitOutcome {
        alpha,
        choice,
        bound,
        achieved,
        holds,
    })
}

/// Brute-force over all 2^atoms choice functions, returning the assignment
/// with the largest smoothed min-entropy for the unchosen variable and that
/// entropy. Only for tiny instances.
pub fn exhaustive_split_search(
    d: &JointDistribution,
    delta: f64,
) -> Result<(Vec<bool>, f64), InfoError> {
    axis_names(d)?;
    if !(0.0..1.0).contains(&delta) {
        return Err(InfoError::BadDelta(delta));
    }
    let atoms = d.len();
    if atoms > EXHAUSTIVE_ATOM_CAP {
        return Err(InfoError::TooLarge {
            what: "choice assignments",
            actual: atoms,
            cap: EXHAUSTIVE_ATOM_CAP,
        });
    }
    let mut best: Option<(Vec<bool>, f64)> = None;
    for mask in 0u64..1 << atoms {
        let choice: Vec<bool> = (0..atoms).map(|i| mask >> i & 1 == 1).collect();
        let mux = mux_distribution(d, &choice);
        let achieved = smooth_guessing_probability(
            &mux,
            &["y"],
            &["z", "c"],
            delta,
            SmoothingMethod::Greedy,
        )?
        .to_bits();
        if best.as_ref().is_none_or(|(_, b)| achieved > *b) {
            best = Some((choice, achieved));
        }
    }
    Ok(best.expect("at least one assignment"))
}

fn axis_names(d: &JointDistribution) -> Result<[String; 3], InfoError> {
    if d.arity() != 3 {
        return Err(InfoError::BadArity {
            expected: 3,
            actual: d.arity(),
        });
    }
    Ok([
        d.axes()[0].name.clone(),
        d.axes()[1].name.clone(),
        d.axes()[2].name.clone(),
    ])
}

/// C = 0 iff p(x1 | z) <= 2^{-alpha/2}. In rational mode the comparison is
/// exact: p(x1|z) <= sqrt(g) iff p(x1,z)^2 <= g * p(z)^2.
fn threshold_choice(
    d: &JointDistribution,
    joint_guess: &MassScalar,
) -> Result<Vec<bool>, InfoError> {
    let n1 = d.axes()[1].len();
    let nz = d.axes()[2].len();
    let x1z = d.marginalize(&[1, 2]);
    let z = d.marginalize(&[2]);
    let mut c_of_x1z = vec![false; n1 * nz];
    match (x1z.mass(), z.mass(), joint_guess) {
        (Mass::Exact(pxz), Mass::Exact(pz), MassScalar::Exact(g)) => {
            for i1 in 0..n1 {
                for iz in 0..nz {
                    let p_joint = &pxz[i1 * nz + iz];
                    let pz_val = &pz[iz];
                    if pz_val.is_zero() {
                        continue; // zero-mass cell, C irrelevant
                    }
                    // p(x1|z) <= sqrt(g)  <=>  p(x1,z)^2 <= g p(z)^2
                    let below = p_joint * p_joint <= g * (pz_val * pz_val);
                    c_of_x1z[i1 * nz + iz] = !below;
                }
            }
        }
        _ => {
            let pxz = x1z.probabilities_f64();
            let pz = z.probabilities_f64();
            let threshold = joint_guess.to_f64().sqrt();
            for i1 in 0..n1 {
                for iz in 0..nz {
                    if pz[iz] <= 0.0 {
                        continue;
                    }
                    let cond = pxz[i1 * nz + iz] / pz[iz];
                    c_of_x1z[i1 * nz + iz] = cond > threshold;
                }
            }
        }
    }
    // Expand to the full (x0, x1, z) atom table.
    let mut choice = vec![false; d.len()];
    for (flat, c) in choice.iter_mut().enumerate() {
        let coords = d.coords_of(flat);
        *c = c_of_x1z[coords[1] * nz + coords[2]];
    }
    Ok(choice)
}

/// The distribution of (Y, Z, C) where Y = X_{1-C}: the still-hidden
/// variable, tagged with the choice that selected it.
fn mux_distribution(d: &JointDistribution, choice: &[bool]) -> JointDistribution {
    let x0 = &d.axes()[0];
    let x1 = &d.axes()[1];
    let z = &d.axes()[2];
    let mut y_labels = x0.labels.clone();
    for l in &x1.labels {
        if !y_labels.contains(l) {
            y_labels.push(l.clone());
        }
    }
    let y_index_of = |c: bool, i0: usize, i1: usize| -> usize {
        let label = if c {
            &x0.labels[i0] // C = 1: X0 stays hidden
        } else {
            &x1.labels[i1] // C = 0: X1 stays hidden
        };
        y_labels.iter().position(|l| l == label).expect("label present")
    };
    let ny = y_labels.len();
    let nz = z.len();
    let out_len = ny * nz * 2;
    let flat_out = |y: usize, iz: usize, c: usize| (y * nz + iz) * 2 + c;

    let axes = vec![
        Axis::new("y", y_labels.clone()),
        Axis::new("z", z.labels.clone()),
        Axis::binary("c"),
    ];
    match d.mass() {
        Mass::Float(v) => {
            let mut out = vec![0.0f64; out_len];
            for (flat, &p) in v.iter().enumerate() {
                let coords = d.coords_of(flat);
                let c = choice[flat];
                let y = y_index_of(c, coords[0], coords[1]);
                out[flat_out(y, coords[2], usize::from(c))] += p;
            }
            JointDistribution::from_floats(axes, out).expect("mass is conserved")
        }
        Mass::Exact(v) => {
            let mut out = vec![BigRational::zero(); out_len];
            for (flat, p) in v.iter().enumerate() {
                let coords = d.coords_of(flat);
                let c = choice[flat];
                let y = y_index_of(c, coords[0], coords[1]);
                out[flat_out(y, coords[2], usize::from(c))] += p;
            }
            JointDistribution::from_rationals(axes, out).expect("mass is conserved")
        }
    }
}

/// `achieved >= bound`, decided exactly in rational mode:
/// `sg <= 2 sqrt(g) / delta  <=>  (sg * delta)^2 <= 4 g`.
fn certify(
    joint_guess: &MassScalar,
    smooth_guess: &MassScalar,
    delta: f64,
    achieved: f64,
    bound: f64,
) -> bool {
    match (joint_guess, smooth_guess) {
        (MassScalar::Exact(g), MassScalar::Exact(sg)) => {
            if let Some(delta_r) = BigRational::from_float(delta) {
                let lhs = sg * &delta_r;
                let lhs2 = &lhs * &lhs;
                let four = BigRational::from_integer(4.into());
                return lhs2 <= four * g;
            }
            achieved + FLOAT_TOLERANCE >= bound
        }
        _ => achieved + FLOAT_TOLERANCE >= bound,
    }
}
