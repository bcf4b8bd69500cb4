//! Numerical verification of randomness extraction: the distance between
//! (<h>, h(X), Y) and (<h>, uniform, Y) over an exhaustively enumerated hash
//! family, against the smooth-min-entropy bound.

use super::entropy::{smooth_min_entropy_cond, SmoothingMethod};
use super::table::JointDistribution;
use crate::bits::BitString;
use crate::error::InfoError;
use crate::hashing::{self, HashDescriptor};

/// Work cap: seeds * |X| * |Y| * 2^l.
const WORK_CAP: usize = 1 << 26;
const SEED_BITS_CAP: usize = 20;
const X_ALPHABET_CAP: usize = 1 << 10;

#[derive(Clone, Debug)]
pub struct LhlReport {
    /// Exact normalized statistical distance (half the L1 norm).
    pub distance: f64,
    /// The unnormalized L1 distance (exactly twice `distance`).
    pub distance_l1: f64,
    /// `H^delta(X | Y)` in bits.
    pub smooth_entropy_bits: f64,
    /// `2^{-(H - l)/2} + 2 delta`.
    pub bound: f64,
    pub holds: bool,
    pub seed_bits: usize,
}

/// Computes the exact joint distribution of (seed, h(X), Y) over every seed
/// of the family, its distance to (seed, uniform, Y), and compares against
/// the extraction bound. The first axis of `xy` is X (labels must be bit
/// strings of length at most `max_input_len`), the second is Y.
pub fn lhl_verify(
    xy: &JointDistribution,
    max_input_len: usize,
    out_len: usize,
    delta: f64,
) -> Result<LhlReport, InfoError> {
    if xy.arity() != 2 {
        return Err(InfoError::BadArity {
            expected: 2,
            actual: xy.arity(),
        });
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(InfoError::BadDelta(delta));
    }
    let x_axis = &xy.axes()[0];
    let y_axis = &xy.axes()[1];
    if x_axis.len() > X_ALPHABET_CAP {
        return Err(InfoError::TooLarge {
            what: "X alphabet",
            actual: x_axis.len(),
            cap: X_ALPHABET_CAP,
        });
    }
    let xs: Vec<BitString> = x_axis
        .labels
        .iter()
        .map(|l| {
            BitString::parse(l)
                .filter(|b| b.len() <= max_input_len)
                .ok_or_else(|| InfoError::BadLabel(l.clone()))
        })
        .collect::<Result<_, _>>()?;

    let seed_bits = hashing::seed_len(max_input_len, out_len);
    if seed_bits > SEED_BITS_CAP {
        return Err(InfoError::TooLarge {
            what: "seed bits",
            actual: seed_bits,
            cap: SEED_BITS_CAP,
        });
    }
    let seeds = 1usize << seed_bits;
    let n_out = 1usize << out_len;
    let work = seeds
        .saturating_mul(xs.len())
        .saturating_mul(y_axis.len())
        .saturating_mul(n_out);
    if work > WORK_CAP {
        return Err(InfoError::TooLarge {
            what: "enumeration work",
            actual: work,
            cap: WORK_CAP,
        });
    }

    let x_name = x_axis.name.clone();
    let y_name = y_axis.name.clone();
    let smooth_entropy_bits = smooth_min_entropy_cond(
        xy,
        &[&x_name],
        &[&y_name],
        delta,
        SmoothingMethod::Greedy,
    )?;

    let probs = xy.probabilities_f64();
    let ny = y_axis.len();
    // hashed[(s, m, y)] = sum_x p(x, y) / seeds  where h_s(x) = m.
    let mut hashed = vec![0.0f64; seeds * n_out * ny];
    let inv_seeds = 1.0 / seeds as f64;
    for s in 0..seeds {
        let h = HashDescriptor::new(
            max_input_len,
            out_len,
            BitString::from_index(s, seed_bits),
        )?;
        let base = s * n_out * ny;
        for (ix, x) in xs.iter().enumerate() {
            let m = h.eval(x)?.to_index();
            for iy in 0..ny {
                hashed[base + m * ny + iy] += probs[ix * ny + iy] * inv_seeds;
            }
        }
    }
    // ideal[(s, m, y)] = p(y) / (seeds * 2^l).
    let mut p_y = vec![0.0f64; ny];
    for (ix, _) in xs.iter().enumerate() {
        for (iy, p) in p_y.iter_mut().enumerate() {
            *p += probs[ix * ny + iy];
        }
    }
    let uniform_cell = inv_seeds / n_out as f64;
    let mut l1 = 0.0f64;
    for s in 0..seeds {
        let base = s * n_out * ny;
        for m in 0..n_out {
            for (iy, p) in p_y.iter().enumerate() {
                l1 += (hashed[base + m * ny + iy] - p * uniform_cell).abs();
            }
        }
    }
    let distance = 0.5 * l1;
    let bound = (-(smooth_entropy_bits - out_len as f64) / 2.0).exp2() + 2.0 * delta;
    Ok(LhlReport {
        distance,
        distance_l1: l1,
        smooth_entropy_bits,
        bound,
        holds: distance <= bound + 1e-12,
        seed_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::all_bitstrings;
    use crate::info::Axis;
    use crate::rng;
    use rand::Rng;

    fn bit_axis(name: &str, k: usize) -> Axis {
        Axis::new(name, all_bitstrings(k).map(|b| b.to_string()).collect())
    }

    fn trivial_y() -> Axis {
        Axis::new("y", vec!["_".into()])
    }

    #[test]
    fn uniform_source_extracts_almost_perfectly() {
        for n in 3..=5usize {
            let d = JointDistribution::uniform(vec![bit_axis("x", n), trivial_y()]);
            let r = lhl_verify(&d, n, 1, 0.0).unwrap();
            assert!(r.holds, "n = {n}");
            // H = n, so the bound is 2^{-(n-1)/2}; the true distance must
            // stay under it.
            assert!(r.distance <= (-(n as f64 - 1.0) / 2.0).exp2() + 1e-12);
            assert!((r.distance_l1 - 2.0 * r.distance).abs() < 1e-15);
        }
    }

    #[test]
    fn point_mass_source_has_distance_one_half() {
        // A known input: h(x) is a fixed value per seed, so the hashed
        // distribution sits at distance exactly 1/2 from uniform for l = 1.
        let mut w = vec![0u64; 8];
        w[5] = 1;
        let d = JointDistribution::from_weights(vec![bit_axis("x", 3), trivial_y()], &w).unwrap();
        let r = lhl_verify(&d, 3, 1, 0.0).unwrap();
        assert!((r.distance - 0.5).abs() < 1e-12);
        assert!(r.smooth_entropy_bits.abs() < 1e-12);
        // Bound 2^{l/2} = sqrt(2) is trivially satisfied.
        assert!(r.holds);
    }

    #[test]
    fn random_sources_with_margin_always_hold() {
        let mut r = rng::seeded(77);
        for case in 0..40 {
            let ell = r.random_range(1..=2usize);
            let n = r.random_range(ell + 3..=5usize);
            let ny = r.random_range(1..=3usize);
            // Flat-ish weights on a big enough alphabet keep H(X|Y) >= ell + 2.
            let w: Vec<u64> = (0..(1usize << n) * ny)
                .map(|_| r.random_range(8..16u64))
                .collect();
            let d = JointDistribution::from_weights(
                vec![
                    bit_axis("x", n),
                    Axis::new("y", (0..ny).map(|i| i.to_string()).collect()),
                ],
                &w,
            )
            .unwrap();
            let report = lhl_verify(&d, n, ell, 0.0).unwrap();
            assert!(
                report.smooth_entropy_bits >= ell as f64 + 2.0,
                "case {case}: H = {}",
                report.smooth_entropy_bits
            );
            assert!(report.holds, "case {case}");
        }
    }

    #[test]
    fn monte_carlo_estimate_matches_exact_distance() {
        // Estimate the distance through the optimal distinguisher's
        // acceptance gap on sampled tuples.
        let d = JointDistribution::from_weights(
            vec![bit_axis("x", 3), trivial_y()],
            &[5, 3, 2, 2, 1, 1, 1, 1],
        )
        .unwrap();
        let n = 3;
        let ell = 1;
        let exact = lhl_verify(&d, n, ell, 0.0).unwrap().distance;

        let seed_bits = hashing::seed_len(n, ell);
        let seeds = 1usize << seed_bits;
        let probs = d.probabilities_f64();
        let xs: Vec<BitString> = all_bitstrings(n).collect();
        // Exact cell masses, used only to define the acceptance set.
        let mut hashed = vec![0.0f64; seeds * 2];
        for s in 0..seeds {
            let h = HashDescriptor::new(n, ell, BitString::from_index(s, seed_bits)).unwrap();
            for (ix, x) in xs.iter().enumerate() {
                hashed[s * 2 + h.eval(x).unwrap().to_index()] += probs[ix] / seeds as f64;
            }
        }
        let uniform_cell = 1.0 / (seeds * 2) as f64;

        let trials = 200_000u64;
        let mut rng = rng::seeded(5150);
        let mut hit_p = 0u64;
        let mut hit_q = 0u64;
        for _ in 0..trials {
            let s = rng.random_range(0..seeds);
            let h = HashDescriptor::new(n, ell, BitString::from_index(s, seed_bits)).unwrap();
            // Sample x from the source.
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut ix = probs.len() - 1;
            for (i, &p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    ix = i;
                    break;
                }
            }
            let m = h.eval(&xs[ix]).unwrap().to_index();
            if hashed[s * 2 + m] > uniform_cell {
                hit_p += 1;
            }
            let m_u = rng.random_range(0..2usize);
            if hashed[s * 2 + m_u] > uniform_cell {
                hit_q += 1;
            }
        }
        let estimate = hit_p as f64 / trials as f64 - hit_q as f64 / trials as f64;
        let sigma = (0.5 / (trials as f64).sqrt()) * 2.0;
        assert!(
            (estimate - exact).abs() <= 3.0 * sigma,
            "estimate {estimate} vs exact {exact}"
        );
    }

    #[test]
    fn guards_reject_oversized_and_malformed_instances() {
        let d = JointDistribution::uniform(vec![bit_axis("x", 3), trivial_y()]);
        assert!(matches!(
            lhl_verify(&d, 30, 8, 0.0),
            Err(InfoError::TooLarge { .. })
        ));
        let bad = JointDistribution::uniform(vec![
            Axis::new("x", vec!["hello".into(), "0".into()]),
            trivial_y(),
        ]);
        assert!(matches!(
            lhl_verify(&bad, 3, 1, 0.0),
            Err(InfoError::BadLabel(_))
        ));
        assert!(matches!(
            lhl_verify(&d, 3, 1, 1.5),
            Err(InfoError::BadDelta(_))
        ));
    }
}
