//! Conditional min-entropy and its smoothed variant.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::simplex;
use super::table::{JointDistribution, Mass};
use crate::error::InfoError;

/// A guessing probability in the table's native representation.
#[derive(Clone, Debug)]
pub enum MassScalar {
    Float(f64),
    Exact(BigRational),
}

impl MassScalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            MassScalar::Float(v) => *v,
            MassScalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Minus log base 2, in bits; infinite for zero mass.
    pub fn to_bits(&self) -> f64 {
        let v = self.to_f64();
        if v <= 0.0 {
            f64::INFINITY
        } else {
            -v.log2()
        }
    }
}

/// How to compute the smoothed optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothingMethod {
    /// Water-filling on the per-condition maxima; exact in rational mode.
    Greedy,
    /// Reference linear program (double precision).
    LinearProgram,
}

/// The optimal probability of guessing the target axes given the
/// conditioning axes: `sum_z max_x p(x, z)`. Unused axes are marginalized.
pub fn conditional_guessing_probability(
    d: &JointDistribution,
    target: &[&str],
    cond: &[&str],
) -> Result<MassScalar, InfoError> {
    let blocks = blocks_of(d, target, cond)?;
    Ok(match blocks {
        Blocks::Float(b) => MassScalar::Float(
            b.iter()
                .map(|block| block.iter().cloned().fold(0.0f64, f64::max))
                .sum(),
        ),
        Blocks::Exact(b) => MassScalar::Exact(
            b.iter()
                .map(|block| block.iter().max().cloned().unwrap_or_else(BigRational::zero))
                .sum(),
        ),
    })
}

/// Conditional min-entropy in bits:
/// `-log2 sum_z p(z) max_x p(x | z)`.
pub fn min_entropy_cond(
    d: &JointDistribution,
    target: &[&str],
    cond: &[&str],
) -> Result<f64, InfoError> {
    Ok(conditional_guessing_probability(d, target, cond)?.to_bits())
}

/// Smooth conditional min-entropy: the best min-entropy over sub-normalized
/// tables obtained by removing at most `delta` total mass (mass may be
/// removed, never added).
pub fn smooth_min_entropy_cond(
    d: &JointDistribution,
    target: &[&str],
    cond: &[&str],
    delta: f64,
    method: SmoothingMethod,
) -> Result<f64, InfoError> {
    Ok(smooth_guessing_probability(d, target, cond, delta, method)?.to_bits())
}

/// The smoothed guessing probability behind [`smooth_min_entropy_cond`].
pub fn smooth_guessing_probability(
    d: &JointDistribution,
    target: &[&str],
    cond: &[&str],
    delta: f64,
    method: SmoothingMethod,
) -> Result<MassScalar, InfoError> {
    if !(0.0..1.0).contains(&delta) {
        return Err(InfoError::BadDelta(delta));
    }
    let blocks = blocks_of(d, target, cond)?;
    match method {
        SmoothingMethod::Greedy => Ok(match blocks {
            Blocks::Float(b) => MassScalar::Float(water_fill(b, delta)),
            Blocks::Exact(b) => {
                let budget =
                    BigRational::from_float(delta).ok_or(InfoError::BadDelta(delta))?;
                MassScalar::Exact(water_fill(b, budget))
            }
        }),
        SmoothingMethod::LinearProgram => {
            let b = match blocks {
                Blocks::Float(b) => b,
                Blocks::Exact(b) => b
                    .into_iter()
                    .map(|blk| blk.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect())
                    .collect(),
            };
            Ok(MassScalar::Float(smooth_by_lp(&b, delta)?))
        }
    }
}

enum Blocks {
    Float(Vec<Vec<f64>>),
    Exact(Vec<Vec<BigRational>>),
}

/// Groups the (target | cond) marginal into one block of target masses per
/// conditioning cell.
fn blocks_of(d: &JointDistribution, target: &[&str], cond: &[&str]) -> Result<Blocks, InfoError> {
    if target.is_empty() {
        return Err(InfoError::BadAxisSelection);
    }
    let target_idx: Vec<usize> = target
        .iter()
        .map(|n| d.axis_index(n))
        .collect::<Result<_, _>>()?;
    let cond_idx: Vec<usize> = cond
        .iter()
        .map(|n| d.axis_index(n))
        .collect::<Result<_, _>>()?;
    for t in &target_idx {
        if cond_idx.contains(t) {
            return Err(InfoError::BadAxisSelection);
        }
    }
    let mut keep = cond_idx.clone();
    keep.extend(&target_idx);
    let marg = d.marginalize(&keep);
    let block: usize = target_idx.iter().map(|&i| d.axes()[i].len()).product();
    Ok(match marg.mass() {
        Mass::Float(v) => Blocks::Float(v.chunks(block).map(<[f64]>::to_vec).collect()),
        Mass::Exact(v) => Blocks::Exact(v.chunks(block).map(<[BigRational]>::to_vec).collect()),
    })
}

trait WaterMass: Clone + PartialOrd + Zero {
    fn sub(&self, o: &Self) -> Self;
    fn div_count(&self, k: usize) -> Self;
    fn mul_count(&self, k: usize) -> Self;
}

impl WaterMass for f64 {
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_count(&self, k: usize) -> Self {
        self / k as f64
    }
    fn mul_count(&self, k: usize) -> Self {
        self * k as f64
    }
}

impl WaterMass for BigRational {
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_count(&self, k: usize) -> Self {
        self / BigRational::from_integer(k.into())
    }
    fn mul_count(&self, k: usize) -> Self {
        self * BigRational::from_integer(k.into())
    }
}

/// Spends a removal budget on the per-block maxima, always at the cheapest
/// current rate (fewest tied atoms). Returns `sum_z` of the lowered maxima.
fn water_fill<T: WaterMass>(mut blocks: Vec<Vec<T>>, mut budget: T) -> T {
    for b in &mut blocks {
        b.sort_by(|a, c| c.partial_cmp(a).expect("comparable mass"));
    }
    let mut level: Vec<T> = blocks.iter().map(|b| b[0].clone()).collect();
    let mut tied: Vec<usize> = Vec::with_capacity(blocks.len());
    let mut heap = BinaryHeap::new();
    for (z, b) in blocks.iter().enumerate() {
        let mut k = 1;
        while k < b.len() && b[k] == level[z] {
            k += 1;
        }
        tied.push(k);
        if level[z] > T::zero() {
            heap.push(Reverse((k, z)));
        }
    }
    while budget > T::zero() {
        let Some(Reverse((k, z))) = heap.pop() else {
            break;
        };
        if k != tied[z] || level[z] <= T::zero() {
            continue; // stale entry
        }
        let b = &blocks[z];
        let next = if k < b.len() { b[k].clone() } else { T::zero() };
        let capacity = level[z].sub(&next).mul_count(k);
        if budget >= capacity {
            budget = budget.sub(&capacity);
            level[z] = next.clone();
            let mut k2 = k;
            while k2 < b.len() && b[k2] == next {
                k2 += 1;
            }
            tied[z] = k2;
            if level[z] > T::zero() {
                heap.push(Reverse((k2, z)));
            }
        } else {
            level[z] = level[z].sub(&budget.div_count(k));
            budget = T::zero();
        }
    }
    let mut total = T::zero();
    for l in level {
        total = total.add(l);
    }
    total
}

/// Reference linear program: minimize `sum_z m_z` over tables `0 <= q <= p`
/// with at most `delta` mass removed, where `m_z` dominates block z.
fn smooth_by_lp(blocks: &[Vec<f64>], delta: f64) -> Result<f64, InfoError> {
    let n_atoms: usize = blocks.iter().map(Vec::len).sum();
    let n_blocks = blocks.len();
    let n = n_atoms + n_blocks;
    let total: f64 = blocks.iter().flatten().sum();

    let mut c = vec![0.0; n];
    for m in c.iter_mut().skip(n_atoms) {
        *m = 1.0;
    }
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut b = Vec::new();
    let mut atom = 0;
    for (z, block) in blocks.iter().enumerate() {
        for &p in block {
            // q_atom <= p
            let mut row = vec![0.0; n];
            row[atom] = 1.0;
            a.push(row);
            b.push(p);
            // q_atom - m_z <= 0
            let mut row = vec![0.0; n];
            row[atom] = 1.0;
            row[n_atoms + z] = -1.0;
            a.push(row);
            b.push(0.0);
            atom += 1;
        }
    }
    // sum q >= total - delta
    let mut row = vec![0.0; n];
    for r in row.iter_mut().take(n_atoms) {
        *r = -1.0;
    }
    a.push(row);
    b.push(delta - total);

    let (obj, _) = simplex::solve_min(&c, &a, &b)?;
    Ok(obj.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::Axis;
    use crate::rng;
    use rand::Rng;

    fn table(axes: Vec<Axis>, w: &[u64]) -> JointDistribution {
        JointDistribution::from_weights(axes, w).unwrap()
    }

    #[test]
    fn unconditioned_uniform_two_bits() {
        let d = JointDistribution::uniform(vec![Axis::binary("x0"), Axis::binary("x1")]);
        let h = min_entropy_cond(&d, &["x0", "x1"], &[]).unwrap();
        assert!((h - 2.0).abs() < 1e-12);
    }

    #[test]
    fn perfectly_correlated_variable_has_no_entropy() {
        let d = table(vec![Axis::binary("x"), Axis::binary("z")], &[1, 0, 0, 1]);
        let h = min_entropy_cond(&d, &["x"], &["z"]).unwrap();
        assert!(h.abs() < 1e-12);
    }

    #[test]
    fn worked_three_atom_example() {
        // p(x,z): (0,0) 1/2, (1,0) 1/4, (1,1) 1/4 -> sum of block maxima 3/4.
        let d = table(vec![Axis::binary("x"), Axis::binary("z")], &[2, 0, 1, 1]);
        let h = min_entropy_cond(&d, &["x"], &["z"]).unwrap();
        assert!((h - (4.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!((h - 0.4150374992788438).abs() < 1e-12);
    }

    #[test]
    fn axis_selection_validated() {
        let d = JointDistribution::uniform(vec![Axis::binary("x"), Axis::binary("z")]);
        assert!(matches!(
            min_entropy_cond(&d, &[], &["z"]),
            Err(InfoError::BadAxisSelection)
        ));
        assert!(matches!(
            min_entropy_cond(&d, &["x"], &["x"]),
            Err(InfoError::BadAxisSelection)
        ));
        assert!(matches!(
            min_entropy_cond(&d, &["y"], &[]),
            Err(InfoError::UnknownAxis(_))
        ));
    }

    #[test]
    fn smoothing_at_zero_delta_is_plain_min_entropy() {
        let d = table(vec![Axis::binary("x"), Axis::binary("z")], &[3, 1, 2, 2]);
        let plain = min_entropy_cond(&d, &["x"], &["z"]).unwrap();
        for method in [SmoothingMethod::Greedy, SmoothingMethod::LinearProgram] {
            let s = smooth_min_entropy_cond(&d, &["x"], &["z"], 0.0, method).unwrap();
            assert!((s - plain).abs() < 1e-9, "{method:?}");
        }
        let u = JointDistribution::uniform(vec![Axis::new(
            "x",
            (0..4).map(|i| i.to_string()).collect(),
        )]);
        assert!((smooth_min_entropy_cond(&u, &["x"], &[], 0.0, SmoothingMethod::Greedy).unwrap()
            - 2.0)
            .abs()
            < 1e-12);
    }

    #[test]
    fn point_mass_caps_at_one_minus_delta() {
        let d = table(vec![Axis::binary("x")], &[1, 0]);
        let s =
            smooth_min_entropy_cond(&d, &["x"], &[], 0.25, SmoothingMethod::Greedy).unwrap();
        assert!((s - (-(0.75f64).log2())).abs() < 1e-12);
        let lp =
            smooth_min_entropy_cond(&d, &["x"], &[], 0.25, SmoothingMethod::LinearProgram)
                .unwrap();
        assert!((lp - s).abs() < 1e-9);
    }

    #[test]
    fn smoothing_never_decreases_entropy() {
        let d = table(
            vec![Axis::binary("x"), Axis::binary("z")],
            &[5, 1, 3, 7],
        );
        let plain = min_entropy_cond(&d, &["x"], &["z"]).unwrap();
        let mut last = plain;
        for delta in [0.0, 0.1, 0.2, 0.4] {
            let s =
                smooth_min_entropy_cond(&d, &["x"], &["z"], delta, SmoothingMethod::Greedy)
                    .unwrap();
            assert!(s + 1e-12 >= last, "monotone in delta");
            last = s;
        }
        assert!(last >= plain);
    }

    #[test]
    fn bad_delta_rejected() {
        let d = table(vec![Axis::binary("x")], &[1, 1]);
        assert!(matches!(
            smooth_min_entropy_cond(&d, &["x"], &[], 1.0, SmoothingMethod::Greedy),
            Err(InfoError::BadDelta(_))
        ));
        assert!(matches!(
            smooth_min_entropy_cond(&d, &["x"], &[], -0.1, SmoothingMethod::Greedy),
            Err(InfoError::BadDelta(_))
        ));
    }

    #[test]
    fn greedy_agrees_with_lp_on_seeded_instances() {
        // Exhaustively seeded suite of small instances, up to 64 atoms.
        let mut r = rng::seeded(2024);
        for case in 0..60 {
            let nx = r.random_range(2..=8usize);
            let nz = r.random_range(1..=8usize);
            let mut w: Vec<u64> = (0..nx * nz).map(|_| r.random_range(0..12u64)).collect();
            if w.iter().sum::<u64>() == 0 {
                w[0] = 1;
            }
            let d = table(
                vec![
                    Axis::new("x", (0..nx).map(|i| i.to_string()).collect()),
                    Axis::new("z", (0..nz).map(|i| i.to_string()).collect()),
                ],
                &w,
            );
            for delta in [0.0, 0.05, 0.17, 0.5, 0.93] {
                let g = smooth_guessing_probability(
                    &d,
                    &["x"],
                    &["z"],
                    delta,
                    SmoothingMethod::Greedy,
                )
                .unwrap()
                .to_f64();
                let lp = smooth_guessing_probability(
                    &d,
                    &["x"],
                    &["z"],
                    delta,
                    SmoothingMethod::LinearProgram,
                )
                .unwrap()
                .to_f64();
                assert!(
                    (g - lp).abs() < 1e-9,
                    "case {case} delta {delta}: greedy {g} vs lp {lp}"
                );
            }
        }
    }
}
