//! The verification suites behind `bqs verify`.

use std::f64::consts::PI;

use bqs_core::attack::{
    builtin_attacks, distinguisher_advantage_exact, double_open_search,
    double_open_success_exact, induced_joint_distribution, joint_string_guess_probability,
    moe_bound, moe_catalog, moe_game_value, moe_search_single_qubit, reduce_to_moe,
    string_attacks, DoubleOpenStrategy,
};
use bqs_core::bits::BitString;
use bqs_core::info::{
    eq3_bound, exhaustive_split_search, joint_guess_rate_log2, lhl_verify, min_entropy_cond,
    min_entropy_split, smooth_guessing_probability, Axis, JointDistribution, SmoothingMethod,
};
use bqs_core::rng;
use rand::Rng;
use serde::Serialize;

/// Angle step for the exhaustive sweeps.
const SWEEP_STEP: f64 = 0.001;

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            pass,
            detail,
        }
    }
}

#[derive(Serialize)]
pub struct GameTableRow {
    pub lambda: usize,
    pub best_value: f64,
    pub bound: f64,
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<GameTableRow>,
}

impl SuiteReport {
    fn assemble(name: &'static str, checks: Vec<Check>, table: Vec<GameTableRow>) -> Self {
        Self {
            name,
            pass: checks.iter().all(|c| c.pass),
            checks,
            table,
        }
    }
}

fn cos2_pi_8() -> f64 {
    (PI / 8.0).cos().powi(2)
}

pub fn binding_suite(_seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    let exact = double_open_success_exact(&DoubleOpenStrategy::breidbart(), 1);
    checks.push(Check::new(
        "single-qubit-exact",
        (exact - cos2_pi_8()).abs() <= 1e-9,
        format!("intermediate-basis value {exact:.10} vs cos^2(pi/8) {:.10}", cos2_pi_8()),
    ));
    let search = double_open_search(SWEEP_STEP).expect("positive step");
    checks.push(Check::new(
        "sweep-no-violation",
        search.best_value <= cos2_pi_8() + 1e-6,
        format!(
            "best of {} grid points: {:.10}",
            search.grid_points, search.best_value
        ),
    ));
    checks.push(Check::new(
        "sweep-attains-optimum",
        search.best_value >= cos2_pi_8() - 1e-6,
        format!(
            "best at polar {:.4}, azimuth {:.4}",
            search.best_polar, search.best_azimuth
        ),
    ));
    for lambda in 1..=6usize {
        let target = cos2_pi_8().powi(lambda as i32);
        let best = search.best_value.powi(lambda as i32);
        let exact = double_open_success_exact(&DoubleOpenStrategy::breidbart(), lambda);
        checks.push(Check::new(
            format!("decay-lambda-{lambda}"),
            (best - target).abs() <= 1e-6 && (exact - target).abs() <= 1e-9,
            format!("best^l {best:.8}, exact {exact:.8}, target {target:.8}"),
        ));
    }
    SuiteReport::assemble("binding", checks, Vec::new())
}

pub fn moe_suite(_seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    let mut table = Vec::new();
    for lambda in 1..=4usize {
        let bound = moe_bound(lambda);
        let mut best = f64::NEG_INFINITY;
        let mut worst_name = String::new();
        let mut ok = true;
        for (name, strategy) in moe_catalog(lambda) {
            let value = moe_game_value(&strategy, lambda).expect("catalog evaluates");
            if value > best {
                best = value;
                worst_name = name.clone();
            }
            if value > bound + 1e-9 {
                ok = false;
            }
        }
        checks.push(Check::new(
            format!("catalog-under-ceiling-lambda-{lambda}"),
            ok,
            format!("best {best:.10} ({worst_name}) vs bound {bound:.10}"),
        ));
        table.push(GameTableRow {
            lambda,
            best_value: best,
            bound,
        });
    }
    let sweep = moe_search_single_qubit(SWEEP_STEP).expect("positive step");
    checks.push(Check::new(
        "sweep-attains-ceiling",
        (sweep.best_value - moe_bound(1)).abs() <= 1e-6,
        format!("sweep best {:.10} vs bound {:.10}", sweep.best_value, moe_bound(1)),
    ));
    let mut max_gap = 0.0f64;
    for attack in string_attacks() {
        for lambda in 1..=4usize {
            let direct = joint_string_guess_probability(attack.as_ref(), lambda)
                .expect("string attack evaluates");
            let game = moe_game_value(&reduce_to_moe(attack.clone(), lambda), lambda)
                .expect("image evaluates");
            max_gap = max_gap.max((direct - game).abs());
        }
    }
    checks.push(Check::new(
        "reduction-preserves-success",
        max_gap <= 1e-9,
        format!("max evaluator discrepancy {max_gap:.2e}"),
    ));
    let mut floor_ok = true;
    let mut floor_detail = String::new();
    for lambda in 1..=3usize {
        for attack in builtin_attacks() {
            let d = induced_joint_distribution(attack.as_ref(), lambda)
                .expect("induced table builds");
            let h = min_entropy_cond(&d, &["x0", "x1"], &["z"]).expect("entropy computes");
            let floor = lambda as f64 * joint_guess_rate_log2();
            if h < floor - 1e-9 {
                floor_ok = false;
                floor_detail = format!("{} at lambda {lambda}: {h} < {floor}", attack.name());
            }
        }
    }
    checks.push(Check::new(
        "joint-entropy-floor",
        floor_ok,
        if floor_ok {
            "H(X0 X1 | memento, bases) >= lambda log2(4 - 2 sqrt 2) for every attack".into()
        } else {
            floor_detail
        },
    ));
    SuiteReport::assemble("moe", checks, table)
}

pub fn split_suite(seed: u64) -> SuiteReport {
    let mut rng = rng::derived(seed, 1 << 32);
    let mut checks = Vec::new();
    let mut held = 0u32;
    let mut exhaustive_ok = 0u32;
    let mut exhaustive_total = 0u32;
    let mut lp_agree = true;
    for case in 0..200u32 {
        let (n0, n1, nz) = if case % 4 == 0 {
            (2usize, 2usize, rng.random_range(1..=3usize))
        } else {
            (
                rng.random_range(2..=16usize),
                rng.random_range(2..=16usize),
                rng.random_range(1..=16usize),
            )
        };
        let atoms = n0 * n1 * nz;
        let mut weights: Vec<u64> = (0..atoms).map(|_| rng.random_range(0..32u64)).collect();
        if weights.iter().sum::<u64>() == 0 {
            weights[0] = 1;
        }
        let d = JointDistribution::from_weights(
            vec![
                Axis::new("x0", (0..n0).map(|i| i.to_string()).collect()),
                Axis::new("x1", (0..n1).map(|i| i.to_string()).collect()),
                Axis::new("z", (0..nz).map(|i| i.to_string()).collect()),
            ],
            &weights,
        )
        .expect("weights normalize");
        for delta in [0.25, 0.125] {
            let outcome = min_entropy_split(&d, delta).expect("split runs");
            if outcome.holds {
                held += 1;
            }
            if atoms <= 12 {
                exhaustive_total += 1;
                let (_, best) = exhaustive_split_search(&d, delta).expect("tiny instance");
                if best + 1e-12 >= outcome.achieved {
                    exhaustive_ok += 1;
                }
            }
        }
        if atoms <= 64 {
            for delta in [0.1, 0.25] {
                let greedy = smooth_guessing_probability(
                    &d,
                    &["x0", "x1"],
                    &["z"],
                    delta,
                    SmoothingMethod::Greedy,
                )
                .expect("greedy runs")
                .to_f64();
                let lp = smooth_guessing_probability(
                    &d,
                    &["x0", "x1"],
                    &["z"],
                    delta,
                    SmoothingMethod::LinearProgram,
                )
                .expect("lp runs")
                .to_f64();
                if (greedy - lp).abs() > 1e-9 {
                    lp_agree = false;
                }
            }
        }
    }
    checks.push(Check::new(
        "threshold-construction-certified",
        held == 400,
        format!("{held}/400 instance-delta pairs hold (200 instances, delta 1/4 and 1/8)"),
    ));
    checks.push(Check::new(
        "exhaustive-confirms-construction",
        exhaustive_ok == exhaustive_total,
        format!("{exhaustive_ok}/{exhaustive_total} tiny instances confirmed by brute force"),
    ));
    checks.push(Check::new(
        "lp-greedy-agreement",
        lp_agree,
        "reference linear program equals water-filling on every tested instance".into(),
    ));
    SuiteReport::assemble("split", checks, Vec::new())
}

pub fn lhl_suite(seed: u64) -> SuiteReport {
    let mut rng = rng::derived(seed, 2 << 32);
    let mut checks = Vec::new();
    let mut held = 0u32;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..100u32 {
        let n = rng.random_range(2..=6usize);
        let ell = rng.random_range(1..=3usize);
        let ny = rng.random_range(1..=4usize);
        let nx = 1usize << n;
        let mut weights: Vec<u64> = (0..nx * ny).map(|_| rng.random_range(0..16u64)).collect();
        if weights.iter().sum::<u64>() == 0 {
            weights[0] = 1;
        }
        let d = JointDistribution::from_weights(
            vec![
                Axis::new(
                    "x",
                    (0..nx)
                        .map(|i| BitString::from_index(i, n).to_string())
                        .collect(),
                ),
                Axis::new("y", (0..ny).map(|i| i.to_string()).collect()),
            ],
            &weights,
        )
        .expect("weights normalize");
        let report = lhl_verify(&d, n, ell, 0.0).expect("instance fits the caps");
        if report.holds {
            held += 1;
        }
        worst_margin = worst_margin.min(report.bound - report.distance);
    }
    checks.push(Check::new(
        "extraction-bound-holds",
        held == 100,
        format!("{held}/100 exhaustively enumerated instances hold; smallest margin {worst_margin:.4}"),
    ));

    // The distinguisher side of the story.
    let mut dominated = true;
    let mut zero_ok = true;
    for attack in builtin_attacks() {
        for lambda in [2usize, 3] {
            let r = distinguisher_advantage_exact(&attack, lambda, 1)
                .expect("distinguisher evaluates");
            if r.advantage + 1e-12 < r.attack_success - r.baseline {
                dominated = false;
            }
            if attack.name() == "constant-value" && r.advantage.abs() > 1e-9 {
                zero_ok = false;
            }
        }
    }
    checks.push(Check::new(
        "distinguisher-dominates-excess",
        dominated,
        "exact acceptance gap covers every attack's excess".into(),
    ));
    checks.push(Check::new(
        "zero-advantage-attack",
        zero_ok,
        "value-guessing attack distinguishes with advantage exactly 0".into(),
    ));

    // Closed-form bound sanity.
    let mut monotone = true;
    for ell in 1..=3usize {
        let mut last = f64::INFINITY;
        for lambda in (10..=2000).step_by(10) {
            let v = eq3_bound(lambda, ell).expect("positive parameters");
            if v >= last {
                monotone = false;
            }
            last = v;
        }
    }
    let mut chain = true;
    for lambda in (20..2000).step_by(20) {
        for ell in 1..=4usize {
            let l = lambda as f64;
            let tight = ((ell as f64 + 1.0 + l / 20.0) / 2.0
                - (l / 4.0) * joint_guess_rate_log2())
            .exp2();
            let loose = (ell as f64 + 1.0 - 0.0071 * l).exp2();
            if tight > loose * (1.0 + 1e-12) {
                chain = false;
            }
        }
    }
    checks.push(Check::new(
        "closed-form-bound-sanity",
        monotone && chain,
        "monotone decreasing in lambda; simplified exponent dominates the tight one".into(),
    ));
    SuiteReport::assemble("lhl", checks, Vec::new())
}
