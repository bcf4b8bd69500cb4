//! `bqs attack`: evaluate one malicious-receiver attack and compare its
//! excess guessing probability to the closed-form ceiling.

use bqs_core::attack::{
    attack_by_name, guess_probability_exact, guess_probability_sampled, EXACT_LAMBDA_CAP,
};
use bqs_core::attack::AttackRecord;
use bqs_core::info::eq3_bound;

use crate::config::{AttackArgs, OutputFormat};
use crate::reports::{self, Report};

const DEFAULT_TRIALS: u64 = 100_000;

pub fn run(args: AttackArgs) -> anyhow::Result<i32> {
    anyhow::ensure!(args.lambda >= 1, "lambda must be at least 1");
    anyhow::ensure!((1..=64).contains(&args.ell), "ell must be between 1 and 64");
    anyhow::ensure!(
        !(args.exact && args.trials.is_some()),
        "--exact and --trials are mutually exclusive"
    );
    let strategy = attack_by_name(&args.adversary)?;

    // Mode selection: an explicit flag wins; otherwise exact when the
    // instance is enumerable, sampled beyond.
    let eval = if args.trials.is_none() && (args.exact || args.lambda <= EXACT_LAMBDA_CAP) {
        guess_probability_exact(strategy.as_ref(), args.lambda, args.ell)?
    } else {
        let trials = args.trials.unwrap_or(DEFAULT_TRIALS);
        super::check_trials(trials)?;
        guess_probability_sampled(strategy.as_ref(), args.lambda, args.ell, trials, args.seed)?
    };

    let bound = eval.baseline + eq3_bound(args.lambda, args.ell)?;
    let record = AttackRecord {
        attack_id: strategy.name().to_string(),
        lambda: args.lambda,
        ell: args.ell,
        mode: eval.mode.to_string(),
        value: eval.value,
        ci_low: eval.ci.map(|c| c.0),
        ci_high: eval.ci.map(|c| c.1),
        bound,
        seed: args.seed,
    };
    let pass = record.within_bound();
    eprintln!(
        "attack {}: value {:.6} (baseline {:.6}, advantage {:+.6}), bound {:.6} -> {}",
        record.attack_id,
        eval.value,
        eval.baseline,
        eval.advantage,
        bound,
        if pass { "pass" } else { "FAIL" }
    );

    let body = match args.format {
        OutputFormat::Json => {
            Report::new("attack", args.seed, &record, serde_json::json!({ "pass": pass }))
                .to_json()
        }
        OutputFormat::Csv => reports::csv_document(
            &[
                "schema", "attack_id", "lambda", "ell", "mode", "value", "ci_low", "ci_high",
                "bound", "pass", "seed",
            ],
            &[vec![
                reports::SCHEMA_VERSION.to_string(),
                record.attack_id.clone(),
                record.lambda.to_string(),
                record.ell.to_string(),
                record.mode.clone(),
                record.value.to_string(),
                reports::opt_f64(record.ci_low),
                reports::opt_f64(record.ci_high),
                record.bound.to_string(),
                pass.to_string(),
                record.seed.to_string(),
            ]],
        ),
    };
    reports::emit(&args.out, &body)?;
    Ok(if pass { 0 } else { 1 })
}
