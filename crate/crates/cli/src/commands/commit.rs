//! `bqs commit`: batches of commitment sessions.

use anyhow::Context;
use bqs_core::attack::{DoubleOpenCommitter, DoubleOpenStrategy};
use bqs_core::protocol::commitment::{
    run_commitment, CommitterBehavior, HonestCommitter, StallingCommitter, VerifyOutcome,
};
use bqs_core::protocol::Direction;
use bqs_core::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CommitArgs, OutputFormat};
use crate::reports::{self, Report};

#[derive(Serialize)]
struct Config {
    lambda: usize,
    trials: u64,
    adversary: String,
}

#[derive(Serialize)]
struct Results {
    accepted: u64,
    aborted: u64,
    acceptance_rate: f64,
    forced_measurements: u64,
    commit_phase_counter_violations: u64,
    transcript_digest: String,
}

struct TrialOutcome {
    accepted: bool,
    forced: u32,
    violation: bool,
    transcript_json: String,
}

pub fn run(args: CommitArgs) -> anyhow::Result<i32> {
    super::check_lambda(args.lambda)?;
    super::check_trials(args.trials)?;
    anyhow::ensure!(
        matches!(args.adversary.as_str(), "honest" | "stalling" | "breidbart"),
        "unknown committer behavior `{}`",
        args.adversary
    );
    // Per-trial RNG streams are derived from (seed, session), so the fan-out
    // never changes results; outcomes are folded in trial order.
    let outcomes: Vec<TrialOutcome> = (0..args.trials)
        .into_par_iter()
        .map(|session| {
            // Stream 3 is the driver's own coin; the session uses 0..2.
            let bit = rng::derived(args.seed, session * 8 + 3).random::<bool>();
            let mut honest;
            let mut stalling;
            let mut cheating;
            let behavior: &mut dyn CommitterBehavior = match args.adversary.as_str() {
                "honest" => {
                    honest = HonestCommitter::new(bit);
                    &mut honest
                }
                "stalling" => {
                    stalling = StallingCommitter { target: bit };
                    &mut stalling
                }
                _ => {
                    cheating = DoubleOpenCommitter::new(DoubleOpenStrategy::breidbart(), bit);
                    &mut cheating
                }
            };
            let run = run_commitment(args.lambda, behavior, args.seed, session)
                .context("commitment session failed")?;
            Ok(TrialOutcome {
                accepted: matches!(run.outcome, VerifyOutcome::Accept(_)),
                forced: run.transcript.total_forced_measurements(),
                violation: run
                    .transcript
                    .classical_bytes_before(Direction::BToA, run.commit_phase_entries)
                    != 0,
                transcript_json: run.transcript.to_json_string(),
            })
        })
        .collect::<anyhow::Result<_>>()?;
    let mut accepted = 0u64;
    let mut forced = 0u64;
    let mut violations = 0u64;
    let mut digest = reports::FNV_SEED;
    for o in &outcomes {
        accepted += u64::from(o.accepted);
        forced += u64::from(o.forced);
        violations += u64::from(o.violation);
        digest = reports::fnv1a(o.transcript_json.as_bytes(), digest);
    }
    let results = Results {
        accepted,
        aborted: args.trials - accepted,
        acceptance_rate: accepted as f64 / args.trials as f64,
        forced_measurements: forced,
        commit_phase_counter_violations: violations,
        transcript_digest: format!("{digest:016x}"),
    };
    eprintln!(
        "commit: {} sessions, acceptance rate {:.4}, {} forced measurements",
        args.trials, results.acceptance_rate, results.forced_measurements
    );
    let report = Report::new(
        "commit",
        args.seed,
        Config {
            lambda: args.lambda,
            trials: args.trials,
            adversary: args.adversary.clone(),
        },
        results,
    );
    let body = match args.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => reports::csv_document(
            &[
                "schema",
                "command",
                "version",
                "seed",
                "lambda",
                "trials",
                "adversary",
                "accepted",
                "acceptance_rate",
                "forced_measurements",
                "transcript_digest",
            ],
            &[vec![
                reports::SCHEMA_VERSION.to_string(),
                "commit".into(),
                reports::code_version().into(),
                args.seed.to_string(),
                args.lambda.to_string(),
                args.trials.to_string(),
                args.adversary.clone(),
                report.results.accepted.to_string(),
                report.results.acceptance_rate.to_string(),
                report.results.forced_measurements.to_string(),
                report.results.transcript_digest.clone(),
            ]],
        ),
    };
    reports::emit(&args.out, &body)?;
    Ok(0)
}
