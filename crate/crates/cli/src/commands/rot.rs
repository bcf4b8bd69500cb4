//! `bqs rot`: batches of honest random-transfer sessions.

use anyhow::Context;
use bqs_core::protocol::rot::{run_rot_honest, RotReceiverOutput};
use bqs_core::protocol::Direction;
use bqs_core::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{OutputFormat, RotArgs};
use crate::reports::{self, Report};

#[derive(Serialize)]
struct Config {
    lambda: usize,
    ell: usize,
    trials: u64,
    choice: Option<u8>,
}

#[derive(Serialize)]
struct Results {
    matches: u64,
    match_rate: f64,
    forced_measurements: u64,
    receiver_to_sender_bytes: u64,
    transcript_digest: String,
}

pub fn run(args: RotArgs) -> anyhow::Result<i32> {
    super::check_lambda(args.lambda)?;
    super::check_trials(args.trials)?;
    anyhow::ensure!(
        (1..=64).contains(&args.ell),
        "ell must be between 1 and 64"
    );
    let fixed_choice = args
        .choice
        .map(|c| super::parse_bit(c, "choice"))
        .transpose()?;
    let outcomes: Vec<(bool, u32, u64, String)> = (0..args.trials)
        .into_par_iter()
        .map(|session| {
            let choice = fixed_choice
                .unwrap_or_else(|| rng::derived(args.seed, session * 8 + 3).random::<bool>());
            let run = run_rot_honest(args.lambda, args.ell, choice, args.seed, session)
                .context("transfer session failed")?;
            let expected = if choice {
                &run.sender_outputs.1
            } else {
                &run.sender_outputs.0
            };
            Ok((
                run.receiver_output == RotReceiverOutput::Honest(expected.clone()),
                run.transcript.total_forced_measurements(),
                run.transcript.classical_bytes(Direction::BToA),
                run.transcript.to_json_string(),
            ))
        })
        .collect::<anyhow::Result<_>>()?;
    let mut matches = 0u64;
    let mut forced = 0u64;
    let mut reverse_bytes = 0u64;
    let mut digest = reports::FNV_SEED;
    for (matched, f, rev, json) in &outcomes {
        matches += u64::from(*matched);
        forced += u64::from(*f);
        reverse_bytes += rev;
        digest = reports::fnv1a(json.as_bytes(), digest);
    }
    let results = Results {
        matches,
        match_rate: matches as f64 / args.trials as f64,
        forced_measurements: forced,
        receiver_to_sender_bytes: reverse_bytes,
        transcript_digest: format!("{digest:016x}"),
    };
    eprintln!(
        "rot: {} sessions, match rate {:.4}, receiver->sender bytes {}",
        args.trials, results.match_rate, results.receiver_to_sender_bytes
    );
    let report = Report::new(
        "rot",
        args.seed,
        Config {
            lambda: args.lambda,
            ell: args.ell,
            trials: args.trials,
            choice: args.choice,
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
                "ell",
                "trials",
                "matches",
                "match_rate",
                "forced_measurements",
                "receiver_to_sender_bytes",
                "transcript_digest",
            ],
            &[vec![
                reports::SCHEMA_VERSION.to_string(),
                "rot".into(),
                reports::code_version().into(),
                args.seed.to_string(),
                args.lambda.to_string(),
                args.ell.to_string(),
                args.trials.to_string(),
                report.results.matches.to_string(),
                report.results.match_rate.to_string(),
                report.results.forced_measurements.to_string(),
                report.results.receiver_to_sender_bytes.to_string(),
                report.results.transcript_digest.clone(),
            ]],
        ),
    };
    reports::emit(&args.out, &body)?;
    Ok(0)
}
