//! `bqs flip`: batches of coin-flipping sessions, honest or with a
//! double-opening Alice.

use anyhow::Context;
use bqs_core::attack::{DoubleOpenFlipCheat, DoubleOpenStrategy};
use bqs_core::info::per_qubit_guess_bound;
use bqs_core::protocol::coinflip::{run_coinflip, CoinOutcome, FlipAlice};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{FlipArgs, OutputFormat};
use crate::reports::{self, Report};

#[derive(Serialize)]
struct Config {
    lambda: usize,
    trials: u64,
    adversary: String,
    target: Option<u8>,
}

#[derive(Serialize)]
struct Results {
    agreements: u64,
    aborts: u64,
    ones: u64,
    bias_abs: f64,
    /// Cheating runs only: how often both openings would have verified.
    double_open: Option<u64>,
    double_open_rate: Option<f64>,
    double_open_prediction: Option<f64>,
    /// Cheating runs only: how often the counterparty output the target.
    steered: Option<u64>,
    transcript_digest: String,
}

pub fn run(args: FlipArgs) -> anyhow::Result<i32> {
    super::check_lambda(args.lambda)?;
    super::check_trials(args.trials)?;
    let target = super::parse_bit(args.target, "target")?;
    let cheating = match args.adversary.as_str() {
        "honest" => false,
        "breidbart" => true,
        other => anyhow::bail!("unknown flip behavior `{other}`"),
    };
    let outcomes: Vec<(CoinOutcome, CoinOutcome, bool, String)> = (0..args.trials)
        .into_par_iter()
        .map(|session| {
            let run = if cheating {
                let mut cheat =
                    DoubleOpenFlipCheat::new(DoubleOpenStrategy::breidbart(), target);
                run_coinflip(
                    args.lambda,
                    FlipAlice::Cheating(&mut cheat),
                    None,
                    args.seed,
                    session,
                )
            } else {
                run_coinflip(
                    args.lambda,
                    FlipAlice::Honest { coin: None },
                    None,
                    args.seed,
                    session,
                )
            }
            .context("coin-flip session failed")?;
            Ok((
                run.output(),
                run.bob,
                run.double_open == Some(true),
                run.transcript.to_json_string(),
            ))
        })
        .collect::<anyhow::Result<_>>()?;
    let mut agreements = 0u64;
    let mut aborts = 0u64;
    let mut ones = 0u64;
    let mut double_open = 0u64;
    let mut steered = 0u64;
    let mut digest = reports::FNV_SEED;
    for (output, bob, both, json) in &outcomes {
        match output {
            CoinOutcome::Bit(b) => {
                agreements += 1;
                if *b {
                    ones += 1;
                }
            }
            CoinOutcome::Abort => aborts += 1,
        }
        double_open += u64::from(*both);
        if *bob == CoinOutcome::Bit(target) {
            steered += 1;
        }
        digest = reports::fnv1a(json.as_bytes(), digest);
    }
    let bias_abs = (ones as f64 / args.trials as f64 - 0.5).abs();
    let results = Results {
        agreements,
        aborts,
        ones,
        bias_abs,
        double_open: cheating.then_some(double_open),
        double_open_rate: cheating.then(|| double_open as f64 / args.trials as f64),
        double_open_prediction: cheating.then(|| per_qubit_guess_bound().powi(args.lambda as i32)),
        steered: cheating.then_some(steered),
        transcript_digest: format!("{digest:016x}"),
    };
    eprintln!(
        "flip: {} sessions, {} agreements, {} aborts, |bias| {:.4}",
        args.trials, agreements, aborts, bias_abs
    );
    let report = Report::new(
        "flip",
        args.seed,
        Config {
            lambda: args.lambda,
            trials: args.trials,
            adversary: args.adversary.clone(),
            target: cheating.then_some(args.target),
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
                "agreements",
                "aborts",
                "ones",
                "bias_abs",
                "double_open_rate",
                "transcript_digest",
            ],
            &[vec![
                reports::SCHEMA_VERSION.to_string(),
                "flip".into(),
                reports::code_version().into(),
                args.seed.to_string(),
                args.lambda.to_string(),
                args.trials.to_string(),
                args.adversary.clone(),
                report.results.agreements.to_string(),
                report.results.aborts.to_string(),
                report.results.ones.to_string(),
                report.results.bias_abs.to_string(),
                reports::opt_f64(report.results.double_open_rate),
                report.results.transcript_digest.clone(),
            ]],
        ),
    };
    reports::emit(&args.out, &body)?;
    Ok(0)
}
