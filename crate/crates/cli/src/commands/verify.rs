//! `bqs verify`: run a verification suite and exit 0 only when every check
//! holds. Human-readable progress goes to stderr; the machine-readable
//! report to stdout or `--out`.

use serde::Serialize;

use crate::config::{OutputFormat, VerifyArgs, VerifySuite};
use crate::reports::{self, Report};
use crate::suites::{self, SuiteReport};

#[derive(Serialize)]
struct Config {
    suite: String,
}

#[derive(Serialize)]
struct Results {
    pass: bool,
    suites: Vec<SuiteReport>,
}

pub fn run(args: VerifyArgs) -> anyhow::Result<i32> {
    let selected: Vec<VerifySuite> = match args.suite {
        VerifySuite::All => vec![
            VerifySuite::Binding,
            VerifySuite::Moe,
            VerifySuite::Split,
            VerifySuite::Lhl,
        ],
        one => vec![one],
    };
    let mut suite_reports = Vec::new();
    for suite in selected {
        let report = match suite {
            VerifySuite::Binding => suites::binding_suite(args.seed),
            VerifySuite::Moe => suites::moe_suite(args.seed),
            VerifySuite::Split => suites::split_suite(args.seed),
            VerifySuite::Lhl => suites::lhl_suite(args.seed),
            VerifySuite::All => unreachable!("expanded above"),
        };
        eprintln!(
            "suite {}: {}",
            report.name,
            if report.pass { "PASS" } else { "FAIL" }
        );
        for check in &report.checks {
            eprintln!(
                "  [{}] {}: {}",
                if check.pass { "ok" } else { "FAIL" },
                check.name,
                check.detail
            );
        }
        if !report.table.is_empty() {
            eprintln!("  lambda  best_value      bound");
            for row in &report.table {
                eprintln!(
                    "  {:>6}  {:.10}  {:.10}",
                    row.lambda, row.best_value, row.bound
                );
            }
        }
        suite_reports.push(report);
    }
    let pass = suite_reports.iter().all(|s| s.pass);

    let suite_name = format!("{:?}", args.suite).to_lowercase();
    let body = match args.format {
        OutputFormat::Json => Report::new(
            "verify",
            args.seed,
            Config {
                suite: suite_name.clone(),
            },
            Results {
                pass,
                suites: suite_reports,
            },
        )
        .to_json(),
        OutputFormat::Csv => {
            let mut rows = Vec::new();
            for suite in &suite_reports {
                for check in &suite.checks {
                    rows.push(vec![
                        reports::SCHEMA_VERSION.to_string(),
                        suite.name.to_string(),
                        check.name.clone(),
                        check.pass.to_string(),
                        check.detail.clone(),
                        args.seed.to_string(),
                    ]);
                }
            }
            reports::csv_document(
                &["schema", "suite", "check", "pass", "detail", "seed"],
                &rows,
            )
        }
    };
    reports::emit(&args.out, &body)?;
    Ok(if pass { 0 } else { 1 })
}
