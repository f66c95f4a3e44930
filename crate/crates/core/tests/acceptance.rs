//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are printed even when everything passes.

use std::process::ExitCode;

use tvb_core::suite::{run_suite, Level, SuiteOptions};

/// Per-criterion wall-clock budgets in milliseconds.
const BUDGET_MS: [u128; 10] = [1_000, 1_000, 10_000, 300_000, 120_000, 300_000, 60_000, 5_000, 300_000, 1_000];

fn main() -> ExitCode {
    // one worker so each timing is the criterion's own
    let opts = SuiteOptions {
        level: Level::Fast,
        workers: 1,
        ..SuiteOptions::default()
    };
    let report = run_suite(&opts, &[]).expect("criteria ids are valid");
    let mut ok = true;
    for c in &report.criteria {
        let in_time = c.elapsed_ms <= BUDGET_MS[c.id - 1];
        let pass = c.passed() && in_time;
        ok &= pass;
        println!(
            "criterion {:>2} {:<24} {} ({} ms{}) {}",
            c.id,
            c.name,
            if pass { "PASS" } else { "FAIL" },
            c.elapsed_ms,
            if in_time { "" } else { ", over budget" },
            c.detail
        );
    }
    println!("acceptance: {}/10 passed", report.criteria.iter().filter(|c| c.passed()).count());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
