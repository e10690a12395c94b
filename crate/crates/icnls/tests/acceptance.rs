//! Runs every acceptance criterion at its pinned tolerance and prints one
//! PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
//! Criterion ids given as arguments restrict the run to those criteria.

use std::process::ExitCode;

use icnls::suite::Suite;

fn main() -> ExitCode {
    let mut ids: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    if ids.is_empty() {
        ids = Suite::criteria().iter().map(|(id, _)| *id).collect();
    }
    let outcomes = Suite::new().run_selected(&ids, |o| println!("{}", o.line()));
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
