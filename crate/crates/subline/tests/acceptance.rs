//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use std::process::ExitCode;

use subline::selftest;

fn main() -> ExitCode {
    let ids: Vec<u8> = selftest::CRITERIA.iter().map(|c| c.0).collect();
    let results = selftest::run(&ids);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
