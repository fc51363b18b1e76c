//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use std::process::ExitCode;

use abphase::acceptance::{run_suite, select};

fn main() -> ExitCode {
    let criteria = select(Some("all")).expect("`all` is a valid selector");
    let outcomes = run_suite(&criteria, |o| println!("{}", o.line()));
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 && outcomes.len() == 10 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
