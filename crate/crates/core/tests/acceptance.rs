//! Runs the eleven acceptance criteria and prints one line per criterion.

use std::process::ExitCode;

use unitgraph::verify::run_criterion;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=11 {
        let r = run_criterion(id);
        println!("{r}");
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
