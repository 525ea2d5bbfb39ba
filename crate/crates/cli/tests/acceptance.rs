//! One line per criterion; exits nonzero if any fails.

use std::time::Instant;

fn main() {
    let mut failed = 0;
    for &(id, _, _) in cantor_cli::acceptance::CRITERIA {
        let start = Instant::now();
        let outcome = match cantor_cli::acceptance::run_criterion(id) {
            Ok(o) => o,
            Err(e) => {
                println!("criterion {id} FAIL: {e}");
                failed += 1;
                continue;
            }
        };
        let verdict = if outcome.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.passed());
        println!(
            "criterion {id} {verdict} {} ({} checks, {:.1}s): {}",
            outcome.name,
            outcome.checks,
            start.elapsed().as_secs_f64(),
            outcome.detail()
        );
    }
    let total = cantor_cli::acceptance::CRITERIA.len();
    println!("{} of {total} criteria passed", total - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
