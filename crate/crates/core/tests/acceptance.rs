//! Acceptance criteria 1 through 13, one line each.
//!
//! Set HOROLAB_QUICK=1 for the reduced sizes used by `verify-all --quick`.

use std::time::Instant;

use horolab::verify::run_criterion;

fn main() {
    let quick = std::env::var("HOROLAB_QUICK").is_ok_and(|v| v == "1");
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for id in 1..=13 {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let t = Instant::now();
        let r = run_criterion(id, quick);
        println!("{}  ({:.1}s)", r.line(), t.elapsed().as_secs_f64());
        if !r.passed {
            println!("    detail: {}", r.detail);
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
