//! Runs every acceptance check with pinned seeds and prints one PASS/FAIL line each,
//! followed by the measured quantities.
//!
//! cargo run --release --example acceptance_suite -- [seed]

use rigid_cocycles::verify::run_all;
use std::time::Instant;

fn main() -> rigid_cocycles::Result<()> {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20240601);
    let start = Instant::now();
    let reports = run_all(seed)?;
    for r in &reports {
        println!("{}", r.line());
        for d in &r.details {
            println!("    {d}");
        }
    }
    println!("{} of {} passed in {:.1?}", reports.iter().filter(|r| r.pass).count(), reports.len(), start.elapsed());
    Ok(())
}
