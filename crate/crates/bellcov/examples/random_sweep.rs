//! Seeded randomized sweeps: thousands of random strategies, every
//! applicable bound, worst slack per check. The simulator is the oracle --
//! if any inequality ever dipped below tolerance the sweep would fail and
//! name the offending seed.
//!
//! Run: `cargo run -p bellcov --example random_sweep --release`

use bellcov::sweep::{run_sweep, SweepScenario};

fn main() {
    for (scenario, count) in [
        (SweepScenario::Bipartite, 2000),
        (SweepScenario::Tripartite, 500),
        (SweepScenario::I3322, 500),
    ] {
        let report = run_sweep(scenario, 42, count);
        println!(
            "{} x{} (seed {}):",
            report.scenario, report.count, report.root_seed
        );
        for check in &report.checks {
            println!(
                "  {:<42} worst slack {:+.3e}  {}",
                check.name,
                check.worst_slack,
                if check.pass { "ok" } else { "VIOLATED" }
            );
        }
        assert!(report.pass, "sweep failed: {:?}", report.failure);
        println!();
    }
    println!("all sweeps passed.");
}
