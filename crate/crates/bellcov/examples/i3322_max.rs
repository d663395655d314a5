//! The three-setting bound: `|B'| <= sqrt(3 + 2d - 2(e+f)) +
//! sqrt(3 + 2d + 2(e+f)) + sqrt(2 - 2d)`, maximized over Alice's pair
//! means. The peak is 5, at `d = 1/2` and `e + f = 0` -- above the
//! classical bound 4 for the same functional.
//!
//! Run: `cargo run -p bellcov --example i3322_max`

use bellcov::i3322::{i3322_check, i3322_max, i3322_rhs, AlicePairMeans};
use bellcov::sim::random_bipartite_strategy;

fn main() {
    let max = i3322_max();
    println!("max rhs          = {:.9}", max.value);
    println!("at d             = {:.6}", max.d);
    println!("   e + f         = {:+.6}", max.e_plus_f);
    println!(
        "unconstrained    = {:.9} (same point)",
        max.unconstrained_value
    );
    assert!((max.value - 5.0).abs() < 1e-6);
    assert!((max.d - 0.5).abs() < 1e-3);
    assert!(max.e_plus_f.abs() < 1e-3);

    // spot values of the bound
    let at = |d, e, f| i3322_rhs(&AlicePairMeans::new(d, e, f).unwrap()).unwrap();
    println!("\nrhs(d=1/2, e+f=0) = {}", at(0.5, 0.0, 0.0));
    println!("rhs(d=e=f=1)      = {}", at(1.0, 1.0, 1.0));
    println!("rhs(d=e=f=0)      = {:.9}", at(0.0, 0.0, 0.0));

    // every simulated 3-setting strategy respects the bound and the cap 5
    let mut worst_slack = f64::INFINITY;
    let mut largest_rhs = f64::NEG_INFINITY;
    for seed in 0..500 {
        let s = random_bipartite_strategy(seed, (2, 2), 3).unwrap();
        let report = i3322_check(&s).unwrap();
        worst_slack = worst_slack.min(report.slack);
        largest_rhs = largest_rhs.max(report.rhs);
        assert!(report.satisfied, "seed {seed}");
    }
    println!("\n500 random strategies: worst slack {worst_slack:.6}, largest rhs {largest_rhs:.6}");
    assert!(largest_rhs <= 5.0 + 1e-9);

    println!("\ni3322 checks passed.");
}
