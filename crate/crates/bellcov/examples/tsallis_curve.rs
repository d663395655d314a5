//! The entropy-weighted CHSH bound `2 + S(d)` as the local anticommutator
//! mean `d` sweeps [-1, 1]: equal to the classical limit 2 at `|d| = 1`,
//! the Tsirelson value `2 sqrt(2)` at `d = 0`, and identical to
//! `sqrt(2(1+d)) + sqrt(2(1-d))` everywhere.
//!
//! Run: `cargo run -p bellcov --example tsallis_curve`

use std::f64::consts::SQRT_2;

use bellcov::bounds::{tsallis_bound, tsallis_entropy};

fn main() {
    println!("{:>6}  {:>12}  {:>12}", "d", "S(d)", "2 + S(d)");
    for k in 0..=10 {
        let d = -1.0 + 0.2 * k as f64;
        let s = tsallis_entropy(d).unwrap();
        println!("{d:>6.2}  {s:>12.9}  {:>12.9}", 2.0 + s);
    }

    // identity with the two-square-root form, on a fine grid
    let mut max_dev = 0.0_f64;
    for k in 0..=10_000 {
        let d = -1.0 + 2.0 * k as f64 / 10_000.0;
        let closed = (2.0 * (1.0 + d)).sqrt() + (2.0 * (1.0 - d)).sqrt();
        max_dev = max_dev.max((2.0 + tsallis_entropy(d).unwrap() - closed).abs());
    }
    println!("\nmax |(2 + S) - sqrt form| over 10^4 points = {max_dev:.2e}");
    assert!(max_dev < 1e-12);

    assert_eq!(2.0 + tsallis_entropy(1.0).unwrap(), 2.0);
    assert_eq!(2.0 + tsallis_entropy(-1.0).unwrap(), 2.0);
    assert_eq!(2.0 + tsallis_entropy(0.0).unwrap(), 2.0 * SQRT_2);

    // the two-argument bound takes the smaller entropy
    let b = tsallis_bound(0.5, 0.9).unwrap();
    println!("bound(dA=0.5, dB=0.9) = {b:.9} (limited by the B side)");
    assert!((b - (2.0 + tsallis_entropy(0.9).unwrap())).abs() < 1e-15);

    println!("\nentropy bound checks passed.");
}
