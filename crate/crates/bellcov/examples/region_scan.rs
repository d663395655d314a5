//! Coarse scan of the (B0, B1) plane: for each cell, the minimal
//! second-moment asymmetry |M12 - M34| any covariance-carrying theory needs
//! to reach those CHSH values. Zero on the classical square and on the
//! whole quantum disc `B0^2 + B1^2 <= 8`; grows to 2 at the PR corners;
//! blank outside the no-signaling diamond.
//!
//! Run: `cargo run -p bellcov --example region_scan --release`

use bellcov::membership::{region_scan, GridSpec};

fn main() {
    let grid = GridSpec::square(-4.0, 4.0, 0.5);
    let samples = region_scan(&grid, 42).unwrap();
    let cols = grid.b1_points().len();

    println!(
        "min |M12 - M34| over the (B0, B1) grid, step 0.5 (x10, '.' = 0, blank = unreachable):\n"
    );
    for row in samples.chunks(cols) {
        let mut line = String::new();
        for s in row {
            let cell = if s.min_asymmetry.is_nan() {
                "   ".to_string()
            } else if s.min_asymmetry == 0.0 {
                "  .".to_string()
            } else {
                format!("{:3.0}", s.min_asymmetry * 10.0)
            };
            line.push_str(&cell);
        }
        println!("{line}");
    }

    let value = |b0: f64, b1: f64| {
        samples
            .iter()
            .find(|s| (s.b0 - b0).abs() < 1e-9 && (s.b1 - b1).abs() < 1e-9)
            .unwrap()
            .min_asymmetry
    };

    assert_eq!(value(2.0, 2.0), 0.0, "classical corner");
    assert_eq!(value(0.0, 0.0), 0.0, "origin");
    assert!(
        (value(4.0, 0.0) - 2.0).abs() < 2e-3,
        "PR corner needs asymmetry 2"
    );
    assert!(value(3.0, 0.0) > 0.2, "outside the quantum disc");
    assert!(value(4.0, 4.0).is_nan(), "outside the no-signaling diamond");

    println!("\nregion scan checks passed.");
}
