//! The PR box `V = (1, 1, 1, -1)`: CHSH value 4, beyond every quantum-like
//! theory with a symmetric second-moment matrix. The minimal asymmetry
//! `|M12 - M34|` any covariance-carrying theory must grant it is exactly 2.
//!
//! Run: `cargo run -p bellcov --example pr_box`

use bellcov::bounds::{bell_value, classify, tlm_check, BellFunctional, Verdict};
use bellcov::covariance::{build_covariance, default_second_moment, CorrelatorVector};
use bellcov::membership::{asymmetry_lower_bound, min_asymmetry};

fn main() {
    let v = CorrelatorVector::new(vec![1.0, 1.0, 1.0, -1.0]).unwrap();

    let b0 = bell_value(&v, &BellFunctional::chsh_b0()).unwrap();
    println!("CHSH B0 = {b0} (algebraic maximum)");
    assert_eq!(b0, 4.0);

    let verdict = classify(&v).unwrap();
    println!(
        "classification: {:?} ({})",
        verdict.verdict, verdict.witness
    );
    assert_eq!(verdict.verdict, Verdict::BeyondQuantum);

    let tlm = tlm_check(&v).unwrap();
    println!("TLM slack = {}", tlm.slack);
    assert_eq!(tlm.slack, -2.0);

    // an unconstrained theory can still hold the PR box: M = V V^T gives a
    // zero covariance, PSD with nothing to spare
    let m = default_second_moment(&v);
    let c = build_covariance(&m, &v).unwrap();
    println!(
        "M = V V^T gives |C| max entry = {:.1e}",
        c.entries().abs().max()
    );
    assert!(c.is_psd(1e-9));
    println!("but that M has M12 - M34 = {}", m.m(1, 2) - m.m(3, 4));

    // no theory can do better: the necessary bound and the search agree at 2
    let lower = asymmetry_lower_bound(&v).unwrap();
    let searched = min_asymmetry(&v).unwrap();
    println!("asymmetry lower bound = {lower}, bisection search = {searched}");
    assert_eq!(lower, 2.0);
    assert!((searched - 2.0).abs() < 1e-3);

    println!("\nPR box checks passed.");
}
