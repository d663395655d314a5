//! The CHSH-optimal singlet strategy: reaches the Tsirelson value
//! `B0 = 2 sqrt(2)`, saturates the entropy bound `2 + S(0)`, and shows the
//! second-moment symmetry `M12 = M34`, `M13 = M24` that every quantum
//! strategy carries.
//!
//! Run: `cargo run -p bellcov --example tsirelson`

use std::f64::consts::SQRT_2;

use bellcov::bounds::{bell_value, tlm_check, tsallis_bound, BellFunctional};
use bellcov::covariance::build_covariance;
use bellcov::sim::tsirelson_strategy;

fn main() {
    let strategy = tsirelson_strategy();
    let v = strategy.correlator_vector().unwrap();
    let m = strategy.second_moment().unwrap();

    println!("correlators V = {:?}", v.values());
    println!(
        "second moments: M12 = {:+.3e}, M34 = {:+.3e}",
        m.m(1, 2),
        m.m(3, 4)
    );
    println!(
        "                M13 = {:+.3e}, M24 = {:+.3e}",
        m.m(1, 3),
        m.m(2, 4)
    );

    let b0 = bell_value(&v, &BellFunctional::chsh_b0()).unwrap();
    println!(
        "CHSH B0       = {b0:.12}   (2 sqrt(2) = {:.12})",
        2.0 * SQRT_2
    );
    assert!((b0 - 2.0 * SQRT_2).abs() < 1e-12);

    // both local pairs anticommute, so the entropy bound peaks at 2 sqrt(2)
    let d_a = strategy.alice_anticommutator_mean(0, 1).unwrap();
    let d_b = strategy.bob_anticommutator_mean(0, 1).unwrap();
    let bound = tsallis_bound(d_a, d_b).unwrap();
    println!("d_A = {d_a:+.3e}, d_B = {d_b:+.3e}, bound 2 + S = {bound:.12}");
    assert!(d_a.abs() < 1e-12 && d_b.abs() < 1e-12);
    assert!((bound - b0).abs() < 1e-12, "bound attained with equality");

    // the TLM criterion is tight at the Tsirelson point
    let tlm = tlm_check(&v).unwrap();
    println!("TLM: |c1 c2 - c3 c4| = {:.9} <= {:.9}", tlm.lhs, tlm.rhs);
    assert!(tlm.satisfied && tlm.slack.abs() < 1e-12);

    // and the covariance C = M - V V^T is positive semidefinite
    let c = build_covariance(&m, &v).unwrap();
    println!("min eigenvalue of C = {:+.3e}", c.min_eigenvalue());
    assert!(c.is_psd(1e-9));

    println!("\nTsirelson strategy checks passed.");
}
