//! Walks the covariance certificate end to end on one strategy: build
//! `C = M - V V^T`, check it is PSD, evaluate the covariance-shifted TLM
//! bounds, and confirm the bordered Schur embedding is PSD exactly when `C`
//! is.
//!
//! Run: `cargo run -p bellcov --example covariance_certificate`

use bellcov::bounds::covariance_tlm_check;
use bellcov::covariance::{
    build_covariance, default_second_moment, is_psd, schur_embed, sym_eigenvalues, CorrelatorVector,
};
use bellcov::sim::random_bipartite_strategy;

fn main() {
    let strategy = random_bipartite_strategy(2024, (2, 2), 2).unwrap();
    let v = strategy.correlator_vector().unwrap();
    let m = strategy.second_moment().unwrap();
    let c = build_covariance(&m, &v).unwrap();

    println!("V = {:?}", v.values());
    println!(
        "C eigenvalues: {:?}",
        sym_eigenvalues(c.entries()).as_slice()
    );
    assert!(c.is_psd(1e-9), "simulated covariances are PSD");

    for report in covariance_tlm_check(&m, &v).unwrap() {
        println!(
            "{}: {:.6} <= {:.6} (slack {:+.3e})",
            report.name, report.lhs, report.rhs, report.slack
        );
        assert!(report.satisfied);
    }

    // bordered embedding [[1, V^T], [V, M]]: PSD iff C is
    let embedding = c.schur_embedding();
    println!(
        "Schur embedding is {}x{}, min eigenvalue {:+.3e}",
        embedding.n(),
        embedding.n(),
        sym_eigenvalues(embedding.entries()).min()
    );
    assert!(is_psd(embedding.entries(), 1e-9).unwrap());

    // the equivalence also holds for indefinite C
    let bad_v = CorrelatorVector::new(vec![0.9, 0.9, 0.9, -0.9]).unwrap();
    let identity = nalgebra::DMatrix::identity(4, 4);
    let bad_c = &identity - bad_v.as_column() * bad_v.as_column().transpose();
    let bad_embedding = schur_embed(&bad_c, bad_v.values()).unwrap();
    let c_psd = is_psd(&bad_c, 1e-9).unwrap();
    let n_psd = is_psd(&bad_embedding, 1e-9).unwrap();
    println!("indefinite case: C PSD = {c_psd}, embedding PSD = {n_psd}");
    assert!(!c_psd && !n_psd);

    // every correlator vector admits at least the diagonal-covariance M
    let any_v = CorrelatorVector::new(vec![0.3, -0.8, 0.55, 0.99]).unwrap();
    let default_m = default_second_moment(&any_v);
    let default_c = build_covariance(&default_m, &any_v).unwrap();
    assert!(default_c.is_psd(1e-9));
    println!("default M = V V^T + diag(sigma^2) is always a valid witness");

    println!("\ncovariance certificate checks passed.");
}
