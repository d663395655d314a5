//! Covariance-matrix certificates for Bell correlations.
//!
//! A vector `V` of binary correlators fits inside a quantum-like statistical
//! theory exactly when some unit-diagonal second-moment matrix `M` makes the
//! covariance `C = M - V V^T` positive semidefinite with the right internal
//! symmetry. That one linear-algebra fact yields the
//! Tsirelson-Landau-Masanes criterion, an entropy-weighted CHSH bound,
//! tripartite Mermin-type and monogamy bounds, and a three-setting bound
//! peaking at 5 -- all implemented here with a finite-dimensional quantum
//! simulator as the ground-truth oracle.
//!
//! Start from the runnable examples (`cargo run --example tsirelson`, etc.);
//! each one walks through a single capability. The `bellcov` binary in the
//! companion CLI crate drives the same machinery from files.
//!
//! Module map:
//! - [`covariance`]: correlator vectors, second moments, `C = M - V V^T`,
//!   PSD checks, and the bordered embedding equivalent to `C >= 0`.
//! - [`bounds`]: CHSH functionals, the classical facet test, the TLM
//!   criterion and its covariance-shifted strengthening, Tsallis entropy.
//! - [`sim`]: states, dichotomic observables, strategies, seeded random
//!   generation.
//! - [`membership`]: feasibility searches over `M`, minimal asymmetry
//!   `|M12 - M34|`, and the `(B0, B1)` region scan.
//! - [`multipartite`]: tripartite Mermin-type, mixed, and monogamy bounds.
//! - [`i3322`]: the three-setting functional and its maximum of 5.
//! - [`sweep`]: randomized oracle sweeps over all of the above.
//! - [`io`]: JSON file schemas and CSV emitters.

pub mod bounds;
pub mod covariance;
pub mod error;
pub mod i3322;
pub mod io;
pub mod membership;
pub mod multipartite;
pub mod nelder_mead;
pub mod sim;
pub mod sweep;

pub use bounds::{
    bell_value, classical_check, classify, covariance_tlm_check, tlm_check, tlm_residual,
    tsallis_bound, tsallis_entropy, BellFunctional, BoundReport, Classification, Verdict,
};
pub use covariance::{
    build_covariance, default_second_moment, is_psd, psd_check, schur_embed, CorrelatorVector,
    CovarianceMatrix, Scenario, SchurEmbedding, SecondMomentMatrix,
};
pub use error::{Error, Result};
pub use i3322::{bprime, i3322_check, i3322_max, i3322_rhs, AlicePairMeans};
pub use membership::{
    asymmetry_lower_bound, feasible_with_constraints, min_asymmetry, region_scan,
    FeasibilityResult, GridSpec, RegionSample,
};
pub use multipartite::{
    mermin_check, mixed_tlm_check, mixed_tsallis_check, monogamy_checks, TripartiteReport,
};
pub use sim::{
    anticommutator_mean, expectation, mermin_ghz_strategy, qubit_observable,
    random_bipartite_strategy, random_tripartite_strategy, tsirelson_strategy, BipartiteStrategy,
    DichotomicObservable, PureState, TripartiteStrategy,
};
pub use sweep::{run_sweep, SweepReport, SweepScenario};
