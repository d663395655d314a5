//! Seeded property sweeps: generate random strategies, evaluate every
//! applicable inequality, and report the worst slack per check. A sweep
//! passes when no check dips below its tolerance on any sample; the first
//! offending sample (if any) is reproduced from its seed and attached to the
//! report so it can be dumped to disk.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    bell_value, covariance_tlm_check, tlm_check, tsallis_entropy, BellFunctional, VERDICT_TOL,
};
use crate::covariance::{build_covariance, min_eigenvalue, psd_check, SecondMomentMatrix};
use crate::error::{Error, Result};
use crate::i3322::{bprime, chain_middle, i3322_rhs, AlicePairMeans, GRAM_TOL};
use crate::io::StrategyFile;
use crate::multipartite::{mermin_check, mixed_tlm_check, mixed_tsallis_check, monogamy_checks};
use crate::sim::{derive_seed, random_bipartite_strategy, random_tripartite_strategy};

/// Limit on the second-moment symmetry residuals `|M12 - M34|`,
/// `|M13 - M24|` for simulated strategies.
pub const SYMMETRY_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
struct CheckDef {
    name: &'static str,
    tol: f64,
}

/// Worst observed slack for one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub worst_slack: f64,
    pub pass: bool,
}

/// The first offending sample of a failed sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub sample_index: usize,
    pub seed: u64,
    pub check: String,
    pub strategy: Option<StrategyFile>,
}

/// Aggregate result of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub scenario: String,
    pub count: usize,
    pub root_seed: u64,
    pub checks: Vec<CheckSummary>,
    pub pass: bool,
    pub failure: Option<SweepFailure>,
}

/// Which family of strategies a sweep draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScenario {
    /// Two-setting bipartite strategies, alternating qubit and qutrit.
    Bipartite,
    /// Two-setting tripartite qubit strategies.
    Tripartite,
    /// Three-setting bipartite qubit strategies.
    I3322,
}

impl std::str::FromStr for SweepScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipartite" => Ok(Self::Bipartite),
            "tripartite" => Ok(Self::Tripartite),
            "i3322" => Ok(Self::I3322),
            other => Err(Error::Scenario(format!(
                "unknown sweep scenario '{other}' (bipartite|tripartite|i3322)"
            ))),
        }
    }
}

/// Runs the sweep for the chosen scenario.
pub fn run_sweep(scenario: SweepScenario, seed: u64, count: usize) -> SweepReport {
    match scenario {
        SweepScenario::Bipartite => bipartite_sweep(seed, count),
        SweepScenario::Tripartite => tripartite_sweep(seed, count),
        SweepScenario::I3322 => i3322_sweep(seed, count),
    }
}

fn aggregate(
    scenario: &str,
    seed: u64,
    count: usize,
    checks: &[CheckDef],
    results: Vec<Result<Vec<f64>>>,
    dump: impl Fn(usize) -> Option<StrategyFile>,
) -> SweepReport {
    let mut worst = vec![f64::INFINITY; checks.len()];
    let mut failure: Option<SweepFailure> = None;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(slacks) => {
                for (w, (&s, def)) in worst.iter_mut().zip(slacks.iter().zip(checks)) {
                    *w = w.min(s);
                    if failure.is_none() && s < -def.tol {
                        failure = Some(SweepFailure {
                            sample_index: i,
                            seed: derive_seed(seed, i as u64),
                            check: def.name.to_string(),
                            strategy: dump(i),
                        });
                    }
                }
            }
            Err(e) => {
                if failure.is_none() {
                    failure = Some(SweepFailure {
                        sample_index: i,
                        seed: derive_seed(seed, i as u64),
                        check: format!("evaluation error: {e}"),
                        strategy: dump(i),
                    });
                }
            }
        }
    }
    let summaries: Vec<CheckSummary> = checks
        .iter()
        .zip(&worst)
        .map(|(def, &w)| CheckSummary {
            name: def.name.to_string(),
            worst_slack: w,
            pass: w >= -def.tol,
        })
        .collect();
    let pass = failure.is_none() && summaries.iter().all(|c| c.pass);
    SweepReport {
        scenario: scenario.to_string(),
        count,
        root_seed: seed,
        checks: summaries,
        pass,
        failure,
    }
}

const BIPARTITE_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "second-moment symmetry |M12-M34|",
        tol: 0.0,
    },
    CheckDef {
        name: "second-moment symmetry |M13-M24|",
        tol: 0.0,
    },
    CheckDef {
        name: "covariance C >= 0",
        tol: 0.0,
    },
    CheckDef {
        name: "tlm 12|34",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "cov-tlm 12|34",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "cov-tlm 13|24",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "cov-tlm 23|14",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "tsallis |B0| <= 2 + min(S_A, S_B)",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "tsallis |B0| <= 2 + S_A",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "tsallis |B0| <= 2 + S_B",
        tol: VERDICT_TOL,
    },
];

fn bipartite_dims(index: usize) -> (usize, usize) {
    if index.is_multiple_of(2) {
        (2, 2)
    } else {
        (3, 3)
    }
}

fn bipartite_sample(seed: u64, dims: (usize, usize)) -> Result<Vec<f64>> {
    let s = random_bipartite_strategy(seed, dims, 2)?;
    let v = s.correlator_vector()?;
    let m = s.second_moment()?;
    let c = build_covariance(&m, &v)?;
    let psd = psd_check(c.entries(), 1e-9)?;
    let tlm = tlm_check(&v)?;
    let cov_tlm = covariance_tlm_check(&m, &v)?;
    let b0 = bell_value(&v, &BellFunctional::chsh_b0())?.abs();
    let s_a = tsallis_entropy(s.alice_anticommutator_mean(0, 1)?)?;
    let s_b = tsallis_entropy(s.bob_anticommutator_mean(0, 1)?)?;
    Ok(vec![
        SYMMETRY_LIMIT - (m.m(1, 2) - m.m(3, 4)).abs(),
        SYMMETRY_LIMIT - (m.m(1, 3) - m.m(2, 4)).abs(),
        psd.min_eigenvalue - psd.threshold,
        tlm.slack,
        cov_tlm[0].slack,
        cov_tlm[1].slack,
        cov_tlm[2].slack,
        (2.0 + s_a.min(s_b)) - b0,
        (2.0 + s_a) - b0,
        (2.0 + s_b) - b0,
    ])
}

/// Random two-setting bipartite strategies, alternating qubit and qutrit
/// parties; checks the second-moment symmetries, PSD of the covariance, the
/// TLM family, and the entropy bound (two-sided and each side separately).
pub fn bipartite_sweep(seed: u64, count: usize) -> SweepReport {
    let results: Vec<Result<Vec<f64>>> = (0..count)
        .into_par_iter()
        .map(|i| bipartite_sample(derive_seed(seed, i as u64), bipartite_dims(i)))
        .collect();
    aggregate("bipartite", seed, count, BIPARTITE_CHECKS, results, |i| {
        random_bipartite_strategy(derive_seed(seed, i as u64), bipartite_dims(i), 2)
            .ok()
            .map(|s| StrategyFile::from_bipartite(&s))
    })
}

const TRIPARTITE_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "covariance C >= 0 (8x8)",
        tol: 0.0,
    },
    CheckDef {
        name: "mermin-cov",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "mixed-tlm (all ijk)",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "mixed-tsallis (all ijk)",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "monogamy A|BC (all ijk)",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "monogamy B|AC (all ijk)",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "monogamy C|AB (all ijk)",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "cov-tlm on permuted 4x4 blocks",
        tol: VERDICT_TOL,
    },
];

fn tripartite_sample(seed: u64) -> Result<Vec<f64>> {
    let s = random_tripartite_strategy(seed, (2, 2, 2))?;
    let v = s.correlator_vector()?;
    let m = s.second_moment()?;
    let c = build_covariance(&m, &v)?;
    let psd = psd_check(c.entries(), 1e-9)?;

    let mermin = mermin_check(&s)?.slack;
    let mut mixed_tlm = f64::INFINITY;
    let mut mixed_ts = f64::INFINITY;
    let mut mono = [f64::INFINITY; 3];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                mixed_tlm = mixed_tlm.min(mixed_tlm_check(&s, i, j, k)?.slack);
                mixed_ts = mixed_ts.min(mixed_tsallis_check(&s, i, j, k)?.slack);
                for (slot, r) in monogamy_checks(&s, i, j, k)?.iter().enumerate() {
                    mono[slot] = mono[slot].min(r.slack);
                }
            }
        }
    }

    // the bipartite bounds hold for any permuted 4x4 principal block of the
    // 8x8 covariance
    let mut sub_slack = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xb10c));
    for _ in 0..3 {
        let mut indices: Vec<usize> = (0..8).collect();
        indices.shuffle(&mut rng);
        let picked = &indices[..4];
        let sub_m =
            SecondMomentMatrix::new(m.entries().select_rows(picked).select_columns(picked))?;
        let sub_v = crate::covariance::CorrelatorVector::new(
            picked.iter().map(|&i| v.values()[i]).collect(),
        )?;
        for r in covariance_tlm_check(&sub_m, &sub_v)? {
            sub_slack = sub_slack.min(r.slack);
        }
    }

    Ok(vec![
        psd.min_eigenvalue - psd.threshold,
        mermin,
        mixed_tlm,
        mixed_ts,
        mono[0],
        mono[1],
        mono[2],
        sub_slack,
    ])
}

/// Random tripartite qubit strategies; checks PSD of the 8x8 covariance,
/// the Mermin-type bound, the mixed bounds over every setting combination,
/// the monogamy trio, and the bipartite bounds on permuted 4x4 blocks.
pub fn tripartite_sweep(seed: u64, count: usize) -> SweepReport {
    let results: Vec<Result<Vec<f64>>> = (0..count)
        .into_par_iter()
        .map(|i| tripartite_sample(derive_seed(seed, i as u64)))
        .collect();
    aggregate("tripartite", seed, count, TRIPARTITE_CHECKS, results, |i| {
        random_tripartite_strategy(derive_seed(seed, i as u64), (2, 2, 2))
            .ok()
            .map(|s| StrategyFile::from_tripartite(&s))
    })
}

const I3322_CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "|B'| <= grouped terms",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "grouped terms <= rhs",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "i3322-cov |B'| <= rhs",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "rhs <= 5",
        tol: VERDICT_TOL,
    },
    CheckDef {
        name: "alice pair-mean gram PSD",
        tol: GRAM_TOL,
    },
];

fn i3322_sample(seed: u64) -> Result<Vec<f64>> {
    let s = random_bipartite_strategy(seed, (2, 2), 3)?;
    let v = s.correlator_vector()?;
    let means = AlicePairMeans::from_strategy(&s)?;
    let b = bprime(&v)?.abs();
    let mid = chain_middle(&v)?;
    let rhs = i3322_rhs(&means)?;
    let gram = nalgebra::DMatrix::from_row_slice(
        3,
        3,
        &[
            1.0,
            means.d(),
            means.e(),
            means.d(),
            1.0,
            means.f(),
            means.e(),
            means.f(),
            1.0,
        ],
    );
    Ok(vec![
        mid - b,
        rhs - mid,
        rhs - b,
        5.0 - rhs,
        min_eigenvalue(&gram),
    ])
}

/// Random three-setting qubit strategies; checks both links of the chain
/// `|B'| <= grouped <= rhs`, the end-to-end bound, the global cap `rhs <= 5`,
/// and Gram feasibility of the measured pair means.
pub fn i3322_sweep(seed: u64, count: usize) -> SweepReport {
    let results: Vec<Result<Vec<f64>>> = (0..count)
        .into_par_iter()
        .map(|i| i3322_sample(derive_seed(seed, i as u64)))
        .collect();
    aggregate("i3322", seed, count, I3322_CHECKS, results, |i| {
        random_bipartite_strategy(derive_seed(seed, i as u64), (2, 2), 3)
            .ok()
            .map(|s| StrategyFile::from_bipartite(&s))
    })
}
