//! Feasibility and optimization layer: given a correlator vector, decide
//! whether a unit-diagonal second-moment matrix with `C = M - V V^T >= 0`
//! exists under an asymmetry budget `|M12 - M34| <= delta`, find the minimal
//! budget, and scan the `(B0, B1)` plane for the minimal asymmetry
//! compatible with each pair of CHSH values.
//!
//! The inner feasibility problem maximizes the minimum eigenvalue of `C`
//! over the six free off-diagonal entries of `M` with a multi-start
//! Nelder-Mead search; no external SDP solver is involved. The minimum
//! eigenvalue is a concave function of the entries, so local searches from
//! a handful of starts settle the question.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use nalgebra::DMatrix;

use crate::bounds::tlm_check;
use crate::covariance::{min_eigenvalue, CorrelatorVector, Scenario, SecondMomentMatrix};
use crate::error::{Error, Result};
use crate::nelder_mead::{self, Options};
use crate::sim::derive_seed;

/// A candidate `M` is accepted when the achieved minimum eigenvalue of `C`
/// is at least `-FEASIBILITY_TOL`.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// Absolute tolerance of the bisection in [`min_asymmetry`].
pub const BISECTION_TOL: f64 = 1e-4;

/// Internal seed for the random restarts of the feasibility search; the
/// search takes no seed parameter and must be deterministic per input.
const SEARCH_SEED: u64 = 0x6265_6c6c_636f_7600;

/// Off-diagonal slots of a 4x4 symmetric matrix in the order
/// (1,2), (1,3), (1,4), (2,3), (2,4), (3,4).
const OFF_DIAG: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const SLOT_M12: usize = 0;
const SLOT_M34: usize = 5;

/// An equality constraint `M_ab = M_cd` between two off-diagonal entries
/// (1-indexed, as in the `M_12` notation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryPair {
    first: usize,
    second: usize,
}

fn slot_of(i1: usize, j1: usize) -> Option<usize> {
    if i1 == 0 || j1 == 0 {
        return None;
    }
    let (a, b) = if i1 < j1 {
        (i1 - 1, j1 - 1)
    } else {
        (j1 - 1, i1 - 1)
    };
    OFF_DIAG.iter().position(|&p| p == (a, b))
}

impl EntryPair {
    pub fn new(first: (usize, usize), second: (usize, usize)) -> Result<Self> {
        let a = slot_of(first.0, first.1).ok_or_else(|| {
            Error::Scenario(format!("no off-diagonal entry M{}{}", first.0, first.1))
        })?;
        let b = slot_of(second.0, second.1).ok_or_else(|| {
            Error::Scenario(format!("no off-diagonal entry M{}{}", second.0, second.1))
        })?;
        if a == b {
            return Err(Error::Scenario(
                "equality constraint ties an entry to itself".into(),
            ));
        }
        Ok(Self {
            first: a,
            second: b,
        })
    }

    /// `M12 = M34`.
    pub const M12_M34: EntryPair = EntryPair {
        first: SLOT_M12,
        second: SLOT_M34,
    };
    /// `M13 = M24`.
    pub const M13_M24: EntryPair = EntryPair {
        first: 1,
        second: 4,
    };
    /// `M23 = M14`.
    pub const M23_M14: EntryPair = EntryPair {
        first: 3,
        second: 2,
    };
}

/// Outcome of a feasibility search.
#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Witness second-moment matrix, present when feasible. It reproduces
    /// the requested constraints exactly (they are enforced by projection)
    /// and has `C >= -FEASIBILITY_TOL`.
    pub witness_m: Option<SecondMomentMatrix>,
    /// Best minimum eigenvalue of `C` found by the search.
    pub min_eigenvalue_achieved: f64,
    /// Total objective evaluations spent.
    pub iterations: usize,
}

fn require_bipartite2(v: &CorrelatorVector) -> Result<()> {
    if v.scenario() != Scenario::Bipartite2 {
        return Err(Error::Scenario(format!(
            "membership searches need 4 bipartite correlators, got {}",
            v.scenario()
        )));
    }
    Ok(())
}

/// Projects a raw parameter vector onto the constraint set: equality ties
/// (averaged), the box `[-1, 1]` per entry, then the asymmetry slab
/// `|M12 - M34| <= delta` (which only moves M12 and M34 toward their mean,
/// so it cannot leave the box and keeps the `M12 = M34` tie intact).
fn project(params: &mut [f64; 6], ties: &[EntryPair], delta: f64) {
    for tie in ties {
        let avg = 0.5 * (params[tie.first] + params[tie.second]);
        params[tie.first] = avg;
        params[tie.second] = avg;
    }
    for p in params.iter_mut() {
        *p = p.clamp(-1.0, 1.0);
    }
    let t = params[SLOT_M12] - params[SLOT_M34];
    if t.abs() > delta {
        let shift = (t.abs() - delta) / 2.0 * t.signum();
        params[SLOT_M12] -= shift;
        params[SLOT_M34] += shift;
    }
}

fn build_m(params: &[f64; 6]) -> DMatrix<f64> {
    let mut m = DMatrix::identity(4, 4);
    for (slot, &(i, j)) in OFF_DIAG.iter().enumerate() {
        m[(i, j)] = params[slot];
        m[(j, i)] = params[slot];
    }
    m
}

fn covariance_of(params: &[f64; 6], v: &CorrelatorVector) -> DMatrix<f64> {
    let mut c = build_m(params);
    let vals = v.values();
    for i in 0..4 {
        for j in 0..4 {
            c[(i, j)] -= vals[i] * vals[j];
        }
    }
    c
}

/// The default start: `M_ij = c_i c_j`, i.e. `C = diag(sigma^2)`.
fn default_params(v: &CorrelatorVector) -> [f64; 6] {
    let vals = v.values();
    let mut p = [0.0; 6];
    for (slot, &(i, j)) in OFF_DIAG.iter().enumerate() {
        p[slot] = vals[i] * vals[j];
    }
    p
}

/// Block-completion start: keep `C` block diagonal and spend each block's
/// own capacity (`|C12| <= sigma1 sigma2`, `|C34| <= sigma3 sigma4`) to pull
/// `M12 - M34` inside the slab. When `delta` is at least the residual
/// asymmetry this start is already optimal.
fn block_completion_params(v: &CorrelatorVector, delta: f64) -> [f64; 6] {
    let mut p = default_params(v);
    let t = p[SLOT_M12] - p[SLOT_M34];
    let needed = t.abs() - delta;
    if needed > 0.0 {
        let cap12 = v.sigma(1) * v.sigma(2);
        let cap34 = v.sigma(3) * v.sigma(4);
        let use12 = cap12.min(needed);
        let use34 = cap34.min(needed - use12);
        p[SLOT_M12] -= t.signum() * use12;
        p[SLOT_M34] += t.signum() * use34;
    }
    p
}

/// Searches for a unit-diagonal `M` with `C = M - V V^T >= 0`, the given
/// equality constraints among off-diagonal entries, and
/// `|M12 - M34| <= delta`. Infeasibility is a result, not an error: the
/// search maximizes the minimum eigenvalue of `C` over the six free
/// entries (multi-start Nelder-Mead over the projected parameter space) and
/// reports feasible iff the best value reaches `-FEASIBILITY_TOL`.
pub fn feasible_with_constraints(
    v: &CorrelatorVector,
    constraints: &[EntryPair],
    delta: f64,
) -> Result<FeasibilityResult> {
    require_bipartite2(v)?;
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Domain {
            what: "asymmetry budget delta",
            value: delta,
        });
    }

    let mut objective = |raw: &[f64]| {
        let mut params = [0.0; 6];
        params.copy_from_slice(raw);
        project(&mut params, constraints, delta);
        -min_eigenvalue(&covariance_of(&params, v))
    };

    let mut starts: Vec<[f64; 6]> = vec![block_completion_params(v, delta), default_params(v)];
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for _ in 0..2 {
        let mut p = default_params(v);
        for x in p.iter_mut() {
            *x = (*x + rng.random_range(-0.3..0.3)).clamp(-1.0, 1.0);
        }
        starts.push(p);
    }

    let opts = Options {
        initial_step: 0.15,
        max_evals: 600,
        x_tol: 1e-9,
        f_tol: 1e-13,
        target: Some(0.0),
    };

    let mut best_value = f64::INFINITY;
    let mut best_params = [0.0; 6];
    let mut iterations = 0usize;
    for start in &starts {
        let found = nelder_mead::minimize(&mut objective, start, &opts);
        iterations += found.evaluations;
        if found.value < best_value {
            best_value = found.value;
            best_params.copy_from_slice(&found.x);
        }
        if best_value <= 0.0 {
            break;
        }
    }

    project(&mut best_params, constraints, delta);
    let min_eig = -best_value;
    let feasible = min_eig >= -FEASIBILITY_TOL;
    let witness_m = if feasible {
        Some(
            SecondMomentMatrix::new_psd_unchecked(build_m(&best_params))
                .expect("unit diagonal by construction"),
        )
    } else {
        None
    };
    Ok(FeasibilityResult {
        feasible,
        witness_m,
        min_eigenvalue_achieved: min_eig,
        iterations,
    })
}

/// The necessary lower bound on the achievable asymmetry,
/// `max(0, |c1 c2 - c3 c4| - sigma1 sigma2 - sigma3 sigma4)`. It is also
/// attained: the block-diagonal completion `C = diag(D12, D34)` with each
/// block loaded to its capacity realizes exactly this asymmetry, so the
/// search in [`min_asymmetry`] converges to this value (the two are compared
/// in the tests; the search remains the reported number).
pub fn asymmetry_lower_bound(v: &CorrelatorVector) -> Result<f64> {
    require_bipartite2(v)?;
    let gap = (v.c(1) * v.c(2) - v.c(3) * v.c(4)).abs()
        - v.sigma(1) * v.sigma(2)
        - v.sigma(3) * v.sigma(4);
    Ok(gap.max(0.0))
}

/// Smallest `delta` such that [`feasible_with_constraints`] with no equality
/// constraints accepts `(V, delta)`, located by bisection on `[0, 2]` to
/// within [`BISECTION_TOL`]. Returns 0 directly when the TLM criterion
/// holds (feasible at `delta = 0` with `M12 = M34`).
pub fn min_asymmetry(v: &CorrelatorVector) -> Result<f64> {
    require_bipartite2(v)?;
    if tlm_check(v)?.satisfied {
        return Ok(0.0);
    }
    // delta = 2 always admits the default M (the slab is inactive there);
    // delta = 0 is infeasible because the TLM criterion failed.
    let mut lo = 0.0_f64;
    let mut hi = 2.0_f64;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible_with_constraints(v, &[], mid)?.feasible {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// One cell of the `(B0, B1)` region scan.
#[derive(Debug, Clone, Serialize)]
pub struct RegionSample {
    pub b0: f64,
    pub b1: f64,
    /// Minimal `|M12 - M34|` over all correlator vectors with the cell's
    /// CHSH values; `NaN` when no correlator vector reaches the cell
    /// (outside the no-signaling diamond `|b0 +- b1| <= 4`).
    pub min_asymmetry: f64,
    /// A correlator vector achieving the minimum.
    pub achieving_v: Option<CorrelatorVector>,
}

/// Rectangular grid over the `(B0, B1)` plane.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub b0_min: f64,
    pub b0_max: f64,
    pub b1_min: f64,
    pub b1_max: f64,
    pub step: f64,
}

impl GridSpec {
    /// Square grid `[min, max]^2` with the given step.
    pub fn square(min: f64, max: f64, step: f64) -> Self {
        Self {
            b0_min: min,
            b0_max: max,
            b1_min: min,
            b1_max: max,
            step,
        }
    }

    fn axis(min: f64, max: f64, step: f64) -> Vec<f64> {
        let mut points = Vec::new();
        let mut k = 0usize;
        loop {
            let x = min + k as f64 * step;
            if x > max + step * 1e-9 {
                break;
            }
            points.push(x);
            k += 1;
        }
        points
    }

    pub fn b0_points(&self) -> Vec<f64> {
        Self::axis(self.b0_min, self.b0_max, self.step)
    }

    pub fn b1_points(&self) -> Vec<f64> {
        Self::axis(self.b1_min, self.b1_max, self.step)
    }
}

/// Correlator vector with `B0 = p + q`, `B1 = p - q` solved linearly:
/// `c1 = p/2 + u`, `c2 = p/2 - u`, `c3 = q/2 + w`, `c4 = w - q/2`.
fn vector_from_cell(p: f64, q: f64, u: f64, w: f64) -> CorrelatorVector {
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    CorrelatorVector::new(vec![
        clamp(p / 2.0 + u),
        clamp(p / 2.0 - u),
        clamp(q / 2.0 + w),
        clamp(w - q / 2.0),
    ])
    .expect("entries clamped into [-1, 1]")
}

fn scan_cell(b0: f64, b1: f64, cell_seed: u64) -> Result<RegionSample> {
    let p = (b0 + b1) / 2.0;
    let q = (b0 - b1) / 2.0;
    if p.abs() > 2.0 + 1e-12 || q.abs() > 2.0 + 1e-12 {
        return Ok(RegionSample {
            b0,
            b1,
            min_asymmetry: f64::NAN,
            achieving_v: None,
        });
    }
    let u_max = (1.0 - p.abs() / 2.0).max(0.0);
    let w_max = (1.0 - q.abs() / 2.0).max(0.0);

    let eval = |u: f64, w: f64| -> Result<f64> {
        asymmetry_lower_bound(&vector_from_cell(
            p,
            q,
            u.clamp(-u_max, u_max),
            w.clamp(-w_max, w_max),
        ))
    };

    let (mut best_u, mut best_w) = (0.0, 0.0);
    let mut best = eval(0.0, 0.0)?;

    if best > 0.0 && (u_max > 0.0 || w_max > 0.0) {
        // multi-start local minimization of the achievable asymmetry over
        // the two free correlator parameters
        let mut starts = vec![
            (0.0, 0.0),
            (0.8 * u_max, 0.8 * w_max),
            (0.8 * u_max, -0.8 * w_max),
            (-0.8 * u_max, 0.8 * w_max),
            (-0.8 * u_max, -0.8 * w_max),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed);
        for _ in 0..3 {
            starts.push((
                rng.random_range(-1.0..1.0) * u_max,
                rng.random_range(-1.0..1.0) * w_max,
            ));
        }
        let opts = Options {
            initial_step: 0.2 * u_max.max(w_max).max(0.05),
            max_evals: 400,
            x_tol: 1e-9,
            f_tol: 1e-12,
            target: Some(0.0),
        };
        for (su, sw) in starts {
            let found = nelder_mead::minimize(
                |x| eval(x[0], x[1]).expect("clamped cell vector is valid"),
                &[su, sw],
                &opts,
            );
            if found.value < best {
                best = found.value;
                best_u = found.x[0].clamp(-u_max, u_max);
                best_w = found.x[1].clamp(-w_max, w_max);
            }
            if best <= 0.0 {
                break;
            }
        }
    }

    let achieving = vector_from_cell(p, q, best_u, best_w);
    // the emitted value comes from the bisection search at the minimizer
    let value = min_asymmetry(&achieving)?;
    Ok(RegionSample {
        b0,
        b1,
        min_asymmetry: value,
        achieving_v: Some(achieving),
    })
}

/// Scans the grid, minimizing [`min_asymmetry`] over all correlator vectors
/// compatible with each `(B0, B1)` cell. Rows are emitted in row-major
/// order (b0 outer, b1 inner) regardless of the parallel execution order,
/// and the result is deterministic for a fixed seed.
pub fn region_scan(grid: &GridSpec, seed: u64) -> Result<Vec<RegionSample>> {
    if grid.step.is_nan() || grid.step <= 0.0 {
        return Err(Error::Domain {
            what: "grid step",
            value: grid.step,
        });
    }
    let b0s = grid.b0_points();
    let b1s = grid.b1_points();
    let mut cells = Vec::with_capacity(b0s.len() * b1s.len());
    for (i, &b0) in b0s.iter().enumerate() {
        for (j, &b1) in b1s.iter().enumerate() {
            cells.push((i * b1s.len() + j, b0, b1));
        }
    }
    cells
        .into_par_iter()
        .map(|(idx, b0, b1)| scan_cell(b0, b1, derive_seed(seed, idx as u64)))
        .collect()
}
