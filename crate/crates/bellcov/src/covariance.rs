//! Correlator vectors, second-moment matrices, and the covariance matrix
//! `C = M - V V^T` whose positive semidefiniteness certifies that a set of
//! binary correlators fits inside a quantum-like statistical theory.
//!
//! All matrices here are small (n <= 9) dense real symmetric matrices, stored
//! in `nalgebra::DMatrix<f64>`. The PSD test goes through a full symmetric
//! eigendecomposition rather than a Cholesky attempt so the minimum
//! eigenvalue is always available for diagnostics.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ingestion tolerance for symmetry: matrices with larger `|A - A^T|`
/// entries are rejected rather than silently averaged.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Diagonal entries of a second-moment matrix within this distance of 1 are
/// snapped to exactly 1; anything farther is rejected. File-loaded
/// observables are only required to square to identity within 1e-9, so their
/// moment diagonals can be off at that scale.
pub const DIAG_SNAP_TOL: f64 = 1e-8;

/// Per-dimension PSD tolerance for second-moment matrices: the minimum
/// eigenvalue must be at least `-PSD_TOL_PER_DIM * n`.
pub const PSD_TOL_PER_DIM: f64 = 1e-9;

/// Correlators may overshoot [-1, 1] by at most this much and are clamped
/// back in. File-loaded observables only square to identity within 1e-9,
/// so their expectations can stray at that scale.
pub const CORRELATOR_TOL: f64 = 1e-8;

/// Measurement scenario, fixing the length and index convention of a
/// correlator vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Two parties, two settings each: 4 correlators, index `1 + i + 2j`.
    Bipartite2,
    /// Three parties, two settings each: 8 correlators, index `1 + i + 2j + 4k`.
    Tripartite2,
    /// Two parties, three settings each: 9 correlators, index `1 + i + 3j`.
    Bipartite3,
}

impl Scenario {
    pub fn correlator_count(self) -> usize {
        match self {
            Scenario::Bipartite2 => 4,
            Scenario::Tripartite2 => 8,
            Scenario::Bipartite3 => 9,
        }
    }

    /// Infer the scenario from a correlator count. The three supported
    /// lengths are distinct, so this is unambiguous.
    pub fn from_len(n: usize) -> Result<Self> {
        match n {
            4 => Ok(Scenario::Bipartite2),
            8 => Ok(Scenario::Tripartite2),
            9 => Ok(Scenario::Bipartite3),
            other => Err(Error::Scenario(format!(
                "no scenario has {other} correlators (expected 4, 8, or 9)"
            ))),
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scenario::Bipartite2 => write!(f, "bipartite-2"),
            Scenario::Tripartite2 => write!(f, "tripartite-2"),
            Scenario::Bipartite3 => write!(f, "bipartite-3"),
        }
    }
}

/// Vector `V` of two- or three-point correlators, each in [-1, 1].
///
/// The index convention is carried by the [`Scenario`]: entry `k` holds the
/// correlator of the product operator `X_{k+1}` under the scenario's index
/// formula. The derived spreads `sigma_i = sqrt(1 - c_i^2)` are computed on
/// demand, never stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelatorVector {
    values: Vec<f64>,
    scenario: Scenario,
}

impl CorrelatorVector {
    /// Builds a correlator vector, inferring the scenario from the length.
    /// Entries may overshoot [-1, 1] by at most [`CORRELATOR_TOL`] and are
    /// clamped back in.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let scenario = Scenario::from_len(values.len())?;
        Self::with_scenario(values, scenario)
    }

    pub fn with_scenario(values: Vec<f64>, scenario: Scenario) -> Result<Self> {
        if values.len() != scenario.correlator_count() {
            return Err(Error::DimensionMismatch {
                expected: scenario.correlator_count(),
                actual: values.len(),
            });
        }
        let mut clamped = values;
        for (i, c) in clamped.iter_mut().enumerate() {
            if !c.is_finite() || c.abs() > 1.0 + CORRELATOR_TOL {
                return Err(Error::CorrelatorRange {
                    index: i,
                    value: *c,
                });
            }
            *c = c.clamp(-1.0, 1.0);
        }
        Ok(Self {
            values: clamped,
            scenario,
        })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// 1-indexed access matching the usual `c_1 .. c_n` notation.
    pub fn c(&self, index1: usize) -> f64 {
        self.values[index1 - 1]
    }

    /// `sigma_i = sqrt(1 - c_i^2)` for the 1-indexed entry.
    pub fn sigma(&self, index1: usize) -> f64 {
        let c = self.c(index1);
        (1.0 - c * c).max(0.0).sqrt()
    }

    pub fn as_column(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.values)
    }
}

/// Checks squareness and symmetry (within [`SYMMETRY_TOL`]) and returns the
/// symmetrized matrix `(A + A^T) / 2`.
pub fn symmetrize(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let mut max_asym = 0.0_f64;
    for i in 0..a.nrows() {
        for j in (i + 1)..a.ncols() {
            max_asym = max_asym.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if max_asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric {
            max_asymmetry: max_asym,
        });
    }
    Ok((a + a.transpose()) * 0.5)
}

/// Eigenvalues of a symmetric matrix, unsorted.
pub fn sym_eigenvalues(a: &DMatrix<f64>) -> DVector<f64> {
    a.symmetric_eigenvalues()
}

/// Minimum eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(a).min()
}

/// Outcome of a PSD test, keeping the diagnostic quantities around.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PsdCheck {
    pub min_eigenvalue: f64,
    pub spectral_norm: f64,
    /// The effective threshold `-tol * max(1, spectral_norm)`.
    pub threshold: f64,
    pub psd: bool,
}

/// Tests `A >= 0` up to `tol`, scaled by the spectral norm: the matrix
/// passes iff its minimum eigenvalue is at least
/// `-tol * max(1, spectral norm)`. Rejects non-symmetric input.
pub fn psd_check(a: &DMatrix<f64>, tol: f64) -> Result<PsdCheck> {
    let sym = symmetrize(a)?;
    let eigs = sym_eigenvalues(&sym);
    let min_eigenvalue = eigs.min();
    let spectral_norm = eigs.iter().fold(0.0_f64, |m, &e| m.max(e.abs()));
    let threshold = -tol * spectral_norm.max(1.0);
    Ok(PsdCheck {
        min_eigenvalue,
        spectral_norm,
        threshold,
        psd: min_eigenvalue >= threshold,
    })
}

/// Convenience wrapper around [`psd_check`] returning just the verdict.
pub fn is_psd(a: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(psd_check(a, tol)?.psd)
}

/// Symmetric second-moment matrix `M` with unit diagonal,
/// `M_ij = E[X_i X_j]` (or the anticommutator mean in the operator case).
///
/// Ingestion symmetrizes within [`SYMMETRY_TOL`], snaps the diagonal to 1
/// within [`DIAG_SNAP_TOL`], and requires the minimum eigenvalue to be at
/// least `-1e-9 * n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondMomentMatrix {
    entries: DMatrix<f64>,
}

impl SecondMomentMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let m = Self::validate_shape(entries)?;
        let min_eig = min_eigenvalue(&m.entries);
        if min_eig < -PSD_TOL_PER_DIM * m.n() as f64 {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        Ok(m)
    }

    /// Symmetry and unit-diagonal checks only. Used by the feasibility
    /// search, whose acceptance criterion on the minimum eigenvalue of C is
    /// looser (-1e-8) than the type-level PSD tolerance; the search itself
    /// is the PSD certificate there.
    pub(crate) fn new_psd_unchecked(entries: DMatrix<f64>) -> Result<Self> {
        Self::validate_shape(entries)
    }

    fn validate_shape(entries: DMatrix<f64>) -> Result<Self> {
        let mut sym = symmetrize(&entries)?;
        for i in 0..sym.nrows() {
            let d = sym[(i, i)];
            if (d - 1.0).abs() > DIAG_SNAP_TOL {
                return Err(Error::UnitDiagonal { index: i, value: d });
            }
            sym[(i, i)] = 1.0;
        }
        Ok(Self { entries: sym })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// 1-indexed entry access matching the `M_12` notation.
    pub fn m(&self, i1: usize, j1: usize) -> f64 {
        self.entries[(i1 - 1, j1 - 1)]
    }
}

/// The covariance matrix `C = M - V V^T`, with its provenance pair kept
/// alongside so the defining identity stays checkable.
///
/// No PSD requirement is imposed at construction; `C` may be indefinite and
/// callers test it. The 2x2 principal blocks `D_ij` and the off-diagonal
/// block `N` of the block partition are views into this matrix.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    entries: DMatrix<f64>,
    second_moment: SecondMomentMatrix,
    correlators: CorrelatorVector,
}

/// `C = M - V V^T`. Errors on dimension mismatch; `M`'s invariants are
/// carried by its type.
pub fn build_covariance(m: &SecondMomentMatrix, v: &CorrelatorVector) -> Result<CovarianceMatrix> {
    if m.n() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            actual: v.len(),
        });
    }
    let vv = v.as_column();
    let entries = m.entries() - &vv * vv.transpose();
    Ok(CovarianceMatrix {
        entries,
        second_moment: m.clone(),
        correlators: v.clone(),
    })
}

impl CovarianceMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn second_moment(&self) -> &SecondMomentMatrix {
        &self.second_moment
    }

    pub fn correlators(&self) -> &CorrelatorVector {
        &self.correlators
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.entries)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        // entries are symmetric by construction
        psd_check(&self.entries, tol)
            .expect("covariance is symmetric")
            .psd
    }

    /// The 2x2 principal block on 1-indexed rows/columns `{i, j}`:
    /// `[[C_ii, C_ij], [C_ij, C_jj]]`.
    pub fn pair_block(&self, i1: usize, j1: usize) -> DMatrix<f64> {
        let (i, j) = (i1 - 1, j1 - 1);
        DMatrix::from_row_slice(
            2,
            2,
            &[
                self.entries[(i, i)],
                self.entries[(i, j)],
                self.entries[(j, i)],
                self.entries[(j, j)],
            ],
        )
    }

    /// Bordered `(n+1) x (n+1)` embedding whose PSD-ness is equivalent to
    /// that of `C` itself.
    pub fn schur_embedding(&self) -> SchurEmbedding {
        let entries = schur_embed(&self.entries, self.correlators.values())
            .expect("dimensions agree by construction");
        SchurEmbedding { entries }
    }

    /// Max entrywise deviation of `C` from `M - V V^T` recomputed from the
    /// provenance pair. Zero in exact arithmetic.
    pub fn provenance_residual(&self) -> f64 {
        let vv = self.correlators.as_column();
        let rebuilt = self.second_moment.entries() - &vv * vv.transpose();
        (&self.entries - rebuilt).abs().max()
    }
}

/// Bordered matrix `[[1, V^T], [V, C + V V^T]]`. `C` is the Schur complement
/// of the top-left entry, so the embedding is PSD exactly when `C` is.
#[derive(Debug, Clone)]
pub struct SchurEmbedding {
    entries: DMatrix<f64>,
}

impl SchurEmbedding {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Raw bordered embedding for an arbitrary symmetric matrix `c` and vector
/// `v` of matching length: `[[1, v^T], [v, c + v v^T]]`.
pub fn schur_embed(c: &DMatrix<f64>, v: &[f64]) -> Result<DMatrix<f64>> {
    if c.nrows() != c.ncols() {
        return Err(Error::NotSquare {
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    if c.nrows() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: c.nrows(),
            actual: v.len(),
        });
    }
    let n = v.len();
    let mut out = DMatrix::zeros(n + 1, n + 1);
    out[(0, 0)] = 1.0;
    for i in 0..n {
        out[(0, i + 1)] = v[i];
        out[(i + 1, 0)] = v[i];
        for j in 0..n {
            out[(i + 1, j + 1)] = c[(i, j)] + v[i] * v[j];
        }
    }
    Ok(out)
}

/// The always-valid second-moment matrix `M = V V^T + diag(sigma^2)`: unit
/// diagonal by construction, and `C = diag(sigma^2) >= 0`, so every
/// correlator vector in `[-1,1]^n` admits at least this `M`.
pub fn default_second_moment(v: &CorrelatorVector) -> SecondMomentMatrix {
    let n = v.len();
    let vals = v.values();
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            entries[(i, j)] = if i == j { 1.0 } else { vals[i] * vals[j] };
        }
    }
    SecondMomentMatrix::new(entries).expect("unit diagonal and PSD by construction")
}
