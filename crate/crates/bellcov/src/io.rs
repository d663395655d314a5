//! File formats: JSON schemas for vectors, matrices, and strategies, plus
//! the CSV emitters used by the CLI. Complex numbers are `[re, im]` pairs;
//! matrices are row-major.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::tsallis_entropy;
use crate::covariance::{CorrelatorVector, SecondMomentMatrix};
use crate::error::{Error, Result};
use crate::membership::RegionSample;
use crate::sim::{BipartiteStrategy, DichotomicObservable, PureState, TripartiteStrategy};

/// `{"values": [reals]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorFile {
    pub values: Vec<f64>,
}

impl VectorFile {
    pub fn to_correlators(&self) -> Result<CorrelatorVector> {
        CorrelatorVector::new(self.values.clone())
    }
}

impl From<&CorrelatorVector> for VectorFile {
    fn from(v: &CorrelatorVector) -> Self {
        Self {
            values: v.values().to_vec(),
        }
    }
}

/// `{"n": int, "values": [row-major reals]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub values: Vec<f64>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        if self.values.len() != self.n * self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n * self.n,
                actual: self.values.len(),
            });
        }
        Ok(DMatrix::from_row_slice(self.n, self.n, &self.values))
    }

    pub fn to_second_moment(&self) -> Result<SecondMomentMatrix> {
        SecondMomentMatrix::new(self.to_matrix()?)
    }
}

impl From<&DMatrix<f64>> for MatrixFile {
    fn from(m: &DMatrix<f64>) -> Self {
        let mut values = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                values.push(m[(i, j)]);
            }
        }
        Self {
            n: m.nrows(),
            values,
        }
    }
}

/// One party: its local dimension and its observables, each a row-major
/// `dim^2`-long list of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartyFile {
    pub dim: usize,
    pub observables: Vec<Vec<[f64; 2]>>,
}

impl PartyFile {
    fn from_observables(observables: &[DichotomicObservable]) -> Self {
        let dim = observables[0].dim();
        let observables = observables
            .iter()
            .map(|o| {
                let m = o.matrix();
                let mut flat = Vec::with_capacity(dim * dim);
                for i in 0..dim {
                    for j in 0..dim {
                        flat.push([m[(i, j)].re, m[(i, j)].im]);
                    }
                }
                flat
            })
            .collect();
        Self { dim, observables }
    }

    fn to_observables(&self) -> Result<Vec<DichotomicObservable>> {
        self.observables
            .iter()
            .map(|flat| {
                if flat.len() != self.dim * self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim * self.dim,
                        actual: flat.len(),
                    });
                }
                let m = DMatrix::from_fn(self.dim, self.dim, |i, j| {
                    let [re, im] = flat[i * self.dim + j];
                    Complex64::new(re, im)
                });
                DichotomicObservable::new(m)
            })
            .collect()
    }
}

/// `{"parties": [{"dim": int, "observables": [...]}, ...],
///   "state": [[re, im], ...]}` -- two or three parties, state on the
/// tensor product with the first party on the most significant factor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyFile {
    pub parties: Vec<PartyFile>,
    pub state: Vec<[f64; 2]>,
}

/// A strategy loaded from a file, dispatched on the party count.
#[derive(Debug, Clone)]
pub enum LoadedStrategy {
    Bipartite(BipartiteStrategy),
    Tripartite(TripartiteStrategy),
}

impl StrategyFile {
    pub fn from_bipartite(s: &BipartiteStrategy) -> Self {
        Self {
            parties: vec![
                PartyFile::from_observables(s.alice()),
                PartyFile::from_observables(s.bob()),
            ],
            state: s
                .state()
                .amplitudes()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        }
    }

    pub fn from_tripartite(s: &TripartiteStrategy) -> Self {
        Self {
            parties: vec![
                PartyFile::from_observables(s.alice()),
                PartyFile::from_observables(s.bob()),
                PartyFile::from_observables(s.charlie()),
            ],
            state: s
                .state()
                .amplitudes()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        }
    }

    /// Rebuilds the strategy, validating every type invariant (state norm,
    /// hermiticity, dichotomy, dimension compatibility).
    pub fn load(&self) -> Result<LoadedStrategy> {
        let state = PureState::new(DVector::from_iterator(
            self.state.len(),
            self.state.iter().map(|&[re, im]| Complex64::new(re, im)),
        ))?;
        let mut parties = self
            .parties
            .iter()
            .map(|p| p.to_observables())
            .collect::<Result<Vec<_>>>()?;
        match parties.len() {
            2 => {
                let bob = parties.pop().unwrap();
                let alice = parties.pop().unwrap();
                Ok(LoadedStrategy::Bipartite(BipartiteStrategy::new(
                    state, alice, bob,
                )?))
            }
            3 => {
                let charlie = parties.pop().unwrap();
                let bob = parties.pop().unwrap();
                let alice = parties.pop().unwrap();
                Ok(LoadedStrategy::Tripartite(TripartiteStrategy::new(
                    state, alice, bob, charlie,
                )?))
            }
            n => Err(Error::Scenario(format!("{n} parties; expected 2 or 3"))),
        }
    }
}

/// Formats with `sig` significant digits in plain decimal notation; `nan`
/// for NaN. Used for every CSV cell so identical runs produce identical
/// bytes.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes the region scan as `b0,b1,min_asymmetry`, one row per cell in
/// grid order, 12 significant digits, `\n` line endings.
pub fn write_region_csv<W: Write>(samples: &[RegionSample], out: &mut W) -> std::io::Result<()> {
    out.write_all(b"b0,b1,min_asymmetry\n")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{}",
            fmt_sig(s.b0, 12),
            fmt_sig(s.b1, 12),
            fmt_sig(s.min_asymmetry, 12)
        )?;
    }
    Ok(())
}

/// Rows `(d, S(d), 2 + S(d))` for `d` sweeping `[-1, 1]` with the given
/// step.
pub fn tsallis_curve(step: f64) -> Result<Vec<(f64, f64, f64)>> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Domain {
            what: "curve step",
            value: step,
        });
    }
    let mut rows = Vec::new();
    let mut k = 0usize;
    loop {
        let d = (-1.0 + k as f64 * step).min(1.0);
        let s = tsallis_entropy(d)?;
        rows.push((d, s, 2.0 + s));
        if d >= 1.0 {
            break;
        }
        k += 1;
    }
    Ok(rows)
}

/// Writes the entropy curve as `d,S,bound`.
pub fn write_tsallis_csv<W: Write>(rows: &[(f64, f64, f64)], out: &mut W) -> std::io::Result<()> {
    out.write_all(b"d,S,bound\n")?;
    for &(d, s, bound) in rows {
        writeln!(
            out,
            "{},{},{}",
            fmt_sig(d, 12),
            fmt_sig(s, 12),
            fmt_sig(bound, 12)
        )?;
    }
    Ok(())
}
