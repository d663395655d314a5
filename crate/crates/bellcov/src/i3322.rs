//! Three-setting bipartite extension: the correlator-only I3322-type
//! functional `B' = c1 + c2 - c3 + c4 + c5 + c6 - c7 + c8` (classical bound
//! 4), its covariance-derived bound in terms of Alice's pair means, and the
//! maximization showing that bound peaks at 5.
//!
//! The grouped second moments behind the bound come from the products
//! `X_k = A_i B_j` with a shared B factor: `B_j^2 = I` cancels, leaving the
//! off-diagonal entries `<{A_i, A_i'}>/2`, i.e. exactly the three pair means
//! `d`, `e`, `f`.

use serde::Serialize;

use crate::bounds::BoundReport;
use crate::covariance::{min_eigenvalue, CorrelatorVector, Scenario};
use crate::error::{Error, Result};
use crate::sim::BipartiteStrategy;

/// Gram-feasibility tolerance for Alice's pair means.
pub const GRAM_TOL: f64 = 1e-9;

/// Radicands in the bound may dip below zero by at most this much
/// (rounding) and are clamped; anything worse is a domain error.
pub const RADICAND_TOL: f64 = 1e-9;

/// Alice's three pair means `d = <{A0,A1}>/2`, `e = <{A0,A2}>/2`,
/// `f = <{A1,A2}>/2`. Valid triples make the unit-diagonal 3x3 matrix with
/// these off-diagonals PSD (it is the Gram matrix of the `A_i |psi>`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlicePairMeans {
    d: f64,
    e: f64,
    f: f64,
}

impl AlicePairMeans {
    pub fn new(d: f64, e: f64, f: f64) -> Result<Self> {
        let gram = nalgebra::DMatrix::from_row_slice(3, 3, &[1.0, d, e, d, 1.0, f, e, f, 1.0]);
        let min_eig = min_eigenvalue(&gram);
        if min_eig < -GRAM_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { d, e, f })
    }

    /// Measures the three means on a 3-setting strategy.
    pub fn from_strategy(s: &BipartiteStrategy) -> Result<Self> {
        if s.settings().0 != 3 {
            return Err(Error::Scenario(format!(
                "Alice has {} settings, need 3",
                s.settings().0
            )));
        }
        Self::new(
            s.alice_anticommutator_mean(0, 1)?,
            s.alice_anticommutator_mean(0, 2)?,
            s.alice_anticommutator_mean(1, 2)?,
        )
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn f(&self) -> f64 {
        self.f
    }
}

fn require_three_setting(v: &CorrelatorVector) -> Result<()> {
    if v.scenario() != Scenario::Bipartite3 {
        return Err(Error::Scenario(format!(
            "expected 9 three-setting correlators, got {}",
            v.scenario()
        )));
    }
    Ok(())
}

/// `B' = c1 + c2 - c3 + c4 + c5 + c6 - c7 + c8` (the ninth correlator has
/// weight zero).
pub fn bprime(v: &CorrelatorVector) -> Result<f64> {
    require_three_setting(v)?;
    Ok(v.c(1) + v.c(2) - v.c(3) + v.c(4) + v.c(5) + v.c(6) - v.c(7) + v.c(8))
}

/// The grouped intermediate bound
/// `|c1 + c2 - c3| + |c4 + c5 + c6| + |c7 - c8|`; sits between `|B'|` and
/// [`i3322_rhs`].
pub fn chain_middle(v: &CorrelatorVector) -> Result<f64> {
    require_three_setting(v)?;
    Ok((v.c(1) + v.c(2) - v.c(3)).abs()
        + (v.c(4) + v.c(5) + v.c(6)).abs()
        + (v.c(7) - v.c(8)).abs())
}

fn radicand(x: f64) -> Result<f64> {
    if x < -RADICAND_TOL {
        return Err(Error::Domain {
            what: "i3322 radicand",
            value: x,
        });
    }
    Ok(x.max(0.0))
}

/// `sqrt(3 + 2d - 2(e+f)) + sqrt(3 + 2d + 2(e+f)) + sqrt(2 - 2d)`.
pub fn i3322_rhs(m: &AlicePairMeans) -> Result<f64> {
    let s = m.e + m.f;
    Ok(radicand(3.0 + 2.0 * m.d - 2.0 * s)?.sqrt()
        + radicand(3.0 + 2.0 * m.d + 2.0 * s)?.sqrt()
        + radicand(2.0 - 2.0 * m.d)?.sqrt())
}

/// Evaluates `|B'| <= i3322_rhs(d, e, f)` on a 3-setting strategy with the
/// means measured from Alice's observable pairs.
pub fn i3322_check(s: &BipartiteStrategy) -> Result<BoundReport> {
    if s.settings() != (3, 3) {
        return Err(Error::Scenario(format!(
            "i3322 needs 3 settings per side, got {:?}",
            s.settings()
        )));
    }
    let v = s.correlator_vector()?;
    let means = AlicePairMeans::from_strategy(s)?;
    Ok(BoundReport::new(
        "i3322-cov",
        bprime(&v)?.abs(),
        i3322_rhs(&means)?,
    ))
}

/// Result of maximizing [`i3322_rhs`] over the pair means.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct I3322Max {
    /// Maximum over Gram-feasible `(d, e, f)`.
    pub value: f64,
    pub d: f64,
    pub e_plus_f: f64,
    /// Maximum without the Gram restriction; coincides with `value` because
    /// the optimum sits in the interior of the feasible set.
    pub unconstrained_value: f64,
}

/// The rhs depends on `(d, e, f)` only through `d` and `s = e + f`, and for
/// fixed `s` the best Gram-feasible representative is `e = f = s/2` (the
/// minimum eigenvalue is concave and swap-symmetric). Feasibility of that
/// representative reduces to `s^2/2 <= 1 + d` inside the boxes.
fn gram_feasible(d: f64, s: f64) -> bool {
    d.abs() <= 1.0 + 1e-12 && s.abs() <= 2.0 + 1e-12 && s * s / 2.0 <= 1.0 + d + 1e-12
}

fn rhs_raw(d: f64, s: f64) -> f64 {
    (3.0 + 2.0 * d - 2.0 * s).max(0.0).sqrt()
        + (3.0 + 2.0 * d + 2.0 * s).max(0.0).sqrt()
        + (2.0 - 2.0 * d).max(0.0).sqrt()
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Maximizes the bound over the pair means: dense grid with step 0.001 on
/// `d` and `e + f`, refined by golden-section sweeps along each coordinate.
/// Peaks at 5 for `d = 1/2`, `e + f = 0`.
pub fn i3322_max() -> I3322Max {
    let step: f64 = 0.001;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut best_any = f64::NEG_INFINITY;
    let d_steps = (2.0 / step).round() as usize;
    let s_steps = (4.0 / step).round() as usize;
    for di in 0..=d_steps {
        let d = -1.0 + di as f64 * step;
        for si in 0..=s_steps {
            let s = -2.0 + si as f64 * step;
            let val = rhs_raw(d, s);
            best_any = best_any.max(val);
            if val > best.0 && gram_feasible(d, s) {
                best = (val, d, s);
            }
        }
    }

    let (_, mut d, mut s) = best;
    for _ in 0..2 {
        d = golden_max(
            |x| rhs_raw(x, s),
            (d - step).max(-1.0),
            (d + step).min(1.0),
            60,
        );
        s = golden_max(
            |x| rhs_raw(d, x),
            (s - step).max(-2.0),
            (s + step).min(2.0),
            60,
        );
    }
    let value = rhs_raw(d, s);
    I3322Max {
        value,
        d,
        e_plus_f: s,
        unconstrained_value: best_any.max(value),
    }
}
