//! Closed-form evaluators for the bipartite correlator bounds: the
//! second-moment-shifted TLM inequalities certified by `C >= 0`, the plain
//! Tsirelson-Landau-Masanes (TLM) criterion, Bell-CHSH functionals and the
//! classical facet family, and the Tsallis-entropy bound with parameter 1/2.

use serde::Serialize;

use crate::covariance::{
    build_covariance, CorrelatorVector, Scenario, SecondMomentMatrix, CORRELATOR_TOL,
};
use crate::error::{Error, Result};

/// Slack tolerance for every inequality verdict: `satisfied` means
/// `rhs - lhs >= -VERDICT_TOL`. Boundary points count as satisfied.
pub const VERDICT_TOL: f64 = 1e-9;

/// Tolerance for the classical facet test `B <= 2`.
pub const CLASSICAL_TOL: f64 = 1e-12;

/// PSD tolerance used when checking the `C >= 0` precondition.
pub const PSD_PRECONDITION_TOL: f64 = 1e-9;

/// Evaluation record for a single inequality `lhs <= rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative when the bound holds with room to spare.
    pub slack: f64,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::with_tol(name, lhs, rhs, VERDICT_TOL)
    }

    pub fn with_tol(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            satisfied: slack >= -tol,
        }
    }
}

/// A signed weighting of correlators, e.g. the CHSH parameter
/// `B0 = c1 + c2 + c3 - c4`.
#[derive(Debug, Clone, Serialize)]
pub struct BellFunctional {
    coefficients: Vec<f64>,
    label: String,
}

impl BellFunctional {
    pub fn new(coefficients: Vec<f64>, label: impl Into<String>) -> Self {
        Self {
            coefficients,
            label: label.into(),
        }
    }

    /// `B0 = c1 + c2 + c3 - c4`.
    pub fn chsh_b0() -> Self {
        Self::new(vec![1.0, 1.0, 1.0, -1.0], "B0")
    }

    /// `B1 = c1 + c2 - c3 + c4`.
    pub fn chsh_b1() -> Self {
        Self::new(vec![1.0, 1.0, -1.0, 1.0], "B1")
    }

    /// All eight CHSH facets: an odd number of minus signs over the four
    /// correlators, i.e. the four single-minus patterns and their negations.
    /// Together with `|c_i| <= 1` these cut out the classical correlator
    /// polytope. Labels extend the `B0`/`B1` family: `Bk` puts the minus on
    /// `c_{4-k}`, and `-Bk` is its negation.
    pub fn chsh_facets() -> Vec<Self> {
        let mut facets = Vec::with_capacity(8);
        for pos in 0..4 {
            for global in [1.0, -1.0] {
                let mut coeffs = vec![global; 4];
                coeffs[pos] = -global;
                let base = 3 - pos;
                let label = if global > 0.0 {
                    format!("B{base}")
                } else {
                    format!("-B{base}")
                };
                facets.push(Self::new(coeffs, label));
            }
        }
        facets
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Signed weighted sum of correlators.
pub fn bell_value(v: &CorrelatorVector, f: &BellFunctional) -> Result<f64> {
    if f.coefficients.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            actual: f.coefficients.len(),
        });
    }
    Ok(f.coefficients
        .iter()
        .zip(v.values())
        .map(|(w, c)| w * c)
        .sum())
}

/// One of the three ways of splitting indices 1..4 into two pairs; each
/// yields one inequality of the TLM family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Pairs (1,2) and (3,4).
    P12x34,
    /// Pairs (1,3) and (2,4).
    P13x24,
    /// Pairs (2,3) and (1,4).
    P23x14,
}

impl Pairing {
    pub const ALL: [Pairing; 3] = [Pairing::P12x34, Pairing::P13x24, Pairing::P23x14];

    /// The 1-indexed pairs ((a,b),(c,d)) of this split.
    pub fn indices(self) -> ((usize, usize), (usize, usize)) {
        match self {
            Pairing::P12x34 => ((1, 2), (3, 4)),
            Pairing::P13x24 => ((1, 3), (2, 4)),
            Pairing::P23x14 => ((2, 3), (1, 4)),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Pairing::P12x34 => "12|34",
            Pairing::P13x24 => "13|24",
            Pairing::P23x14 => "23|14",
        }
    }
}

fn require_bipartite2(v: &CorrelatorVector) -> Result<()> {
    if v.scenario() != Scenario::Bipartite2 {
        return Err(Error::Scenario(format!(
            "expected 4 bipartite correlators, got scenario {}",
            v.scenario()
        )));
    }
    Ok(())
}

/// The three covariance-certified bounds
/// `|c_a c_b - c_c c_d - M_ab + M_cd| <= sigma_a sigma_b + sigma_c sigma_d`,
/// one per pairing. They are only asserted under `C = M - V V^T >= 0`, so a
/// non-PSD covariance is a precondition error carrying the offending minimum
/// eigenvalue.
pub fn covariance_tlm_check(
    m: &SecondMomentMatrix,
    v: &CorrelatorVector,
) -> Result<[BoundReport; 3]> {
    require_bipartite2(v)?;
    let c = build_covariance(m, v)?;
    if !c.is_psd(PSD_PRECONDITION_TOL) {
        return Err(Error::NotPsd {
            min_eigenvalue: c.min_eigenvalue(),
        });
    }
    Ok(Pairing::ALL.map(|p| {
        let ((a, b), (cc, d)) = p.indices();
        let lhs = (v.c(a) * v.c(b) - v.c(cc) * v.c(d) - m.m(a, b) + m.m(cc, d)).abs();
        let rhs = v.sigma(a) * v.sigma(b) + v.sigma(cc) * v.sigma(d);
        BoundReport::new(format!("cov-tlm {}", p.label()), lhs, rhs)
    }))
}

/// The TLM criterion for one pairing:
/// `|c_a c_b - c_c c_d| <= sigma_a sigma_b + sigma_c sigma_d`.
pub fn tlm_check_variant(v: &CorrelatorVector, pairing: Pairing) -> Result<BoundReport> {
    require_bipartite2(v)?;
    let ((a, b), (c, d)) = pairing.indices();
    let lhs = (v.c(a) * v.c(b) - v.c(c) * v.c(d)).abs();
    let rhs = v.sigma(a) * v.sigma(b) + v.sigma(c) * v.sigma(d);
    Ok(BoundReport::new(
        format!("tlm {}", pairing.label()),
        lhs,
        rhs,
    ))
}

/// The TLM criterion in its canonical (1,2)/(3,4) form. The three pairings
/// are equivalent (see [`tlm_residual`]), so evaluating one decides all.
pub fn tlm_check(v: &CorrelatorVector) -> Result<BoundReport> {
    tlm_check_variant(v, Pairing::P12x34)
}

/// The common squared-form residual of the TLM family:
///
/// `R = 2 + 2 c1 c2 c3 c4 - (c1^2 + c2^2 + c3^2 + c4^2)
///      + 2 sigma1 sigma2 sigma3 sigma4`.
///
/// Squaring any of the three pairing variants gives exactly this expression
/// (the quartic term `c1 c2 c3 c4` does not depend on the pairing), so
/// `R >= 0` iff the TLM criterion holds, in every variant at once. Note the
/// first powers of the sigmas in the product term; a squared-sigma product
/// breaks the sign equivalence (see the regression test below).
pub fn tlm_residual(v: &CorrelatorVector) -> Result<f64> {
    require_bipartite2(v)?;
    let (c1, c2, c3, c4) = (v.c(1), v.c(2), v.c(3), v.c(4));
    let sigma_product = v.sigma(1) * v.sigma(2) * v.sigma(3) * v.sigma(4);
    Ok(
        2.0 + 2.0 * c1 * c2 * c3 * c4 - (c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4)
            + 2.0 * sigma_product,
    )
}

/// True iff all eight CHSH facets evaluate to at most `2 + CLASSICAL_TOL`.
/// For correlator-only data this is the full classical membership test.
pub fn classical_check(v: &CorrelatorVector) -> Result<bool> {
    require_bipartite2(v)?;
    for f in BellFunctional::chsh_facets() {
        if bell_value(v, &f)? > 2.0 + CLASSICAL_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership verdict for a correlator vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Classical,
    QuantumNonclassical,
    BeyondQuantum,
}

/// A verdict together with the inequality that decided it.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub witness: String,
}

/// Classifies a correlator vector: classical if every CHSH facet holds,
/// otherwise quantum-compatible if the TLM criterion holds, otherwise beyond
/// quantum.
pub fn classify(v: &CorrelatorVector) -> Result<Classification> {
    require_bipartite2(v)?;
    let mut max_facet = f64::NEG_INFINITY;
    let mut max_label = String::new();
    for f in BellFunctional::chsh_facets() {
        let val = bell_value(v, &f)?;
        if val > max_facet {
            max_facet = val;
            max_label = f.label().to_string();
        }
    }
    let tlm = tlm_check(v)?;
    if max_facet <= 2.0 + CLASSICAL_TOL {
        Ok(Classification {
            verdict: Verdict::Classical,
            witness: format!("all CHSH facets <= 2 (largest: {max_label} = {max_facet})"),
        })
    } else if tlm.satisfied {
        Ok(Classification {
            verdict: Verdict::QuantumNonclassical,
            witness: format!("{max_label} = {max_facet} > 2, but {} holds", tlm.name),
        })
    } else {
        Ok(Classification {
            verdict: Verdict::BeyondQuantum,
            witness: format!("{} violated: slack = {}", tlm.name, tlm.slack),
        })
    }
}

/// Tsallis entropy with parameter `q = 1/2` of a +-1-valued variable with
/// mean `d`: `S = 2 (sqrt(p+) + sqrt(p-)) - 2` with `p+- = (1 +- d) / 2`.
pub fn tsallis_entropy(d: f64) -> Result<f64> {
    if !d.is_finite() || d.abs() > 1.0 + CORRELATOR_TOL {
        return Err(Error::Domain {
            what: "tsallis mean",
            value: d,
        });
    }
    let d = d.clamp(-1.0, 1.0);
    let p_plus = (1.0 + d) / 2.0;
    let p_minus = (1.0 - d) / 2.0;
    Ok(2.0 * (p_plus.sqrt() + p_minus.sqrt()) - 2.0)
}

/// The entropy-modulated CHSH bound `2 + min(S(dA), S(dB))`, where `dA` and
/// `dB` are the anticommutator means of the two local observable pairs.
/// Ranges over [2, 2*sqrt(2)]: the classical limit at `|d| = 1`, the
/// Tsirelson value at `d = 0`.
pub fn tsallis_bound(d_a: f64, d_b: f64) -> Result<f64> {
    Ok(2.0 + tsallis_entropy(d_a)?.min(tsallis_entropy(d_b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    use crate::covariance::default_second_moment;

    fn cv(values: &[f64]) -> CorrelatorVector {
        CorrelatorVector::new(values.to_vec()).unwrap()
    }

    fn tsirelson_v() -> CorrelatorVector {
        cv(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
    }

    #[test]
    fn tlm_at_tsirelson_point_is_tight() {
        let r = tlm_check(&tsirelson_v()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!((r.rhs - 1.0).abs() < 1e-12);
        assert!(r.satisfied);
    }

    #[test]
    fn tlm_rejects_pr_box() {
        let r = tlm_check(&cv(&[1.0, 1.0, 1.0, -1.0])).unwrap();
        assert_eq!(r.lhs, 2.0);
        assert_eq!(r.rhs, 0.0);
        assert_eq!(r.slack, -2.0);
        assert!(!r.satisfied);
    }

    #[test]
    fn tlm_accepts_deterministic_point() {
        let r = tlm_check(&cv(&[1.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn residual_sign_matches_verdict_on_key_points() {
        let zero = cv(&[0.0; 4]);
        assert!(tlm_residual(&zero).unwrap() > 0.0);
        assert!(tlm_check(&zero).unwrap().satisfied);

        let pr = cv(&[1.0, 1.0, 1.0, -1.0]);
        assert!(tlm_residual(&pr).unwrap() < 0.0);
        assert!(!tlm_check(&pr).unwrap().satisfied);
        assert!((tlm_residual(&pr).unwrap() - (-4.0)).abs() < 1e-12);
    }

    #[test]
    fn residual_uses_first_powers_of_sigma() {
        // At V = (0.7, 0.7, 0.7, -0.7) the TLM criterion holds
        // (0.98 <= 1.02) and the residual is +0.08, but the same expression
        // with squared sigmas in the product term evaluates to -0.3049...,
        // flipping the sign. Regression against reintroducing the squared
        // form.
        let v = cv(&[0.7, 0.7, 0.7, -0.7]);
        assert!(tlm_check(&v).unwrap().satisfied);
        let r = tlm_residual(&v).unwrap();
        assert!((r - 0.08).abs() < 1e-12);

        let s2 = 0.51_f64 * 0.51; // sigma_i^2 = 0.51 for every entry
        let squared_variant = 2.0 - 2.0 * 0.7_f64.powi(4) - 4.0 * 0.49 + 2.0 * s2 * s2;
        assert!(squared_variant < 0.0);
    }

    #[test]
    fn bell_values_at_named_points() {
        let b0 = BellFunctional::chsh_b0();
        assert_eq!(bell_value(&cv(&[1.0, 1.0, 1.0, -1.0]), &b0).unwrap(), 4.0);
        assert_eq!(bell_value(&cv(&[1.0, 1.0, 1.0, 1.0]), &b0).unwrap(), 2.0);
        let ts = bell_value(&tsirelson_v(), &b0).unwrap();
        assert!((ts - 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bell_value_rejects_length_mismatch() {
        let f = BellFunctional::new(vec![1.0; 3], "bad");
        assert!(bell_value(&cv(&[0.0; 4]), &f).is_err());
    }

    #[test]
    fn classical_check_on_vertices_and_tsirelson() {
        assert!(classical_check(&cv(&[1.0, 1.0, 1.0, 1.0])).unwrap());
        assert!(!classical_check(&tsirelson_v()).unwrap());
        // all 16 deterministic strategies are classical
        for bits in 0..16u8 {
            let s = |k: u8| if bits >> k & 1 == 1 { 1.0 } else { -1.0 };
            let (a0, a1, b0, b1) = (s(0), s(1), s(2), s(3));
            let v = cv(&[a0 * b0, a1 * b0, a0 * b1, a1 * b1]);
            assert!(classical_check(&v).unwrap(), "vertex {bits:04b}");
        }
    }

    #[test]
    fn classify_three_regimes() {
        assert_eq!(
            classify(&cv(&[1.0, 1.0, 1.0, 1.0])).unwrap().verdict,
            Verdict::Classical
        );
        assert_eq!(
            classify(&tsirelson_v()).unwrap().verdict,
            Verdict::QuantumNonclassical
        );
        assert_eq!(
            classify(&cv(&[1.0, 1.0, 1.0, -1.0])).unwrap().verdict,
            Verdict::BeyondQuantum
        );
    }

    #[test]
    fn covariance_tlm_trivial_and_pr_cases() {
        let zero = cv(&[0.0; 4]);
        let id = SecondMomentMatrix::new(DMatrix::identity(4, 4)).unwrap();
        for r in covariance_tlm_check(&id, &zero).unwrap() {
            assert_eq!(r.lhs, 0.0);
            assert_eq!(r.rhs, 2.0);
            assert!(r.satisfied);
        }

        let pr = cv(&[1.0, 1.0, 1.0, -1.0]);
        let m = default_second_moment(&pr);
        for r in covariance_tlm_check(&m, &pr).unwrap() {
            assert!(r.lhs.abs() < 1e-12);
            assert!(r.rhs.abs() < 1e-12);
            assert!(r.satisfied, "saturated with equality");
        }
    }

    #[test]
    fn covariance_tlm_requires_psd_covariance() {
        let v = cv(&[0.9, 0.9, 0.9, -0.9]);
        let id = SecondMomentMatrix::new(DMatrix::identity(4, 4)).unwrap();
        match covariance_tlm_check(&id, &v) {
            Err(Error::NotPsd { min_eigenvalue }) => {
                // eigenvalues of I - VV^T are 1 - |V|^2 = -2.24 and 1
                assert!((min_eigenvalue - (1.0 - 4.0 * 0.81)).abs() < 1e-12);
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn tsallis_entropy_named_values() {
        assert!((tsallis_entropy(0.0).unwrap() - (2.0 * SQRT_2 - 2.0)).abs() < 1e-15);
        assert_eq!(tsallis_entropy(1.0).unwrap(), 0.0);
        assert_eq!(tsallis_entropy(-1.0).unwrap(), 0.0);
        let expected = 2.0 * (0.8_f64.sqrt() + 0.2_f64.sqrt()) - 2.0;
        assert!((tsallis_entropy(0.6).unwrap() - expected).abs() < 1e-15);
        assert!(tsallis_entropy(1.1).is_err());
    }

    #[test]
    fn tsallis_bound_named_values() {
        assert!((tsallis_bound(0.0, 0.0).unwrap() - 2.0 * SQRT_2).abs() < 1e-15);
        assert!((tsallis_bound(1.0, 0.0).unwrap() - 2.0).abs() < 1e-15);
        let expected = (2.0_f64 * 1.9).sqrt() + (2.0_f64 * 0.1).sqrt();
        assert!((tsallis_bound(0.5, 0.9).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn tsallis_bound_matches_sqrt_form() {
        for k in 0..=1000 {
            let d = -1.0 + 2.0 * k as f64 / 1000.0;
            let lhs = 2.0 + tsallis_entropy(d).unwrap();
            let rhs = (2.0 * (1.0 + d)).sqrt() + (2.0 * (1.0 - d)).sqrt();
            assert!((lhs - rhs).abs() < 1e-12, "identity fails at d = {d}");
        }
    }
}
