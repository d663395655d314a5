//! Tripartite bounds: the covariance-tightened Mermin-type inequality, the
//! mixed two-/three-fold TLM generalization, the mixed entropy bound, and
//! the monogamy-style trio that splits nonlocality between party pairs.

use serde::Serialize;

use crate::bounds::{tsallis_bound, tsallis_entropy, VERDICT_TOL};
use crate::error::Result;
use crate::sim::{anticommutator_mean, TripartiteStrategy};

/// Evaluation record for a tripartite inequality, carrying the
/// anticommutator (or correlator) means its right-hand side was built from.
#[derive(Debug, Clone, Serialize)]
pub struct TripartiteReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    /// Named means entering the bound, e.g. `("d", 1.0)`.
    pub means: Vec<(String, f64)>,
}

impl TripartiteReport {
    fn new(name: impl Into<String>, lhs: f64, rhs: f64, means: Vec<(String, f64)>) -> Self {
        let slack = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            satisfied: slack >= -VERDICT_TOL,
            means,
        }
    }
}

fn sqrt2(x: f64) -> f64 {
    (2.0 * x.max(0.0)).sqrt()
}

/// The Mermin-type combination
/// `|<A0 B0 C0> + <A1 B1 C0> + <A0 B1 C1> - <A1 B0 C1>|` bounded by
/// `sqrt(2(1+d)) + sqrt(2(1-e))`, with
/// `d = <{A0 B0, A1 B1}>/2` and `e = <{A0 B1, A1 B0}>/2` evaluated on the
/// full three-party space (identity on Charlie's factor). The classical
/// value 2 is recovered when both local pairs commute; the algebraic
/// maximum 4 when either pair anticommutes (then `d = -e`).
pub fn mermin_check(s: &TripartiteStrategy) -> Result<TripartiteReport> {
    let lhs = (s.three_point(0, 0, 0)? + s.three_point(1, 1, 0)? + s.three_point(0, 1, 1)?
        - s.three_point(1, 0, 1)?)
    .abs();
    let d = anticommutator_mean(s.state(), &s.operator_ab(0, 0)?, &s.operator_ab(1, 1)?)?;
    let e = anticommutator_mean(s.state(), &s.operator_ab(0, 1)?, &s.operator_ab(1, 0)?)?;
    let rhs = sqrt2(1.0 + d) + sqrt2(1.0 - e);
    Ok(TripartiteReport::new(
        "mermin-cov",
        lhs,
        rhs,
        vec![("d".into(), d), ("e".into(), e)],
    ))
}

/// The mixed two-/three-fold TLM generalization for the operators
/// `X1 = A0 Bj`, `X2 = A1 Bj`, `X3 = A0 Bi Ck`, `X4 = A1 Bi Ck`:
/// `|<X1><X2> - <X3><X4>| <= sqrt((1-<X1>^2)(1-<X2>^2)) +
/// sqrt((1-<X3>^2)(1-<X4>^2))`.
pub fn mixed_tlm_check(
    s: &TripartiteStrategy,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TripartiteReport> {
    let x1 = s.two_point_ab(0, j)?;
    let x2 = s.two_point_ab(1, j)?;
    let x3 = expect_abc(s, 0, i, k)?;
    let x4 = expect_abc(s, 1, i, k)?;
    let lhs = (x1 * x2 - x3 * x4).abs();
    let rhs = ((1.0 - x1 * x1) * (1.0 - x2 * x2)).max(0.0).sqrt()
        + ((1.0 - x3 * x3) * (1.0 - x4 * x4)).max(0.0).sqrt();
    Ok(TripartiteReport::new(
        format!("mixed-tlm i={i} j={j} k={k}"),
        lhs,
        rhs,
        vec![
            ("<A0Bj>".into(), x1),
            ("<A1Bj>".into(), x2),
            ("<A0BiCk>".into(), x3),
            ("<A1BiCk>".into(), x4),
        ],
    ))
}

fn expect_abc(s: &TripartiteStrategy, a: usize, i: usize, k: usize) -> Result<f64> {
    s.three_point(a, i, k)
}

/// The mixed entropy bound
/// `|<A0 Bj> + <A1 Bj> + <A0 Bi Ck> - <A1 Bi Ck>| <= 2 + min(S(a), S(bc))`,
/// with the mean of `a` being `<{A0, A1}>/2` and the mean of `bc` being
/// `<{Bj, Bi Ck}>/2`.
pub fn mixed_tsallis_check(
    s: &TripartiteStrategy,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TripartiteReport> {
    let lhs = (s.two_point_ab(0, j)? + s.two_point_ab(1, j)? + expect_abc(s, 0, i, k)?
        - expect_abc(s, 1, i, k)?)
    .abs();
    let d_a = s.party_anticommutator_mean(0)?;
    let d_bc = anticommutator_mean(s.state(), &s.operator_b(j)?, &s.operator_bc(i, k)?)?;
    let rhs = tsallis_bound(d_a, d_bc)?;
    Ok(TripartiteReport::new(
        format!("mixed-tsallis i={i} j={j} k={k}"),
        lhs,
        rhs,
        vec![("d_a".into(), d_a), ("d_bc".into(), d_bc)],
    ))
}

/// The three monogamy-style bounds splitting nonlocality between party
/// pairs. In each one the first entropy argument is a local anticommutator
/// mean and the second is the plain two-point correlator of the remaining
/// pair (`<Bj Ck>`, `<Ai Ck>`, `<Ai Bj>`) -- a mean of a different kind,
/// implemented exactly as stated.
pub fn monogamy_checks(
    s: &TripartiteStrategy,
    i: usize,
    j: usize,
    k: usize,
) -> Result<[TripartiteReport; 3]> {
    let a = s.party_anticommutator_mean(0)?;
    let b = s.party_anticommutator_mean(1)?;
    let c = s.party_anticommutator_mean(2)?;
    let ab = s.two_point_ab(i, j)?;
    let ac = s.two_point_ac(i, k)?;
    let bc = s.two_point_bc(j, k)?;

    let lhs1 = (s.two_point_ab(0, j)? + s.two_point_ab(1, j)? + s.two_point_ac(0, k)?
        - s.two_point_ac(1, k)?)
    .abs();
    let lhs2 = (s.two_point_ab(i, 0)? + s.two_point_ab(i, 1)? + s.two_point_bc(0, k)?
        - s.two_point_bc(1, k)?)
    .abs();
    let lhs3 = (s.two_point_ac(i, 0)? + s.two_point_ac(i, 1)? + s.two_point_bc(j, 0)?
        - s.two_point_bc(j, 1)?)
    .abs();

    Ok([
        TripartiteReport::new(
            format!("monogamy A|BC j={j} k={k}"),
            lhs1,
            2.0 + tsallis_entropy(a)?.min(tsallis_entropy(bc)?),
            vec![("a".into(), a), ("bc".into(), bc)],
        ),
        TripartiteReport::new(
            format!("monogamy B|AC i={i} k={k}"),
            lhs2,
            2.0 + tsallis_entropy(b)?.min(tsallis_entropy(ac)?),
            vec![("b".into(), b), ("ac".into(), ac)],
        ),
        TripartiteReport::new(
            format!("monogamy C|AB i={i} j={j}"),
            lhs3,
            2.0 + tsallis_entropy(c)?.min(tsallis_entropy(ab)?),
            vec![("c".into(), c), ("ab".into(), ab)],
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use num_complex::Complex64;

    use crate::covariance::{build_covariance, is_psd};
    use crate::sim::{
        mermin_ghz_strategy, pauli_x, pauli_z, random_tripartite_strategy, PureState,
        TripartiteStrategy,
    };

    fn all_z_product() -> TripartiteStrategy {
        let mut amp = DVector::from_element(8, Complex64::new(0.0, 0.0));
        amp[0] = Complex64::new(1.0, 0.0);
        TripartiteStrategy::new(
            PureState::new(amp).unwrap(),
            vec![pauli_z(), pauli_z()],
            vec![pauli_z(), pauli_z()],
            vec![pauli_z(), pauli_z()],
        )
        .unwrap()
    }

    #[test]
    fn mermin_attained_on_ghz() {
        let r = mermin_check(&mermin_ghz_strategy()).unwrap();
        assert!((r.lhs - 4.0).abs() < 1e-12);
        assert!((r.rhs - 4.0).abs() < 1e-12);
        assert!(r.satisfied);
        let d = r.means.iter().find(|(n, _)| n == "d").unwrap().1;
        let e = r.means.iter().find(|(n, _)| n == "e").unwrap().1;
        assert!((d - 1.0).abs() < 1e-12);
        assert!((e + 1.0).abs() < 1e-12);
    }

    #[test]
    fn mermin_reduces_to_bell_limit_for_commuting_pairs() {
        let r = mermin_check(&all_z_product()).unwrap();
        assert!((r.rhs - 2.0).abs() < 1e-12);
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!(r.satisfied);
    }

    #[test]
    fn anticommuting_alice_pair_gives_d_equals_minus_e() {
        // A0 = Z and A1 = X anticommute, so the composite means satisfy
        // d = -e regardless of Bob, Charlie, and the state.
        for seed in 0..20 {
            let random = random_tripartite_strategy(seed, (2, 2, 2)).unwrap();
            let s = TripartiteStrategy::new(
                random.state().clone(),
                vec![pauli_z(), pauli_x()],
                random.bob().to_vec(),
                random.charlie().to_vec(),
            )
            .unwrap();
            let r = mermin_check(&s).unwrap();
            let d = r.means[0].1;
            let e = r.means[1].1;
            assert!((d + e).abs() < 1e-9, "seed {seed}: d = {d}, e = {e}");
            assert!((r.rhs - 2.0 * sqrt2(1.0 + d)).abs() < 1e-9);
        }
    }

    #[test]
    fn mixed_tlm_product_state_equality() {
        let r = mixed_tlm_check(&all_z_product(), 0, 0, 0).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn mixed_tlm_on_ghz() {
        let r = mixed_tlm_check(&mermin_ghz_strategy(), 0, 0, 0).unwrap();
        assert!(r.satisfied, "{r:?}");
    }

    #[test]
    fn mixed_tsallis_product_state_attained() {
        let r = mixed_tsallis_check(&all_z_product(), 0, 0, 0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!((r.rhs - 2.0).abs() < 1e-12);
        assert!(r.satisfied);
    }

    #[test]
    fn monogamy_product_state_attained() {
        for r in monogamy_checks(&all_z_product(), 0, 0, 0).unwrap() {
            assert!((r.lhs - 2.0).abs() < 1e-12, "{}", r.name);
            assert!((r.rhs - 2.0).abs() < 1e-12, "{}", r.name);
        }
    }

    #[test]
    fn monogamy_singlet_with_uncorrelated_charlie() {
        use crate::sim::{qubit_observable, tsirelson_strategy};
        let pair = tsirelson_strategy();
        // embed the singlet strategy with Charlie in |0>, measuring Z
        let mut amp = DVector::from_element(8, Complex64::new(0.0, 0.0));
        let pair_amp = pair.state().amplitudes();
        for idx in 0..4 {
            amp[idx * 2] = pair_amp[idx];
        }
        let z = qubit_observable([0.0, 0.0, 1.0]).unwrap();
        let s = TripartiteStrategy::new(
            PureState::new(amp).unwrap(),
            pair.alice().to_vec(),
            pair.bob().to_vec(),
            vec![z.clone(), z],
        )
        .unwrap();
        let reports = monogamy_checks(&s, 0, 0, 0).unwrap();
        let r = &reports[0];
        // lhs = |<A0B0> + <A1B0> + 0 - 0| = sqrt(2)
        assert!((r.lhs - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(r.satisfied);
        for r in &reports {
            assert!(r.satisfied, "{}: slack {}", r.name, r.slack);
        }
    }

    #[test]
    fn mixed_tsallis_reproduces_bipartite_numbers_on_an_embedded_pair() {
        use crate::sim::{qubit_observable, tsirelson_strategy};
        // Charlie in |0> measuring Z acts as a bystander, so the mixed bound
        // with (i, j, k) = (1, 0, 0) collapses to the bipartite entropy
        // bound at the Tsirelson point: lhs = 2 sqrt(2) = rhs
        let pair = tsirelson_strategy();
        let mut amp = DVector::from_element(8, Complex64::new(0.0, 0.0));
        let pair_amp = pair.state().amplitudes();
        for idx in 0..4 {
            amp[idx * 2] = pair_amp[idx];
        }
        let z = qubit_observable([0.0, 0.0, 1.0]).unwrap();
        let s = TripartiteStrategy::new(
            PureState::new(amp).unwrap(),
            pair.alice().to_vec(),
            pair.bob().to_vec(),
            vec![z.clone(), z],
        )
        .unwrap();
        let r = mixed_tsallis_check(&s, 1, 0, 0).unwrap();
        let tsirelson = 2.0 * std::f64::consts::SQRT_2;
        assert!((r.lhs - tsirelson).abs() < 1e-12, "lhs {}", r.lhs);
        assert!((r.rhs - tsirelson).abs() < 1e-12, "rhs {}", r.rhs);
        assert!(r.satisfied);
    }

    #[test]
    fn setting_indices_are_validated() {
        use crate::error::Error;
        let s = mermin_ghz_strategy();
        assert!(matches!(
            mixed_tlm_check(&s, 2, 0, 0),
            Err(Error::SettingIndex { index: 2, .. })
        ));
        assert!(matches!(
            monogamy_checks(&s, 0, 0, 3),
            Err(Error::SettingIndex { index: 3, .. })
        ));
    }

    #[test]
    fn random_strategies_satisfy_all_inequalities() {
        for seed in 0..100 {
            let s = random_tripartite_strategy(seed, (2, 2, 2)).unwrap();
            let r = mermin_check(&s).unwrap();
            assert!(r.satisfied, "mermin seed {seed}: slack {}", r.slack);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        let r = mixed_tlm_check(&s, i, j, k).unwrap();
                        assert!(r.satisfied, "{} seed {seed}: slack {}", r.name, r.slack);
                        let r = mixed_tsallis_check(&s, i, j, k).unwrap();
                        assert!(r.satisfied, "{} seed {seed}: slack {}", r.name, r.slack);
                        for r in monogamy_checks(&s, i, j, k).unwrap() {
                            assert!(r.satisfied, "{} seed {seed}: slack {}", r.name, r.slack);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tripartite_covariance_is_psd() {
        for seed in 0..50 {
            let s = random_tripartite_strategy(seed + 1000, (2, 2, 2)).unwrap();
            let m = s.second_moment().unwrap();
            let v = s.correlator_vector().unwrap();
            let c = build_covariance(&m, &v).unwrap();
            assert!(is_psd(c.entries(), 1e-9).unwrap(), "seed {seed}");
        }
    }
}
