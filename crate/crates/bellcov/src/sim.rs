//! Finite-dimensional quantum simulator: pure states, dichotomic (+-1
//! eigenvalue) observables, and bipartite/tripartite measurement strategies.
//!
//! The simulator is the ground-truth oracle for every bound in the crate: it
//! produces correlator vectors, second-moment matrices (anticommutator
//! means), and the local anticommutator parameters that modulate the
//! entropy-type bounds.
//!
//! Tensor convention: party A acts on the most significant factor, so a
//! bipartite operator is `kron(A, B)` and a tripartite one
//! `kron(kron(A, B), C)`. States are plain amplitude vectors in that basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::covariance::{CorrelatorVector, Scenario, SecondMomentMatrix};
use crate::error::{Error, Result};

/// Unit-norm tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity tolerance for observables.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `O^2 = I` (equivalently, eigenvalues +-1).
pub const DICHOTOMIC_TOL: f64 = 1e-9;
/// Expectations with an imaginary part above this are a numerical-integrity
/// error; anything below is discarded as rounding noise.
pub const IMAG_TOL: f64 = 1e-8;
/// Cap on the total Hilbert-space dimension; everything here is dense.
pub const MAX_TOTAL_DIM: usize = 64;

/// Normalized pure state on a `d`-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Validates unit norm within [`NORM_TOL`].
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the amplitudes; errors on the zero vector.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { deviation: 1.0 });
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }
}

/// Hermitian operator squaring to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    matrix: DMatrix<Complex64>,
}

fn max_modulus(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

impl DichotomicObservable {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let herm_dev = max_modulus(&(&matrix - matrix.adjoint()));
        if herm_dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation: herm_dev,
            });
        }
        let square_dev =
            max_modulus(&(&matrix * &matrix - DMatrix::identity(matrix.nrows(), matrix.ncols())));
        if square_dev > DICHOTOMIC_TOL {
            return Err(Error::NotDichotomic {
                deviation: square_dev,
            });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// `<psi|O|psi>` for a Hermitian operator. The imaginary part is checked
/// against [`IMAG_TOL`] and discarded.
pub fn expectation(state: &PureState, op: &DMatrix<Complex64>) -> Result<f64> {
    if op.nrows() != state.dim() || op.ncols() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            actual: op.nrows(),
        });
    }
    let phi = op * state.amplitudes();
    let value = state.amplitudes().dotc(&phi);
    if value.im.abs() > IMAG_TOL {
        return Err(Error::NumericalIntegrity {
            what: "expectation",
            imag: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// The anticommutator mean `<{O1, O2}>/2`. For dichotomic operators the
/// result lies in [-1, 1]; it is the `d` parameter of the entropy bounds.
pub fn anticommutator_mean(
    state: &PureState,
    o1: &DMatrix<Complex64>,
    o2: &DMatrix<Complex64>,
) -> Result<f64> {
    let sym = (o1 * o2 + o2 * o1) * Complex64::new(0.5, 0.0);
    expectation(state, &sym)
}

/// The observable `n . (X, Y, Z)` for a unit Bloch vector `n`.
pub fn qubit_observable(bloch: [f64; 3]) -> Result<DichotomicObservable> {
    let norm = (bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]).sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Domain {
            what: "bloch vector norm",
            value: norm,
        });
    }
    let (nx, ny, nz) = (bloch[0], bloch[1], bloch[2]);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(nz, 0.0),
            Complex64::new(nx, -ny),
            Complex64::new(nx, ny),
            Complex64::new(-nz, 0.0),
        ],
    );
    DichotomicObservable::new(m)
}

pub fn pauli_x() -> DichotomicObservable {
    qubit_observable([1.0, 0.0, 0.0]).unwrap()
}

pub fn pauli_y() -> DichotomicObservable {
    qubit_observable([0.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_z() -> DichotomicObservable {
    qubit_observable([0.0, 0.0, 1.0]).unwrap()
}

fn identity_c(d: usize) -> DMatrix<Complex64> {
    DMatrix::identity(d, d)
}

fn check_party(observables: &[DichotomicObservable], min_count: usize) -> Result<usize> {
    let dim = observables.first().map(|o| o.dim()).unwrap_or(0);
    if observables.len() < min_count || dim < 2 {
        return Err(Error::Scenario(format!(
            "each party needs >= {min_count} observables of dimension >= 2"
        )));
    }
    for o in observables {
        if o.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: o.dim(),
            });
        }
    }
    Ok(dim)
}

/// Shared state plus local dichotomic observables for two parties.
#[derive(Debug, Clone)]
pub struct BipartiteStrategy {
    state: PureState,
    alice: Vec<DichotomicObservable>,
    bob: Vec<DichotomicObservable>,
}

impl BipartiteStrategy {
    pub fn new(
        state: PureState,
        alice: Vec<DichotomicObservable>,
        bob: Vec<DichotomicObservable>,
    ) -> Result<Self> {
        let da = check_party(&alice, 2)?;
        let db = check_party(&bob, 2)?;
        if da * db > MAX_TOTAL_DIM {
            return Err(Error::Scenario(format!(
                "total dimension {} exceeds the dense cap {MAX_TOTAL_DIM}",
                da * db
            )));
        }
        if state.dim() != da * db {
            return Err(Error::DimensionMismatch {
                expected: da * db,
                actual: state.dim(),
            });
        }
        Ok(Self { state, alice, bob })
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn alice(&self) -> &[DichotomicObservable] {
        &self.alice
    }

    pub fn bob(&self) -> &[DichotomicObservable] {
        &self.bob
    }

    /// (Alice settings, Bob settings).
    pub fn settings(&self) -> (usize, usize) {
        (self.alice.len(), self.bob.len())
    }

    /// The joint operator `A_i (x) B_j` on the full space.
    pub fn operator(&self, i: usize, j: usize) -> Result<DMatrix<Complex64>> {
        let a = self.alice.get(i).ok_or(Error::SettingIndex {
            index: i,
            count: self.alice.len(),
        })?;
        let b = self.bob.get(j).ok_or(Error::SettingIndex {
            index: j,
            count: self.bob.len(),
        })?;
        Ok(a.matrix().kronecker(b.matrix()))
    }

    /// The product operators `X_1 .. X_n` in the scenario's index order:
    /// `1 + i + 2j` for two settings per side, `1 + i + 3j` for three.
    pub fn product_operators(&self) -> Result<Vec<DMatrix<Complex64>>> {
        let ops = match self.settings() {
            (2, 2) => (0..4)
                .map(|k| self.operator(k % 2, k / 2))
                .collect::<Result<Vec<_>>>()?,
            (3, 3) => (0..9)
                .map(|k| self.operator(k % 3, k / 3))
                .collect::<Result<Vec<_>>>()?,
            (a, b) => {
                return Err(Error::Scenario(format!(
                    "no correlator ordering for {a} x {b} settings"
                )))
            }
        };
        Ok(ops)
    }

    /// `c_k = <A_i B_j>` under the scenario's index formula.
    pub fn correlator_vector(&self) -> Result<CorrelatorVector> {
        let scenario = match self.settings() {
            (2, 2) => Scenario::Bipartite2,
            (3, 3) => Scenario::Bipartite3,
            (a, b) => {
                return Err(Error::Scenario(format!(
                    "no correlator ordering for {a} x {b} settings"
                )))
            }
        };
        let values = self
            .product_operators()?
            .iter()
            .map(|op| expectation(&self.state, op))
            .collect::<Result<Vec<_>>>()?;
        CorrelatorVector::with_scenario(values, scenario)
    }

    /// `M_kl = <{X_k, X_l}>/2`, computed as `Re <X_k psi | X_l psi>`.
    /// Unit diagonal follows from `X_k^2 = I`.
    pub fn second_moment(&self) -> Result<SecondMomentMatrix> {
        second_moment_of(&self.state, &self.product_operators()?)
    }

    /// `<{A_i, A_j}>/2` acting on Alice's factor.
    pub fn alice_anticommutator_mean(&self, i: usize, j: usize) -> Result<f64> {
        let count = self.alice.len();
        let a_i = self
            .alice
            .get(i)
            .ok_or(Error::SettingIndex { index: i, count })?;
        let a_j = self
            .alice
            .get(j)
            .ok_or(Error::SettingIndex { index: j, count })?;
        let db = self.bob[0].dim();
        anticommutator_mean(
            &self.state,
            &a_i.matrix().kronecker(&identity_c(db)),
            &a_j.matrix().kronecker(&identity_c(db)),
        )
    }

    /// `<{B_i, B_j}>/2` acting on Bob's factor.
    pub fn bob_anticommutator_mean(&self, i: usize, j: usize) -> Result<f64> {
        let count = self.bob.len();
        let b_i = self
            .bob
            .get(i)
            .ok_or(Error::SettingIndex { index: i, count })?;
        let b_j = self
            .bob
            .get(j)
            .ok_or(Error::SettingIndex { index: j, count })?;
        let da = self.alice[0].dim();
        anticommutator_mean(
            &self.state,
            &identity_c(da).kronecker(b_i.matrix()),
            &identity_c(da).kronecker(b_j.matrix()),
        )
    }
}

/// Shared state plus two local dichotomic observables for each of three
/// parties.
#[derive(Debug, Clone)]
pub struct TripartiteStrategy {
    state: PureState,
    alice: Vec<DichotomicObservable>,
    bob: Vec<DichotomicObservable>,
    charlie: Vec<DichotomicObservable>,
}

impl TripartiteStrategy {
    pub fn new(
        state: PureState,
        alice: Vec<DichotomicObservable>,
        bob: Vec<DichotomicObservable>,
        charlie: Vec<DichotomicObservable>,
    ) -> Result<Self> {
        for party in [&alice, &bob, &charlie] {
            if party.len() != 2 {
                return Err(Error::Scenario(
                    "tripartite strategies use exactly 2 settings per party".into(),
                ));
            }
        }
        let da = check_party(&alice, 2)?;
        let db = check_party(&bob, 2)?;
        let dc = check_party(&charlie, 2)?;
        if da * db * dc > MAX_TOTAL_DIM {
            return Err(Error::Scenario(format!(
                "total dimension {} exceeds the dense cap {MAX_TOTAL_DIM}",
                da * db * dc
            )));
        }
        if state.dim() != da * db * dc {
            return Err(Error::DimensionMismatch {
                expected: da * db * dc,
                actual: state.dim(),
            });
        }
        Ok(Self {
            state,
            alice,
            bob,
            charlie,
        })
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn alice(&self) -> &[DichotomicObservable] {
        &self.alice
    }

    pub fn bob(&self) -> &[DichotomicObservable] {
        &self.bob
    }

    pub fn charlie(&self) -> &[DichotomicObservable] {
        &self.charlie
    }

    fn dims(&self) -> (usize, usize, usize) {
        (
            self.alice[0].dim(),
            self.bob[0].dim(),
            self.charlie[0].dim(),
        )
    }

    fn check_setting(&self, index: usize) -> Result<usize> {
        if index < 2 {
            Ok(index)
        } else {
            Err(Error::SettingIndex { index, count: 2 })
        }
    }

    /// `A_i (x) B_j (x) C_k` on the full space.
    pub fn operator(&self, i: usize, j: usize, k: usize) -> Result<DMatrix<Complex64>> {
        self.check_setting(i)?;
        self.check_setting(j)?;
        self.check_setting(k)?;
        Ok(self.alice[i]
            .matrix()
            .kronecker(self.bob[j].matrix())
            .kronecker(self.charlie[k].matrix()))
    }

    /// `A_i (x) B_j (x) I`.
    pub fn operator_ab(&self, i: usize, j: usize) -> Result<DMatrix<Complex64>> {
        self.check_setting(i)?;
        self.check_setting(j)?;
        let (_, _, dc) = self.dims();
        Ok(self.alice[i]
            .matrix()
            .kronecker(self.bob[j].matrix())
            .kronecker(&identity_c(dc)))
    }

    /// `A_i (x) I (x) C_k`.
    pub fn operator_ac(&self, i: usize, k: usize) -> Result<DMatrix<Complex64>> {
        self.check_setting(i)?;
        self.check_setting(k)?;
        let (_, db, _) = self.dims();
        Ok(self.alice[i]
            .matrix()
            .kronecker(&identity_c(db))
            .kronecker(self.charlie[k].matrix()))
    }

    /// `I (x) B_j (x) I`.
    pub fn operator_b(&self, j: usize) -> Result<DMatrix<Complex64>> {
        self.check_setting(j)?;
        let (da, _, dc) = self.dims();
        Ok(identity_c(da)
            .kronecker(self.bob[j].matrix())
            .kronecker(&identity_c(dc)))
    }

    /// `I (x) B_j (x) C_k`.
    pub fn operator_bc(&self, j: usize, k: usize) -> Result<DMatrix<Complex64>> {
        self.check_setting(j)?;
        self.check_setting(k)?;
        let (da, _, _) = self.dims();
        Ok(identity_c(da)
            .kronecker(self.bob[j].matrix())
            .kronecker(self.charlie[k].matrix()))
    }

    pub fn three_point(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        expectation(&self.state, &self.operator(i, j, k)?)
    }

    pub fn two_point_ab(&self, i: usize, j: usize) -> Result<f64> {
        expectation(&self.state, &self.operator_ab(i, j)?)
    }

    pub fn two_point_ac(&self, i: usize, k: usize) -> Result<f64> {
        expectation(&self.state, &self.operator_ac(i, k)?)
    }

    pub fn two_point_bc(&self, j: usize, k: usize) -> Result<f64> {
        expectation(&self.state, &self.operator_bc(j, k)?)
    }

    /// Local anticommutator mean `<{P_0, P_1}>/2` for one party
    /// (0 = Alice, 1 = Bob, 2 = Charlie).
    pub fn party_anticommutator_mean(&self, party: usize) -> Result<f64> {
        let (da, db, dc) = self.dims();
        let (o0, o1) = match party {
            0 => (
                self.alice[0].matrix().kronecker(&identity_c(db * dc)),
                self.alice[1].matrix().kronecker(&identity_c(db * dc)),
            ),
            1 => (
                identity_c(da)
                    .kronecker(self.bob[0].matrix())
                    .kronecker(&identity_c(dc)),
                identity_c(da)
                    .kronecker(self.bob[1].matrix())
                    .kronecker(&identity_c(dc)),
            ),
            2 => (
                identity_c(da * db).kronecker(self.charlie[0].matrix()),
                identity_c(da * db).kronecker(self.charlie[1].matrix()),
            ),
            other => {
                return Err(Error::SettingIndex {
                    index: other,
                    count: 3,
                })
            }
        };
        anticommutator_mean(&self.state, &o0, &o1)
    }

    /// The product operators `X_1 .. X_8` in index order `1 + i + 2j + 4k`.
    pub fn product_operators(&self) -> Result<Vec<DMatrix<Complex64>>> {
        (0..8)
            .map(|m| self.operator(m % 2, (m / 2) % 2, m / 4))
            .collect()
    }

    /// `c_m = <A_i B_j C_k>`, `m = 1 + i + 2j + 4k`.
    pub fn correlator_vector(&self) -> Result<CorrelatorVector> {
        let values = self
            .product_operators()?
            .iter()
            .map(|op| expectation(&self.state, op))
            .collect::<Result<Vec<_>>>()?;
        CorrelatorVector::with_scenario(values, Scenario::Tripartite2)
    }

    /// The 8x8 second-moment matrix over the three-fold products.
    pub fn second_moment(&self) -> Result<SecondMomentMatrix> {
        second_moment_of(&self.state, &self.product_operators()?)
    }
}

/// `M_kl = <{X_k, X_l}>/2 = Re <X_k psi | X_l psi>` for a list of dichotomic
/// product operators.
pub fn second_moment_of(
    state: &PureState,
    ops: &[DMatrix<Complex64>],
) -> Result<SecondMomentMatrix> {
    let n = ops.len();
    let images: Vec<DVector<Complex64>> = ops.iter().map(|op| op * state.amplitudes()).collect();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            let val = images[k].dotc(&images[l]).re;
            m[(k, l)] = val;
            m[(l, k)] = val;
        }
    }
    SecondMomentMatrix::new(m)
}

/// The CHSH-optimal singlet strategy: `A0 = Z`, `A1 = X`,
/// `B0 = -(Z+X)/sqrt(2)`, `B1 = (X-Z)/sqrt(2)`, reaching
/// `V = (1, 1, 1, -1)/sqrt(2)` and `B0`-value `2 sqrt(2)`, with
/// anticommuting pairs on both sides (`d_A = d_B = 0`).
pub fn tsirelson_strategy() -> BipartiteStrategy {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = PureState::new(DVector::from_column_slice(&[
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(0.0, 0.0),
    ]))
    .unwrap();
    BipartiteStrategy::new(
        singlet,
        vec![pauli_z(), pauli_x()],
        vec![
            qubit_observable([-s, 0.0, -s]).unwrap(),
            qubit_observable([s, 0.0, -s]).unwrap(),
        ],
    )
    .unwrap()
}

/// GHZ strategy attaining the tripartite bound: state `(|000> + |111>)/sqrt(2)`
/// with `A0 = B0 = C0 = X`, `A1 = C1 = Y`, `B1 = -Y`. The four correlators of
/// the Mermin-type combination are (+1, +1, +1, -1), its value is 4, and the
/// composite anticommutator means are `d = +1`, `e = -1`, so the bound
/// `sqrt(2(1+d)) + sqrt(2(1-e)) = 4` is attained.
pub fn mermin_ghz_strategy() -> TripartiteStrategy {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amp = DVector::from_element(8, Complex64::new(0.0, 0.0));
    amp[0] = Complex64::new(s, 0.0);
    amp[7] = Complex64::new(s, 0.0);
    let ghz = PureState::new(amp).unwrap();
    let minus_y = qubit_observable([0.0, -1.0, 0.0]).unwrap();
    TripartiteStrategy::new(
        ghz,
        vec![pauli_x(), pauli_y()],
        vec![pauli_x(), minus_y],
        vec![pauli_x(), pauli_y()],
    )
    .unwrap()
}

/// Counter-based seed splitting: every consumer of randomness derives its
/// own stream seed from the root seed and a stable index, so parallel and
/// serial execution orders agree.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    fn splitmix64(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix64(root ^ splitmix64(stream.wrapping_add(0xA5A5_A5A5_5A5A_5A5A)))
}

fn random_gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> PureState {
    loop {
        let amp = DVector::from_fn(dim, |_, _| random_gaussian_complex(rng));
        if let Ok(state) = PureState::normalized(amp) {
            return state;
        }
    }
}

/// `U diag(signs) U^H` with `U` from the QR factorization of a complex
/// Gaussian matrix and a uniformly random nonconstant +-1 sign pattern, so
/// the observable is genuinely dichotomic rather than +-identity.
fn random_dichotomic(rng: &mut ChaCha8Rng, dim: usize) -> DichotomicObservable {
    let gaussian = DMatrix::from_fn(dim, dim, |_, _| random_gaussian_complex(rng));
    let u = gaussian.qr().q();
    let signs: Vec<f64> = loop {
        let candidate: Vec<f64> = (0..dim)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        if candidate.iter().any(|&s| s > 0.0) && candidate.iter().any(|&s| s < 0.0) {
            break candidate;
        }
    };
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        signs.iter().map(|&s| Complex64::new(s, 0.0)),
    ));
    let m = &u * d * u.adjoint();
    DichotomicObservable::new(m).expect("unitary conjugation of +-1 diagonal")
}

/// Seeded random bipartite strategy: Haar-ish random pure state (normalized
/// complex Gaussian amplitudes) and `settings` random dichotomic observables
/// per side. Deterministic for a fixed seed.
pub fn random_bipartite_strategy(
    seed: u64,
    dims: (usize, usize),
    settings: usize,
) -> Result<BipartiteStrategy> {
    if dims.0 < 2 || dims.1 < 2 {
        return Err(Error::Scenario("party dimensions must be >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = random_state(&mut rng, dims.0 * dims.1);
    let alice = (0..settings)
        .map(|_| random_dichotomic(&mut rng, dims.0))
        .collect();
    let bob = (0..settings)
        .map(|_| random_dichotomic(&mut rng, dims.1))
        .collect();
    BipartiteStrategy::new(state, alice, bob)
}

/// Seeded random tripartite strategy with two observables per party.
pub fn random_tripartite_strategy(
    seed: u64,
    dims: (usize, usize, usize),
) -> Result<TripartiteStrategy> {
    if dims.0 < 2 || dims.1 < 2 || dims.2 < 2 {
        return Err(Error::Scenario("party dimensions must be >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = random_state(&mut rng, dims.0 * dims.1 * dims.2);
    let alice = (0..2)
        .map(|_| random_dichotomic(&mut rng, dims.0))
        .collect();
    let bob = (0..2)
        .map(|_| random_dichotomic(&mut rng, dims.1))
        .collect();
    let charlie = (0..2)
        .map(|_| random_dichotomic(&mut rng, dims.2))
        .collect();
    TripartiteStrategy::new(state, alice, bob, charlie)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    use crate::bounds::{bell_value, tlm_check, BellFunctional};

    fn ket(amplitudes: &[f64]) -> PureState {
        PureState::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
        .unwrap()
    }

    #[test]
    fn expectation_basics() {
        let zero = ket(&[1.0, 0.0]);
        assert_eq!(expectation(&zero, pauli_z().matrix()).unwrap(), 1.0);
        let plus = ket(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert!(expectation(&plus, pauli_z().matrix()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn singlet_zz_is_minus_one() {
        let singlet = ket(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]);
        let zz = pauli_z().matrix().kronecker(pauli_z().matrix());
        assert!((expectation(&singlet, &zz).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let zero = ket(&[1.0, 0.0]);
        let op = DMatrix::identity(3, 3);
        assert!(expectation(&zero, &op).is_err());
    }

    #[test]
    fn anticommutator_means() {
        let plus = ket(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let z = pauli_z();
        let x = pauli_x();
        assert!((anticommutator_mean(&plus, z.matrix(), z.matrix()).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            anticommutator_mean(&plus, z.matrix(), x.matrix())
                .unwrap()
                .abs()
                < 1e-15
        );
        for theta in [0.3_f64, 1.2, 2.6] {
            let tilted = qubit_observable([theta.sin(), 0.0, theta.cos()]).unwrap();
            let got = anticommutator_mean(&plus, z.matrix(), tilted.matrix()).unwrap();
            assert!((got - theta.cos()).abs() < 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn qubit_observable_pauli_points() {
        assert_eq!(pauli_z().matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(pauli_x().matrix()[(0, 1)], Complex64::new(1.0, 0.0));
        let diag = qubit_observable([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
        let sq = diag.matrix() * diag.matrix();
        assert!(max_modulus(&(sq - DMatrix::identity(2, 2))) < 1e-15);
        assert!(qubit_observable([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn observable_validation_rejects_bad_input() {
        let not_herm = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert!(matches!(
            DichotomicObservable::new(not_herm),
            Err(Error::NotHermitian { .. })
        ));
        let not_dichotomic = DMatrix::from_diagonal(&DVector::from_column_slice(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        assert!(matches!(
            DichotomicObservable::new(not_dichotomic),
            Err(Error::NotDichotomic { .. })
        ));
    }

    #[test]
    fn state_norm_validation() {
        assert!(PureState::new(DVector::from_column_slice(&[
            Complex64::new(0.9, 0.0),
            Complex64::new(0.0, 0.0),
        ]))
        .is_err());
        let s = PureState::normalized(DVector::from_column_slice(&[
            Complex64::new(3.0, 0.0),
            Complex64::new(4.0, 0.0),
        ]))
        .unwrap();
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn tsirelson_strategy_hits_named_values() {
        let s = tsirelson_strategy();
        let v = s.correlator_vector().unwrap();
        let r = FRAC_1_SQRT_2;
        for (got, want) in v.values().iter().zip([r, r, r, -r]) {
            assert!((got - want).abs() < 1e-14);
        }
        let b0 = bell_value(&v, &BellFunctional::chsh_b0()).unwrap();
        assert!((b0 - 2.0 * SQRT_2).abs() < 1e-12);
        assert!(s.alice_anticommutator_mean(0, 1).unwrap().abs() < 1e-14);
        assert!(s.bob_anticommutator_mean(0, 1).unwrap().abs() < 1e-14);
        let m = s.second_moment().unwrap();
        assert!(m.m(1, 2).abs() < 1e-14);
        assert!(m.m(3, 4).abs() < 1e-14);
    }

    #[test]
    fn product_state_all_z() {
        let state = ket(&[1.0, 0.0, 0.0, 0.0]);
        let s = BipartiteStrategy::new(
            state,
            vec![pauli_z(), pauli_z()],
            vec![pauli_z(), pauli_z()],
        )
        .unwrap();
        let v = s.correlator_vector().unwrap();
        assert_eq!(v.values(), &[1.0, 1.0, 1.0, 1.0]);
        let m = s.second_moment().unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                assert!((m.m(i, j) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ghz_strategy_correlators() {
        let s = mermin_ghz_strategy();
        assert!((s.three_point(0, 0, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((s.three_point(1, 1, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((s.three_point(0, 1, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!((s.three_point(1, 0, 1).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_strategy_is_deterministic_and_valid() {
        let a = random_bipartite_strategy(7, (2, 2), 2).unwrap();
        let b = random_bipartite_strategy(7, (2, 2), 2).unwrap();
        assert_eq!(a.state().amplitudes(), b.state().amplitudes());
        for (x, y) in a.alice().iter().zip(b.alice()) {
            assert_eq!(x.matrix(), y.matrix());
        }
        let c = random_bipartite_strategy(8, (2, 2), 2).unwrap();
        assert_ne!(a.state().amplitudes(), c.state().amplitudes());
    }

    #[test]
    fn random_strategies_satisfy_tlm() {
        for seed in 0..200 {
            let dims = if seed % 2 == 0 { (2, 2) } else { (3, 3) };
            let s = random_bipartite_strategy(derive_seed(42, seed), dims, 2).unwrap();
            let v = s.correlator_vector().unwrap();
            let report = tlm_check(&v).unwrap();
            assert!(report.slack >= -1e-9, "seed {seed}: slack {}", report.slack);
        }
    }

    #[test]
    fn second_moment_symmetries_hold_for_random_strategies() {
        for seed in 0..100 {
            let s = random_bipartite_strategy(derive_seed(1, seed), (2, 2), 2).unwrap();
            let m = s.second_moment().unwrap();
            assert!((m.m(1, 2) - m.m(3, 4)).abs() < 1e-10);
            assert!((m.m(1, 3) - m.m(2, 4)).abs() < 1e-10);
        }
    }

    #[test]
    fn total_dimension_is_capped() {
        assert!(matches!(
            random_bipartite_strategy(1, (8, 9), 2),
            Err(Error::Scenario(_))
        ));
        assert!(random_bipartite_strategy(1, (8, 8), 2).is_ok());
    }

    #[test]
    fn derive_seed_separates_streams() {
        assert_ne!(derive_seed(42, 0), derive_seed(42, 1));
        assert_ne!(derive_seed(42, 0), derive_seed(43, 0));
        assert_eq!(derive_seed(42, 5), derive_seed(42, 5));
    }
}
