//! Qubit states, Bloch bases, Born-rule models for `(n, 2, 2)` Bell scenarios,
//! two-qubit Schmidt decomposition and entanglement entropy.
//!
//! Qubit 0 (Alice) is the most significant bit of an amplitude index, matching
//! the digit order of joint outcomes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{dot, hermitian_eigen, kron, norm, Mat2, C64, ONE, ZERO};
use crate::scenario::{EmpiricalModel, GlobalDistribution, MeasurementScenario};

pub const NORM_TOL: f64 = 1e-9;

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::AngleRange {
            name: "theta",
            value: theta,
            range: "[0, pi]",
        })
    }
}

fn check_phi(phi: f64) -> Result<()> {
    if (0.0..TAU).contains(&phi) {
        Ok(())
    } else {
        Err(Error::AngleRange {
            name: "phi",
            value: phi,
            range: "[0, 2pi)",
        })
    }
}

/// Reduces an azimuth into `[0, 2π)`.
pub fn wrap_phi(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn bloch_amplitudes(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [C64::from(c), C64::from_polar(s, phi)]
}

/// A pure state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Requires a power-of-two length and unit norm within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let nrm = norm(&amplitudes);
        if !nrm.is_finite() || (nrm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalised(nrm));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let nrm = norm(&amplitudes);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::InvalidState(format!(
                "cannot normalise vector of norm {nrm}"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / nrm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        dot(&self.amplitudes, &other.amplitudes)
    }

    /// `min_α ‖self − e^{iα} other‖`, i.e. distance up to global phase.
    pub fn phase_distance(&self, other: &PureState) -> f64 {
        if self.amplitudes.len() != other.amplitudes.len() {
            return f64::INFINITY;
        }
        let ov = other.inner(self);
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Tensor product in party order.
    pub fn product(factors: &[PureState]) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidState("empty product".into()))?;
        let amps = factors[1..]
            .iter()
            .fold(first.amplitudes.clone(), |acc, f| kron(&acc, &f.amplitudes));
        Ok(Self {
            n_qubits: factors.iter().map(|f| f.n_qubits).sum(),
            amplitudes: amps,
        })
    }

    /// Applies a single-qubit operator to `qubit`.
    pub fn apply_single(&self, qubit: usize, op: &Mat2) -> Result<Self> {
        if qubit >= self.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        let stride = 1usize << (self.n_qubits - 1 - qubit);
        let mut amps = self.amplitudes.clone();
        for i in 0..amps.len() {
            if i & stride == 0 {
                let [a, b] = op.apply([self.amplitudes[i], self.amplitudes[i | stride]]);
                amps[i] = a;
                amps[i | stride] = b;
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: amps,
        })
    }

    /// Applies `ops[k]` to qubit `k` for every qubit.
    pub fn apply_local(&self, ops: &[Mat2]) -> Result<Self> {
        if ops.len() != self.n_qubits {
            return Err(Error::QubitCount {
                expected: self.n_qubits,
                found: ops.len(),
            });
        }
        ops.iter()
            .enumerate()
            .try_fold(self.clone(), |st, (q, op)| st.apply_single(q, op))
    }

    fn expect_qubits(&self, n: usize) -> Result<()> {
        if self.n_qubits == n {
            Ok(())
        } else {
            Err(Error::QubitCount {
                expected: n,
                found: self.n_qubits,
            })
        }
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "amplitude vector length {len} is not a power of two >= 2"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `|θ, φ⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn bloch_ket(theta: f64, phi: f64) -> Result<PureState> {
    check_theta(theta)?;
    check_phi(phi)?;
    Ok(PureState {
        n_qubits: 1,
        amplitudes: bloch_amplitudes(theta, phi).to_vec(),
    })
}

/// `cos(θ/2)|00⟩ + e^{iφ} sin(θ/2)|11⟩`. Any real `phi` is accepted.
pub fn diag_state(theta: f64, phi: f64) -> Result<PureState> {
    check_theta(theta)?;
    let [c, s] = bloch_amplitudes(theta, phi);
    Ok(PureState {
        n_qubits: 2,
        amplitudes: vec![c, ZERO, ZERO, s],
    })
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<PureState> {
    if !(2..=24).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "GHZ state needs between 2 and 24 qubits, got {n}"
        )));
    }
    let mut amps = vec![ZERO; 1 << n];
    let h = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    amps[0] = h;
    amps[(1 << n) - 1] = h;
    Ok(PureState {
        n_qubits: n,
        amplitudes: amps,
    })
}

/// The orthonormal basis `{|θ,φ⟩, |π−θ, π+φ⟩}`; outcome 0 is the first ket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochBasis {
    theta: f64,
    phi: f64,
}

impl BlochBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_theta(theta)?;
        check_phi(phi)?;
        Ok(Self { theta, phi })
    }

    /// Like [`Self::new`] but reduces `phi` into `[0, 2π)` first.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta, wrap_phi(phi))
    }

    /// Equatorial basis `B(π/2, φ)`.
    pub fn equatorial(phi: f64) -> Self {
        Self {
            theta: FRAC_PI_2,
            phi: wrap_phi(phi),
        }
    }

    pub fn z() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn x() -> Self {
        Self::equatorial(0.0)
    }

    pub fn y() -> Self {
        Self::equatorial(FRAC_PI_2)
    }

    /// `B(π/2, π/8)`.
    pub fn pi8() -> Self {
        Self::equatorial(FRAC_PI_8)
    }

    /// `B(π/2, 5π/8)`.
    pub fn five_pi8() -> Self {
        Self::equatorial(5.0 * FRAC_PI_8)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ket(&self, outcome: usize) -> [C64; 2] {
        match outcome {
            0 => bloch_amplitudes(self.theta, self.phi),
            _ => bloch_amplitudes(PI - self.theta, PI + self.phi),
        }
    }
}

/// One party's pair of measurement bases, optionally rotated by a local unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartySettings {
    pub bases: [BlochBasis; 2],
    pub rotation: Option<Mat2>,
}

impl PartySettings {
    pub fn new(first: BlochBasis, second: BlochBasis) -> Self {
        Self {
            bases: [first, second],
            rotation: None,
        }
    }

    pub fn rotated(mut self, u: Mat2) -> Self {
        self.rotation = Some(u);
        self
    }

    /// Measurement ket for basis `choice` and `outcome`.
    pub fn ket(&self, choice: usize, outcome: usize) -> [C64; 2] {
        let k = self.bases[choice].ket(outcome);
        match &self.rotation {
            Some(u) => u.apply(k),
            None => k,
        }
    }
}

const MAX_PARTIES: usize = 26;

/// An `(n, 2, 2)` Bell scenario.
///
/// Measurements are ordered `a1, a2, b1, b2, …` (party `p`, choice `c` has
/// index `2p + c`); context `k` picks choice `bit p of k` for party `p`, with
/// party 0 as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct BellScenario {
    parties: Vec<PartySettings>,
}

impl BellScenario {
    pub fn new(parties: Vec<PartySettings>) -> Result<Self> {
        if !(2..=MAX_PARTIES).contains(&parties.len()) {
            return Err(Error::InvalidArgument(format!(
                "a Bell scenario needs between 2 and {MAX_PARTIES} parties, got {}",
                parties.len()
            )));
        }
        Ok(Self { parties })
    }

    /// `S(a1, a2)`: every party chooses from the same pair.
    pub fn symmetric(first: BlochBasis, second: BlochBasis, n: usize) -> Result<Self> {
        Self::new(vec![PartySettings::new(first, second); n])
    }

    pub fn parties(&self) -> &[PartySettings] {
        &self.parties
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn measurement_scenario(&self) -> MeasurementScenario {
        let n = self.parties.len();
        let label = |p: usize, c: usize| format!("{}{}", (b'a' + p as u8) as char, c + 1);
        let measurements: Vec<String> = (0..n)
            .flat_map(|p| (0..2).map(move |c| (p, c)))
            .map(|(p, c)| label(p, c))
            .collect();
        let contexts: Vec<Vec<String>> = (0..1usize << n)
            .map(|k| (0..n).map(|p| label(p, choice_bit(k, p, n))).collect())
            .collect();
        MeasurementScenario::new(measurements, contexts, 2).expect("Bell scenario is well formed")
    }
}

fn choice_bit(context: usize, party: usize, n: usize) -> usize {
    (context >> (n - 1 - party)) & 1
}

/// Born-rule probabilities `|⟨s₁ s₂ …|ψ⟩|²` for every context and outcome.
pub fn born_model(psi: &PureState, sc: &BellScenario) -> Result<EmpiricalModel> {
    let n = sc.n_parties();
    psi.expect_qubits(n)?;
    let rows = (0..1usize << n)
        .map(|k| {
            (0..1usize << n)
                .map(|s| {
                    let v = (0..n).fold(vec![ONE], |acc, p| {
                        let ket = sc.parties[p].ket(choice_bit(k, p, n), (s >> (n - 1 - p)) & 1);
                        kron(&acc, &ket)
                    });
                    dot(&v, &psi.amplitudes).norm_sqr()
                })
                .collect()
        })
        .collect();
    EmpiricalModel::new(sc.measurement_scenario(), rows)
}

/// Product global distribution for a product state: each measurement's
/// outcome is drawn independently with its single-party Born probability.
pub fn separable_witness(factors: &[PureState], sc: &BellScenario) -> Result<GlobalDistribution> {
    let n = sc.n_parties();
    if factors.len() != n {
        return Err(Error::QubitCount {
            expected: n,
            found: factors.len(),
        });
    }
    for f in factors {
        f.expect_qubits(1)?;
    }
    // prob[m][o] for measurement m = 2p + c
    let prob: Vec<[f64; 2]> = (0..n)
        .flat_map(|p| (0..2).map(move |c| (p, c)))
        .map(|(p, c)| {
            let amp = |o| dot(&sc.parties[p].ket(c, o), &factors[p].amplitudes).norm_sqr();
            [amp(0), amp(1)]
        })
        .collect();
    let scenario = sc.measurement_scenario();
    let total = scenario.global_assignment_count()?;
    let m = 2 * n;
    let weights = (0..total)
        .map(|g| {
            prob.iter()
                .enumerate()
                .map(|(k, pr)| pr[(g >> (m - 1 - k)) & 1])
                .product()
        })
        .collect();
    GlobalDistribution::new(scenario, weights)
}

/// `|ψ⟩ = (u_a ⊗ u_b)(cos(θ/2)|00⟩ + sin(θ/2)|11⟩)` with `θ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtForm {
    pub theta: f64,
    pub u_a: Mat2,
    pub u_b: Mat2,
}

impl SchmidtForm {
    pub fn coefficients(&self) -> [f64; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        [c, s]
    }

    pub fn reconstruct(&self) -> PureState {
        let diag = diag_state(self.theta, 0.0).expect("canonical theta is in range");
        diag.apply_local(&[self.u_a, self.u_b])
            .expect("two local operators for two qubits")
    }
}

/// Two-qubit Schmidt decomposition from a closed-form SVD of the coefficient
/// matrix `M[i][j] = ψ_{ij}`.
///
/// `M = U Σ V†` gives `u_a = U` and `u_b = conj(V)`. `V` comes from the
/// eigenvectors of `M†M`; `u_0 = M v_0 / σ_0` and `u_1` is taken orthogonal
/// to `u_0` with its phase chosen so that `⟨u_1|M v_1⟩ = σ_1 ≥ 0`.
pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtForm> {
    psi.expect_qubits(2)?;
    let a = &psi.amplitudes;
    let m = Mat2([[a[0], a[1]], [a[2], a[3]]]);
    let (_, v) = hermitian_eigen(&(m.adjoint() * m));
    let mv0 = m.apply(v.column(0));
    let mv1 = m.apply(v.column(1));
    let s0 = norm(&mv0);
    let u0 = [mv0[0] / s0, mv0[1] / s0];
    let mut u1 = [-u0[1].conj(), u0[0].conj()];
    let proj = dot(&u1, &mv1);
    let s1 = proj.norm();
    if s1 > 0.0 {
        let phase = proj / s1;
        u1 = [u1[0] * phase, u1[1] * phase];
    }
    let theta = 2.0 * s1.atan2(s0);
    Ok(SchmidtForm {
        theta,
        u_a: Mat2::from_columns(u0, u1),
        u_b: v.conj(),
    })
}

/// A single-qubit density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(pub Mat2);

impl DensityMatrix2 {
    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigen(&self.0).0
    }

    pub fn trace(&self) -> f64 {
        self.0 .0[0][0].re + self.0 .0[1][1].re
    }

    /// Base-2 von Neumann entropy.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|&l| xlog2x(l.clamp(0.0, 1.0)))
            .sum::<f64>()
            .max(0.0)
    }
}

fn xlog2x(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// `ρ_A = Tr_B |ψ⟩⟨ψ|`.
pub fn reduced_density(psi: &PureState) -> Result<DensityMatrix2> {
    psi.expect_qubits(2)?;
    let a = &psi.amplitudes;
    let mut rho = [[ZERO; 2]; 2];
    for (i, row) in rho.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell = (0..2).map(|j| a[2 * i + j] * a[2 * k + j].conj()).sum();
        }
    }
    Ok(DensityMatrix2(Mat2(rho)))
}

/// `S_ent(ψ) = −Tr(ρ_A log₂ ρ_A)`.
pub fn entanglement_entropy(psi: &PureState) -> Result<f64> {
    Ok(reduced_density(psi)?.entropy())
}

/// Closed-form entropy of `|diag; θ, φ⟩`:
/// `−2(cos²(θ/2) log₂ cos(θ/2) + sin²(θ/2) log₂ sin(θ/2))`.
pub fn diagonal_entropy(theta: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    let term = |x: f64| {
        if x.abs() > 0.0 {
            x * x * x.abs().log2()
        } else {
            0.0
        }
    };
    (-2.0 * (term(c) + term(s))).max(0.0)
}

/// Random state with i.i.d. standard complex normal amplitudes, normalised.
pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> PureState {
    loop {
        let amps: Vec<C64> = (0..1usize << n_qubits)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = PureState::normalized(amps) {
            return s;
        }
    }
}

/// Random 2×2 unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let c0 = random_state(1, rng);
    let [a, b] = [c0.amplitudes[0], c0.amplitudes[1]];
    let phase = C64::from_polar(1.0, rng.random_range(0.0..TAU));
    Mat2::from_columns([a, b], [-b.conj() * phase, a.conj() * phase])
}

/// Uniformly random angles; `theta` in `[0, π]`, `phi` in `[0, 2π)`.
pub fn random_bloch_basis<R: Rng + ?Sized>(rng: &mut R) -> BlochBasis {
    BlochBasis::new(rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))
        .expect("sampled angles are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4};

    fn amps_close(s: &PureState, expect: &[C64]) {
        for (a, b) in s.amplitudes().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn bloch_kets() {
        amps_close(&bloch_ket(0.0, 1.3).unwrap(), &[ONE, ZERO]);
        amps_close(&bloch_ket(PI, 0.0).unwrap(), &[ZERO, ONE]);
        let h = C64::from(FRAC_1_SQRT_2);
        amps_close(&bloch_ket(FRAC_PI_2, 0.0).unwrap(), &[h, h]);
        assert!(bloch_ket(-0.1, 0.0).is_err());
        assert!(bloch_ket(0.1, TAU).is_err());
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = BlochBasis::new(1.1, 4.0).unwrap();
        assert!(dot(&b.ket(0), &b.ket(1)).norm() < 1e-15);
        assert!((norm(&b.ket(1)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diag_states() {
        let h = C64::from(FRAC_1_SQRT_2);
        amps_close(&diag_state(FRAC_PI_2, 0.0).unwrap(), &[h, ZERO, ZERO, h]);
        amps_close(&diag_state(0.0, 2.0).unwrap(), &[ONE, ZERO, ZERO, ZERO]);
        amps_close(
            &diag_state(FRAC_PI_3, 0.0).unwrap(),
            &[C64::from(3f64.sqrt() / 2.0), ZERO, ZERO, C64::from(0.5)],
        );
        assert!(
            ghz_state(2)
                .unwrap()
                .phase_distance(&diag_state(FRAC_PI_2, 0.0).unwrap())
                < 1e-15
        );
        let g3 = ghz_state(3).unwrap();
        amps_close(&g3, &[h, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, h]);
        assert!(ghz_state(1).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(PureState::new(vec![ONE, ONE]).is_err());
        assert!(PureState::new(vec![ONE, ZERO, ZERO]).is_err());
        assert!(PureState::normalized(vec![ZERO, ZERO]).is_err());
        let s = PureState::normalized(vec![ONE, ONE]).unwrap();
        assert!((norm(s.amplitudes()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn born_rows() {
        let z = BlochBasis::z();
        let x = BlochBasis::x();
        let zz = PureState::product(&[bloch_ket(0.0, 0.0).unwrap(), bloch_ket(0.0, 0.0).unwrap()])
            .unwrap();
        let m = born_model(&zz, &BellScenario::symmetric(z, x, 2).unwrap()).unwrap();
        // contexts: (z,z), (z,x), (x,z), (x,x)
        for (p, e) in m.rows()[0].iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*p, e, epsilon = 1e-15);
        }
        for p in &m.rows()[3] {
            assert_abs_diff_eq!(*p, 0.25, epsilon = 1e-15);
        }
        let ghz = ghz_state(2).unwrap();
        let m = born_model(&ghz, &BellScenario::symmetric(z, x, 2).unwrap()).unwrap();
        let expect = [0.5, 0.0, 0.0, 0.5];
        for (p, e) in m.rows()[3].iter().zip(expect) {
            assert_abs_diff_eq!(*p, e, epsilon = 1e-15);
        }
        assert!(born_model(
            &ghz_state(3).unwrap(),
            &BellScenario::symmetric(z, x, 2).unwrap()
        )
        .is_err());
    }

    #[test]
    fn bell_scenario_labels() {
        let sc = BellScenario::symmetric(BlochBasis::x(), BlochBasis::y(), 2)
            .unwrap()
            .measurement_scenario();
        assert_eq!(sc.measurements(), &["a1", "a2", "b1", "b2"]);
        assert_eq!(sc.context_labels(1).unwrap(), vec!["a1", "b2"]);
        assert_eq!(sc.context_labels(2).unwrap(), vec!["a2", "b1"]);
        assert!(BellScenario::symmetric(BlochBasis::x(), BlochBasis::y(), 1).is_err());
    }

    #[test]
    fn schmidt_special_cases() {
        let prod = diag_state(0.0, 0.0).unwrap();
        let f = schmidt_decompose(&prod).unwrap();
        assert_abs_diff_eq!(f.theta, 0.0, epsilon = 1e-15);
        assert!(f.reconstruct().phase_distance(&prod) < 1e-15);

        let ghz = ghz_state(2).unwrap();
        let f = schmidt_decompose(&ghz).unwrap();
        assert_abs_diff_eq!(f.theta, FRAC_PI_2, epsilon = 1e-12);
        assert!(f.reconstruct().phase_distance(&ghz) < 1e-12);

        // θ > π/2 canonicalises to π − θ
        let f = schmidt_decompose(&diag_state(2.5, 0.3).unwrap()).unwrap();
        assert_abs_diff_eq!(f.theta, PI - 2.5, epsilon = 1e-12);
    }

    #[test]
    fn reduced_density_values() {
        let r = reduced_density(&diag_state(0.0, 0.0).unwrap()).unwrap();
        assert_eq!(r.eigenvalues(), [1.0, 0.0]);
        let r = reduced_density(&ghz_state(2).unwrap()).unwrap();
        assert_abs_diff_eq!(r.0 .0[0][0].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.0 .0[1][1].re, 0.5, epsilon = 1e-15);
        let r = reduced_density(&diag_state(FRAC_PI_3, 0.7).unwrap()).unwrap();
        assert_abs_diff_eq!(r.0 .0[0][0].re, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(r.0 .0[1][1].re, 0.25, epsilon = 1e-15);
        assert!(r.0 .0[0][1].norm() < 1e-15);
        assert_abs_diff_eq!(r.trace(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert_abs_diff_eq!(
            entanglement_entropy(&ghz_state(2).unwrap()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_eq!(
            entanglement_entropy(&diag_state(0.0, 0.0).unwrap()).unwrap(),
            0.0
        );
        // H(3/4) = 2 - (3/4) log2 3
        let expect = 2.0 - 0.75 * 3f64.log2();
        assert_abs_diff_eq!(expect, 0.811278, epsilon = 1e-6);
        assert_abs_diff_eq!(
            entanglement_entropy(&diag_state(FRAC_PI_3, 0.0).unwrap()).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(diagonal_entropy(FRAC_PI_3), expect, epsilon = 1e-12);
        assert_abs_diff_eq!(
            diagonal_entropy(FRAC_PI_4),
            diagonal_entropy(PI - FRAC_PI_4),
            epsilon = 1e-12
        );
    }

    #[test]
    fn separable_witness_example() {
        // |0>|0>, Alice {z, x}, Bob {z, z}: d(α1 α2 β1 β2) = [α1=0] · ½ · [β1=0] · [β2=0]
        let k0 = bloch_ket(0.0, 0.0).unwrap();
        let sc = BellScenario::new(vec![
            PartySettings::new(BlochBasis::z(), BlochBasis::x()),
            PartySettings::new(BlochBasis::z(), BlochBasis::z()),
        ])
        .unwrap();
        let d = separable_witness(&[k0.clone(), k0.clone()], &sc).unwrap();
        for (g, w) in d.weights().iter().enumerate() {
            let (a1, b1, b2) = ((g >> 3) & 1, (g >> 1) & 1, g & 1);
            let expect = if a1 == 0 && b1 == 0 && b2 == 0 {
                0.5
            } else {
                0.0
            };
            assert_abs_diff_eq!(*w, expect, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(d.total_mass(), 1.0, epsilon = 1e-15);
        let born = born_model(&PureState::product(&[k0.clone(), k0]).unwrap(), &sc).unwrap();
        assert!(d.marginal_model().unwrap().max_deviation(&born).unwrap() < 1e-15);
    }

    #[test]
    fn random_unitary_is_unitary() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert!(random_unitary(&mut rng).is_unitary(1e-14));
        }
    }
}
