//! Exact statevector simulation of the single-iteration phase-estimation
//! circuit.
//!
//! The circuit acts on a `d_c`-level control qudit and a `d_t`-level target
//! register: the control starts in the equal superposition (Fourier transform
//! of `|0⟩`), branch `|q⟩` applies `U^q` to the target, a rotation gate
//! multiplies branch `|q⟩` by `e^{-i q 2π θ_R}`, and an inverse Fourier
//! transform on the control precedes measurement. Only the control marginal
//! is returned; the target register is never measured.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::proximity::ProximityEvaluation;
use crate::qmath::{unitarity_check, ComplexMatrix, ComplexVector, UNITARITY_TOLERANCE};
use crate::seeded_rng;

/// Normalization tolerance on `Σ|amplitude|²` for quantum states.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Errors raised by circuit construction and read-out.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("matrix is not unitary: max |U†U - I| entry is {defect:.3e}")]
    NotUnitary { defect: f64 },
    #[error("state is not normalized: Σ|amplitude|² = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("control dimension must be at least 2, got {dc}")]
    InvalidControlDim { dc: usize },
    #[error("sampled read-out requires a positive shot count")]
    ZeroShots,
}

/// A square matrix carrying a unitarity certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    /// Certify and wrap a matrix; fails unless `max |U†U - I| ≤ 1e-10`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, CircuitError> {
        if !matrix.is_square() {
            return Err(CircuitError::DimensionMismatch {
                context: format!("unitary must be square, got {}x{}", matrix.rows(), matrix.cols()),
            });
        }
        if !unitarity_check(&matrix, UNITARITY_TOLERANCE) {
            let defect = matrix
                .adjoint()
                .mul(&matrix)
                .max_abs_diff(&ComplexMatrix::identity(matrix.rows()));
            return Err(CircuitError::NotUnitary { defect });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Normalized state of the target register.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: ComplexVector,
}

impl QuantumState {
    /// Wrap an already-normalized amplitude vector.
    pub fn new(amplitudes: ComplexVector) -> Result<Self, CircuitError> {
        let norm_sqr = amplitudes.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(CircuitError::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize and wrap; fails only on a numerically zero vector.
    pub fn from_unnormalized(v: ComplexVector) -> Result<Self, CircuitError> {
        let normalized = v.normalized().map_err(|_| CircuitError::NotNormalized {
            norm_sqr: v.norm_sqr(),
        })?;
        Ok(Self {
            amplitudes: normalized,
        })
    }

    /// Basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        Self {
            amplitudes: ComplexVector::basis_state(dim, index),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes.inner(&other.amplitudes)
    }
}

/// Rotation-gate setting in cycles: the gate multiplies control branch `|q⟩`
/// by `e^{-i q 2π θ_R}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationPhase(f64);

impl RotationPhase {
    /// Wrap a phase into `[0, 1)`.
    pub fn new(theta_r: f64) -> Self {
        let wrapped = theta_r.rem_euclid(1.0);
        // rem_euclid can return exactly 1.0 for tiny negative inputs.
        Self(if wrapped >= 1.0 { 0.0 } else { wrapped })
    }

    pub fn cycles(&self) -> f64 {
        self.0
    }

    pub fn radians(&self) -> f64 {
        self.0 * std::f64::consts::TAU
    }
}

/// Read-out configuration: control dimension, shot budget (0 = exact
/// probabilities) and the sampling seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitConfig {
    pub dc: usize,
    pub shots: u64,
    pub rng_seed: u64,
}

impl CircuitConfig {
    /// Exact-probability read-out for a `dc`-level control.
    pub fn exact(dc: usize) -> Self {
        Self {
            dc,
            shots: 0,
            rng_seed: 0,
        }
    }

    /// Shot-sampled read-out.
    pub fn sampled(dc: usize, shots: u64, rng_seed: u64) -> Self {
        Self { dc, shots, rng_seed }
    }
}

/// Probabilities of each control outcome `q ∈ {0..dc-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlDistribution {
    pub dc: usize,
    pub probs: Vec<f64>,
}

/// Circuit with the controlled powers `U^0 .. U^{dc-1}` memoized, so repeated
/// evaluations over many states and rotation settings stay cheap.
#[derive(Debug, Clone)]
pub struct PreparedCircuit {
    dc: usize,
    dim: usize,
    powers: Vec<ComplexMatrix>,
}

/// A target state pushed through every controlled power: branch `q` holds
/// `U^q |Φ⟩`.
#[derive(Debug, Clone)]
pub struct PreparedInput {
    branches: Vec<ComplexVector>,
}

impl PreparedCircuit {
    pub fn new(u: &UnitaryOperator, dc: usize) -> Result<Self, CircuitError> {
        if dc < 2 {
            return Err(CircuitError::InvalidControlDim { dc });
        }
        let mut powers = Vec::with_capacity(dc);
        powers.push(ComplexMatrix::identity(u.dim()));
        for q in 1..dc {
            powers.push(powers[q - 1].mul(u.matrix()));
        }
        Ok(Self {
            dc,
            dim: u.dim(),
            powers,
        })
    }

    pub fn dc(&self) -> usize {
        self.dc
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prepare(&self, phi: &QuantumState) -> Result<PreparedInput, CircuitError> {
        if phi.dim() != self.dim {
            return Err(CircuitError::DimensionMismatch {
                context: format!(
                    "state dimension {} does not match operator dimension {}",
                    phi.dim(),
                    self.dim
                ),
            });
        }
        let branches = self
            .powers
            .iter()
            .map(|p| p.mul_vec(phi.amplitudes()))
            .collect();
        Ok(PreparedInput { branches })
    }

    /// Amplitude vector of the target conditioned on control outcome `p`,
    /// up to the marginal normalization: `(1/dc) Σ_q e^{-i2πq(θ_R + p/dc)} U^q|Φ⟩`.
    fn outcome_branch(&self, input: &PreparedInput, theta_r: RotationPhase, p: usize) -> ComplexVector {
        let dc = self.dc as f64;
        let mut acc = ComplexVector::zeros(self.dim);
        for (q, branch) in input.branches.iter().enumerate() {
            let angle = -std::f64::consts::TAU * q as f64 * (theta_r.cycles() + p as f64 / dc);
            let w = Complex64::new(0.0, angle).exp() / dc;
            acc = acc.axpy(w, branch);
        }
        acc
    }

    /// Exact probability of control outcome `0`.
    pub fn bin0_probability(&self, input: &PreparedInput, theta_r: RotationPhase) -> f64 {
        self.outcome_branch(input, theta_r, 0).norm_sqr()
    }

    /// Exact probabilities of every control outcome.
    pub fn distribution(&self, input: &PreparedInput, theta_r: RotationPhase) -> ControlDistribution {
        let probs = (0..self.dc)
            .map(|p| self.outcome_branch(input, theta_r, p).norm_sqr())
            .collect();
        ControlDistribution { dc: self.dc, probs }
    }
}

/// Exact control-outcome distribution for one circuit setting.
pub fn simulate_distribution(
    u: &UnitaryOperator,
    phi: &QuantumState,
    theta_r: RotationPhase,
    dc: usize,
) -> Result<ControlDistribution, CircuitError> {
    let prepared = PreparedCircuit::new(u, dc)?;
    let input = prepared.prepare(phi)?;
    Ok(prepared.distribution(&input, theta_r))
}

/// Proximity read-out: exact bin-0 probability when `config.shots == 0`,
/// otherwise the mean of `shots` seeded Bernoulli draws against it.
pub fn evaluate_c(
    u: &UnitaryOperator,
    phi: &QuantumState,
    theta_r: RotationPhase,
    config: &CircuitConfig,
) -> Result<ProximityEvaluation, CircuitError> {
    let prepared = PreparedCircuit::new(u, config.dc)?;
    let input = prepared.prepare(phi)?;
    let p = prepared.bin0_probability(&input, theta_r);
    if config.shots == 0 {
        return Ok(ProximityEvaluation {
            c_value: p,
            shots_used: 0,
            theta_r,
        });
    }
    let mut rng = seeded_rng(config.rng_seed, 0);
    let c_value = sample_bernoulli_mean(p, config.shots, &mut rng);
    Ok(ProximityEvaluation {
        c_value,
        shots_used: config.shots,
        theta_r,
    })
}

/// Multinomial counts over all control outcomes from `config.shots` seeded
/// draws; the full-distribution read-out used by the alternative method.
pub fn sample_counts(
    u: &UnitaryOperator,
    phi: &QuantumState,
    theta_r: RotationPhase,
    config: &CircuitConfig,
) -> Result<Vec<u64>, CircuitError> {
    if config.shots == 0 {
        return Err(CircuitError::ZeroShots);
    }
    let dist = simulate_distribution(u, phi, theta_r, config.dc)?;
    let mut rng = seeded_rng(config.rng_seed, 0);
    Ok(sample_multinomial(&dist.probs, config.shots, &mut rng))
}

pub(crate) fn sample_bernoulli_mean<R: Rng + ?Sized>(p: f64, shots: u64, rng: &mut R) -> f64 {
    let mut hits = 0u64;
    for _ in 0..shots {
        if rng.gen::<f64>() < p {
            hits += 1;
        }
    }
    hits as f64 / shots as f64
}

pub(crate) fn sample_multinomial<R: Rng + ?Sized>(
    probs: &[f64],
    shots: u64,
    rng: &mut R,
) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let mut u: f64 = rng.gen();
        let mut chosen = probs.len() - 1;
        for (i, &p) in probs.iter().enumerate() {
            if u < p {
                chosen = i;
                break;
            }
            u -= p;
        }
        counts[chosen] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::proximity;

    fn u1_eigenstate() -> QuantumState {
        QuantumState::basis(2, 1) // eigenphase 1/8 of the RZ(π/2) fixture
    }

    #[test]
    fn eigenpair_collapses_deterministically() {
        let op = fixtures::u1();
        let dist = simulate_distribution(
            &op.unitary,
            &u1_eigenstate(),
            RotationPhase::new(0.125),
            2,
        )
        .unwrap();
        assert!((dist.probs[0] - 1.0).abs() < 1e-12);
        assert!(dist.probs[1].abs() < 1e-12);
    }

    #[test]
    fn half_cycle_offset_lands_in_bin_one() {
        let op = fixtures::u1();
        let dist = simulate_distribution(
            &op.unitary,
            &u1_eigenstate(),
            RotationPhase::new(0.125 + 0.5),
            2,
        )
        .unwrap();
        assert!(dist.probs[0].abs() < 1e-12);
        assert!((dist.probs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_cycle_offset_splits_evenly() {
        let op = fixtures::u1();
        let dist = simulate_distribution(
            &op.unitary,
            &u1_eigenstate(),
            RotationPhase::new(0.125 + 0.25),
            2,
        )
        .unwrap();
        assert!((dist.probs[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn eigenstate_reduction_matches_p0() {
        let op = fixtures::u2();
        let phases = op.oracle.phases_cycles();
        for dc in [2usize, 3, 4, 8] {
            for (k, vec) in op.oracle.vectors().iter().enumerate() {
                let phi = QuantumState::new(vec.clone()).unwrap();
                let theta_r = RotationPhase::new(0.3137);
                let dist = simulate_distribution(&op.unitary, &phi, theta_r, dc).unwrap();
                let expect = proximity::p0(phases[k] - theta_r.cycles(), dc);
                assert!((dist.probs[0] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_evaluate_matches_analytic_metric() {
        let op = fixtures::u3();
        let phi = QuantumState::from_unnormalized(ComplexVector::from_real(&[
            0.3, -0.1, 0.7, 0.2,
        ]))
        .unwrap();
        let theta_r = RotationPhase::new(0.42);
        let config = CircuitConfig::exact(4);
        let eval = evaluate_c(&op.unitary, &phi, theta_r, &config).unwrap();
        let analytic = proximity::c_analytic(&op.oracle, &phi, theta_r, 4);
        assert!((eval.c_value - analytic).abs() < 1e-10);
        assert_eq!(eval.shots_used, 0);
    }

    #[test]
    fn sampled_eigenpair_always_hits() {
        let op = fixtures::u1();
        let config = CircuitConfig::sampled(2, 256, 7);
        let eval = evaluate_c(&op.unitary, &u1_eigenstate(), RotationPhase::new(0.125), &config)
            .unwrap();
        assert_eq!(eval.c_value, 1.0);
        assert_eq!(eval.shots_used, 256);
    }

    #[test]
    fn sampling_concentrates_around_half() {
        // True bin-0 probability is exactly 0.5 at a quarter-cycle offset.
        let op = fixtures::u1();
        let phi = u1_eigenstate();
        let theta_r = RotationPhase::new(0.375);
        let mut within = 0usize;
        for seed in 0..1000u64 {
            let config = CircuitConfig::sampled(2, 4096, seed);
            let eval = evaluate_c(&op.unitary, &phi, theta_r, &config).unwrap();
            if (eval.c_value - 0.5).abs() <= 0.05 {
                within += 1;
            }
        }
        assert!(within >= 990, "only {within}/1000 seeds within ±0.05");
    }

    #[test]
    fn counts_concentrate_for_even_split() {
        let op = fixtures::u1();
        let config = CircuitConfig::sampled(2, 100_000, 1);
        let counts =
            sample_counts(&op.unitary, &u1_eigenstate(), RotationPhase::new(0.375), &config)
                .unwrap();
        for c in &counts {
            let dev = (*c as f64 - 50_000.0).abs() / 50_000.0;
            assert!(dev < 0.05, "count {c} deviates more than 5%");
        }
    }

    #[test]
    fn deterministic_collapse_puts_all_counts_in_bin0() {
        let op = fixtures::u1();
        let config = CircuitConfig::sampled(2, 100, 3);
        let counts =
            sample_counts(&op.unitary, &u1_eigenstate(), RotationPhase::new(0.125), &config)
                .unwrap();
        assert_eq!(counts, vec![100, 0]);
    }

    #[test]
    fn zero_shots_is_an_error_for_counts() {
        let op = fixtures::u1();
        let config = CircuitConfig::exact(2);
        let err = sample_counts(&op.unitary, &u1_eigenstate(), RotationPhase::new(0.0), &config)
            .unwrap_err();
        assert_eq!(err, CircuitError::ZeroShots);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let op = fixtures::u2();
        let phi = QuantumState::from_unnormalized(ComplexVector::from_real(&[
            1.0, 0.5, -0.25, 0.0,
        ]))
        .unwrap();
        let config = CircuitConfig::sampled(4, 2048, 99);
        let a = evaluate_c(&op.unitary, &phi, RotationPhase::new(0.2), &config).unwrap();
        let b = evaluate_c(&op.unitary, &phi, RotationPhase::new(0.2), &config).unwrap();
        assert_eq!(a.c_value, b.c_value);
        let ca = sample_counts(&op.unitary, &phi, RotationPhase::new(0.2), &config).unwrap();
        let cb = sample_counts(&op.unitary, &phi, RotationPhase::new(0.2), &config).unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn rejects_non_unitary_and_bad_dimensions() {
        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(
            UnitaryOperator::new(ones),
            Err(CircuitError::NotUnitary { .. })
        ));

        let op = fixtures::u2();
        let phi = QuantumState::basis(2, 0);
        assert!(matches!(
            simulate_distribution(&op.unitary, &phi, RotationPhase::new(0.0), 2),
            Err(CircuitError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            PreparedCircuit::new(&op.unitary, 1),
            Err(CircuitError::InvalidControlDim { dc: 1 })
        ));
    }

    #[test]
    fn rotation_phase_wraps() {
        assert!((RotationPhase::new(1.25).cycles() - 0.25).abs() < 1e-15);
        assert!((RotationPhase::new(-0.25).cycles() - 0.75).abs() < 1e-15);
        assert_eq!(RotationPhase::new(-1e-20).cycles(), 0.0);
    }
}
