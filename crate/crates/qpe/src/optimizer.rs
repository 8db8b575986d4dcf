//! Variational eigenpair search.
//!
//! The controller proposes target states and rotation settings, reads the
//! circuit's proximity metric back, and climbs it until the pair
//! `(|Φ⟩*, θ_R*)` explains the read-out: per iteration it builds a random
//! orthogonal basis around the incumbent state, sweeps `2·d` perturbed
//! candidates (real and imaginary steps along each basis direction, scaled
//! by the current step factor `a` and by `1 - C*`), accepts strict
//! improvements, shrinks or grows `a` when a sweep stalls, and stops once
//! `1 - C*` falls below the stop gap or the iteration budget runs out.
//!
//! Two read-out strategies are provided: the standard method scans rotation
//! settings on a coarse-to-fine grid using only bin-0 detection, and the
//! alternative method reads the full control distribution once at `θ_R = 0`,
//! estimates the phase from it, and confirms with a second setting.

use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::circuit::{
    sample_bernoulli_mean, sample_multinomial, CircuitError, PreparedCircuit, PreparedInput,
    QuantumState, RotationPhase, UnitaryOperator,
};
use crate::qmath::{random_complex_vector, ComplexVector, QmathError, DEPENDENCE_THRESHOLD};
use crate::seeded_rng;

/// Maximum step-factor adjustments (halvings or doublings) per iteration
/// before the sweep is abandoned and a fresh basis is drawn.
const MAX_STEP_ADJUSTMENTS: usize = 7;

/// Orthogonality tolerance for excluded directions.
pub const EXCLUSION_TOLERANCE: f64 = 1e-8;

/// Errors raised by the search layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    /// The excluded directions span the whole space; nothing to search.
    #[error("excluded states span the whole search space")]
    FullSpaceExcluded,
    /// Phase estimation was asked for on an all-zero outcome record.
    #[error("cannot estimate a phase from empty counts")]
    EmptyCounts,
    /// A state violates the orthogonality contract of the search space.
    #[error("state overlaps an excluded direction by {overlap:.3e}")]
    ExclusionNotOrthogonal { overlap: f64 },
    /// The supplied initial state lies (numerically) inside the excluded span.
    #[error("initial state lies in the excluded span")]
    InitialStateExcluded,
    #[error("invalid optimizer configuration: {reason}")]
    InvalidConfig { reason: String },
    #[error(transparent)]
    Qmath(#[from] QmathError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Read-out strategy for step 3 of the search loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Scan rotation settings coarse-to-fine; needs only bin-0 detection.
    Standard,
    /// One full-distribution read-out at `θ_R = 0` to estimate the phase,
    /// one confirmation setting; needs a detector per control level.
    Alternative,
}

/// Step-factor schedule applied when a sweep produces no acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ASchedule {
    /// `a` starts at 1 each iteration and halves on a stalled sweep.
    Halving,
    /// `a` starts at 1/2 each iteration and doubles on a stalled sweep,
    /// at most seven times.
    Doubling7,
}

impl ASchedule {
    fn initial(self) -> f64 {
        match self {
            ASchedule::Halving => 1.0,
            ASchedule::Doubling7 => 0.5,
        }
    }

    fn next(self, a: f64) -> f64 {
        match self {
            ASchedule::Halving => a / 2.0,
            ASchedule::Doubling7 => a * 2.0,
        }
    }
}

/// Rotation-setting search grid: `initial_points` samples over the active
/// range, then repeated ×`refinement_factor` zooms around the argmax until
/// the spacing drops below `final_resolution` (cycles).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub initial_points: usize,
    pub refinement_factor: usize,
    pub final_resolution: f64,
}

impl ThetaGrid {
    /// Default grid for a `dc`-level control: `8·dc` initial points, ×4
    /// refinement, 1e-6 floor. The initial density guarantees several
    /// samples inside the width-`2/dc` central lobe.
    pub fn for_control_dim(dc: usize) -> Self {
        Self {
            initial_points: 8 * dc,
            refinement_factor: 4,
            final_resolution: 1e-6,
        }
    }
}

/// Half-open phase window `[lo, hi) ⊆ [0, 1)` restricting the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRange {
    lo: f64,
    hi: f64,
}

impl PhaseRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self, OptimizerError> {
        if !(0.0..1.0).contains(&lo) || !(lo < hi && hi <= 1.0) {
            return Err(OptimizerError::InvalidConfig {
                reason: format!("phase range [{lo}, {hi}) must satisfy 0 ≤ lo < hi ≤ 1"),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lo && theta < self.hi
    }

    /// Snap a phase to the nearest point of the window (by wrapped distance).
    fn clamp_circular(&self, theta: f64) -> f64 {
        if self.contains(theta) {
            return theta;
        }
        let hi_edge = self.hi - self.width() * 1e-12;
        let d_lo = crate::proximity::phase_diff(theta, self.lo).abs();
        let d_hi = crate::proximity::phase_diff(theta, hi_edge).abs();
        if d_lo <= d_hi {
            self.lo
        } else {
            hi_edge
        }
    }
}

/// Full search configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub dc: usize,
    /// Stop once `1 - C*` is at or below this gap.
    pub stop_gap: f64,
    pub max_iterations: usize,
    pub method: Method,
    pub a_schedule: ASchedule,
    pub theta_grid: ThetaGrid,
    pub restrict_range: Option<PhaseRange>,
    /// 0 = exact probabilities, otherwise shots per read-out.
    pub shots: u64,
    pub rng_seed: u64,
}

impl OptimizerConfig {
    pub fn new(dc: usize) -> Self {
        Self {
            dc,
            stop_gap: 1e-4,
            max_iterations: 50,
            method: Method::Standard,
            a_schedule: ASchedule::Halving,
            theta_grid: ThetaGrid::for_control_dim(dc),
            restrict_range: None,
            shots: 0,
            rng_seed: 0,
        }
    }

    fn validate(&self) -> Result<(), OptimizerError> {
        let fail = |reason: String| Err(OptimizerError::InvalidConfig { reason });
        if self.dc < 2 {
            return fail(format!("control dimension {} < 2", self.dc));
        }
        if !(self.stop_gap > 0.0) {
            return fail(format!("stop gap {} must be positive", self.stop_gap));
        }
        if self.max_iterations == 0 {
            return fail("max_iterations must be at least 1".into());
        }
        if self.theta_grid.initial_points < 2 || self.theta_grid.refinement_factor < 2 {
            return fail("grid sizes must be at least 2".into());
        }
        if !(self.theta_grid.final_resolution > 0.0) {
            return fail("final resolution must be positive".into());
        }
        Ok(())
    }
}

/// Search domain: the full space minus a set of orthonormal excluded
/// directions (previously found eigenstates, or directions not of interest).
#[derive(Debug, Clone)]
pub struct SearchSpace {
    dim: usize,
    excluded: Vec<QuantumState>,
}

impl SearchSpace {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            excluded: Vec::new(),
        }
    }

    pub fn with_excluded(
        dim: usize,
        excluded: Vec<QuantumState>,
    ) -> Result<Self, OptimizerError> {
        let mut space = Self::new(dim);
        for state in excluded {
            space.exclude(state)?;
        }
        Ok(space)
    }

    /// Add a direction to avoid. The state must be orthogonal to the ones
    /// already excluded (within [`EXCLUSION_TOLERANCE`]); it is re-projected
    /// and renormalized internally so stored directions stay orthonormal to
    /// machine precision.
    pub fn exclude(&mut self, state: QuantumState) -> Result<(), OptimizerError> {
        assert_eq!(state.dim(), self.dim, "excluded state dimension mismatch");
        if self.excluded.len() >= self.dim {
            return Err(OptimizerError::FullSpaceExcluded);
        }
        let overlap = max_excluded_overlap(state.amplitudes(), &self.excluded);
        if overlap > EXCLUSION_TOLERANCE {
            return Err(OptimizerError::ExclusionNotOrthogonal { overlap });
        }
        let cleaned = project_off_excluded(state.amplitudes(), &self.excluded);
        let cleaned = cleaned
            .normalized()
            .map_err(|_| OptimizerError::FullSpaceExcluded)?;
        self.excluded.push(QuantumState::new(cleaned).expect("unit norm"));
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn excluded(&self) -> &[QuantumState] {
        &self.excluded
    }

    /// Dimension of the orthogonal complement actually searched.
    pub fn effective_dim(&self) -> usize {
        self.dim - self.excluded.len()
    }
}

fn project_off_excluded(v: &ComplexVector, excluded: &[QuantumState]) -> ComplexVector {
    let mut out = v.clone();
    for e in excluded {
        let overlap = e.amplitudes().inner(&out);
        out = out.axpy(-overlap, e.amplitudes());
    }
    out
}

fn max_excluded_overlap(v: &ComplexVector, excluded: &[QuantumState]) -> f64 {
    excluded
        .iter()
        .map(|e| e.amplitudes().inner(v).norm())
        .fold(0.0, f64::max)
}

/// Result of one search.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairEstimate {
    pub state: QuantumState,
    /// Best rotation setting found, cycles in `[0, 1)`.
    pub phase: f64,
    /// Best metric value found.
    pub c_star: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

/// Diagnostics collected alongside a search.
#[derive(Debug, Clone, Default)]
pub struct SearchTrace {
    /// Metric value after each accepted candidate, in acceptance order.
    pub accepted_c: Vec<f64>,
    /// Candidates proposed across all sweeps.
    pub proposals: usize,
    /// Worst deviation of a proposal from unit norm.
    pub max_norm_error: f64,
    /// Worst overlap of a proposal with an excluded direction.
    pub max_excluded_overlap: f64,
    /// Perturbation sweeps executed.
    pub sweeps: usize,
    /// Circuit settings consumed.
    pub circuit_settings: u64,
}

/// Circuit read-out front-end for the search: memoizes the controlled powers
/// and hands every sampled read-out its own generator stream, so a whole
/// search is a pure function of `(inputs, seed)`.
pub struct Evaluator {
    prepared: PreparedCircuit,
    shots: u64,
    seed: u64,
    next_stream: u64,
    settings_used: u64,
}

impl Evaluator {
    pub fn new(
        u: &UnitaryOperator,
        dc: usize,
        shots: u64,
        seed: u64,
    ) -> Result<Self, OptimizerError> {
        Ok(Self {
            prepared: PreparedCircuit::new(u, dc)?,
            shots,
            seed,
            // Stream 0 is reserved for the controller's own randomness.
            next_stream: 1,
            settings_used: 0,
        })
    }

    pub fn dc(&self) -> usize {
        self.prepared.dc()
    }

    pub fn settings_used(&self) -> u64 {
        self.settings_used
    }

    pub fn prepare(&self, phi: &QuantumState) -> Result<PreparedInput, OptimizerError> {
        Ok(self.prepared.prepare(phi)?)
    }

    fn bump_stream(&mut self) -> u64 {
        let s = self.next_stream;
        self.next_stream += 1;
        s
    }

    /// One circuit setting: the (exact or sampled) bin-0 frequency.
    pub fn bin0(&mut self, input: &PreparedInput, theta_r: RotationPhase) -> f64 {
        self.settings_used += 1;
        let p = self.prepared.bin0_probability(input, theta_r);
        if self.shots == 0 {
            p
        } else {
            let stream = self.bump_stream();
            let mut rng = seeded_rng(self.seed, stream);
            sample_bernoulli_mean(p, self.shots, &mut rng)
        }
    }

    /// One circuit setting with all `dc` outcomes recorded: exact
    /// probabilities, or sampled outcome frequencies.
    pub fn distribution_weights(
        &mut self,
        input: &PreparedInput,
        theta_r: RotationPhase,
    ) -> Vec<f64> {
        self.settings_used += 1;
        let dist = self.prepared.distribution(input, theta_r);
        if self.shots == 0 {
            dist.probs
        } else {
            let stream = self.bump_stream();
            let mut rng = seeded_rng(self.seed, stream);
            let counts = sample_multinomial(&dist.probs, self.shots, &mut rng);
            counts
                .into_iter()
                .map(|c| c as f64 / self.shots as f64)
                .collect()
        }
    }
}

/// Draw a random state from the complement of the excluded directions:
/// a standard-normal complex vector, projected and normalized.
pub fn random_initial_state(
    space: &SearchSpace,
    rng: &mut ChaCha12Rng,
) -> Result<QuantumState, OptimizerError> {
    if space.effective_dim() == 0 {
        return Err(OptimizerError::FullSpaceExcluded);
    }
    for _ in 0..16 {
        let g = random_complex_vector(space.dim(), rng);
        let p = project_off_excluded(&g, space.excluded());
        if p.norm() > 1e-8 {
            let v = p.normalized().expect("norm checked above");
            return Ok(QuantumState::new(v).expect("unit norm"));
        }
    }
    Err(OptimizerError::FullSpaceExcluded)
}

/// Build an orthonormal basis of the excluded-complement whose first element
/// is parallel to `phi`; the rest comes from Gram-Schmidt over random
/// complex vectors (fresh draws on numerical dependence, up to 5 per slot).
pub fn build_basis(
    phi: &QuantumState,
    space: &SearchSpace,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<QuantumState>, OptimizerError> {
    let overlap = max_excluded_overlap(phi.amplitudes(), space.excluded());
    if overlap > EXCLUSION_TOLERANCE {
        return Err(OptimizerError::ExclusionNotOrthogonal { overlap });
    }
    let target = space.effective_dim();
    if target == 0 {
        return Err(OptimizerError::FullSpaceExcluded);
    }

    let mut basis: Vec<ComplexVector> = Vec::with_capacity(target);
    let first = project_off_excluded(phi.amplitudes(), space.excluded());
    basis.push(
        first
            .normalized()
            .map_err(|_| OptimizerError::InitialStateExcluded)?,
    );

    while basis.len() < target {
        let mut placed = false;
        for _ in 0..5 {
            let g = random_complex_vector(space.dim(), rng);
            let mut v = project_off_excluded(&g, space.excluded());
            v = v.project_off(&basis);
            v = v.project_off(&basis); // second pass tightens orthogonality
            let n = v.norm();
            if n >= DEPENDENCE_THRESHOLD {
                basis.push(v.scaled(Complex64::new(1.0 / n, 0.0)));
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(QmathError::DependentInput {
                residual: DEPENDENCE_THRESHOLD,
            }
            .into());
        }
    }
    Ok(basis
        .into_iter()
        .map(|v| QuantumState::new(v).expect("unit norm"))
        .collect())
}

/// Coarse-to-fine scan of the rotation setting for a fixed input state.
/// Returns the best `(metric value, θ)` found; `θ` lies inside the active
/// range.
fn standard_scan(
    ev: &mut Evaluator,
    input: &PreparedInput,
    grid: &ThetaGrid,
    range: Option<PhaseRange>,
) -> (f64, f64) {
    let (lo, width, wraps) = match range {
        Some(r) => (r.lo(), r.width(), false),
        None => (0.0, 1.0, true),
    };
    let n0 = grid.initial_points.max(2);
    let mut spacing = width / n0 as f64;
    let mut best_c = f64::NEG_INFINITY;
    let mut best_t = lo;
    for i in 0..n0 {
        let t = lo + i as f64 * spacing;
        let c = ev.bin0(input, RotationPhase::new(t));
        if c > best_c {
            best_c = c;
            best_t = t;
        }
    }

    let rf = grid.refinement_factor.max(2);
    while spacing > grid.final_resolution {
        let fine = spacing / rf as f64;
        let center = best_t;
        let span = 2 * rf as i64; // covers ±2 coarse steps at the fine pitch
        for j in -span..=span {
            if j == 0 {
                continue; // center was evaluated at the previous level
            }
            let raw = center + j as f64 * fine;
            let t = if wraps {
                raw.rem_euclid(1.0)
            } else {
                if raw < lo || raw >= lo + width {
                    continue;
                }
                raw
            };
            let c = ev.bin0(input, RotationPhase::new(t));
            if c > best_c {
                best_c = c;
                best_t = t;
            }
        }
        spacing = fine;
    }
    (best_c, best_t.rem_euclid(1.0))
}

/// Phase read off a control-outcome record by the circular mean
/// `arg(Σ_q w_q e^{i2πq/dc}) / 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimate {
    pub theta: f64,
    /// Set when the outcome record is rotation-symmetric (estimator
    /// magnitude ~ 0) and `theta` fell back to 0.
    pub degenerate: bool,
}

/// Estimate an eigenphase from outcome weights over the `dc` control bins.
pub fn estimate_phase_circular(weights: &[f64]) -> Result<PhaseEstimate, OptimizerError> {
    let total: f64 = weights.iter().sum();
    if weights.is_empty() || total <= 0.0 {
        return Err(OptimizerError::EmptyCounts);
    }
    let dc = weights.len() as f64;
    let z: Complex64 = weights
        .iter()
        .enumerate()
        .map(|(q, &w)| Complex64::new(0.0, std::f64::consts::TAU * q as f64 / dc).exp() * (w / total))
        .sum();
    if z.norm() < 1e-12 {
        return Ok(PhaseEstimate {
            theta: 0.0,
            degenerate: true,
        });
    }
    Ok(PhaseEstimate {
        theta: (z.arg() / std::f64::consts::TAU).rem_euclid(1.0),
        degenerate: false,
    })
}

/// Counts adapter for [`estimate_phase_circular`].
pub fn estimate_phase_from_counts(counts: &[u64]) -> Result<PhaseEstimate, OptimizerError> {
    let weights: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    estimate_phase_circular(&weights)
}

/// Two-run read-out: estimate the phase from the full distribution at
/// `θ_R = 0`, then evaluate the metric at the estimate.
fn alternative_scan(
    ev: &mut Evaluator,
    input: &PreparedInput,
    range: Option<PhaseRange>,
) -> Result<(f64, f64), OptimizerError> {
    let weights = ev.distribution_weights(input, RotationPhase::new(0.0));
    let estimate = estimate_phase_circular(&weights)?;
    let theta = match range {
        Some(r) => r.clamp_circular(estimate.theta),
        None => estimate.theta,
    };
    let c = ev.bin0(input, RotationPhase::new(theta));
    Ok((c, theta))
}

fn evaluate_with(
    ev: &mut Evaluator,
    input: &PreparedInput,
    config: &OptimizerConfig,
) -> Result<(f64, f64), OptimizerError> {
    match config.method {
        Method::Standard => Ok(standard_scan(
            ev,
            input,
            &config.theta_grid,
            config.restrict_range,
        )),
        Method::Alternative => alternative_scan(ev, input, config.restrict_range),
    }
}

/// Standard-method read-out for a single state: best `(C, θ_R)` over the
/// coarse-to-fine grid.
pub fn evaluate_standard(
    u: &UnitaryOperator,
    phi: &QuantumState,
    config: &OptimizerConfig,
) -> Result<(f64, f64), OptimizerError> {
    config.validate()?;
    let mut ev = Evaluator::new(u, config.dc, config.shots, config.rng_seed)?;
    let input = ev.prepare(phi)?;
    Ok(standard_scan(
        &mut ev,
        &input,
        &config.theta_grid,
        config.restrict_range,
    ))
}

/// Alternative-method read-out for a single state: phase estimate from one
/// full-distribution setting, metric from one confirmation setting.
pub fn evaluate_alternative(
    u: &UnitaryOperator,
    phi: &QuantumState,
    config: &OptimizerConfig,
) -> Result<(f64, f64), OptimizerError> {
    config.validate()?;
    let mut ev = Evaluator::new(u, config.dc, config.shots, config.rng_seed)?;
    let input = ev.prepare(phi)?;
    alternative_scan(&mut ev, &input, config.restrict_range)
}

/// Run a search from a random initial state.
pub fn spea_search(
    u: &UnitaryOperator,
    space: &SearchSpace,
    config: &OptimizerConfig,
) -> Result<EigenPairEstimate, OptimizerError> {
    Ok(search_traced(u, None, space, config)?.0)
}

/// Run a search from a caller-chosen initial state (projected into the
/// excluded-complement first).
pub fn spea_search_from(
    u: &UnitaryOperator,
    initial: &QuantumState,
    space: &SearchSpace,
    config: &OptimizerConfig,
) -> Result<EigenPairEstimate, OptimizerError> {
    Ok(search_traced(u, Some(initial), space, config)?.0)
}

/// Search with diagnostics.
pub fn search_traced(
    u: &UnitaryOperator,
    initial: Option<&QuantumState>,
    space: &SearchSpace,
    config: &OptimizerConfig,
) -> Result<(EigenPairEstimate, SearchTrace), OptimizerError> {
    config.validate()?;
    if space.dim() != u.dim() {
        return Err(OptimizerError::InvalidConfig {
            reason: format!(
                "search space dimension {} does not match operator dimension {}",
                space.dim(),
                u.dim()
            ),
        });
    }
    if space.effective_dim() == 0 {
        return Err(OptimizerError::FullSpaceExcluded);
    }

    let mut trace = SearchTrace::default();
    let mut rng = seeded_rng(config.rng_seed, 0);
    let mut ev = Evaluator::new(u, config.dc, config.shots, config.rng_seed)?;

    let mut phi = match initial {
        Some(s) => {
            assert_eq!(s.dim(), space.dim(), "initial state dimension mismatch");
            let projected = project_off_excluded(s.amplitudes(), space.excluded());
            let v = projected
                .normalized()
                .map_err(|_| OptimizerError::InitialStateExcluded)?;
            QuantumState::new(v).expect("unit norm")
        }
        None => random_initial_state(space, &mut rng)?,
    };
    let mut input = ev.prepare(&phi)?;

    let mut c_star = f64::NEG_INFINITY;
    let mut theta_star = 0.0;
    let mut have_incumbent_value = false;
    let mut converged = false;
    let mut iterations_used = 0;

    for iteration in 1..=config.max_iterations {
        iterations_used = iteration;

        // Step 2: fresh random orthogonal basis including the incumbent.
        let basis = build_basis(&phi, space, &mut rng)?;
        let dim_eff = basis.len();

        // Step 3: evaluate the incumbent. Exact read-outs are reused from
        // the accepting sweep; sampled ones are re-drawn every iteration so
        // comparisons stay unbiased.
        if config.shots > 0 || !have_incumbent_value {
            let (c, t) = evaluate_with(&mut ev, &input, config)?;
            c_star = c;
            theta_star = t;
            have_incumbent_value = true;
        }
        if 1.0 - c_star <= config.stop_gap {
            converged = true;
            break;
        }

        // Steps 4 and 5: perturbation sweeps with step-factor adjustment.
        let mut a = config.a_schedule.initial();
        let mut adjustments = 0;
        loop {
            trace.sweeps += 1;
            let mut updated = false;
            for m in 0..2 * dim_eff {
                let z = if m < dim_eff {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 1.0)
                };
                let direction = &basis[m % dim_eff];
                let coeff = z * a * (1.0 - c_star);
                let raw = phi.amplitudes().axpy(coeff, direction.amplitudes());
                let projected = project_off_excluded(&raw, space.excluded());
                let candidate = match projected.normalized() {
                    Ok(v) => QuantumState::new(v).expect("unit norm"),
                    Err(_) => continue, // perturbation annihilated the state
                };

                trace.proposals += 1;
                trace.max_norm_error = trace
                    .max_norm_error
                    .max((candidate.amplitudes().norm() - 1.0).abs());
                trace.max_excluded_overlap = trace
                    .max_excluded_overlap
                    .max(max_excluded_overlap(candidate.amplitudes(), space.excluded()));

                let cand_input = ev.prepare(&candidate)?;
                let (c_cand, t_cand) = evaluate_with(&mut ev, &cand_input, config)?;
                if c_cand > c_star {
                    phi = candidate;
                    input = cand_input;
                    c_star = c_cand;
                    theta_star = t_cand;
                    updated = true;
                    trace.accepted_c.push(c_cand);
                }
            }
            if updated || adjustments >= MAX_STEP_ADJUSTMENTS {
                break;
            }
            a = config.a_schedule.next(a);
            adjustments += 1;
        }

        // Step 6.
        if 1.0 - c_star <= config.stop_gap {
            converged = true;
            break;
        }
    }

    trace.circuit_settings = ev.settings_used();
    let estimate = EigenPairEstimate {
        state: phi,
        phase: theta_star.rem_euclid(1.0),
        c_star,
        iterations_used,
        converged,
    };
    Ok((estimate, trace))
}
