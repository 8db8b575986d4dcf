//! Closed-form metric layer: the bin-0 probability curve, the analytic
//! proximity metric, wrapped phase arithmetic, and the a-posteriori quality
//! bounds for a finished search.
//!
//! All phases are in cycles. The bin-0 probability for an eigenstate offset
//! `Δθ` on a `d_c`-level control is the Fejér-kernel shape
//! `sin²(π d_c Δθ) / (d_c² sin²(π Δθ))`, with central lobe `|Δθ| < 1/d_c`
//! and secondary maxima (sidelobes) outside it.

use thiserror::Error;

use crate::circuit::{QuantumState, RotationPhase};
use crate::qmath::EigenSystem;

/// Result of one proximity read-out. `shots_used == 0` marks an exact value;
/// otherwise `c_value` is a sample mean with denominator `shots_used`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityEvaluation {
    pub c_value: f64,
    pub shots_used: u64,
    pub theta_r: RotationPhase,
}

/// Phase and fidelity guarantees derived from a final metric value.
///
/// `max_phase_distance` and `fidelity_floor` are only populated when the
/// lobe condition holds (the metric exceeds every sidelobe maximum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityBound {
    pub lobe_condition_met: bool,
    pub max_phase_distance: Option<f64>,
    pub fidelity_floor: Option<f64>,
    pub delta: f64,
}

/// Errors raised by the metric layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProximityError {
    /// The metric value sits at or below the sidelobe ceiling, so the curve
    /// cannot be inverted on the primary lobe.
    #[error("metric value {c_star} is not above the sidelobe maximum {sidelobe} for dc = {dc}")]
    OutsideLobe { c_star: f64, sidelobe: f64, dc: usize },
    /// The near-degeneracy half-width must lie in `[0, 1/dc]`.
    #[error("delta {delta} outside [0, {max}]")]
    InvalidDelta { delta: f64, max: f64 },
}

/// Below this, `sin(π Δθ)` is treated as zero and the removable singularity
/// value 1 is returned.
const SINGULARITY_GUARD: f64 = 1e-9;

/// Probability of control outcome `0` for an eigenstate input at phase
/// offset `dtheta` (cycles), on a `dc`-level control. Periodic with period 1.
pub fn p0(dtheta: f64, dc: usize) -> f64 {
    assert!(dc >= 2, "control dimension must be at least 2");
    let x = dtheta.rem_euclid(1.0);
    let s = (std::f64::consts::PI * x).sin();
    if s.abs() < SINGULARITY_GUARD {
        return 1.0;
    }
    let num = (std::f64::consts::PI * dc as f64 * x).sin();
    let d = dc as f64;
    (num * num) / (d * d * s * s)
}

/// Analytic proximity metric: the overlap-weighted average of [`p0`] over a
/// unitary's spectrum. Serves as the oracle for the circuit read-out.
pub fn c_analytic(
    spectrum: &EigenSystem,
    phi: &QuantumState,
    theta_r: RotationPhase,
    dc: usize,
) -> f64 {
    let phases = spectrum.phases_cycles();
    spectrum
        .vectors()
        .iter()
        .zip(&phases)
        .map(|(v, &theta)| {
            let w = v.inner(phi.amplitudes()).norm_sqr();
            w * p0(theta - theta_r.cycles(), dc)
        })
        .sum()
}

/// Wrapped difference `a - b` in cycles, mapped to `[-0.5, 0.5)`.
pub fn phase_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    if d >= 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// Maximum of [`p0`] over the sidelobe region `ζ ∈ [1/dc, 1/2]`: dense grid
/// scan followed by golden-section refinement.
pub fn sidelobe_max(dc: usize) -> f64 {
    assert!(dc >= 2, "control dimension must be at least 2");
    let lo = 1.0 / dc as f64;
    let hi = 0.5;
    if lo >= hi {
        // dc = 2: the region is the single point 1/2, where p0 vanishes.
        return p0(hi, dc);
    }

    const GRID: usize = 20_000;
    let mut best_x = lo;
    let mut best = p0(lo, dc);
    for i in 0..=GRID {
        let x = lo + (hi - lo) * i as f64 / GRID as f64;
        let v = p0(x, dc);
        if v > best {
            best = v;
            best_x = x;
        }
    }

    // Golden-section around the best grid point.
    let step = (hi - lo) / GRID as f64;
    let mut a = (best_x - step).max(lo);
    let mut b = (best_x + step).min(hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-10 {
        let c = b - inv_phi * (b - a);
        let d = a + inv_phi * (b - a);
        if p0(c, dc) >= p0(d, dc) {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(p0(0.5 * (a + b), dc))
}

/// Invert [`p0`] on the primary lobe: the unique `ζ ∈ [0, 1/dc]` with
/// `p0(ζ) = c_star`, by bisection. Requires `c_star` above the sidelobe
/// maximum (the lobe condition), which also guarantees uniqueness.
pub fn p0_inverse(c_star: f64, dc: usize) -> Result<f64, ProximityError> {
    let sidelobe = sidelobe_max(dc);
    if c_star <= sidelobe || c_star > 1.0 {
        return Err(ProximityError::OutsideLobe {
            c_star,
            sidelobe,
            dc,
        });
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0 / dc as f64;
    // p0 is monotone decreasing from 1 to 0 on [0, 1/dc].
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if p0(mid, dc) >= c_star {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Quality guarantees for a finished search that reported metric value
/// `c_star` at rotation setting `theta_r`.
///
/// When the lobe condition holds, `max_phase_distance` bounds the wrapped
/// distance from `theta_r` to the nearest eigenphase, and `fidelity_floor`
/// lower-bounds the squared overlap between the reported state and the
/// eigenspace whose phases lie within `±delta` of `theta_r`. The floor is
/// clamped to `[0, 1]`; values at 0 mean the bound is vacuous for that
/// `delta`.
pub fn quality_bound(
    c_star: f64,
    theta_r: RotationPhase,
    dc: usize,
    delta: f64,
) -> Result<QualityBound, ProximityError> {
    let lobe_width = 1.0 / dc as f64;
    if !(0.0..=lobe_width).contains(&delta) {
        return Err(ProximityError::InvalidDelta {
            delta,
            max: lobe_width,
        });
    }
    let _ = theta_r; // the bound depends only on the metric value
    let lobe_condition_met = c_star > sidelobe_max(dc);
    if !lobe_condition_met {
        return Ok(QualityBound {
            lobe_condition_met,
            max_phase_distance: None,
            fidelity_floor: None,
            delta,
        });
    }
    let max_phase_distance = p0_inverse(c_star, dc)?;
    let p_delta = p0(delta, dc);
    let fidelity_floor = if (1.0 - p_delta).abs() < 1e-15 {
        // delta = 0: the bound degenerates; it is tight only for an exact
        // eigenpair.
        if c_star >= 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        ((c_star - p_delta) / (1.0 - p_delta)).clamp(0.0, 1.0)
    };
    Ok(QualityBound {
        lobe_condition_met,
        max_phase_distance: Some(max_phase_distance),
        fidelity_floor: Some(fidelity_floor),
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QuantumState;
    use crate::qmath::{ComplexVector, EigenSystem};
    use num_complex::Complex64;

    #[test]
    fn p0_anchor_values() {
        for dc in [2usize, 3, 4, 8, 16] {
            assert!((p0(0.0, dc) - 1.0).abs() < 1e-15);
            assert!(p0(1.0 / dc as f64, dc) < 1e-12);
        }
        assert!((p0(0.25, 2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phase_diff_wraps_like_the_worked_examples() {
        assert!((phase_diff(0.125, 0.75) - 0.375).abs() < 1e-15);
        assert!((phase_diff(0.75, 0.125) + 0.375).abs() < 1e-15);
        assert_eq!(phase_diff(0.3, 0.3), 0.0);
    }

    #[test]
    fn sidelobe_values_match_curve_markers() {
        assert!(sidelobe_max(2).abs() < 1e-12);
        assert!((sidelobe_max(3) - 0.11111).abs() < 1e-4);
        assert!((sidelobe_max(4) - 0.074074).abs() < 1e-4);
        assert!((sidelobe_max(8) - 0.052513).abs() < 1e-4);
        assert!((sidelobe_max(16) - 0.048453).abs() < 1e-4);
    }

    #[test]
    fn p0_inverse_examples() {
        for dc in [2usize, 3, 4] {
            assert!(p0_inverse(1.0, dc).unwrap() < 1e-11);
        }
        assert!((p0_inverse(0.5, 2).unwrap() - 0.25).abs() < 1e-10);
        assert!(matches!(
            p0_inverse(0.05, 3),
            Err(ProximityError::OutsideLobe { .. })
        ));
    }

    #[test]
    fn quality_bound_examples() {
        let exact = quality_bound(1.0, RotationPhase::new(0.0), 2, 0.0).unwrap();
        assert!(exact.lobe_condition_met);
        assert!(exact.max_phase_distance.unwrap() < 1e-11);
        assert_eq!(exact.fidelity_floor.unwrap(), 1.0);

        let b = quality_bound(0.9, RotationPhase::new(0.1), 2, 0.25).unwrap();
        assert!((b.fidelity_floor.unwrap() - 0.8).abs() < 1e-12);

        let below = quality_bound(0.05, RotationPhase::new(0.0), 3, 0.1).unwrap();
        assert!(!below.lobe_condition_met);
        assert!(below.max_phase_distance.is_none());
        assert!(below.fidelity_floor.is_none());

        assert!(matches!(
            quality_bound(0.9, RotationPhase::new(0.0), 4, 0.3),
            Err(ProximityError::InvalidDelta { .. })
        ));
    }

    #[test]
    fn c_analytic_is_one_exactly_at_an_eigenpair() {
        let vectors = vec![
            ComplexVector::basis_state(2, 0),
            ComplexVector::basis_state(2, 1),
        ];
        let values = vec![
            Complex64::new(0.0, std::f64::consts::TAU * 0.2).exp(),
            Complex64::new(0.0, std::f64::consts::TAU * 0.7).exp(),
        ];
        let spectrum = EigenSystem::new(values, vectors);
        let phi = QuantumState::basis(2, 0);
        let c = c_analytic(&spectrum, &phi, RotationPhase::new(0.2), 3);
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_superposition_over_lobe_zero_gives_half() {
        // Two eigenphases: one at theta_r, one exactly one lobe width away.
        let dc = 4usize;
        let theta_r = 0.15;
        let vectors = vec![
            ComplexVector::basis_state(2, 0),
            ComplexVector::basis_state(2, 1),
        ];
        let values = vec![
            Complex64::new(0.0, std::f64::consts::TAU * theta_r).exp(),
            Complex64::new(0.0, std::f64::consts::TAU * (theta_r + 0.25)).exp(),
        ];
        let spectrum = EigenSystem::new(values, vectors);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi =
            QuantumState::new(ComplexVector::from_real(&[s, s])).unwrap();
        let c = c_analytic(&spectrum, &phi, RotationPhase::new(theta_r), dc);
        assert!((c - 0.5).abs() < 1e-12);
    }
}
