use num_complex::Complex64;
use rand::Rng;

use super::{
    gram_schmidt, random_complex_vector, unitarity_check, ComplexMatrix, ComplexVector,
    QmathError, HERMITICITY_TOLERANCE, UNITARITY_TOLERANCE,
};

/// Sweep budget for the cyclic Jacobi iteration.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius norm below which Jacobi declares convergence.
const JACOBI_OFF_THRESHOLD: f64 = 1e-12;

/// Spectral pairs of a Hermitian or unitary matrix.
///
/// Eigenvalues are stored as complex numbers: purely real for the Hermitian
/// case (ascending), unit-modulus for the unitary case. Eigenvectors are
/// orthonormal, with the global phase fixed so each vector's
/// largest-modulus entry is real positive.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Vec<Complex64>,
    vectors: Vec<ComplexVector>,
}

impl EigenSystem {
    pub fn new(values: Vec<Complex64>, vectors: Vec<ComplexVector>) -> Self {
        assert_eq!(values.len(), vectors.len(), "eigensystem length mismatch");
        Self { values, vectors }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, ComplexVector::dim)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    /// Real parts of the eigenvalues, for the Hermitian case.
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Eigenphases in cycles: `θ_k = arg(λ_k) / 2π` mapped to `[0, 1)`.
    pub fn phases_cycles(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| (v.arg() / std::f64::consts::TAU).rem_euclid(1.0))
            .collect()
    }

    /// `Σ_k λ_k |v_k⟩⟨v_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (val, vec) in self.values.iter().zip(&self.vectors) {
            out = out.add(&vec.outer(vec).scaled(*val));
        }
        out
    }

    /// Map each eigenvalue `λ` to `e^{iλ}` keeping the eigenvectors; turns a
    /// Hamiltonian spectrum into the spectrum of its unitary exponential.
    pub fn exponentiated(&self) -> Self {
        let values = self
            .values
            .iter()
            .map(|v| Complex64::new(0.0, v.re).exp())
            .collect();
        Self {
            values,
            vectors: self.vectors.clone(),
        }
    }

    /// Max |⟨v_i|v_j⟩ - δ_ij| over all pairs.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.vectors.len() {
            for j in 0..self.vectors.len() {
                let g = self.vectors[i].inner(&self.vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

fn hermiticity_defect(h: &ComplexMatrix) -> f64 {
    h.max_abs_diff(&h.adjoint())
}

fn off_diagonal_norm(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += h.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Fix the global phase of `v` so its largest-modulus entry is real positive.
fn canonicalize_phase(v: &ComplexVector) -> ComplexVector {
    let mut best = 0;
    let mut best_mod = 0.0;
    for (i, e) in v.entries().iter().enumerate() {
        let m = e.norm();
        if m > best_mod + 1e-15 {
            best_mod = m;
            best = i;
        }
    }
    let pivot = v.entries()[best];
    if pivot.norm() < 1e-300 {
        return v.clone();
    }
    v.scaled(pivot.conj() / pivot.norm())
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending and real; eigenvectors orthonormal by
/// construction (accumulated product of plane rotations).
pub fn hermitian_eigendecompose(h: &ComplexMatrix) -> Result<EigenSystem, QmathError> {
    assert!(h.is_square(), "eigendecomposition of non-square matrix");
    if !h.is_finite() {
        return Err(QmathError::NonFinite {
            context: "hermitian_eigendecompose input".into(),
        });
    }
    let defect = hermiticity_defect(h);
    if defect > HERMITICITY_TOLERANCE {
        return Err(QmathError::NotHermitian { defect });
    }

    let n = h.rows();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_OFF_THRESHOLD {
            converged = true;
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let abs_apq = apq.norm();
                if abs_apq < JACOBI_OFF_THRESHOLD / (n as f64 * 10.0) {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // Rotation angle zeroing the (p,q) entry of the 2x2 block
                // [[app, apq], [conj(apq), aqq]].
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = {
                    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                    -sign / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = apq / abs_apq;

                // Plane rotation in the (p,q) plane with the off-diagonal
                // phase absorbed.
                let mut g = ComplexMatrix::identity(n);
                g.set(p, p, Complex64::new(c, 0.0));
                g.set(p, q, -phase * s);
                g.set(q, p, phase.conj() * s);
                g.set(q, q, Complex64::new(c, 0.0));

                a = g.adjoint().mul(&a).mul(&g);
                v = v.mul(&g);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= JACOBI_OFF_THRESHOLD {
        return Err(QmathError::NoConvergence {
            off_norm: off_diagonal_norm(&a),
            sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));

    let values = order
        .iter()
        .map(|&k| Complex64::new(a.get(k, k).re, 0.0))
        .collect();
    let vectors = order
        .iter()
        .map(|&k| canonicalize_phase(&v.column(k)))
        .collect();
    Ok(EigenSystem::new(values, vectors))
}

/// Unitary exponential `e^{iH}` of a Hermitian matrix, via its
/// eigendecomposition.
pub fn hermitian_exponential(h: &ComplexMatrix) -> Result<ComplexMatrix, QmathError> {
    let eig = hermitian_eigendecompose(h)?;
    Ok(eig.exponentiated().reconstruct())
}

/// Mixing angles tried when reducing a unitary eigenproblem to a Hermitian
/// one. Generic irrational-ish values; the first almost always works, the
/// rest are fallbacks for accidental eigenvalue collisions in the mix.
const MIXING_ANGLES: [f64; 4] = [
    0.618_033_988_749_894_9,
    1.324_717_957_244_746,
    0.754_877_666_246_692_7,
    0.209_879_258_67,
];

/// Eigendecomposition of a unitary matrix.
///
/// Writes `U = A + iB` with Hermitian `A = (U + U†)/2`, `B = (U - U†)/2i`
/// (which commute for normal `U`), runs Jacobi on a generic real combination
/// `cos(g)·A + sin(g)·B`, and reads each eigenvalue back off the Rayleigh
/// quotient. A reconstruction check guards against collisions in the
/// combination; on failure the mixing angle is changed and the reduction
/// rerun.
pub fn unitary_eigendecompose(u: &ComplexMatrix) -> Result<EigenSystem, QmathError> {
    assert!(u.is_square(), "eigendecomposition of non-square matrix");
    if !unitarity_check(u, UNITARITY_TOLERANCE) {
        let defect = u
            .adjoint()
            .mul(u)
            .max_abs_diff(&ComplexMatrix::identity(u.rows()));
        return Err(QmathError::NotUnitary { defect });
    }

    let half = Complex64::new(0.5, 0.0);
    let adj = u.adjoint();
    let a = u.add(&adj).scaled(half);
    let b = u.sub(&adj).scaled(Complex64::new(0.0, -0.5));

    let mut last_err = QmathError::NoConvergence {
        off_norm: f64::NAN,
        sweeps: 0,
    };
    for &g in &MIXING_ANGLES {
        let mix = a
            .scaled(Complex64::new(g.cos(), 0.0))
            .add(&b.scaled(Complex64::new(g.sin(), 0.0)));
        let eig = match hermitian_eigendecompose(&mix) {
            Ok(e) => e,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let values: Vec<Complex64> = eig
            .vectors()
            .iter()
            .map(|v| {
                let uv = u.mul_vec(v);
                let rq = v.inner(&uv);
                rq / rq.norm()
            })
            .collect();
        let candidate = EigenSystem::new(values, eig.vectors().to_vec());
        if candidate.reconstruct().max_abs_diff(u) <= 1e-8 {
            return Ok(candidate);
        }
        last_err = QmathError::NoConvergence {
            off_norm: candidate.reconstruct().max_abs_diff(u),
            sweeps: JACOBI_MAX_SWEEPS,
        };
    }
    Err(last_err)
}

/// Random orthonormal basis of the given dimension (Gram-Schmidt over
/// standard-normal complex vectors).
pub fn random_orthonormal_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<ComplexVector> {
    loop {
        let seeds: Vec<ComplexVector> =
            (0..dim).map(|_| random_complex_vector(dim, rng)).collect();
        // Dependence of Gaussian draws has probability zero; retry on the
        // numerical fluke.
        if let Ok(basis) = gram_schmidt(&seeds) {
            return basis;
        }
    }
}

/// Haar-flavoured random unitary (the matrix whose columns are a random
/// orthonormal basis).
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_columns(&random_orthonormal_basis(dim, rng))
}

/// Random unitary with a known spectrum: draws a random orthonormal basis
/// and uniform eigenphases in `[0, 1)`, and returns both the assembled
/// matrix and its exact eigensystem.
pub fn random_unitary_with_spectrum<R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> (ComplexMatrix, EigenSystem) {
    let basis = random_orthonormal_basis(dim, rng);
    let values: Vec<Complex64> = (0..dim)
        .map(|_| {
            let theta: f64 = rng.gen::<f64>();
            Complex64::new(0.0, std::f64::consts::TAU * theta).exp()
        })
        .collect();
    let eig = EigenSystem::new(values, basis);
    (eig.reconstruct(), eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn diagonal_matrix_decomposes_trivially() {
        let h = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0],
            &[0.0, 2.0, 0.0],
            &[0.0, 0.0, 3.0],
        ]);
        let eig = hermitian_eigendecompose(&h).unwrap();
        assert_eq!(eig.real_values(), vec![1.0, 2.0, 3.0]);
        for (k, v) in eig.vectors().iter().enumerate() {
            let overlap = v.inner(&ComplexVector::basis_state(3, k));
            assert!((overlap.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigendecompose(&m),
            Err(QmathError::NotHermitian { .. })
        ));
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..5 {
            let raw = random_unitary(6, &mut rng);
            // Symmetrize to get a generic Hermitian matrix.
            let h = raw.add(&raw.adjoint()).scaled(Complex64::new(0.5, 0.0));
            let eig = hermitian_eigendecompose(&h).unwrap();
            assert!(eig.reconstruct().max_abs_diff(&h) < 1e-8);
            assert!(eig.orthonormality_defect() < 1e-10);
        }
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(3, 3);
        let u = hermitian_exponential(&z).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn exponential_inverse_pairs_cancel() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let raw = random_unitary(4, &mut rng);
        let h = raw.add(&raw.adjoint()).scaled(Complex64::new(0.5, 0.0));
        let u = hermitian_exponential(&h).unwrap();
        let u_inv = hermitian_exponential(&h.scaled(Complex64::new(-1.0, 0.0))).unwrap();
        assert!(u.mul(&u_inv).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-9);
        assert!(unitarity_check(&u, 1e-10));
    }

    #[test]
    fn unitary_eigendecompose_recovers_constructed_spectrum() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        for dim in [2usize, 3, 5, 8] {
            let (u, truth) = random_unitary_with_spectrum(dim, &mut rng);
            let eig = unitary_eigendecompose(&u).unwrap();
            assert!(eig.reconstruct().max_abs_diff(&u) < 1e-8);
            // Every recovered phase appears in the constructed spectrum.
            let mut truth_phases = truth.phases_cycles();
            for phase in eig.phases_cycles() {
                let (idx, dist) = truth_phases
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (i, crate::proximity::phase_diff(phase, *t).abs()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                assert!(dist < 1e-9, "phase {phase} missing from construction");
                truth_phases.remove(idx);
            }
        }
    }

    #[test]
    fn degenerate_unitary_decomposes() {
        // Identity block plus one distinct phase; the degenerate subspace may
        // come back in any orthonormal basis, but reconstruction must hold.
        let values = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ];
        let vectors = vec![
            ComplexVector::basis_state(3, 0),
            ComplexVector::basis_state(3, 1),
            ComplexVector::basis_state(3, 2),
        ];
        let u = EigenSystem::new(values, vectors).reconstruct();
        let eig = unitary_eigendecompose(&u).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&u) < 1e-10);
    }
}
