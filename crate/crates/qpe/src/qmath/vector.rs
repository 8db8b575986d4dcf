use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, QmathError, DEPENDENCE_THRESHOLD};

/// Dense complex vector of dimensionless amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    /// Wrap raw amplitudes.
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    /// Zero vector of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = Self::zeros(dim);
        v.data[index] = Complex64::new(1.0, 0.0);
        v
    }

    /// Vector with the given real components.
    pub fn from_real(entries: &[f64]) -> Self {
        Self {
            data: entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `self * s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector add dimension mismatch");
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self + s * other`, the workhorse of orthogonalization loops.
    pub fn axpy(&self, s: Complex64, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    /// Unit-norm copy, or `DependentInput` if the norm is numerically zero.
    pub fn normalized(&self) -> Result<Self, QmathError> {
        let n = self.norm();
        if n < DEPENDENCE_THRESHOLD {
            return Err(QmathError::DependentInput { residual: n });
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Outer product `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        let rows = self.dim();
        let cols = other.dim();
        ComplexMatrix::from_fn(rows, cols, |i, j| self.data[i] * other.data[j].conj())
    }

    /// Largest entry modulus.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Copy with the component along each of `directions` removed.
    /// Directions are assumed unit-norm.
    pub fn project_off(&self, directions: &[ComplexVector]) -> Self {
        let mut v = self.clone();
        for d in directions {
            let overlap = d.inner(&v);
            v = v.axpy(-overlap, d);
        }
        v
    }
}

/// Standard-normal complex vector (each entry `N(0,1) + i N(0,1)`), not
/// normalized.
pub fn random_complex_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    let data = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    ComplexVector::new(data)
}

/// Orthonormalize `seed_vectors` by modified Gram-Schmidt with
/// re-orthogonalization.
///
/// The first output vector is the first input normalized; the output spans
/// the same space as the input. Fails with `DependentInput` when a residual
/// norm drops below [`DEPENDENCE_THRESHOLD`].
pub fn gram_schmidt(seed_vectors: &[ComplexVector]) -> Result<Vec<ComplexVector>, QmathError> {
    let mut out: Vec<ComplexVector> = Vec::with_capacity(seed_vectors.len());
    for seed in seed_vectors {
        if let Some(first) = out.first() {
            assert_eq!(seed.dim(), first.dim(), "gram_schmidt dimension mismatch");
        }
        // Two projection passes keep orthogonality near machine precision
        // even for nearly dependent inputs.
        let mut v = seed.project_off(&out);
        v = v.project_off(&out);
        let n = v.norm();
        if n < DEPENDENCE_THRESHOLD {
            return Err(QmathError::DependentInput { residual: n });
        }
        out.push(v.scaled(Complex64::new(1.0 / n, 0.0)));
    }
    Ok(out)
}
