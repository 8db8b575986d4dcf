use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, QmathError};

/// On-disk matrix format: row-major real and imaginary parts.
///
/// ```json
/// { "rows": 2, "cols": 2, "re": [1.0, 0.0, 0.0, 1.0], "im": [0.0, 0.0, 0.0, 0.0] }
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.entries().iter().map(|c| c.re).collect(),
            im: m.entries().iter().map(|c| c.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, QmathError> {
        let expected = self.rows * self.cols;
        if self.rows == 0 || self.cols == 0 || self.re.len() != expected || self.im.len() != expected
        {
            return Err(QmathError::DimensionMismatch {
                context: format!(
                    "matrix file declares {}x{} but carries {} real / {} imaginary entries",
                    self.rows,
                    self.cols,
                    self.re.len(),
                    self.im.len()
                ),
            });
        }
        let data: Vec<Complex64> = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        let m = ComplexMatrix::new(self.rows, self.cols, data);
        if !m.is_finite() {
            return Err(QmathError::NonFinite {
                context: "matrix file entries".into(),
            });
        }
        Ok(m)
    }
}
