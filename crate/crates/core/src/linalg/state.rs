use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::{ComplexMatrix, LinalgError, Verdict};
use crate::config::Tolerances;

/// The first density-matrix invariant a candidate violates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityViolation {
    NotHermitian { defect: f64 },
    NegativeEigenvalue { eigenvalue: f64 },
    TraceNotOne { trace_re: f64, trace_im: f64 },
}

impl fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityViolation::NotHermitian { defect } => {
                write!(f, "not Hermitian (defect {defect:.3e})")
            }
            DensityViolation::NegativeEigenvalue { eigenvalue } => {
                write!(f, "negative eigenvalue {eigenvalue:.3e}")
            }
            DensityViolation::TraceNotOne { trace_re, trace_im } => {
                write!(f, "trace {trace_re}{trace_im:+}i is not one")
            }
        }
    }
}

/// Checks the three state invariants in order: Hermiticity, positivity, unit trace.
pub fn is_density_matrix(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<Verdict<DensityViolation>, LinalgError> {
    m.require_square()?;
    let defect = m.hermiticity_defect();
    if defect > tol.eps_herm {
        return Ok(Verdict::Fail(DensityViolation::NotHermitian { defect }));
    }
    let eigenvalues = m.hermitian_eigenvalues()?;
    if let Some(&lowest) = eigenvalues.first() {
        if lowest < -tol.eps_psd {
            return Ok(Verdict::Fail(DensityViolation::NegativeEigenvalue {
                eigenvalue: lowest,
            }));
        }
    }
    let trace = m.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > tol.eps_tr {
        return Ok(Verdict::Fail(DensityViolation::TraceNotOne {
            trace_re: trace.re,
            trace_im: trace.im,
        }));
    }
    Ok(Verdict::Pass)
}

/// A positive semidefinite, unit-trace, Hermitian matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self, LinalgError> {
        if matrix.rows() > tol.max_dim {
            return Err(LinalgError::DimensionCap {
                dim: matrix.rows(),
                cap: tol.max_dim,
            });
        }
        match is_density_matrix(&matrix, tol)? {
            Verdict::Pass => Ok(DensityMatrix { matrix }),
            Verdict::Fail(v) => Err(LinalgError::NotDensity(v)),
        }
    }

    /// The 1x1 state `1`, the unique state of the trivial system.
    pub fn scalar_one() -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(1),
        }
    }

    /// `|k><k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::matrix_unit(dim, k, k),
        }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// `|psi><psi|` for a normalized copy of `amplitudes`.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self, LinalgError> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(LinalgError::Shape("zero vector has no pure state".into()));
        }
        let v = ComplexMatrix::column(amplitudes.iter().map(|a| a / norm).collect());
        Ok(DensityMatrix {
            matrix: v.matmul(&v.adjoint())?,
        })
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probabilities: &[f64], tol: &Tolerances) -> Result<Self, LinalgError> {
        Self::new(ComplexMatrix::diag(probabilities), tol)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `p * self + (1 - p) * other`, which is again a state for `p` in `[0, 1]`.
    pub fn mix(&self, p: f64, other: &DensityMatrix) -> Result<DensityMatrix, LinalgError> {
        let m = self
            .matrix
            .scale_real(p)
            .add(&other.matrix.scale_real(1.0 - p))?;
        Ok(DensityMatrix { matrix: m })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.matrix)
    }
}

/// Trace distance `(1/2) sum |eig(rho - sigma)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, LinalgError> {
    if rho.dim() != sigma.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let diff = rho.matrix.sub(&sigma.matrix)?;
    Ok(0.5 * diff.hermitian_eigenvalues()?.iter().map(|e| e.abs()).sum::<f64>())
}
