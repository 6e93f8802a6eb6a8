use std::fmt;

use serde::Serialize;

use super::matrix::ZERO;
use super::{ComplexMatrix, DensityMatrix, LinalgError, Verdict};
use crate::config::Tolerances;

/// Why a Kraus set fails to be CPTP.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CptpViolation {
    NotTracePreserving { defect: f64 },
    NotCompletelyPositive { min_choi_eigenvalue: f64 },
}

impl fmt::Display for CptpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CptpViolation::NotTracePreserving { defect } => {
                write!(f, "not trace preserving (|sum K^dag K - I| = {defect:.3e})")
            }
            CptpViolation::NotCompletelyPositive { min_choi_eigenvalue } => write!(
                f,
                "not completely positive (Choi eigenvalue {min_choi_eigenvalue:.3e})"
            ),
        }
    }
}

/// A linear map `rho -> sum_i K_i rho K_i^dag` in Kraus form.
#[derive(Clone, PartialEq)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Every operator must be `out_dim x in_dim`.
    pub fn new(in_dim: usize, out_dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self, LinalgError> {
        if kraus.is_empty() {
            return Err(LinalgError::Shape("a channel needs at least one Kraus operator".into()));
        }
        if let Some((i, k)) = kraus
            .iter()
            .enumerate()
            .find(|(_, k)| k.rows() != out_dim || k.cols() != in_dim)
        {
            return Err(LinalgError::Shape(format!(
                "Kraus operator {i} is {}x{}, expected {out_dim}x{in_dim}",
                k.rows(),
                k.cols()
            )));
        }
        Ok(KrausChannel {
            in_dim,
            out_dim,
            kraus,
        })
    }

    /// Infers dimensions from the first operator.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self, LinalgError> {
        let (out_dim, in_dim) = kraus
            .first()
            .map(|k| (k.rows(), k.cols()))
            .ok_or_else(|| LinalgError::Shape("empty Kraus set".into()))?;
        Self::new(in_dim, out_dim, kraus)
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel {
            in_dim: dim,
            out_dim: dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Conjugation by a (square) unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self, LinalgError> {
        u.require_square()?;
        let d = u.rows();
        Self::new(d, d, vec![u])
    }

    /// Rebuilds a minimal Kraus set from a Choi matrix `J = sum_ij E_ij ⊗ Phi(E_ij)`.
    /// Eigenvalues at or below `cutoff` are dropped.
    pub fn from_choi(
        in_dim: usize,
        out_dim: usize,
        choi: &ComplexMatrix,
        cutoff: f64,
    ) -> Result<Self, LinalgError> {
        if choi.rows() != in_dim * out_dim || !choi.is_square() {
            return Err(LinalgError::Shape(format!(
                "Choi matrix must be {n}x{n}",
                n = in_dim * out_dim
            )));
        }
        let mut kraus = Vec::new();
        for (value, vector) in choi.hermitian_eigen()?.into_iter().rev() {
            if value <= cutoff {
                continue;
            }
            let s = value.sqrt();
            let mut k = ComplexMatrix::zeros(out_dim, in_dim);
            for i in 0..in_dim {
                for o in 0..out_dim {
                    k.set(o, i, vector[i * out_dim + o] * s);
                }
            }
            kraus.push(k);
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(out_dim, in_dim));
        }
        Self::new(in_dim, out_dim, kraus)
    }

    /// The preparation channel `z -> z rho` from the trivial system.
    pub fn preparation(rho: &DensityMatrix) -> Self {
        Self::from_choi(1, rho.dim(), rho.matrix(), 0.0)
            .expect("a density matrix is a valid 1-input Choi matrix")
    }

    /// The replacement channel `X -> Tr(X) sigma`.
    pub fn replacement(in_dim: usize, sigma: &DensityMatrix) -> Self {
        let choi = ComplexMatrix::identity(in_dim).kron(sigma.matrix());
        Self::from_choi(in_dim, sigma.dim(), &choi, 0.0)
            .expect("identity ⊗ state is a valid Choi matrix")
    }

    /// Discards the input, landing on the trivial system.
    pub fn trace_out(in_dim: usize) -> Self {
        Self::replacement(in_dim, &DensityMatrix::scalar_one())
    }

    /// Measures in the computational basis and prepares `outputs[k]` on outcome `k`.
    pub fn measure_prepare(in_dim: usize, outputs: &[DensityMatrix]) -> Result<Self, LinalgError> {
        if outputs.len() != in_dim {
            return Err(LinalgError::Shape(format!(
                "{} outputs for {in_dim} outcomes",
                outputs.len()
            )));
        }
        let out_dim = outputs[0].dim();
        let mut choi = ComplexMatrix::zeros(in_dim * out_dim, in_dim * out_dim);
        for (k, sigma) in outputs.iter().enumerate() {
            if sigma.dim() != out_dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: out_dim,
                    found: sigma.dim(),
                });
            }
            choi = choi.add(&ComplexMatrix::matrix_unit(in_dim, k, k).kron(sigma.matrix()))?;
        }
        Self::from_choi(in_dim, out_dim, &choi, 0.0)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `Phi(X)` for an arbitrary `in_dim x in_dim` operator.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if x.rows() != self.in_dim || x.cols() != self.in_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.in_dim,
                found: x.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out = out.add(&k.matmul(x)?.matmul(&k.adjoint())?)?;
        }
        Ok(out)
    }

    /// `J(Phi) = sum_ij E_ij ⊗ Phi(E_ij)`, indexed `(i*out + k, j*out + l)`.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let n = self.in_dim * self.out_dim;
        let mut choi = ComplexMatrix::zeros(n, n);
        for i in 0..self.in_dim {
            for j in 0..self.in_dim {
                // Phi(E_ij) = sum_m K_m|i><j|K_m^dag, column i times conj column j.
                for k in &self.kraus {
                    for a in 0..self.out_dim {
                        let ka = k.get(a, i);
                        if ka == ZERO {
                            continue;
                        }
                        for b in 0..self.out_dim {
                            let idx_r = i * self.out_dim + a;
                            let idx_c = j * self.out_dim + b;
                            let cur = choi.get(idx_r, idx_c);
                            choi.set(idx_r, idx_c, cur + ka * k.get(b, j).conj());
                        }
                    }
                }
            }
        }
        choi
    }

    /// Largest entrywise deviation of `sum K^dag K` from the identity.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            sum = sum
                .add(&k.adjoint().matmul(k).expect("Kraus shapes checked"))
                .expect("shapes agree");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.in_dim))
    }

    /// Rewrites the channel with at most `in_dim * out_dim` Kraus operators.
    pub fn compressed(&self) -> Result<Self, LinalgError> {
        if self.kraus.len() <= 1 {
            return Ok(self.clone());
        }
        Self::from_choi(self.in_dim, self.out_dim, &self.choi_matrix(), 1e-14)
    }
}

impl fmt::Debug for KrausChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "KrausChannel({} -> {}, {} ops)",
            self.in_dim,
            self.out_dim,
            self.kraus.len()
        )
    }
}

/// Trace preservation within `eps_tp`, then Choi positivity within `eps_psd`.
pub fn is_cptp(c: &KrausChannel, tol: &Tolerances) -> Result<Verdict<CptpViolation>, LinalgError> {
    let defect = c.trace_preservation_defect();
    if defect > tol.eps_tp {
        return Ok(Verdict::Fail(CptpViolation::NotTracePreserving { defect }));
    }
    let lowest = c
        .choi_matrix()
        .hermitian_eigenvalues()?
        .first()
        .copied()
        .unwrap_or(0.0);
    if lowest < -tol.eps_psd {
        return Ok(Verdict::Fail(CptpViolation::NotCompletelyPositive {
            min_choi_eigenvalue: lowest,
        }));
    }
    Ok(Verdict::Pass)
}

/// `Phi(rho)`, re-checked as a state.
pub fn apply(c: &KrausChannel, rho: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix, LinalgError> {
    let out = c.apply_operator(rho.matrix())?;
    match super::is_density_matrix(&out, tol)? {
        Verdict::Pass => Ok(DensityMatrix::from_trusted(out)),
        Verdict::Fail(v) => Err(LinalgError::NumericalBreakdown(v)),
    }
}

/// `g ∘ f`; the Kraus set is every product `G_i F_j`.
pub fn compose(g: &KrausChannel, f: &KrausChannel) -> Result<KrausChannel, LinalgError> {
    if f.out_dim != g.in_dim {
        return Err(LinalgError::DimensionMismatch {
            expected: g.in_dim,
            found: f.out_dim,
        });
    }
    let mut kraus = Vec::with_capacity(g.kraus.len() * f.kraus.len());
    for gi in &g.kraus {
        for fj in &f.kraus {
            kraus.push(gi.matmul(fj)?);
        }
    }
    KrausChannel::new(f.in_dim, g.out_dim, kraus)
}
