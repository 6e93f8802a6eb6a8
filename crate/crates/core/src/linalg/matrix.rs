use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::LinalgError;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    /// Square diagonal matrix with real entries.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = Complex64::new(*v, 0.0);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Column vector.
    pub fn column(values: Vec<Complex64>) -> Self {
        let n = values.len();
        ComplexMatrix {
            rows: n,
            cols: 1,
            entries: values,
        }
    }

    /// Computational basis ket `|k>` in dimension `dim` as a column.
    pub fn basis_ket(dim: usize, k: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        Self::column(v)
    }

    /// `|i><j|` in dimension `dim`.
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m.entries[i * dim + j] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.cols + c] = v;
    }

    /// Rows as vectors, for serialization.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs.entries[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::Shape(format!(
                "{}x{} and {}x{} differ in shape",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.entries[(i * rhs.rows + k) * cols + j * rhs.cols + l] =
                            a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - rhs`; infinite when shapes differ.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        match self.sub(rhs) {
            Ok(d) => d.entries.iter().map(|x| x.norm()).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `(m + m^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (o, a) in out.entries.iter_mut().zip(&adj.entries) {
            *o = (*o + a) * 0.5;
        }
        out
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                out.entries[r * m.ncols() + c] = m[(r, c)];
            }
        }
        out
    }

    /// Ascending eigenvalues of the Hermitian part of a square matrix.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        self.require_square()?;
        if self.rows == 0 {
            return Ok(Vec::new());
        }
        let mut values: Vec<f64> = self
            .hermitian_part()
            .to_nalgebra()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Eigen-decomposition of the Hermitian part: ascending eigenvalues with
    /// unit eigenvectors as columns.
    pub fn hermitian_eigen(&self) -> Result<Vec<(f64, Vec<Complex64>)>, LinalgError> {
        self.require_square()?;
        let eig = self.hermitian_part().to_nalgebra().symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<Complex64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, eig.eigenvectors.column(i).iter().copied().collect()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(pairs)
    }

    pub(crate) fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::Shape(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_wrong_entry_count() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
    }

    #[test]
    fn kron_of_units_indexes_as_expected() {
        let a = ComplexMatrix::matrix_unit(2, 0, 1);
        let b = ComplexMatrix::matrix_unit(3, 2, 0);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 6);
        assert_eq!(k.get(2, 3), ONE);
        assert_eq!(k.entries().iter().filter(|z| **z != ZERO).count(), 1);
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let y = ComplexMatrix::from_rows(vec![vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]])
            .unwrap();
        let ev = y.hermitian_eigenvalues().unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvectors_reconstruct_the_matrix() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.5, 0.25), ZERO],
            vec![c(0.5, -0.25), c(1.0, 0.0), c(0.0, 0.3)],
            vec![ZERO, c(0.0, -0.3), c(0.5, 0.0)],
        ])
        .unwrap();
        let mut rebuilt = ComplexMatrix::zeros(3, 3);
        for (value, vector) in m.hermitian_eigen().unwrap() {
            let v = ComplexMatrix::column(vector);
            let proj = v.matmul(&v.adjoint()).unwrap().scale_real(value);
            rebuilt = rebuilt.add(&proj).unwrap();
        }
        assert!(rebuilt.max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn non_square_eigen_is_a_shape_error() {
        assert!(ComplexMatrix::zeros(2, 3).hermitian_eigenvalues().is_err());
    }
}
