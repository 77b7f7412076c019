//! Dense complex vectors and matrices.
//!
//! The scalar product conjugates its second argument, `(x, y) = Σ x_i·conj(y_i)`,
//! so it is linear in `x` and anti-linear in `y`.

use std::ops::{Index, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative pivot modulus below which a system is declared singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-12;

/// Ratio of largest to smallest pivot modulus above which a solve is
/// reported as ill-conditioned.
pub const ILL_CONDITIONED_PIVOT_RATIO: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn mean(&self) -> Complex64 {
        self.0.iter().sum::<Complex64>() / self.0.len() as f64
    }

    /// Copy with the mean removed.
    pub fn centered(&self) -> Self {
        let m = self.mean();
        Self(self.0.iter().map(|v| v - m).collect())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|v| v.conj()).collect())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn offset(&self, shift: Complex64) -> Self {
        Self(self.0.iter().map(|v| v + shift).collect())
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|v| v.im == 0.0)
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        ComplexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::DimensionMismatch(
                "matrix must be at least 1x1".into(),
            ));
        }
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Design matrix whose columns are `x^0, x^1, …, x^degree`.
    pub fn vandermonde(x: &ComplexVector, degree: usize) -> Self {
        let cols = degree + 1;
        let mut data = Vec::with_capacity(x.len() * cols);
        for &xi in x.iter() {
            let mut p = Complex64::new(1.0, 0.0);
            for _ in 0..cols {
                data.push(p);
                p *= xi;
            }
        }
        Self {
            rows: x.len(),
            cols,
            data,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        Ok(ComplexVector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `(x, y) = Σ x_i·conj(y_i)`.
pub fn scalar_product(x: &ComplexVector, y: &ComplexVector) -> Result<Complex64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum())
}

pub fn norm(x: &ComplexVector) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Distance `‖y − x‖`.
pub fn metric(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(norm(&(y - x)))
}

/// Solution of a square system together with pivot diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub solution: ComplexVector,
    /// Largest over smallest pivot modulus encountered during elimination.
    pub pivot_ratio: f64,
}

impl LinearSolution {
    pub fn is_ill_conditioned(&self) -> bool {
        self.pivot_ratio > ILL_CONDITIONED_PIVOT_RATIO
    }
}

pub fn solve_linear_system(a: &ComplexMatrix, rhs: &ComplexVector) -> Result<ComplexVector> {
    solve_with_diagnostics(a, rhs).map(|s| s.solution)
}

/// Gaussian elimination with partial pivoting on a private copy of `a`.
pub fn solve_with_diagnostics(a: &ComplexMatrix, rhs: &ComplexVector) -> Result<LinearSolution> {
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix is {}x{}, expected square",
            n,
            a.n_cols()
        )));
    }
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: rhs.len(),
        });
    }
    let threshold = SINGULAR_PIVOT_RATIO * a.max_modulus();
    let mut m = a.data.clone();
    let mut b = rhs.0.clone();
    let (mut max_pivot, mut min_pivot) = (0.0f64, f64::INFINITY);

    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, m[i * n + k].norm()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pivot <= threshold || pivot == 0.0 {
            return Err(Error::SingularSystem { column: k, pivot });
        }
        max_pivot = max_pivot.max(pivot);
        min_pivot = min_pivot.min(pivot);
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        let inv = m[k * n + k].inv();
        for i in k + 1..n {
            let factor = m[i * n + k] * inv;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            m[i * n + k] = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                let v = m[k * n + j];
                m[i * n + j] -= factor * v;
            }
            let bk = b[k];
            b[i] -= factor * bk;
        }
    }

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|j| m[i * n + j] * x[j]).sum();
        x[i] = (b[i] - s) / m[i * n + i];
    }
    Ok(LinearSolution {
        solution: ComplexVector(x),
        pivot_ratio: max_pivot / min_pivot,
    })
}

/// Returns `(X^H X, X^H y)`.
pub fn normal_equations(
    x: &ComplexMatrix,
    y: &ComplexVector,
) -> Result<(ComplexMatrix, ComplexVector)> {
    if x.n_rows() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.n_rows(),
            right: y.len(),
        });
    }
    if x.n_rows() < x.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "design has {} rows but {} columns",
            x.n_rows(),
            x.n_cols()
        )));
    }
    let xh = x.hermitian();
    let gram = xh.mul(x)?;
    let moment = xh.mul_vec(y)?;
    Ok((gram, moment))
}
