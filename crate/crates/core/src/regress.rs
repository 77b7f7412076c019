//! Complex least-squares models of the response on powers of a coded
//! regressor, and the phase-permutation invariance experiment.
//!
//! Coefficients solve the Hermitian normal equations `X^H X b = X^H y`
//! by Gaussian elimination, with the regressor scaled by its largest
//! modulus before the powers are formed. With `k` distinct regressor values a polynomial
//! of degree `k − 1` interpolates the per-class means of the response, so its
//! fitted values (and their correlation with the response) do not depend on
//! which phases the classes received. The linear model has no such property.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coding::{CodedVariable, PhaseAssignment};
use crate::correlate::{
    coded_variants, pearson, real_response, CorrelationCoefficient, SweepOptions,
};
use crate::error::{Error, Result};
use crate::linalg::{
    norm, normal_equations, solve_with_diagnostics, ComplexMatrix, ComplexVector,
    ILL_CONDITIONED_PIVOT_RATIO,
};
use crate::tabulate::RecordPairs;

/// Spread of model correlations across assignments below which they are
/// considered identical.
pub const INVARIANCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeastSquaresModel {
    /// `b_0 … b_degree`.
    pub coefficients: ComplexVector,
    pub degree: usize,
    pub fitted: ComplexVector,
    pub residuals: ComplexVector,
    /// Sum of squared residual moduli.
    pub q: f64,
    pub pivot_ratio: f64,
}

impl LeastSquaresModel {
    pub fn is_ill_conditioned(&self) -> bool {
        self.pivot_ratio > ILL_CONDITIONED_PIVOT_RATIO
    }

    /// Evaluates the polynomial at `x` (Horner).
    pub fn predict(&self, x: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, b| acc * x + b)
    }
}

/// Monomial design matrix `[1, x, …, x^degree]`.
pub fn design_matrix(x: &ComplexVector, degree: usize) -> ComplexMatrix {
    ComplexMatrix::vandermonde(x, degree)
}

pub fn default_degree(x: &CodedVariable) -> usize {
    x.distinct_values().saturating_sub(1)
}

pub fn fit_linear(x: &CodedVariable, y: &CodedVariable) -> Result<LeastSquaresModel> {
    fit_polynomial(x, y, 1)
}

pub fn fit_polynomial(
    x: &CodedVariable,
    y: &CodedVariable,
    degree: usize,
) -> Result<LeastSquaresModel> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let distinct = x.distinct_values();
    if distinct < degree + 1 {
        return Err(Error::UnderdeterminedDesign {
            degree,
            needed: degree + 1,
            distinct,
        });
    }
    // Solve in powers of x / s so the Gram matrix entries stay near unity,
    // then map the coefficients back to powers of x.
    let s = x.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let s = if s > 0.0 { s } else { 1.0 };
    let design = design_matrix(&x.values.scale(Complex64::new(1.0 / s, 0.0)), degree);
    let (gram, moment) = normal_equations(&design, &y.values)?;
    let solved = solve_with_diagnostics(&gram, &moment)?;
    let fitted = design.mul_vec(&solved.solution)?;
    let residuals = &y.values - &fitted;
    let q = norm(&residuals).powi(2);
    let coefficients = ComplexVector(
        solved
            .solution
            .iter()
            .enumerate()
            .map(|(k, c)| c / s.powi(k as i32))
            .collect(),
    );
    Ok(LeastSquaresModel {
        coefficients,
        degree,
        fitted,
        residuals,
        q,
        pivot_ratio: solved.pivot_ratio,
    })
}

/// `R(y, ŷ)`.
pub fn model_correlation(
    y: &CodedVariable,
    model: &LeastSquaresModel,
) -> Result<CorrelationCoefficient> {
    if y.len() != model.fitted.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: model.fitted.len(),
        });
    }
    pearson(&y.values, &model.fitted)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceEntry {
    pub assignment: PhaseAssignment,
    /// `R(V1, V2)` for this assignment.
    pub input_correlation: CorrelationCoefficient,
    pub model: LeastSquaresModel,
    /// `R(V2, V̂2)`.
    pub model_correlation: CorrelationCoefficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub degree: usize,
    pub entries: Vec<InvarianceEntry>,
    /// Largest pairwise distance between model correlations.
    pub spread: f64,
    pub invariant: bool,
}

impl InvarianceReport {
    pub fn mean_model_correlation(&self) -> Complex64 {
        self.entries
            .iter()
            .map(|e| e.model_correlation.value)
            .sum::<Complex64>()
            / self.entries.len() as f64
    }
}

/// Fits `V̂2 = f(V1)` for every phase assignment of variable 1 and compares
/// the resulting model correlations. `degree` defaults to one less than the
/// number of classes of variable 1.
pub fn invariance_experiment(
    records: &RecordPairs,
    degree: Option<usize>,
    options: SweepOptions,
) -> Result<InvarianceReport> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let response = real_response(&records.column(2)?)?;
    let variants = coded_variants(&records.column(1)?, options)?;
    let degree = degree.unwrap_or_else(|| default_degree(&variants[0].1));
    let entries = variants
        .into_par_iter()
        .map(|(assignment, x)| {
            let model = fit_polynomial(&x, &response, degree)?;
            Ok(InvarianceEntry {
                input_correlation: pearson(&x.values, &response.values)?,
                model_correlation: model_correlation(&response, &model)?,
                assignment,
                model,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut spread = 0.0f64;
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[..i] {
            spread = spread.max((a.model_correlation.value - b.model_correlation.value).norm());
        }
    }
    Ok(InvarianceReport {
        degree,
        entries,
        spread,
        invariant: spread <= INVARIANCE_TOLERANCE,
    })
}
