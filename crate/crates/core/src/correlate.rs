//! Pearson correlation for real and complex vectors, and sweeps of the
//! correlation over all phase assignments of a complex-coded variable.
//!
//! The coefficient is the cosine of the angle between the centered vectors,
//! `R(x, y) = (x_c, y_c) / (‖x_c‖·‖y_c‖)`, with the second argument
//! conjugated. Swapping the arguments conjugates the result.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coding::{
    code_real, code_with, enumerate_assignments_ordered, summarize_classes, CodedVariable, Modulus,
    PermutationOrder, PhaseAssignment,
};
use crate::error::{Error, Result};
use crate::linalg::{norm, scalar_product, ComplexVector};
use crate::tabulate::RecordPairs;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCoefficient {
    pub value: Complex64,
    pub modulus: f64,
}

impl CorrelationCoefficient {
    pub fn new(value: Complex64) -> Self {
        Self {
            value,
            modulus: value.norm(),
        }
    }
}

pub fn pearson(x: &ComplexVector, y: &ComplexVector) -> Result<CorrelationCoefficient> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two observations"));
    }
    let xc = x.centered();
    let yc = y.centered();
    let denom = norm(&xc) * norm(&yc);
    // Relative to the data scale so that rounding residue of a constant
    // vector is still treated as zero variance.
    let scale = (norm(x) * norm(y)).max(f64::MIN_POSITIVE);
    if denom <= 1e-14 * scale {
        return Err(Error::UndefinedCorrelation("zero variance"));
    }
    Ok(CorrelationCoefficient::new(
        scalar_product(&xc, &yc)? / denom,
    ))
}

/// Correlations over every phase assignment of one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub coefficients: Vec<(PhaseAssignment, CorrelationCoefficient)>,
    pub center: Complex64,
    pub moduli: Vec<f64>,
}

impl SweepResult {
    pub fn from_coefficients(coefficients: Vec<(PhaseAssignment, CorrelationCoefficient)>) -> Self {
        let moduli = coefficients.iter().map(|(_, c)| c.modulus).collect();
        let center = if coefficients.is_empty() {
            Complex64::new(0.0, 0.0)
        } else {
            coefficients.iter().map(|(_, c)| c.value).sum::<Complex64>() / coefficients.len() as f64
        };
        Self {
            coefficients,
            center,
            moduli,
        }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.coefficients.iter().map(|(_, c)| c.value).collect()
    }

    /// Whether every coefficient's conjugate also occurs, within `tol`.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        let values = self.values();
        values
            .iter()
            .all(|v| values.iter().any(|w| (w - v.conj()).norm() <= tol))
    }
}

/// Options shared by sweeps and model fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepOptions {
    pub order: PermutationOrder,
    pub modulus: Modulus,
}

/// Codes the first variable once per phase assignment.
pub fn coded_variants(
    column: &[String],
    options: SweepOptions,
) -> Result<Vec<(PhaseAssignment, CodedVariable)>> {
    let summaries = summarize_classes(column)?;
    enumerate_assignments_ordered(&summaries, options.order)
        .into_iter()
        .map(|a| {
            let coded = code_with(&summaries, column, &a, options.modulus)?;
            Ok((a, coded))
        })
        .collect()
}

/// Real coding of the second variable.
pub fn real_response(column: &[String]) -> Result<CodedVariable> {
    code_real(&summarize_classes(column)?, column)
}

/// Correlates each coded variant against a fixed response, preserving the
/// variant order.
pub fn sweep_coded(
    variants: &[(PhaseAssignment, CodedVariable)],
    response: &CodedVariable,
) -> Result<SweepResult> {
    if !response.is_real {
        return Err(Error::ComplexCodingRequired(
            response.class_map.keys().cloned().collect(),
        ));
    }
    let coefficients = variants
        .par_iter()
        .map(|(a, x)| pearson(&x.values, &response.values).map(|r| (a.clone(), r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_coefficients(coefficients))
}

/// Sweeps the correlation between variable 1, over all its phase
/// assignments, and the real-coded variable 2.
pub fn sweep_correlation(records: &RecordPairs, options: SweepOptions) -> Result<SweepResult> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let response = real_response(&records.column(2)?)?;
    let variants = coded_variants(&records.column(1)?, options)?;
    sweep_coded(&variants, &response)
}

pub fn sweep_center(result: &SweepResult) -> Complex64 {
    result.center
}
