//! Numeric coding of nominal variables and the association measures built
//! on it.
//!
//! * [`tabulate`]: contingency tables, chi-square test and Cramér V.
//! * [`coding`]: tied-rank real codes and roots-of-unity complex codes for
//!   classes of equal cardinality, phase-assignment enumeration, tie breaking.
//! * [`linalg`]: complex scalar product, norm, metric and a Gaussian
//!   elimination solver with partial pivoting.
//! * [`correlate`]: complex Pearson correlation and sweeps over all phase
//!   assignments.
//! * [`regress`]: complex least-squares polynomial models and the invariance
//!   experiment.
//!
//! ```
//! use nomcorr::{samples, tabulate};
//!
//! let report = tabulate::chi_square(&samples::three_by_two()).unwrap();
//! assert_eq!(report.df, 2);
//! assert!((report.chi2 - 4.95).abs() < 5e-3);
//! ```

pub mod coding;
pub mod correlate;
pub mod error;
pub mod linalg;
pub mod regress;
pub mod samples;
pub mod special;
pub mod tabulate;

pub use num_complex::Complex64;

pub use coding::{
    break_ties, code_complex, code_real, code_simplified, code_simplified_complex,
    enumerate_assignments, enumerate_assignments_ordered, summarize_classes, ClassSummary,
    CodedVariable, Modulus, PermutationOrder, PhaseAssignment, TieCorrection,
};
pub use correlate::{
    pearson, sweep_center, sweep_correlation, CorrelationCoefficient, SweepOptions, SweepResult,
};
pub use error::{Error, Result};
pub use linalg::{
    metric, norm, normal_equations, scalar_product, solve_linear_system, ComplexMatrix,
    ComplexVector,
};
pub use regress::{
    fit_linear, fit_polynomial, invariance_experiment, model_correlation, InvarianceReport,
    LeastSquaresModel,
};
pub use tabulate::{
    chi_square, expected_frequencies, null_hypothesis_rejected, reconstruct_records,
    tabulate_records, ChiSquareReport, ContingencyTable, ExpectedTable, RecordPairs,
};
