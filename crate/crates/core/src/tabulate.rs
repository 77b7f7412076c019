//! Contingency tables and the classical chi-square association analysis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::chi_square_sf;

/// Expected frequencies below this value make the chi-square test unreliable.
pub const MIN_EXPECTED_FREQUENCY: f64 = 5.0;

/// Observed records of two nominal variables, one `(v1, v2)` pair per object.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RecordPairs {
    pub rows: Vec<(String, String)>,
}

impl RecordPairs {
    pub fn new(rows: Vec<(String, String)>) -> Self {
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of the first (`index == 1`) or second (`index == 2`) variable.
    pub fn column(&self, index: usize) -> Result<Vec<String>> {
        match index {
            1 => Ok(self.rows.iter().map(|(a, _)| a.clone()).collect()),
            2 => Ok(self.rows.iter().map(|(_, b)| b.clone()).collect()),
            other => Err(Error::InvalidVariable(other)),
        }
    }

    /// The same records with the two variables exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }
}

impl<A: Into<String>, B: Into<String>> FromIterator<(A, B)> for RecordPairs {
    fn from_iter<I: IntoIterator<Item = (A, B)>>(iter: I) -> Self {
        Self {
            rows: iter
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        }
    }
}

/// Observed frequency matrix of two nominal variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        counts: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if row_labels.is_empty() || col_labels.is_empty() {
            return Err(Error::InvalidTable(
                "at least one row and one column are required".into(),
            ));
        }
        if counts.len() != row_labels.len() {
            return Err(Error::InvalidTable(format!(
                "{} row labels but {} count rows",
                row_labels.len(),
                counts.len()
            )));
        }
        if let Some((i, row)) = counts
            .iter()
            .enumerate()
            .find(|(_, row)| row.len() != col_labels.len())
        {
            return Err(Error::InvalidTable(format!(
                "row {} has {} cells, expected {}",
                row_labels[i],
                row.len(),
                col_labels.len()
            )));
        }
        for labels in [&row_labels, &col_labels] {
            if labels.iter().any(|l| l.is_empty()) {
                return Err(Error::InvalidTable("empty category label".into()));
            }
            let mut seen: Vec<&String> = labels.iter().collect();
            seen.sort();
            if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidTable(format!("duplicate label {}", w[0])));
            }
        }
        Ok(Self {
            row_labels,
            col_labels,
            counts,
        })
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.n_cols())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// Rows and columns reordered so that both label lists are sorted.
    pub fn sorted(&self) -> Self {
        let mut rows: Vec<usize> = (0..self.n_rows()).collect();
        rows.sort_by(|&a, &b| self.row_labels[a].cmp(&self.row_labels[b]));
        let mut cols: Vec<usize> = (0..self.n_cols()).collect();
        cols.sort_by(|&a, &b| self.col_labels[a].cmp(&self.col_labels[b]));
        Self {
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
            counts: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.counts[i][j]).collect())
                .collect(),
        }
    }

    pub fn transposed(&self) -> Self {
        Self {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            counts: (0..self.n_cols())
                .map(|j| self.counts.iter().map(|r| r[j]).collect())
                .collect(),
        }
    }
}

/// Frequencies expected under independence of the two variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub values: Vec<Vec<f64>>,
}

impl ExpectedTable {
    /// Cells whose expected frequency falls below `threshold`, as
    /// `(row, col, value)`.
    pub fn cells_below(&self, threshold: f64) -> Vec<(usize, usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(move |(_, &v)| v < threshold)
                    .map(move |(j, &v)| (i, j, v))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareReport {
    pub chi2: f64,
    pub df: u64,
    pub p_value: f64,
    pub v_cramer_squared: f64,
}

impl ChiSquareReport {
    pub fn cramer_v(&self) -> f64 {
        self.v_cramer_squared.sqrt()
    }
}

/// Cross-tabulates record pairs. Labels are sorted lexicographically.
pub fn tabulate_records(records: &RecordPairs) -> Result<ContingencyTable> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut cells: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    let mut rows = BTreeMap::new();
    let mut cols = BTreeMap::new();
    for (a, b) in &records.rows {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidTable("empty category label".into()));
        }
        *cells.entry((a, b)).or_default() += 1;
        rows.insert(a.as_str(), ());
        cols.insert(b.as_str(), ());
    }
    let row_labels: Vec<String> = rows.keys().map(|s| s.to_string()).collect();
    let col_labels: Vec<String> = cols.keys().map(|s| s.to_string()).collect();
    let counts = row_labels
        .iter()
        .map(|r| {
            col_labels
                .iter()
                .map(|c| cells.get(&(r.as_str(), c.as_str())).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    ContingencyTable::new(row_labels, col_labels, counts)
}

/// Expands a table back into individual records, row-major in label order.
pub fn reconstruct_records(table: &ContingencyTable) -> RecordPairs {
    let mut rows = Vec::with_capacity(table.total() as usize);
    for (i, r) in table.row_labels.iter().enumerate() {
        for (j, c) in table.col_labels.iter().enumerate() {
            for _ in 0..table.counts[i][j] {
                rows.push((r.clone(), c.clone()));
            }
        }
    }
    RecordPairs { rows }
}

pub fn expected_frequencies(table: &ContingencyTable) -> Result<ExpectedTable> {
    let n = table.total();
    if n == 0 {
        return Err(Error::EmptyTable);
    }
    let n = n as f64;
    let col_sums = table.col_sums();
    let values = table
        .row_sums()
        .into_iter()
        .map(|ri| {
            col_sums
                .iter()
                .map(|&cj| ri as f64 * cj as f64 / n)
                .collect()
        })
        .collect();
    Ok(ExpectedTable { values })
}

/// Pearson's chi-square test of independence with the squared Cramér V.
pub fn chi_square(table: &ContingencyTable) -> Result<ChiSquareReport> {
    let (r, c) = (table.n_rows(), table.n_cols());
    if r < 2 || c < 2 {
        return Err(Error::DegenerateTable { rows: r, cols: c });
    }
    if table.total() == 0 {
        return Err(Error::EmptyTable);
    }
    for (labels, sums, axis) in [
        (table.row_labels(), table.row_sums(), "row"),
        (table.col_labels(), table.col_sums(), "column"),
    ] {
        if let Some(i) = sums.iter().position(|&s| s == 0) {
            return Err(Error::DegenerateMargin(format!(
                "{axis} {} sums to zero",
                labels[i]
            )));
        }
    }
    let expected = expected_frequencies(table)?;
    let chi2: f64 = table
        .counts
        .iter()
        .flatten()
        .zip(expected.values.iter().flatten())
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let df = ((r - 1) * (c - 1)) as u64;
    let n = table.total() as f64;
    let v2 = chi2 / (n * (r.min(c) - 1) as f64);
    Ok(ChiSquareReport {
        chi2,
        df,
        p_value: chi_square_sf(chi2, df),
        v_cramer_squared: v2.clamp(0.0, 1.0),
    })
}

pub fn null_hypothesis_rejected(report: &ChiSquareReport, alpha: f64) -> Result<bool> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(report.p_value < alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(rows: &[&str], cols: &[&str], counts: &[&[u64]]) -> ContingencyTable {
        ContingencyTable::new(
            rows.iter().map(|s| s.to_string()).collect(),
            cols.iter().map(|s| s.to_string()).collect(),
            counts.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    fn three_by_two() -> ContingencyTable {
        table(&["A", "B", "C"], &["X", "Y"], &[&[3, 0], &[2, 2], &[0, 2]])
    }

    fn two_by_two_tied() -> ContingencyTable {
        table(&["A", "B"], &["X", "Y"], &[&[3, 1], &[2, 2]])
    }

    fn pairs(raw: &[(&str, &str)]) -> RecordPairs {
        raw.iter().copied().collect()
    }

    /// Composite Simpson quadrature with interval halving until two successive
    /// estimates agree.
    fn simpson_tail(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let simpson = |n: usize| {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(a + i as f64 * h);
            }
            s * h / 3.0
        };
        let mut n = 64;
        let mut prev = simpson(n);
        loop {
            n *= 2;
            let next = simpson(n);
            if (next - prev).abs() < 1e-13 || n > 1 << 22 {
                return next;
            }
            prev = next;
        }
    }

    #[test]
    fn tabulates_three_by_two_records() {
        let recs = pairs(&[
            ("A", "X"),
            ("A", "X"),
            ("A", "X"),
            ("B", "X"),
            ("B", "X"),
            ("B", "Y"),
            ("B", "Y"),
            ("C", "Y"),
            ("C", "Y"),
        ]);
        let t = tabulate_records(&recs).unwrap();
        assert_eq!(t, three_by_two());
        assert_eq!(reconstruct_records(&t), recs);
    }

    #[test]
    fn singleton_and_empty_inputs() {
        let t = tabulate_records(&pairs(&[("A", "X")])).unwrap();
        assert_eq!(t.counts(), &[vec![1]]);
        assert_eq!(reconstruct_records(&t).len(), 1);
        assert_eq!(
            tabulate_records(&RecordPairs::default()),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn tabulates_tied_two_by_two() {
        let recs = pairs(&[
            ("A", "X"),
            ("A", "X"),
            ("A", "X"),
            ("A", "Y"),
            ("B", "X"),
            ("B", "X"),
            ("B", "Y"),
            ("B", "Y"),
        ]);
        assert_eq!(tabulate_records(&recs).unwrap(), two_by_two_tied());
    }

    #[test]
    fn reconstructs_tied_four_by_two() {
        let t = table(
            &["A", "B", "C", "D"],
            &["X", "Y"],
            &[&[1, 4], &[2, 3], &[3, 2], &[1, 2]],
        );
        let recs = reconstruct_records(&t);
        assert_eq!(recs.len(), 18);
        let v1 = recs.column(1).unwrap();
        for (label, n) in [("A", 5), ("B", 5), ("C", 5), ("D", 3)] {
            assert_eq!(v1.iter().filter(|v| *v == label).count(), n);
        }
    }

    #[test]
    fn expected_frequencies_three_by_two() {
        let e = expected_frequencies(&three_by_two()).unwrap();
        let reference = [[1.667, 1.333], [2.222, 1.778], [1.111, 0.889]];
        for (row, want) in e.values.iter().zip(reference) {
            for (got, want) in row.iter().zip(want) {
                assert!((got - want).abs() < 5e-4, "{got} vs {want}");
            }
        }
        assert_eq!(e.cells_below(MIN_EXPECTED_FREQUENCY).len(), 6);
    }

    #[test]
    fn expected_equals_observed_under_independence() {
        let t = table(&["A", "B"], &["X", "Y"], &[&[1, 1], &[1, 1]]);
        let e = expected_frequencies(&t).unwrap();
        assert_eq!(e.values, vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let r = chi_square(&t).unwrap();
        assert_eq!(r.chi2, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.v_cramer_squared, 0.0);
        assert!(!null_hypothesis_rejected(&r, 0.1).unwrap());
    }

    #[test]
    fn expected_frequencies_tied_two_by_two() {
        // margins (4, 4) x (5, 3), N = 8
        let e = expected_frequencies(&two_by_two_tied()).unwrap();
        assert_eq!(e.values, vec![vec![2.5, 1.5], vec![2.5, 1.5]]);
    }

    #[test]
    fn chi_square_three_by_two() {
        let r = chi_square(&three_by_two()).unwrap();
        assert!((r.chi2 - 4.95).abs() < 5e-3);
        assert_eq!(r.df, 2);
        assert!((r.p_value - 0.0841).abs() < 5e-4);
        assert!((r.v_cramer_squared - 0.550).abs() < 5e-4);
        assert!(null_hypothesis_rejected(&r, 0.1).unwrap());
        assert!(!null_hypothesis_rejected(&r, 0.05).unwrap());
    }

    #[test]
    fn chi_square_tail_matches_quadrature() {
        let r = chi_square(&two_by_two_tied()).unwrap();
        // 2 * (0.25/2.5 + 0.25/1.5)
        assert!((r.chi2 - 8.0 / 15.0).abs() < 1e-12);
        assert_eq!(r.df, 1);
        let oracle = simpson_tail(
            |x| (-x / 2.0).exp() / (2.0 * std::f64::consts::PI * x).sqrt(),
            r.chi2,
            200.0,
        );
        assert!((oracle - 0.465_208_818_452_141_8).abs() < 1e-9);
        assert!((r.p_value - oracle).abs() < 1e-10);

        let r = chi_square(&three_by_two()).unwrap();
        let oracle = simpson_tail(|x| 0.5 * (-x / 2.0).exp(), r.chi2, 200.0);
        assert!((r.p_value - oracle).abs() < 1e-10);
    }

    #[test]
    fn zero_margin_is_degenerate() {
        let t = table(&["A", "B"], &["X", "Y"], &[&[0, 0], &[1, 2]]);
        assert!(matches!(chi_square(&t), Err(Error::DegenerateMargin(_))));
        let t = table(&["A"], &["X", "Y"], &[&[1, 2]]);
        assert!(matches!(chi_square(&t), Err(Error::DegenerateTable { .. })));
        let t = table(&["A"], &["X"], &[&[0]]);
        assert_eq!(expected_frequencies(&t), Err(Error::EmptyTable));
    }

    #[test]
    fn alpha_out_of_range() {
        let r = chi_square(&three_by_two()).unwrap();
        for alpha in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            assert!(null_hypothesis_rejected(&r, alpha).is_err());
        }
        let certain = ChiSquareReport { p_value: 1.0, ..r };
        assert!(!null_hypothesis_rejected(&certain, 0.1).unwrap());
    }

    #[test]
    fn table_validation() {
        let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert!(ContingencyTable::new(strs(&["A"]), strs(&["X", "Y"]), vec![vec![1]]).is_err());
        assert!(
            ContingencyTable::new(strs(&["A", "A"]), strs(&["X"]), vec![vec![1], vec![1]]).is_err()
        );
        assert!(ContingencyTable::new(vec![], strs(&["X"]), vec![]).is_err());
    }

    fn arb_table() -> impl Strategy<Value = ContingencyTable> {
        (1usize..5, 1usize..5)
            .prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(0u64..8, c), r)
            })
            .prop_filter("non-empty", |m| m.iter().flatten().sum::<u64>() > 0)
            .prop_map(|m| {
                let rows = (0..m.len()).map(|i| format!("r{i}")).collect();
                let cols = (0..m[0].len()).map(|j| format!("c{j}")).collect();
                ContingencyTable::new(rows, cols, m).unwrap()
            })
    }

    /// Drops rows and columns with zero margins, which tabulation cannot see.
    fn trimmed(t: &ContingencyTable) -> ContingencyTable {
        let rs = t.row_sums();
        let cs = t.col_sums();
        let rows: Vec<usize> = (0..t.n_rows()).filter(|&i| rs[i] > 0).collect();
        let cols: Vec<usize> = (0..t.n_cols()).filter(|&j| cs[j] > 0).collect();
        ContingencyTable::new(
            rows.iter().map(|&i| t.row_labels()[i].clone()).collect(),
            cols.iter().map(|&j| t.col_labels()[j].clone()).collect(),
            rows.iter()
                .map(|&i| cols.iter().map(|&j| t.counts()[i][j]).collect())
                .collect(),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn round_trip(t in arb_table()) {
            let back = tabulate_records(&reconstruct_records(&t)).unwrap();
            prop_assert_eq!(back, trimmed(&t).sorted());
        }

        #[test]
        fn expected_preserves_margins(t in arb_table()) {
            let e = expected_frequencies(&t).unwrap();
            for (i, &rs) in t.row_sums().iter().enumerate() {
                let s: f64 = e.values[i].iter().sum();
                prop_assert!((s - rs as f64).abs() <= 1e-9 * (rs as f64).max(1.0));
            }
            for (j, &cs) in t.col_sums().iter().enumerate() {
                let s: f64 = e.values.iter().map(|r| r[j]).sum();
                prop_assert!((s - cs as f64).abs() <= 1e-9 * (cs as f64).max(1.0));
            }
        }

        #[test]
        fn chi_square_is_permutation_invariant_and_bounded(t in arb_table()) {
            let t = trimmed(&t);
            prop_assume!(t.n_rows() >= 2 && t.n_cols() >= 2);
            let a = chi_square(&t).unwrap();
            let b = chi_square(&t.transposed()).unwrap();
            let mut rev = t.clone();
            rev.row_labels.reverse();
            rev.counts.reverse();
            let c = chi_square(&rev).unwrap();
            prop_assert!((a.chi2 - b.chi2).abs() < 1e-9 * a.chi2.max(1.0));
            prop_assert!((a.chi2 - c.chi2).abs() < 1e-9 * a.chi2.max(1.0));
            prop_assert!((0.0..=1.0).contains(&a.v_cramer_squared));
            prop_assert!((0.0..=1.0).contains(&a.p_value));
            prop_assert_eq!(a.chi2 == 0.0, a.v_cramer_squared == 0.0);
        }

        #[test]
        fn p_value_decreases_with_statistic(df in 1u64..12, x in 0.0f64..60.0, dx in 0.01f64..5.0) {
            prop_assert!(chi_square_sf(x + dx, df) <= chi_square_sf(x, df));
        }
    }
}
