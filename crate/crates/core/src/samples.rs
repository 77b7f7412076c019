//! Small contingency tables used throughout the tests, benches and docs.

use crate::tabulate::ContingencyTable;

fn build(rows: &[&str], cols: &[&str], counts: &[&[u64]]) -> ContingencyTable {
    ContingencyTable::new(
        rows.iter().map(|s| s.to_string()).collect(),
        cols.iter().map(|s| s.to_string()).collect(),
        counts.iter().map(|r| r.to_vec()).collect(),
    )
    .expect("sample tables are well formed")
}

/// Three classes of distinct cardinality against two; both variables code
/// to real numbers.
pub fn three_by_two() -> ContingencyTable {
    build(&["A", "B", "C"], &["X", "Y"], &[&[3, 0], &[2, 2], &[0, 2]])
}

/// Two classes of cardinality 4 in the first variable.
pub fn two_tied() -> ContingencyTable {
    build(&["A", "B"], &["X", "Y"], &[&[3, 1], &[2, 2]])
}

/// Three classes of cardinality 5 plus one of cardinality 3.
pub fn three_tied_plus_one() -> ContingencyTable {
    build(
        &["A", "B", "C", "D"],
        &["X", "Y"],
        &[&[1, 4], &[2, 3], &[3, 2], &[1, 2]],
    )
}

/// Four classes of cardinality 90 plus one of cardinality 540.
pub fn four_tied_plus_one() -> ContingencyTable {
    build(
        &["U", "W", "X", "Y", "Z"],
        &["A", "B", "C", "D"],
        &[
            &[45, 20, 13, 12],
            &[15, 45, 20, 10],
            &[5, 8, 50, 27],
            &[8, 10, 17, 55],
            &[10, 30, 50, 450],
        ],
    )
}

/// Five classes, all of cardinality 450.
pub fn five_tied() -> ContingencyTable {
    build(
        &["A", "B", "C", "D", "E"],
        &["X", "Y", "Z"],
        &[
            &[200, 120, 130],
            &[250, 100, 100],
            &[50, 80, 320],
            &[170, 130, 150],
            &[300, 100, 50],
        ],
    )
}
