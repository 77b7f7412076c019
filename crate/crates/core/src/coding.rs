//! Numeric coding of nominal variables.
//!
//! A class holding `n` identical values is coded by its tied rank
//! `(n + 1) / 2`. Classes that share a cardinality would then be
//! indistinguishable, so each such group of `m` classes keeps the rank as a
//! common modulus and receives the phases of the `m`-th roots of unity,
//! `R·e^(i·2πj/m)`. Real codes are totally ordered by cardinality; complex
//! codes are only partially ordered (by modulus).
//!
//! Phase assignments are arbitrary, so every analysis over complex codes is
//! run across all `m!` assignments of each group (see [`enumerate_assignments`]).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexVector;
use crate::tabulate::RecordPairs;

/// Marker attached to tie corrections: which record to drop is a policy of
/// this library, not a statistical requirement.
pub const CORRECTION_POLICY: &str = "artifact-defined";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub label: String,
    pub cardinality: u64,
    pub rank: f64,
    pub group_id: Option<usize>,
}

/// A maximal set of at least two classes with the same cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualCardinalityGroup {
    pub id: usize,
    pub cardinality: u64,
    /// Sorted member labels.
    pub labels: Vec<String>,
}

/// Root indices of one group: `roots[i]` is the `j` given to `labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPhases {
    pub group_id: usize,
    pub labels: Vec<String>,
    pub roots: Vec<usize>,
}

impl GroupPhases {
    pub fn order(&self) -> usize {
        self.labels.len()
    }
}

/// One bijection per equal-cardinality group from class to root of unity.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PhaseAssignment {
    pub groups: Vec<GroupPhases>,
}

impl PhaseAssignment {
    /// Every group gets its labels in sorted order mapped to `0, 1, …, m−1`.
    pub fn identity(summaries: &[ClassSummary]) -> Self {
        Self {
            groups: equal_cardinality_groups(summaries)
                .into_iter()
                .map(|g| GroupPhases {
                    group_id: g.id,
                    roots: (0..g.labels.len()).collect(),
                    labels: g.labels,
                })
                .collect(),
        }
    }

    /// `(j, m)` for a grouped label.
    pub fn root_of(&self, label: &str) -> Option<(usize, usize)> {
        self.groups.iter().find_map(|g| {
            g.labels
                .iter()
                .position(|l| l == label)
                .map(|i| (g.roots[i], g.order()))
        })
    }

    /// Maps every `j` to `(m − j) mod m`; the resulting codes are the complex
    /// conjugates of the original ones.
    pub fn conjugate(&self) -> Self {
        Self {
            groups: self
                .groups
                .iter()
                .map(|g| GroupPhases {
                    group_id: g.group_id,
                    labels: g.labels.clone(),
                    roots: g
                        .roots
                        .iter()
                        .map(|&j| (g.order() - j) % g.order())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    fn validate(&self, groups: &[EqualCardinalityGroup]) -> Result<()> {
        if self.groups.len() != groups.len() {
            return Err(Error::InvalidAssignment(format!(
                "covers {} groups, data has {}",
                self.groups.len(),
                groups.len()
            )));
        }
        for g in groups {
            let a = self
                .groups
                .iter()
                .find(|a| a.labels == g.labels)
                .ok_or_else(|| {
                    Error::InvalidAssignment(format!("group {:?} is not assigned", g.labels))
                })?;
            if a.roots.len() != a.labels.len() {
                return Err(Error::InvalidAssignment(format!(
                    "group {:?} has {} roots",
                    a.labels,
                    a.roots.len()
                )));
            }
            let mut seen = vec![false; a.order()];
            for &j in &a.roots {
                if j >= a.order() || std::mem::replace(&mut seen[j], true) {
                    return Err(Error::InvalidAssignment(format!(
                        "roots {:?} of group {:?} are not a permutation of 0..{}",
                        a.roots,
                        a.labels,
                        a.order()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-record codes of one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodedVariable {
    pub values: ComplexVector,
    pub class_map: BTreeMap<String, Complex64>,
    pub is_real: bool,
}

impl CodedVariable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of distinct codes, equal to the number of classes.
    pub fn distinct_values(&self) -> usize {
        self.class_map.len()
    }

    /// Wraps already-numeric data. Each distinct value becomes its own class.
    pub fn from_values(values: Vec<Complex64>) -> Self {
        let class_map = values
            .iter()
            .map(|v| (format!("{}{:+}i", v.re, v.im), *v))
            .collect();
        let values = ComplexVector(values);
        Self {
            is_real: values.is_real(),
            values,
            class_map,
        }
    }
}

/// What the code modulus is derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulus {
    /// Tied rank `(n + 1) / 2`.
    #[default]
    Rank,
    /// Plain cardinality `n`; a positive linear transform of the rank.
    Cardinality,
}

impl Modulus {
    fn of(self, summary: &ClassSummary) -> f64 {
        match self {
            Modulus::Rank => summary.rank,
            Modulus::Cardinality => summary.cardinality as f64,
        }
    }
}

/// Enumeration order of the permutations within one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermutationOrder {
    #[default]
    Lexicographic,
    /// Heap's algorithm: successive permutations differ by one transposition.
    Heap,
}

pub fn tied_rank(cardinality: u64) -> f64 {
    (cardinality as f64 + 1.0) / 2.0
}

/// `e^(i·2πj/m)` with exact quarter turns and exact conjugate symmetry
/// between `j` and `m − j`.
pub fn root_of_unity(j: usize, m: usize) -> Complex64 {
    assert!(m > 0 && j < m);
    if (4 * j) % m == 0 {
        return match 4 * j / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    if 2 * j > m {
        return root_of_unity(m - j, m).conj();
    }
    let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
    let (s, c) = phi.sin_cos();
    Complex64::new(c, s)
}

/// One summary per distinct label, sorted by label.
pub fn summarize_classes(column: &[String]) -> Result<Vec<ClassSummary>> {
    if column.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for v in column {
        *counts.entry(v).or_default() += 1;
    }
    let mut by_cardinality: BTreeMap<u64, usize> = BTreeMap::new();
    for &n in counts.values() {
        *by_cardinality.entry(n).or_default() += 1;
    }
    let mut group_ids: BTreeMap<u64, usize> = BTreeMap::new();
    Ok(counts
        .into_iter()
        .map(|(label, n)| {
            let group_id = (by_cardinality[&n] >= 2).then(|| {
                let next = group_ids.len();
                *group_ids.entry(n).or_insert(next)
            });
            ClassSummary {
                label: label.to_string(),
                cardinality: n,
                rank: tied_rank(n),
                group_id,
            }
        })
        .collect())
}

pub fn equal_cardinality_groups(summaries: &[ClassSummary]) -> Vec<EqualCardinalityGroup> {
    let mut groups: BTreeMap<usize, EqualCardinalityGroup> = BTreeMap::new();
    for s in summaries {
        if let Some(id) = s.group_id {
            groups
                .entry(id)
                .or_insert_with(|| EqualCardinalityGroup {
                    id,
                    cardinality: s.cardinality,
                    labels: Vec::new(),
                })
                .labels
                .push(s.label.clone());
        }
    }
    groups
        .into_values()
        .map(|mut g| {
            g.labels.sort();
            g
        })
        .collect()
}

fn encode(
    summaries: &[ClassSummary],
    column: &[String],
    assignment: Option<&PhaseAssignment>,
    modulus: Modulus,
) -> Result<CodedVariable> {
    let groups = equal_cardinality_groups(summaries);
    match assignment {
        None => {
            if let Some(g) = groups.first() {
                return Err(Error::ComplexCodingRequired(g.labels.clone()));
            }
        }
        Some(a) => a.validate(&groups)?,
    }
    let mut class_map = BTreeMap::new();
    for s in summaries {
        let r = modulus.of(s);
        let code = match (s.group_id, assignment) {
            (Some(_), Some(a)) => {
                let (j, m) = a.root_of(&s.label).ok_or_else(|| {
                    Error::InvalidAssignment(format!("class {} has no phase", s.label))
                })?;
                root_of_unity(j, m) * r
            }
            _ => Complex64::new(r, 0.0),
        };
        class_map.insert(s.label.clone(), code);
    }
    let values = column
        .iter()
        .map(|v| {
            class_map
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnknownClass(v.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let is_real = class_map.values().all(|c| c.im == 0.0);
    Ok(CodedVariable {
        values: ComplexVector(values),
        class_map,
        is_real,
    })
}

/// Real tied-rank coding; fails when any two classes share a cardinality.
pub fn code_real(summaries: &[ClassSummary], column: &[String]) -> Result<CodedVariable> {
    encode(summaries, column, None, Modulus::Rank)
}

pub fn code_complex(
    summaries: &[ClassSummary],
    column: &[String],
    assignment: &PhaseAssignment,
) -> Result<CodedVariable> {
    encode(summaries, column, Some(assignment), Modulus::Rank)
}

/// Real coding by cardinality instead of rank.
pub fn code_simplified(summaries: &[ClassSummary], column: &[String]) -> Result<CodedVariable> {
    encode(summaries, column, None, Modulus::Cardinality)
}

/// Complex coding with cardinality as the modulus.
pub fn code_simplified_complex(
    summaries: &[ClassSummary],
    column: &[String],
    assignment: &PhaseAssignment,
) -> Result<CodedVariable> {
    encode(summaries, column, Some(assignment), Modulus::Cardinality)
}

/// Codes with the given modulus. An empty assignment is allowed when the
/// variable has no equal-cardinality groups.
pub fn code_with(
    summaries: &[ClassSummary],
    column: &[String],
    assignment: &PhaseAssignment,
    modulus: Modulus,
) -> Result<CodedVariable> {
    encode(summaries, column, Some(assignment), modulus)
}

/// All phase assignments in lexicographic order.
pub fn enumerate_assignments(summaries: &[ClassSummary]) -> Vec<PhaseAssignment> {
    enumerate_assignments_ordered(summaries, PermutationOrder::Lexicographic)
}

/// Cartesian product of the per-group permutations; the last group varies
/// fastest. With no groups the result is a single empty assignment.
pub fn enumerate_assignments_ordered(
    summaries: &[ClassSummary],
    order: PermutationOrder,
) -> Vec<PhaseAssignment> {
    let groups = equal_cardinality_groups(summaries);
    let perms: Vec<Vec<Vec<usize>>> = groups
        .iter()
        .map(|g| permutations(g.labels.len(), order))
        .collect();
    let mut out = vec![PhaseAssignment::default()];
    for (g, ps) in groups.iter().zip(&perms) {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                ps.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.groups.push(GroupPhases {
                        group_id: g.id,
                        labels: g.labels.clone(),
                        roots: p.clone(),
                    });
                    next
                })
            })
            .collect();
    }
    out
}

/// Every permutation of `0..m`, starting with the identity.
pub fn permutations(m: usize, order: PermutationOrder) -> Vec<Vec<usize>> {
    match order {
        PermutationOrder::Lexicographic => lexicographic_permutations(m),
        PermutationOrder::Heap => heap_permutations(m),
    }
}

fn lexicographic_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..m).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

fn heap_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..m).collect();
    let mut out = vec![p.clone()];
    let mut c = vec![0usize; m];
    let mut i = 1;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedRecord {
    /// Position in the input record list.
    pub index: usize,
    pub pair: (String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieCorrection {
    pub records: RecordPairs,
    /// Removed records in ascending index order.
    pub removed: Vec<RemovedRecord>,
    pub variable: usize,
    /// Cardinalities of the corrected variable after removal, by label.
    pub cardinalities: BTreeMap<String, u64>,
    /// True when the other variable has equal-cardinality classes after the
    /// correction.
    pub other_variable_tied: bool,
    pub policy: String,
}

/// Minimal per-class cardinalities with no two non-zero values equal.
///
/// Classes are visited by descending cardinality, ties broken by ascending
/// label, and each is capped one below its predecessor. This greedy choice
/// minimizes the number of removals; within a tied group it is always the
/// lexicographically later classes that shrink.
pub fn tie_free_cardinalities(summaries: &[ClassSummary]) -> BTreeMap<String, u64> {
    let mut order: Vec<&ClassSummary> = summaries.iter().collect();
    order.sort_by(|a, b| {
        b.cardinality
            .cmp(&a.cardinality)
            .then_with(|| a.label.cmp(&b.label))
    });
    let mut cap = u64::MAX;
    let mut out = BTreeMap::new();
    for s in order {
        let target = s.cardinality.min(cap);
        cap = target.saturating_sub(1);
        out.insert(s.label.clone(), target);
    }
    out
}

/// Drops the fewest records that leave variable `variable_index` (1 or 2)
/// without equal-cardinality classes. Within a shrinking class the records
/// with the highest original index are dropped first.
pub fn break_ties(records: &RecordPairs, variable_index: usize) -> Result<TieCorrection> {
    let column = records.column(variable_index)?;
    let summaries = summarize_classes(&column)?;
    if summaries.iter().all(|s| s.group_id.is_none()) {
        return Err(Error::NothingToCorrect(variable_index));
    }
    let targets = tie_free_cardinalities(&summaries);
    let mut excess: BTreeMap<&str, u64> = summaries
        .iter()
        .map(|s| (s.label.as_str(), s.cardinality - targets[&s.label]))
        .filter(|&(_, e)| e > 0)
        .collect();

    let mut drop = vec![false; records.len()];
    for (i, v) in column.iter().enumerate().rev() {
        if let Some(e) = excess.get_mut(v.as_str()) {
            if *e > 0 {
                *e -= 1;
                drop[i] = true;
            }
        }
    }
    let mut kept = Vec::with_capacity(records.len());
    let mut removed = Vec::new();
    for (i, pair) in records.rows.iter().enumerate() {
        if drop[i] {
            removed.push(RemovedRecord {
                index: i,
                pair: pair.clone(),
            });
        } else {
            kept.push(pair.clone());
        }
    }
    let records = RecordPairs::new(kept);
    let other = 3 - variable_index;
    let other_variable_tied = match records.column(other) {
        Ok(col) if !col.is_empty() => summarize_classes(&col)?
            .iter()
            .any(|s| s.group_id.is_some()),
        _ => false,
    };
    Ok(TieCorrection {
        records,
        removed,
        variable: variable_index,
        cardinalities: targets.into_iter().filter(|&(_, n)| n > 0).collect(),
        other_variable_tied,
        policy: CORRECTION_POLICY.to_string(),
    })
}
