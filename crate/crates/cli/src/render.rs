//! Number formatting and plain-text tables.

use std::io::{self, Write};

use nomcorr::{Complex64, PhaseAssignment};

/// Fixed-point with `decimals` digits; a value that rounds to zero never
/// carries a minus sign.
pub fn real(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}

/// `a+bi` with both parts rounded to `decimals`.
pub fn complex(z: Complex64, decimals: usize) -> String {
    let re = real(z.re, decimals);
    let im = real(z.im, decimals);
    match im.strip_prefix('-') {
        Some(abs) => format!("{re}-{abs}i"),
        None => format!("{re}+{im}i"),
    }
}

/// Real part only when the imaginary part rounds to zero.
pub fn compact(z: Complex64, decimals: usize) -> String {
    if real(z.im, decimals).chars().all(|c| c == '0' || c == '.') {
        real(z.re, decimals)
    } else {
        complex(z, decimals)
    }
}

/// `A:0,B:1,C:2` per group, groups separated by `;`; `-` when there are none.
pub fn assignment(a: &PhaseAssignment) -> String {
    if a.is_empty() {
        return "-".to_string();
    }
    a.groups
        .iter()
        .map(|g| {
            g.labels
                .iter()
                .zip(&g.roots)
                .map(|(l, j)| format!("{l}:{j}"))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// `(b0) + (b1)·V1 + (b2)·V1^2 …`
pub fn polynomial(coefficients: &[Complex64], decimals: usize) -> String {
    coefficients
        .iter()
        .enumerate()
        .map(|(k, b)| match k {
            0 => format!("({})", complex(*b, decimals)),
            1 => format!("({})·V1", complex(*b, decimals)),
            _ => format!("({})·V1^{k}", complex(*b, decimals)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Left-aligned columns separated by two spaces.
#[derive(Debug, Default)]
pub struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            rows: vec![header.into_iter().map(Into::into).collect()],
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|j| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(j))
                    .map(|c| c.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for row in &self.rows {
            let mut line = String::new();
            for (j, cell) in row.iter().enumerate() {
                if j + 1 == row.len() {
                    line.push_str(cell);
                } else {
                    line.push_str(cell);
                    line.extend(std::iter::repeat(' ').take(widths[j] - cell.chars().count() + 2));
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// The same rows as CSV.
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }
}
