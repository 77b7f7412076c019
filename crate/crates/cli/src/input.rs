//! CSV readers for record lists and contingency tables.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use anyhow::Context;
use nomcorr::{reconstruct_records, tabulate_records, ContingencyTable, RecordPairs};

use crate::args::InputFormat;

/// A malformed input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn parse_error(line: u64, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone)]
pub enum Dataset {
    Records(RecordPairs),
    Table(ContingencyTable),
}

impl Dataset {
    pub fn records(&self) -> RecordPairs {
        match self {
            Dataset::Records(r) => r.clone(),
            Dataset::Table(t) => reconstruct_records(t),
        }
    }

    pub fn table(&self) -> nomcorr::Result<ContingencyTable> {
        match self {
            Dataset::Records(r) => tabulate_records(r),
            Dataset::Table(t) => Ok(t.clone()),
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Dataset::Records(r) => Dataset::Records(r.swapped()),
            Dataset::Table(t) => Dataset::Table(t.transposed()),
        }
    }
}

pub fn read_path(path: &Path, format: InputFormat) -> anyhow::Result<Dataset> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let data = match format {
        InputFormat::Records => Dataset::Records(parse_records(file)?),
        InputFormat::Contingency => Dataset::Table(parse_contingency(file)?),
    };
    Ok(data)
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn read_rows<R: Read>(input: R) -> Result<Vec<(u64, csv::StringRecord)>, ParseError> {
    let mut rows = Vec::new();
    for row in reader(input).records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(str::is_empty) {
            continue;
        }
        rows.push((line, row));
    }
    Ok(rows)
}

/// Reads a header row followed by one `v1,v2` pair per line.
pub fn parse_records<R: Read>(input: R) -> Result<RecordPairs, ParseError> {
    let rows = read_rows(input)?;
    let mut rows = rows.into_iter();
    let (line, header) = rows.next().ok_or_else(|| parse_error(1, "empty input"))?;
    if header.len() != 2 {
        return Err(parse_error(
            line,
            format!("expected a 2-column header, found {} columns", header.len()),
        ));
    }
    let mut pairs = Vec::new();
    for (line, row) in rows {
        if row.len() != 2 {
            return Err(parse_error(
                line,
                format!("expected 2 fields, found {}", row.len()),
            ));
        }
        if let Some(col) = row.iter().position(str::is_empty) {
            return Err(parse_error(
                line,
                format!("empty value in column {}", col + 1),
            ));
        }
        pairs.push((row[0].to_string(), row[1].to_string()));
    }
    if pairs.is_empty() {
        return Err(parse_error(line, "header without records"));
    }
    Ok(RecordPairs::new(pairs))
}

/// Reads column labels from the first row and a labelled row of counts per
/// following line.
pub fn parse_contingency<R: Read>(input: R) -> Result<ContingencyTable, ParseError> {
    let rows = read_rows(input)?;
    let mut rows = rows.into_iter();
    let (header_line, header) = rows.next().ok_or_else(|| parse_error(1, "empty input"))?;
    if !header[0].is_empty() {
        return Err(parse_error(
            header_line,
            "first cell of the header must be blank",
        ));
    }
    let col_labels: Vec<String> = header.iter().skip(1).map(String::from).collect();
    if col_labels.is_empty() {
        return Err(parse_error(header_line, "no column labels"));
    }
    if let Some(col) = col_labels.iter().position(String::is_empty) {
        return Err(parse_error(
            header_line,
            format!("empty label in column {}", col + 2),
        ));
    }
    let mut row_labels = Vec::new();
    let mut counts = Vec::new();
    for (line, row) in rows {
        if row.len() != col_labels.len() + 1 {
            return Err(parse_error(
                line,
                format!(
                    "expected {} fields, found {}",
                    col_labels.len() + 1,
                    row.len()
                ),
            ));
        }
        if row[0].is_empty() {
            return Err(parse_error(line, "empty row label"));
        }
        let cells = row
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, cell)| {
                cell.parse::<u64>().map_err(|_| {
                    parse_error(
                        line,
                        format!("column {}: '{cell}' is not a non-negative integer", j + 2),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        row_labels.push(row[0].to_string());
        counts.push(cells);
    }
    if counts.is_empty() {
        return Err(parse_error(header_line, "header without rows"));
    }
    ContingencyTable::new(row_labels, col_labels, counts)
        .map_err(|e| parse_error(header_line, e.to_string()))
}
