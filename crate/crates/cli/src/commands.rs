use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use nomcorr::coding::{code_with, RemovedRecord};
use nomcorr::tabulate::MIN_EXPECTED_FREQUENCY;
use nomcorr::{
    break_ties, chi_square, enumerate_assignments_ordered, expected_frequencies,
    invariance_experiment, null_hypothesis_rejected, summarize_classes, sweep_correlation,
    ClassSummary, CodedVariable, Complex64, CorrelationCoefficient, PhaseAssignment, RecordPairs,
};
use serde::Serialize;

use crate::args::{Chi2Args, CodeArgs, CommonArgs, CorrArgs, FixTiesArgs, ModelArgs, OutputFormat};
use crate::input::{read_path, Dataset};
use crate::render::{self, Table};

/// Destinations of a command: the report and the warning stream.
pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

fn load(common: &CommonArgs) -> Result<Dataset> {
    let data = read_path(&common.input, common.format)?;
    Ok(if common.swap { data.swapped() } else { data })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

#[derive(Serialize)]
struct Chi2Json<'a> {
    row_labels: &'a [String],
    col_labels: &'a [String],
    observed: &'a [Vec<u64>],
    expected: &'a [Vec<f64>],
    chi2: f64,
    df: u64,
    p_value: f64,
    v_cramer_squared: f64,
    alpha: f64,
    reject_h0: bool,
}

pub fn chi2(args: &Chi2Args, s: Streams<'_>) -> Result<()> {
    let d = args.common.decimals();
    let table = load(&args.common)?.table()?;
    let expected = expected_frequencies(&table)?;
    let report = chi_square(&table)?;
    let reject = null_hypothesis_rejected(&report, args.alpha)?;
    for (i, j, v) in expected.cells_below(MIN_EXPECTED_FREQUENCY) {
        writeln!(
            s.err,
            "warning: expected frequency {} < {MIN_EXPECTED_FREQUENCY} in cell ({}, {})",
            render::real(v, d),
            table.row_labels()[i],
            table.col_labels()[j]
        )?;
    }
    let verdict = if reject {
        "reject H0"
    } else {
        "fail to reject H0"
    };
    match args.common.out {
        OutputFormat::Json => write_json(
            s.out,
            &Chi2Json {
                row_labels: table.row_labels(),
                col_labels: table.col_labels(),
                observed: table.counts(),
                expected: &expected.values,
                chi2: report.chi2,
                df: report.df,
                p_value: report.p_value,
                v_cramer_squared: report.v_cramer_squared,
                alpha: args.alpha,
                reject_h0: reject,
            },
        )?,
        OutputFormat::Csv => {
            let mut t = Table::new(["statistic", "value"]);
            t.push(vec!["chi2".into(), render::real(report.chi2, d)]);
            t.push(vec!["df".into(), report.df.to_string()]);
            t.push(vec!["p".into(), render::real(report.p_value, d)]);
            t.push(vec!["V^2".into(), render::real(report.v_cramer_squared, d)]);
            t.push(vec!["alpha".into(), args.alpha.to_string()]);
            t.push(vec!["verdict".into(), verdict.into()]);
            t.write_csv(s.out)?;
        }
        OutputFormat::Text => {
            let grid = |cell: &dyn Fn(usize, usize) -> String| {
                let mut t = Table::new(
                    std::iter::once(String::new()).chain(table.col_labels().iter().cloned()),
                );
                for (i, label) in table.row_labels().iter().enumerate() {
                    t.push(
                        std::iter::once(label.clone())
                            .chain((0..table.n_cols()).map(|j| cell(i, j)))
                            .collect(),
                    );
                }
                t
            };
            writeln!(s.out, "observed")?;
            grid(&|i, j| table.counts()[i][j].to_string()).write(s.out)?;
            writeln!(s.out, "expected")?;
            grid(&|i, j| render::real(expected.values[i][j], d)).write(s.out)?;
            writeln!(s.out, "chi2 = {}", render::real(report.chi2, d))?;
            writeln!(s.out, "df = {}", report.df)?;
            writeln!(s.out, "p = {}", render::real(report.p_value, d))?;
            writeln!(s.out, "V^2 = {}", render::real(report.v_cramer_squared, d))?;
            writeln!(s.out, "{verdict} at alpha = {}", args.alpha)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CodedColumn<'a> {
    assignment: &'a PhaseAssignment,
    values: &'a [Complex64],
}

#[derive(Serialize)]
struct VariableJson<'a> {
    classes: &'a [ClassSummary],
    is_real: bool,
    codes: Vec<CodedColumn<'a>>,
}

#[derive(Serialize)]
struct CodeJson<'a> {
    records: &'a [(String, String)],
    v1: VariableJson<'a>,
    v2: VariableJson<'a>,
}

fn code_cell(z: Complex64, is_real: bool, d: usize) -> String {
    if is_real {
        render::real(z.re, d)
    } else {
        render::complex(z, d)
    }
}

pub fn code(args: &CodeArgs, s: Streams<'_>) -> Result<()> {
    let common = &args.common;
    let d = common.decimals();
    let options = common.sweep_options();
    let records = load(common)?.records();
    let (c1, c2) = (records.column(1)?, records.column(2)?);
    let (s1, s2) = (summarize_classes(&c1)?, summarize_classes(&c2)?);
    let assignments = if args.all_permutations {
        enumerate_assignments_ordered(&s1, options.order)
    } else {
        vec![PhaseAssignment::identity(&s1)]
    };
    let v1 = assignments
        .iter()
        .map(|a| code_with(&s1, &c1, a, options.modulus))
        .collect::<nomcorr::Result<Vec<CodedVariable>>>()?;
    let identity2 = PhaseAssignment::identity(&s2);
    let v2 = code_with(&s2, &c2, &identity2, options.modulus)?;

    if common.out == OutputFormat::Json {
        return write_json(
            s.out,
            &CodeJson {
                records: &records.rows,
                v1: VariableJson {
                    classes: &s1,
                    is_real: v1[0].is_real,
                    codes: assignments
                        .iter()
                        .zip(&v1)
                        .map(|(a, v)| CodedColumn {
                            assignment: a,
                            values: &v.values.0,
                        })
                        .collect(),
                },
                v2: VariableJson {
                    classes: &s2,
                    is_real: v2.is_real,
                    codes: vec![CodedColumn {
                        assignment: &identity2,
                        values: &v2.values.0,
                    }],
                },
            },
        );
    }

    let names: Vec<String> = if v1.len() == 1 {
        vec!["V1".into()]
    } else {
        (1..=v1.len()).map(|k| format!("V1{k}")).collect()
    };
    let mut t = Table::new(
        ["#".to_string(), "v1".into()]
            .into_iter()
            .chain(names)
            .chain(["v2".into(), "V2".into()]),
    );
    for (i, (a, b)) in records.rows.iter().enumerate() {
        let mut row = vec![(i + 1).to_string(), a.clone()];
        row.extend(v1.iter().map(|v| code_cell(v.values[i], v.is_real, d)));
        row.push(b.clone());
        row.push(code_cell(v2.values[i], v2.is_real, d));
        t.push(row);
    }
    if common.out == OutputFormat::Csv {
        t.write_csv(s.out)?;
    } else {
        if v1.len() > 1 {
            for (k, a) in assignments.iter().enumerate() {
                writeln!(s.out, "V1{}: {}", k + 1, render::assignment(a))?;
            }
        }
        t.write(s.out)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CoefficientJson<'a> {
    assignment: &'a PhaseAssignment,
    value: Complex64,
    modulus: f64,
}

#[derive(Serialize)]
struct CorrJson<'a> {
    real: bool,
    coefficients: Vec<CoefficientJson<'a>>,
    center: Complex64,
}

pub fn corr(args: &CorrArgs, s: Streams<'_>) -> Result<()> {
    let common = &args.common;
    let d = common.decimals();
    let records = load(common)?.records();
    let sweep = sweep_correlation(&records, common.sweep_options()).map_err(|e| match e {
        nomcorr::Error::ComplexCodingRequired(_) => anyhow::Error::new(e).context(
            "variable 2 must code to real numbers; break its ties with fix-ties or use --swap",
        ),
        e => e.into(),
    })?;
    let real = sweep.len() == 1 && sweep.coefficients[0].0.is_empty();

    if let Some(path) = &args.emit_plot {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["point", "re", "im"])?;
        for (k, (_, r)) in sweep.coefficients.iter().enumerate() {
            w.write_record([
                (k + 1).to_string(),
                r.value.re.to_string(),
                r.value.im.to_string(),
            ])?;
        }
        w.write_record([
            "center".to_string(),
            sweep.center.re.to_string(),
            sweep.center.im.to_string(),
        ])?;
        w.flush()?;
    }

    match common.out {
        OutputFormat::Json => write_json(
            s.out,
            &CorrJson {
                real,
                coefficients: sweep
                    .coefficients
                    .iter()
                    .map(|(a, r)| CoefficientJson {
                        assignment: a,
                        value: r.value,
                        modulus: r.modulus,
                    })
                    .collect(),
                center: sweep.center,
            },
        )?,
        OutputFormat::Csv => {
            let mut t = Table::new(["#", "assignment", "re", "im", "modulus"]);
            for (k, (a, r)) in sweep.coefficients.iter().enumerate() {
                t.push(vec![
                    (k + 1).to_string(),
                    render::assignment(a),
                    render::real(r.value.re, d),
                    render::real(r.value.im, d),
                    render::real(r.modulus, d),
                ]);
            }
            t.push(vec![
                "center".into(),
                "-".into(),
                render::real(sweep.center.re, d),
                render::real(sweep.center.im, d),
                render::real(sweep.center.norm(), d),
            ]);
            t.write_csv(s.out)?;
        }
        OutputFormat::Text if real => {
            writeln!(
                s.out,
                "R(V1,V2) = {}",
                render::real(sweep.coefficients[0].1.value.re, d)
            )?;
        }
        OutputFormat::Text => {
            writeln!(s.out, "assignments: {}", sweep.len())?;
            let mut t = Table::new(["#", "assignment", "R(V1,V2)", "|R|"]);
            for (k, (a, r)) in sweep.coefficients.iter().enumerate() {
                t.push(vec![
                    (k + 1).to_string(),
                    render::assignment(a),
                    render::complex(r.value, d),
                    render::real(r.modulus, d),
                ]);
            }
            t.write(s.out)?;
            writeln!(s.out, "center: {}", render::complex(sweep.center, d))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ModelEntryJson<'a> {
    assignment: &'a PhaseAssignment,
    input_correlation: CorrelationCoefficient,
    coefficients: &'a [Complex64],
    q: f64,
    pivot_ratio: f64,
    model_correlation: CorrelationCoefficient,
}

#[derive(Serialize)]
struct ModelJson<'a> {
    degree: usize,
    entries: Vec<ModelEntryJson<'a>>,
    spread: f64,
    invariant: bool,
    mean_model_correlation: Complex64,
}

pub fn model(args: &ModelArgs, s: Streams<'_>) -> Result<()> {
    let common = &args.common;
    let d = common.decimals();
    let records = load(common)?.records();
    let report = invariance_experiment(
        &records,
        args.degree.map(|k| k as usize),
        common.sweep_options(),
    )?;
    let ill = report
        .entries
        .iter()
        .filter(|e| e.model.is_ill_conditioned())
        .count();
    if ill > 0 {
        writeln!(
            s.err,
            "warning: {ill} of {} normal-equation systems are ill-conditioned (pivot ratio above 1e12)",
            report.entries.len()
        )?;
    }
    let mean = report.mean_model_correlation();
    match common.out {
        OutputFormat::Json => write_json(
            s.out,
            &ModelJson {
                degree: report.degree,
                entries: report
                    .entries
                    .iter()
                    .map(|e| ModelEntryJson {
                        assignment: &e.assignment,
                        input_correlation: e.input_correlation,
                        coefficients: &e.model.coefficients.0,
                        q: e.model.q,
                        pivot_ratio: e.model.pivot_ratio,
                        model_correlation: e.model_correlation,
                    })
                    .collect(),
                spread: report.spread,
                invariant: report.invariant,
                mean_model_correlation: mean,
            },
        )?,
        OutputFormat::Csv => {
            let header = [
                "#".to_string(),
                "assignment".into(),
                "R(V1,V2)".into(),
                "|R(V1,V2)|".into(),
            ]
            .into_iter()
            .chain((0..=report.degree).map(|k| format!("b{k}")))
            .chain(["R(V2,V2^)".into(), "|R(V2,V2^)|".into()]);
            let mut t = Table::new(header);
            for (k, e) in report.entries.iter().enumerate() {
                let mut row = vec![
                    (k + 1).to_string(),
                    render::assignment(&e.assignment),
                    render::complex(e.input_correlation.value, d),
                    render::real(e.input_correlation.modulus, d),
                ];
                row.extend(e.model.coefficients.iter().map(|b| render::complex(*b, d)));
                row.push(render::complex(e.model_correlation.value, d));
                row.push(render::real(e.model_correlation.modulus, d));
                t.push(row);
            }
            t.write_csv(s.out)?;
        }
        OutputFormat::Text => {
            writeln!(s.out, "degree: {}", report.degree)?;
            let mut t = Table::new([
                "#",
                "assignment",
                "R(V1,V2)",
                "|R(V1,V2)|",
                "model",
                "R(V2,V2^)",
                "|R(V2,V2^)|",
            ]);
            for (k, e) in report.entries.iter().enumerate() {
                t.push(vec![
                    (k + 1).to_string(),
                    render::assignment(&e.assignment),
                    render::complex(e.input_correlation.value, d),
                    render::real(e.input_correlation.modulus, d),
                    render::polynomial(&e.model.coefficients.0, d),
                    render::complex(e.model_correlation.value, d),
                    render::real(e.model_correlation.modulus, d),
                ]);
            }
            t.write(s.out)?;
            if report.invariant {
                writeln!(s.out, "invariant: {}", render::compact(mean, d))?;
            } else {
                writeln!(s.out, "not invariant: spread {:.*e}", d, report.spread)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FixTiesJson<'a> {
    variable: usize,
    records: &'a [(String, String)],
    removed: &'a [RemovedRecord],
    cardinalities: &'a BTreeMap<String, u64>,
    other_variable_tied: bool,
    policy: &'a str,
}

fn write_records(out: &mut dyn Write, records: &RecordPairs) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["v1", "v2"])?;
    for (a, b) in &records.rows {
        w.write_record([a, b])?;
    }
    w.flush()?;
    Ok(())
}

pub fn fix_ties(args: &FixTiesArgs, s: Streams<'_>) -> Result<()> {
    let common = &args.common;
    let records = load(common)?.records();
    let fixed = break_ties(&records, args.variable as usize)?;
    if fixed.other_variable_tied {
        writeln!(
            s.err,
            "warning: variable {} still has classes of equal cardinality",
            3 - fixed.variable
        )?;
    }
    if let Some(path) = &args.output {
        let mut w = create(path)?;
        write_records(&mut w, &fixed.records)?;
        w.flush()?;
    }
    if common.out == OutputFormat::Json {
        return write_json(
            s.out,
            &FixTiesJson {
                variable: fixed.variable,
                records: &fixed.records.rows,
                removed: &fixed.removed,
                cardinalities: &fixed.cardinalities,
                other_variable_tied: fixed.other_variable_tied,
                policy: &fixed.policy,
            },
        );
    }
    if args.output.is_none() {
        write_records(s.out, &fixed.records)?;
    }
    let mut log = String::new();
    for r in &fixed.removed {
        log.push_str(&format!(
            "removed record {}: {},{}\n",
            r.index + 1,
            r.pair.0,
            r.pair.1
        ));
    }
    log.push_str(&format!(
        "removed {} of {} records from variable {} (policy: {})\n",
        fixed.removed.len(),
        records.len(),
        fixed.variable,
        fixed.policy
    ));
    match &args.log {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(log.as_bytes())?;
            w.flush()?;
        }
        None => s.err.write_all(log.as_bytes())?,
    }
    Ok(())
}
