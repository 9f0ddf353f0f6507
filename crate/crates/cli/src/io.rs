//! File formats shared by every subcommand.
//!
//! Matrices arrive as headerless CSV rows (real entries) or as JSON
//! objects `{"re": [[...]], "im": [[...]]}` with `im` optional; vectors
//! use the same JSON shape with flat arrays, or a single CSV row.
//! Exponents are decimal numbers or the string `inf`. All floats are
//! written through serde_json's shortest-roundtrip formatter, so output
//! files are byte-deterministic.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use opnorm_core::engine::NormCertificate;
use opnorm_core::linalg::CMatrix;
use opnorm_core::{CVector, Exponent};

pub fn parse_exponent(s: &str) -> Result<Exponent> {
    s.parse::<Exponent>()
        .map_err(|e| anyhow!("invalid exponent {:?}: {}", s, e))
}

/// Comma-separated exponent list, e.g. `1,1.5,2,3,inf`.
pub fn parse_exponent_list(s: &str) -> Result<Vec<Exponent>> {
    let list: Vec<Exponent> = s
        .split(',')
        .map(|part| parse_exponent(part.trim()))
        .collect::<Result<_>>()?;
    if list.is_empty() {
        bail!("exponent list is empty");
    }
    Ok(list)
}

/// JSON encoding of an exponent: a number, or the string `"inf"`.
pub fn exponent_json(e: Exponent) -> Value {
    match e {
        Exponent::Inf => Value::String("inf".to_string()),
        Exponent::Finite(v) => json!(v),
    }
}

fn float_from_json(v: &Value, what: &str) -> Result<f64> {
    let f = v
        .as_f64()
        .with_context(|| format!("{} must be a number, got {}", what, v))?;
    if !f.is_finite() {
        bail!("{} must be finite", what);
    }
    Ok(f)
}

fn floats_from_json(v: &Value, what: &str) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .with_context(|| format!("{} must be an array", what))?;
    arr.iter()
        .enumerate()
        .map(|(i, entry)| float_from_json(entry, &format!("{}[{}]", what, i)))
        .collect()
}

fn nested_floats_from_json(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    let arr = v
        .as_array()
        .with_context(|| format!("{} must be an array of rows", what))?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| floats_from_json(row, &format!("{}[{}]", what, i)))
        .collect()
}

fn nested_json(rows: usize, cols: usize, data: &[f64]) -> Value {
    let out: Vec<Vec<f64>> = (0..rows)
        .map(|i| data[i * cols..(i + 1) * cols].to_vec())
        .collect();
    json!(out)
}

pub fn matrix_json(a: &CMatrix) -> Value {
    let mut doc = json!({
        "rows": a.rows(),
        "cols": a.cols(),
        "re": nested_json(a.rows(), a.cols(), a.re()),
    });
    if !a.is_real() {
        doc["im"] = nested_json(a.rows(), a.cols(), a.im());
    }
    doc
}

pub fn matrix_from_json(v: &Value) -> Result<CMatrix> {
    let obj = v.as_object().context("matrix JSON must be an object")?;
    let re = nested_floats_from_json(obj.get("re").context("matrix JSON needs \"re\"")?, "re")?;
    if re.is_empty() || re[0].is_empty() {
        bail!("matrix JSON must have at least one row and column");
    }
    let (rows, cols) = (re.len(), re[0].len());
    let im = match obj.get("im") {
        Some(im) => nested_floats_from_json(im, "im")?,
        None => vec![vec![0.0; cols]; rows],
    };
    let flatten = |grid: &[Vec<f64>], what: &str| -> Result<Vec<f64>> {
        if grid.len() != rows {
            bail!("{} has {} rows, expected {}", what, grid.len(), rows);
        }
        let mut flat = Vec::with_capacity(rows * cols);
        for row in grid {
            if row.len() != cols {
                bail!("{} rows have inconsistent lengths", what);
            }
            flat.extend_from_slice(row);
        }
        Ok(flat)
    };
    let re = flatten(&re, "re")?;
    let im = flatten(&im, "im")?;
    CMatrix::new(rows, cols, re, im).map_err(|e| anyhow!("bad matrix: {}", e))
}

/// Read a matrix: `.json` files use the `{"re", "im"}` object form,
/// anything else is parsed as headerless CSV rows of real entries.
pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    if has_json_extension(path) {
        let value = read_json_file(path)?;
        return matrix_from_json(&value)
            .with_context(|| format!("in matrix file {}", path.display()));
    }
    let rows = read_csv_rows(path)?;
    if rows.is_empty() {
        bail!("matrix file {} has no rows", path.display());
    }
    CMatrix::from_rows(&rows)
        .map_err(|e| anyhow!("bad matrix in {}: {}", path.display(), e))
}

pub fn vector_json(x: &CVector) -> Value {
    json!({ "re": x.re(), "im": x.im() })
}

pub fn vector_from_json(v: &Value) -> Result<CVector> {
    let obj = v.as_object().context("vector JSON must be an object")?;
    let re = floats_from_json(obj.get("re").context("vector JSON needs \"re\"")?, "re")?;
    let im = match obj.get("im") {
        Some(im) => floats_from_json(im, "im")?,
        None => vec![0.0; re.len()],
    };
    CVector::new(re, im).map_err(|e| anyhow!("bad vector: {}", e))
}

/// Read a vector: `.json` uses `{"re", "im"}` with flat arrays, anything
/// else is a single CSV row of real entries.
pub fn read_vector(path: &Path) -> Result<CVector> {
    if has_json_extension(path) {
        let value = read_json_file(path)?;
        return vector_from_json(&value)
            .with_context(|| format!("in vector file {}", path.display()));
    }
    let rows = read_csv_rows(path)?;
    match rows.len() {
        0 => bail!("vector file {} is empty", path.display()),
        1 => Ok(CVector::real(rows.into_iter().next().expect("one row"))),
        n => bail!(
            "vector file {} has {} rows; expected one (or JSON form)",
            path.display(),
            n
        ),
    }
}

pub fn certificate_json(cert: &NormCertificate) -> Value {
    json!({
        "value": cert.value,
        "field": cert.field.to_string(),
        "method": cert.method.to_string(),
        "converged": cert.converged,
        "witness": vector_json(&cert.witness),
    })
}

pub fn read_json_file(path: &Path) -> Result<Value> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Pretty-printed JSON plus a trailing newline; deterministic because
/// serde_json sorts object keys and prints shortest-roundtrip floats.
pub fn write_json_file(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn has_json_extension(path: &Path) -> bool {
    path.extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"))
}

fn read_csv_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("reading {}", path.display()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row: Vec<f64> = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                let v: f64 = field.parse().map_err(|_| {
                    anyhow!(
                        "{}: row {}, column {}: {:?} is not a number",
                        path.display(),
                        i + 1,
                        j + 1,
                        field
                    )
                })?;
                if !v.is_finite() {
                    bail!("{}: row {}, column {}: entries must be finite", path.display(), i + 1, j + 1);
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}
