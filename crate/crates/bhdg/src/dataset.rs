//! Multi-label dataset loading and splitting.
//!
//! Supports the Mulan convention (ARFF data file plus an XML listing the
//! label attributes) and a plain two-file CSV fallback. Loaded datasets are
//! validated: labels are strictly {0, 1}, features are finite.

use std::fmt;
use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A multi-label dataset: `x` is n instances by d features, `y` is the
/// corresponding n by c binary label matrix.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub x: Array2<f64>,
    pub y: Array2<f64>,
    pub feature_names: Vec<String>,
    pub label_names: Vec<String>,
}

impl Dataset {
    /// Validating constructor.
    pub fn new(
        name: impl Into<String>,
        x: Array2<f64>,
        y: Array2<f64>,
        feature_names: Vec<String>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let (n, d) = x.dim();
        let (ny, c) = y.dim();
        if n == 0 || d == 0 || c == 0 {
            return Err(Error::Validation(format!(
                "dataset must have n, d, c >= 1 (got n={n}, d={d}, c={c})"
            )));
        }
        if ny != n {
            return Err(Error::Validation(format!(
                "feature matrix has {n} rows but label matrix has {ny}"
            )));
        }
        if feature_names.len() != d || label_names.len() != c {
            return Err(Error::Validation(format!(
                "name lists ({}, {}) do not match matrix shapes ({d}, {c})",
                feature_names.len(),
                label_names.len()
            )));
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite feature value {v}")));
        }
        if let Some(v) = y.iter().find(|&&v| v != 0.0 && v != 1.0) {
            return Err(Error::Validation(format!(
                "label matrix must contain only 0 and 1, found {v}"
            )));
        }
        Ok(Dataset {
            name: name.into(),
            x,
            y,
            feature_names,
            label_names,
        })
    }

    pub fn n_instances(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn n_labels(&self) -> usize {
        self.y.ncols()
    }

    /// Row subset of both matrices (used to realize a split).
    pub fn subset(&self, indices: &[usize]) -> (Array2<f64>, Array2<f64>) {
        let x = self.x.select(ndarray::Axis(0), indices);
        let y = self.y.select(ndarray::Axis(0), indices);
        (x, y)
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} instances, {} features, {} labels",
            self.name,
            self.n_instances(),
            self.n_features(),
            self.n_labels()
        )
    }
}

/// Deterministic train/test partition of instance indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub seed: u64,
}

/// Splits `n` instances with `|train| = round(train_fraction * n)`
/// (half rounds up). The permutation is drawn from a seeded ChaCha stream so
/// the same `(n, fraction, seed)` always yields the same index lists.
pub fn make_split(n: usize, train_fraction: f64, seed: u64) -> Result<Split> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Param(format!(
            "train_fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let n_train = (train_fraction * n as f64 + 0.5).floor() as usize;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Fisher-Yates with an explicit index draw; kept version-independent so
    // splits stay stable across toolchain upgrades.
    for i in (1..n).rev() {
        let j = (rand::RngCore::next_u64(&mut rng) % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    let test_indices = perm.split_off(n_train);
    Ok(Split {
        train_indices: perm,
        test_indices,
        seed,
    })
}

// ---------------------------------------------------------------------------
// ARFF + label XML
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum AttrType {
    Numeric,
    /// Nominal attribute whose value set is a subset of {0, 1}.
    Binary,
}

#[derive(Debug)]
struct ArffContent {
    attributes: Vec<(String, AttrType)>,
    /// Dense rows, one value per attribute.
    rows: Vec<Vec<f64>>,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Strips surrounding single or double quotes.
fn unquote(s: &str) -> &str {
    let s = s.trim();
    if s.len() >= 2
        && ((s.starts_with('\'') && s.ends_with('\'')) || (s.starts_with('"') && s.ends_with('"')))
    {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Splits an `@attribute` line into name and type, honoring quoted names.
fn split_attribute_decl(rest: &str) -> Option<(String, String)> {
    let rest = rest.trim();
    if rest.is_empty() {
        return None;
    }
    let (name, ty) = if let Some(q) = rest.chars().next().filter(|&c| c == '\'' || c == '"') {
        let end = rest[1..].find(q)? + 1;
        (rest[1..end].to_string(), rest[end + 1..].trim().to_string())
    } else {
        let mut it = rest.splitn(2, char::is_whitespace);
        let name = it.next()?.to_string();
        (name, it.next().unwrap_or("").trim().to_string())
    };
    if ty.is_empty() {
        return None;
    }
    Some((name, ty))
}

fn parse_attr_type(ty: &str) -> Option<AttrType> {
    let t = ty.trim();
    if t.starts_with('{') && t.ends_with('}') {
        let ok = t[1..t.len() - 1]
            .split(',')
            .all(|v| matches!(unquote(v), "0" | "1"));
        return ok.then_some(AttrType::Binary);
    }
    match t.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => Some(AttrType::Numeric),
        _ => None,
    }
}

fn parse_arff(path: &Path) -> Result<ArffContent> {
    let text = fs::read_to_string(path)?;
    let mut attributes: Vec<(String, AttrType)> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut in_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                continue;
            } else if lower.starts_with("@attribute") {
                let rest = &line["@attribute".len()..];
                let (name, ty) = split_attribute_decl(rest)
                    .ok_or_else(|| parse_err(path, lineno, "malformed @attribute declaration"))?;
                let ty = parse_attr_type(&ty).ok_or_else(|| {
                    parse_err(path, lineno, format!("unsupported attribute type `{ty}`"))
                })?;
                attributes.push((name, ty));
            } else if lower.starts_with("@data") {
                if attributes.is_empty() {
                    return Err(parse_err(path, lineno, "@data before any @attribute"));
                }
                in_data = true;
            } else {
                return Err(parse_err(path, lineno, format!("unexpected header line `{line}`")));
            }
            continue;
        }
        let row = if line.starts_with('{') {
            parse_sparse_row(line, attributes.len()).map_err(|m| parse_err(path, lineno, m))?
        } else {
            parse_dense_row(line, attributes.len()).map_err(|m| parse_err(path, lineno, m))?
        };
        rows.push(row);
    }
    if !in_data {
        return Err(parse_err(path, text.lines().count(), "missing @data section"));
    }
    if rows.is_empty() {
        return Err(parse_err(path, text.lines().count(), "no data rows"));
    }
    Ok(ArffContent { attributes, rows })
}

fn parse_value(tok: &str) -> std::result::Result<f64, String> {
    let tok = unquote(tok);
    if tok == "?" {
        return Err("missing values ('?') are not supported".into());
    }
    tok.parse::<f64>()
        .map_err(|_| format!("non-numeric value `{tok}`"))
}

fn parse_dense_row(line: &str, n_attrs: usize) -> std::result::Result<Vec<f64>, String> {
    let values: Vec<&str> = line.split(',').collect();
    if values.len() != n_attrs {
        return Err(format!(
            "expected {n_attrs} values, found {}",
            values.len()
        ));
    }
    values.iter().map(|t| parse_value(t)).collect()
}

/// Sparse ARFF row: `{index value, index value, ...}`; omitted entries are 0.
fn parse_sparse_row(line: &str, n_attrs: usize) -> std::result::Result<Vec<f64>, String> {
    let inner = line
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or("unterminated sparse row")?;
    let mut row = vec![0.0; n_attrs];
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(row);
    }
    for entry in inner.split(',') {
        let mut it = entry.trim().splitn(2, char::is_whitespace);
        let idx: usize = it
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| format!("bad sparse index in `{entry}`"))?;
        let val = parse_value(it.next().ok_or(format!("missing value in `{entry}`"))?)?;
        if idx >= n_attrs {
            return Err(format!("sparse index {idx} out of range (n_attrs={n_attrs})"));
        }
        row[idx] = val;
    }
    Ok(row)
}

/// Extracts the label names from a Mulan labels XML, in document order.
fn parse_labels_xml(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path)?;
    let mut names = Vec::new();
    let mut rest = text.as_str();
    while let Some(pos) = rest.find("<label") {
        let tag_start = &rest[pos..];
        // must be "<label " or "<label/>" etc., not e.g. "<labels>"
        let after = &tag_start["<label".len()..];
        if !after.starts_with(|c: char| c.is_whitespace() || c == '>' || c == '/') {
            rest = &rest[pos + "<label".len()..];
            continue;
        }
        let end = tag_start
            .find('>')
            .ok_or_else(|| Error::Schema(format!("unterminated <label> tag in {}", path.display())))?;
        let tag = &tag_start[..end];
        if let Some(name) = extract_name_attr(tag) {
            names.push(name);
        } else {
            return Err(Error::Schema(format!(
                "<label> without a name attribute in {}",
                path.display()
            )));
        }
        rest = &tag_start[end..];
    }
    if names.is_empty() {
        return Err(Error::Schema(format!(
            "no <label name=\"...\"/> elements found in {}",
            path.display()
        )));
    }
    Ok(names)
}

fn extract_name_attr(tag: &str) -> Option<String> {
    let pos = tag.find("name")?;
    let after = tag[pos + 4..].trim_start();
    let after = after.strip_prefix('=')?.trim_start();
    let quote = after.chars().next()?;
    if quote != '"' && quote != '\'' {
        return None;
    }
    let end = after[1..].find(quote)?;
    Some(after[1..end + 1].to_string())
}

/// Loads a Mulan-style dataset: ARFF data plus an XML naming the label
/// attributes. Label columns follow the XML order; all remaining attributes
/// become features in their ARFF order.
pub fn load_arff(data_path: impl AsRef<Path>, labels_xml_path: impl AsRef<Path>) -> Result<Dataset> {
    let data_path = data_path.as_ref();
    let content = parse_arff(data_path)?;
    let label_names = parse_labels_xml(labels_xml_path.as_ref())?;

    let mut label_cols = Vec::with_capacity(label_names.len());
    for name in &label_names {
        let col = content
            .attributes
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| {
                Error::Schema(format!("label `{name}` listed in XML not found in ARFF"))
            })?;
        label_cols.push(col);
    }
    let feature_cols: Vec<usize> = (0..content.attributes.len())
        .filter(|c| !label_cols.contains(c))
        .collect();
    if feature_cols.is_empty() {
        return Err(Error::Schema("every ARFF attribute is a label; no features left".into()));
    }

    let n = content.rows.len();
    let mut x = Array2::<f64>::zeros((n, feature_cols.len()));
    let mut y = Array2::<f64>::zeros((n, label_cols.len()));
    for (i, row) in content.rows.iter().enumerate() {
        for (fi, &c) in feature_cols.iter().enumerate() {
            x[[i, fi]] = row[c];
        }
        for (li, &c) in label_cols.iter().enumerate() {
            let v = row[c];
            if v != 0.0 && v != 1.0 {
                return Err(Error::Validation(format!(
                    "label `{}` has non-binary value {v} in instance {i}",
                    label_names[li]
                )));
            }
            y[[i, li]] = v;
        }
    }
    let feature_names = feature_cols
        .iter()
        .map(|&c| content.attributes[c].0.clone())
        .collect();
    let name = data_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Dataset::new(name, x, y, feature_names, label_names)
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Optional header names plus the numeric rows of a CSV file.
type CsvContent = (Option<Vec<String>>, Vec<Vec<f64>>);

/// Reads a numeric CSV; a non-numeric first row is treated as a header.
fn read_numeric_csv(path: &Path) -> Result<CsvContent> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, idx + 1, e.to_string()))?;
        let parsed: std::result::Result<Vec<f64>, ()> = record
            .iter()
            .map(|cell| cell.parse::<f64>().map_err(|_| ()))
            .collect();
        match parsed {
            Ok(values) => {
                if let Some(prev) = rows.first() {
                    if values.len() != prev.len() {
                        return Err(parse_err(
                            path,
                            idx + 1,
                            format!("row has {} cells, expected {}", values.len(), prev.len()),
                        ));
                    }
                }
                rows.push(values);
            }
            Err(()) if idx == 0 => {
                header = Some(record.iter().map(|s| s.to_string()).collect());
            }
            Err(()) => {
                let bad = record
                    .iter()
                    .find(|c| c.parse::<f64>().is_err())
                    .unwrap_or("");
                return Err(parse_err(path, idx + 1, format!("non-numeric cell `{bad}`")));
            }
        }
    }
    if rows.is_empty() {
        return Err(parse_err(path, 0, "no data rows"));
    }
    Ok((header, rows))
}

fn rows_to_array(rows: Vec<Vec<f64>>) -> Array2<f64> {
    let n = rows.len();
    let d = rows[0].len();
    let mut out = Array2::<f64>::zeros((n, d));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            out[[i, j]] = v;
        }
    }
    out
}

/// Loads a dataset from a features CSV and a binary labels CSV with matching
/// row counts. Headers are optional on both files and auto-detected.
pub fn load_csv(features_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let features_path = features_path.as_ref();
    let labels_path = labels_path.as_ref();
    let (fheader, frows) = read_numeric_csv(features_path)?;
    let (lheader, lrows) = read_numeric_csv(labels_path)?;
    if frows.len() != lrows.len() {
        return Err(Error::Validation(format!(
            "feature file has {} rows but label file has {}",
            frows.len(),
            lrows.len()
        )));
    }
    let x = rows_to_array(frows);
    let y = rows_to_array(lrows);
    let feature_names =
        fheader.unwrap_or_else(|| (0..x.ncols()).map(|j| format!("f{j}")).collect());
    let label_names = lheader.unwrap_or_else(|| (0..y.ncols()).map(|j| format!("label{j}")).collect());
    let name = features_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Dataset::new(name, x, y, feature_names, label_names)
}

/// Writes the dataset back out as a features CSV and a labels CSV (headers
/// included). Values round-trip exactly: reloading yields bit-identical
/// matrices.
pub fn save_csv(
    ds: &Dataset,
    features_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
) -> Result<()> {
    let mut fw = csv::Writer::from_path(features_path.as_ref())?;
    fw.write_record(&ds.feature_names)
        .map_err(|e| Error::Validation(e.to_string()))?;
    for row in ds.x.rows() {
        fw.write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| Error::Validation(e.to_string()))?;
    }
    fw.flush()?;
    let mut lw = csv::Writer::from_path(labels_path.as_ref())?;
    lw.write_record(&ds.label_names)
        .map_err(|e| Error::Validation(e.to_string()))?;
    for row in ds.y.rows() {
        lw.write_record(row.iter().map(|v| format!("{}", *v as u8)))
            .map_err(|e| Error::Validation(e.to_string()))?;
    }
    lw.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Feature scaling
// ---------------------------------------------------------------------------

/// Per-column min-max scaler fitted on training rows; constant columns map
/// to 0. Test rows are transformed with the training statistics (values may
/// fall outside [0, 1]).
#[derive(Debug, Clone)]
pub struct MinMaxScaler {
    min: Array1<f64>,
    range: Array1<f64>,
}

impl MinMaxScaler {
    pub fn fit(train_x: &Array2<f64>) -> Self {
        let d = train_x.ncols();
        let mut min = Array1::from_elem(d, f64::INFINITY);
        let mut max = Array1::from_elem(d, f64::NEG_INFINITY);
        for row in train_x.rows() {
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        let range = &max - &min;
        MinMaxScaler { min, range }
    }

    pub fn transform(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut out = x.clone();
        for mut row in out.rows_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = if self.range[j] == 0.0 {
                    0.0
                } else {
                    (*v - self.min[j]) / self.range[j]
                };
            }
        }
        out
    }
}
