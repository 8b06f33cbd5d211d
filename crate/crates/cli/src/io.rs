//! Readers for p-value and layer files.
//!
//! Both formats hold one two-column record per hypothesis, separated by a
//! comma, a tab or whitespace. Blank lines and lines starting with `#` are
//! skipped, and the first record may be a header. Ids run from 1 to n.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use pfilter::{validate_layer, Layer, PValueVector};

use crate::error::{CliError, Result};

struct Record<'a> {
    line: usize,
    id: &'a str,
    value: &'a str,
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn records<'a>(path: &Path, text: &'a str) -> Result<Vec<Record<'a>>> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_fields(line);
        if fields.len() != 2 {
            return Err(parse_error(
                path,
                k + 1,
                format!("expected 2 fields (id, value), found {}", fields.len()),
            ));
        }
        let first = !seen_data;
        seen_data = true;
        if first && fields[0].parse::<usize>().is_err() {
            continue;
        }
        out.push(Record {
            line: k + 1,
            id: fields[0],
            value: fields[1],
        });
    }
    Ok(out)
}

fn parse_error(path: &Path, line: usize, message: String) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn parse_id(path: &Path, r: &Record<'_>) -> Result<usize> {
    match r.id.parse::<usize>() {
        Ok(id) if id >= 1 => Ok(id),
        _ => Err(parse_error(
            path,
            r.line,
            format!("id '{}' is not a positive integer", r.id),
        )),
    }
}

/// Reads a p-value file. Records may appear in any order, but the ids must
/// be exactly `1..=n`.
pub fn read_pvalues(path: &Path) -> Result<PValueVector> {
    let text = read(path)?;
    let recs = records(path, &text)?;
    if recs.is_empty() {
        return Err(CliError::Content {
            path: path.to_path_buf(),
            message: "no p-values".into(),
        });
    }
    let n = recs.len();
    let mut values: Vec<Option<(f64, usize)>> = vec![None; n];
    for r in &recs {
        let id = parse_id(path, r)?;
        let p: f64 = r
            .value
            .parse()
            .map_err(|_| parse_error(path, r.line, format!("'{}' is not a number", r.value)))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(parse_error(
                path,
                r.line,
                format!("p-value {p} outside [0, 1]"),
            ));
        }
        if id > n {
            return Err(parse_error(
                path,
                r.line,
                format!("id {id} exceeds the number of records ({n})"),
            ));
        }
        if let Some((_, earlier)) = values[id - 1] {
            return Err(parse_error(
                path,
                r.line,
                format!("duplicate id {id} (first on line {earlier})"),
            ));
        }
        values[id - 1] = Some((p, r.line));
    }
    let values: Vec<f64> = values
        .into_iter()
        .map(|v| v.expect("n distinct ids in 1..=n").0)
        .collect();
    Ok(PValueVector::new(values)?)
}

/// A layer read from file, with its group labels in index order.
#[derive(Debug, Clone)]
pub struct LayerFile {
    pub path: PathBuf,
    pub layer: Layer,
    pub labels: Vec<String>,
}

impl LayerFile {
    pub fn name(&self) -> String {
        self.path.file_stem().map_or_else(
            || self.path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        )
    }
}

/// Reads a layer file for `n` hypotheses. Labels become group indices in
/// order of first appearance. Partition failures are reported as
/// [`CliError::Partition`] listing every violation.
pub fn read_layer(path: &Path, n: usize) -> Result<LayerFile> {
    let text = read(path)?;
    let recs = records(path, &text)?;
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for r in &recs {
        let id = parse_id(path, r)?;
        let g = *index.entry(r.value).or_insert_with(|| {
            labels.push(r.value.to_string());
            groups.push(Vec::new());
            labels.len() - 1
        });
        groups[g].push(id - 1);
    }
    let violations = validate_layer(&groups, n);
    if !violations.is_empty() {
        return Err(CliError::Partition {
            path: path.to_path_buf(),
            violations,
        });
    }
    Ok(LayerFile {
        path: path.to_path_buf(),
        layer: Layer::new(n, groups)?,
        labels,
    })
}
