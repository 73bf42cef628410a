//! Reading input files and validating selections.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use pertopo::diagram::PersistenceDiagram;
use pertopo::filtration::{CoverFiltration, FilteredComplex, Vertex};
use pertopo::fpgroup::Budget;
use thiserror::Error;

/// Failures that are the caller's fault; they exit with code 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Read { path: path.to_path_buf(), source })
}

pub fn write(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|source| InputError::Write { path: path.to_path_buf(), source })
}

fn parse_err(path: &Path, e: impl ToString) -> InputError {
    InputError::Parse { path: path.to_path_buf(), message: e.to_string() }
}

pub fn complex(path: &Path) -> Result<FilteredComplex<f64>, InputError> {
    FilteredComplex::parse(&read(path)?).map_err(|e| parse_err(path, e))
}

pub fn diagram(path: &Path) -> Result<PersistenceDiagram<f64>, InputError> {
    PersistenceDiagram::parse(&read(path)?).map_err(|e| parse_err(path, e))
}

/// One vertex id per line; `#` starts a comment.
pub fn vertex_list(path: &Path) -> Result<BTreeSet<Vertex>, InputError> {
    let mut out = BTreeSet::new();
    for (n, raw) in read(path)?.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = line.parse::<Vertex>().map_err(|_| parse_err(path, format!("line {}: bad vertex `{line}`", n + 1)))?;
        out.insert(v);
    }
    Ok(out)
}

pub fn cover(complex: FilteredComplex<f64>, a: &Path, b: &Path) -> Result<CoverFiltration<f64>, InputError> {
    complex.restrict_cover(vertex_list(a)?, vertex_list(b)?).map_err(|e| InputError::Invalid(e.to_string()))
}

pub fn budget(words: usize, nodes: usize, cosets: usize) -> Result<Budget, InputError> {
    if words == 0 || nodes == 0 || cosets == 0 {
        return Err(InputError::Invalid("budgets must be positive".into()));
    }
    Ok(Budget { max_word_length: words, max_nodes: nodes, max_cosets: cosets })
}

/// `all` or a comma-separated list of critical values of `grid`.
pub fn levels(selection: &str, grid: &[f64]) -> Result<Vec<f64>, InputError> {
    if selection.trim() == "all" {
        return Ok(grid.to_vec());
    }
    let mut out = Vec::new();
    for tok in selection.split(',') {
        let v: f64 = tok.trim().parse().map_err(|_| InputError::Invalid(format!("bad level `{}`", tok.trim())))?;
        if !grid.contains(&v) {
            return Err(InputError::Invalid(format!("level {v} is not a critical value of the filtration")));
        }
        out.push(v);
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

pub fn pairs(levels: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (i, &u) in levels.iter().enumerate() {
        for &v in &levels[i..] {
            out.push((u, v));
        }
    }
    out
}

/// File name without directories, for echoing paths in reports.
pub fn display_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}
