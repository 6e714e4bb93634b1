//! File formats: NPY arrays in, JSON selection reports and keep masks.

pub mod npy;

use std::path::Path;

use crate::{Error, Result, SelectionResult, TextMatrix, TokenMatrix};

pub use npy::{load_matrix, load_scores, save_matrix, save_scores};

/// Loads a visual token matrix (at least one row).
pub fn load_tokens(path: impl AsRef<Path>) -> Result<TokenMatrix> {
    TokenMatrix::try_from(load_matrix(path)?)
}

/// Loads a text matrix; zero rows is the text-absent case.
pub fn load_text(path: impl AsRef<Path>) -> Result<TextMatrix> {
    Ok(TextMatrix::from(load_matrix(path)?))
}

/// Serializes a result as pretty-printed JSON with a trailing newline.
/// Output is a pure function of the result, so repeated writes are
/// byte-identical.
pub fn result_to_json(result: &SelectionResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

pub fn save_result(result: &SelectionResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let json = result_to_json(result)?;
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn load_result(path: impl AsRef<Path>) -> Result<SelectionResult> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Parses a keep mask: either a JSON boolean array, or one `0`/`1` per line.
pub fn parse_keep_mask(text: &str) -> Result<Vec<bool>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed)
            .map_err(|e| Error::KeepMask(format!("expected a JSON array of booleans: {e}")));
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| match l.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(Error::KeepMask(format!(
                "line {}: expected 0 or 1, found {other:?}",
                n + 1
            ))),
        })
        .collect()
}

pub fn load_keep_mask(path: impl AsRef<Path>) -> Result<Vec<bool>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_keep_mask(&text)
}

/// Reads a JSON array of regex strings.
pub fn load_patterns(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
