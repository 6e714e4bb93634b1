//! Text relevance of each visual token and the gate weights built from it.
//!
//! Relevance of token `v_i` is a clamped cosine similarity against the text
//! rows; the gate turns it into a multiplicative weight `(r_i + eps)^alpha`
//! on residual energy. With no usable text every weight is `1`.

use std::fmt;
use std::str::FromStr;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::linalg::dot_ordered;
use crate::{Error, Result, TextMatrix, TokenMatrix};

/// Instruction-formatting patterns shipped with the crate (a JSON array of
/// regexes matched against individual text tokens).
pub const DEFAULT_PATTERNS_JSON: &str = include_str!("../data/default_patterns.json");

/// Default gate exponent.
pub const DEFAULT_ALPHA: f64 = 0.75;
/// Gate exponent for Qwen-style encoders with denser token distributions.
pub const QWEN_ALPHA: f64 = 0.3;
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RelevanceFormulation {
    /// Max over text rows of `max(0, cos)`.
    #[default]
    #[serde(rename = "max")]
    MaxCos,
    /// Mean over text rows of `max(0, cos)`.
    #[serde(rename = "mean")]
    MeanCos,
    /// `max(0, cos)` against the mean text row.
    #[serde(rename = "pooled")]
    PooledCos,
}

impl RelevanceFormulation {
    pub const ALL: [RelevanceFormulation; 3] = [Self::MaxCos, Self::MeanCos, Self::PooledCos];

    pub fn name(self) -> &'static str {
        match self {
            Self::MaxCos => "max",
            Self::MeanCos => "mean",
            Self::PooledCos => "pooled",
        }
    }
}

impl fmt::Display for RelevanceFormulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelevanceFormulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Self::MaxCos),
            "mean" => Ok(Self::MeanCos),
            "pooled" => Ok(Self::PooledCos),
            _ => Err(Error::Config(format!(
                "unknown relevance formulation {s:?} (expected max, mean or pooled)"
            ))),
        }
    }
}

/// Guidance strength `alpha >= 0` and stability offset `epsilon > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateConfig {
    pub alpha: f64,
    pub epsilon: f64,
}

impl GateConfig {
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        let g = GateConfig { alpha, epsilon };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        Ok(())
    }
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig {
            alpha: DEFAULT_ALPHA,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

#[inline]
fn clamped_cos(dot: f64, norm_a: f64, norm_b: f64) -> f64 {
    if norm_a == 0.0 || norm_b == 0.0 {
        0.0
    } else {
        (dot / (norm_a * norm_b)).clamp(0.0, 1.0)
    }
}

/// Per-token relevance in `[0, 1]`.
///
/// Rows removed by the text keep mask are ignored. When no text row
/// survives, every score is `0`; callers wanting the uniform fallback use
/// [`relevance_weights`].
pub fn text_relevance(v: &TokenMatrix, u: &TextMatrix, formulation: RelevanceFormulation) -> Result<Vec<f64>> {
    if !u.is_empty() && u.dim() != v.dim() {
        return Err(Error::Shape {
            what: "text embedding dim vs visual embedding dim",
            expected: v.dim(),
            found: u.dim(),
        });
    }
    let text: Vec<&[f64]> = u.kept_rows().collect();
    if text.is_empty() {
        return Ok(vec![0.0; v.tokens()]);
    }

    let scores = match formulation {
        RelevanceFormulation::MaxCos | RelevanceFormulation::MeanCos => {
            let text_norms: Vec<f64> = text.iter().map(|t| dot_ordered(t, t).sqrt()).collect();
            v.rows()
                .map(|vi| {
                    let nv = dot_ordered(vi, vi).sqrt();
                    let sims = text
                        .iter()
                        .zip(&text_norms)
                        .map(|(t, &nt)| clamped_cos(dot_ordered(vi, t), nv, nt));
                    if formulation == RelevanceFormulation::MaxCos {
                        sims.fold(0.0, f64::max)
                    } else {
                        sims.sum::<f64>() / text.len() as f64
                    }
                })
                .collect()
        }
        RelevanceFormulation::PooledCos => {
            let mut pooled = vec![0.0; v.dim()];
            for t in &text {
                for (p, x) in pooled.iter_mut().zip(t.iter()) {
                    *p += x;
                }
            }
            let n = text.len() as f64;
            pooled.iter_mut().for_each(|p| *p /= n);
            let np = dot_ordered(&pooled, &pooled).sqrt();
            v.rows()
                .map(|vi| clamped_cos(dot_ordered(vi, &pooled), dot_ordered(vi, vi).sqrt(), np))
                .collect()
        }
    };
    Ok(scores)
}

/// `w_i = (r_i + eps)^alpha`, or all ones when `relevance` is `None`
/// (text absent).
pub fn gate_weights(relevance: Option<&[f64]>, tokens: usize, gate: GateConfig) -> Vec<f64> {
    match relevance {
        None => vec![1.0; tokens],
        Some(r) => r.iter().map(|&ri| (ri + gate.epsilon).powf(gate.alpha)).collect(),
    }
}

/// Relevance scores, or `None` when the text is absent (`L = 0` or every
/// row masked out).
pub fn relevance_or_absent(
    v: &TokenMatrix,
    u: &TextMatrix,
    formulation: RelevanceFormulation,
) -> Result<Option<Vec<f64>>> {
    let r = text_relevance(v, u, formulation)?;
    Ok((!u.is_effectively_empty()).then_some(r))
}

/// Relevance followed by gating, with the uniform fallback applied.
pub fn relevance_weights(
    v: &TokenMatrix,
    u: &TextMatrix,
    formulation: RelevanceFormulation,
    gate: GateConfig,
) -> Result<Vec<f64>> {
    let r = relevance_or_absent(v, u, formulation)?;
    Ok(gate_weights(r.as_deref(), v.tokens(), gate))
}

/// Keep mask over text tokens: `false` for any token matched by one of
/// `patterns`.
pub fn clean_text_tokens<S: AsRef<str>, P: AsRef<str>>(tokens: &[S], patterns: &[P]) -> Result<Vec<bool>> {
    let compiled = patterns
        .iter()
        .map(|p| {
            Regex::new(p.as_ref()).map_err(|source| Error::Pattern {
                pattern: p.as_ref().to_owned(),
                source,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tokens
        .iter()
        .map(|t| !compiled.iter().any(|re| re.is_match(t.as_ref())))
        .collect())
}

pub fn default_patterns() -> Vec<String> {
    serde_json::from_str(DEFAULT_PATTERNS_JSON).expect("bundled pattern file is valid JSON")
}

/// Element-wise AND of two masks of equal length.
pub fn combine_masks(a: &[bool], b: &[bool]) -> Result<Vec<bool>> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            what: "mask length",
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| x && y).collect())
}
