//! Choice of the seed token that starts subspace expansion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{argmax, cosine, norm_sq};
use crate::{Error, Result, ScoreVector, TokenMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedStrategy {
    /// Highest external score, e.g. CLS attention.
    #[serde(rename = "scores")]
    ExternalScoreArgmax,
    /// Largest L2 norm.
    #[serde(rename = "norm")]
    MaxNorm,
    /// Highest text relevance.
    #[serde(rename = "relevance")]
    MaxRelevance,
    /// Most cosine-similar to the mean token.
    #[serde(rename = "mean")]
    NearestToMean,
    /// Cell `(H/2, W/2)` (floored) of the token grid.
    #[serde(rename = "center")]
    GridCenter,
}

impl SeedStrategy {
    pub const ALL: [SeedStrategy; 5] = [
        Self::ExternalScoreArgmax,
        Self::MaxNorm,
        Self::MaxRelevance,
        Self::NearestToMean,
        Self::GridCenter,
    ];

    /// External scores when available, otherwise the max-norm token.
    pub fn default_for(has_scores: bool) -> Self {
        if has_scores {
            Self::ExternalScoreArgmax
        } else {
            Self::MaxNorm
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ExternalScoreArgmax => "scores",
            Self::MaxNorm => "norm",
            Self::MaxRelevance => "relevance",
            Self::NearestToMean => "mean",
            Self::GridCenter => "center",
        }
    }
}

impl fmt::Display for SeedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeedStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown seed strategy {s:?} (expected scores, norm, relevance, mean or center)"
            ))
        })
    }
}

/// Index of the seed token; ties go to the lowest index.
///
/// `relevance` is required by [`SeedStrategy::MaxRelevance`], `scores` by
/// [`SeedStrategy::ExternalScoreArgmax`] and grid metadata on `v` by
/// [`SeedStrategy::GridCenter`].
pub fn select_seed(
    v: &TokenMatrix,
    strategy: SeedStrategy,
    relevance: Option<&[f64]>,
    scores: Option<&ScoreVector>,
) -> Result<usize> {
    let t = v.tokens();
    let best = |values: &[f64], what: &'static str| -> Result<usize> {
        if values.len() != t {
            return Err(Error::Shape {
                what,
                expected: t,
                found: values.len(),
            });
        }
        Ok(argmax(values.iter().copied().enumerate()).unwrap_or(0))
    };

    match strategy {
        SeedStrategy::ExternalScoreArgmax => {
            let s = scores.ok_or(Error::MissingSeedInput {
                strategy: "scores",
                missing: "a score vector",
            })?;
            best(s.as_slice(), "score vector length vs token count")
        }
        SeedStrategy::MaxNorm => {
            let norms: Vec<f64> = v.rows().map(norm_sq).collect();
            best(&norms, "token count")
        }
        SeedStrategy::MaxRelevance => {
            let r = relevance.ok_or(Error::MissingSeedInput {
                strategy: "relevance",
                missing: "text relevance scores (non-empty text)",
            })?;
            best(r, "relevance length vs token count")
        }
        SeedStrategy::NearestToMean => {
            let mut mean = vec![0.0; v.dim()];
            for row in v.rows() {
                for (m, x) in mean.iter_mut().zip(row) {
                    *m += x;
                }
            }
            mean.iter_mut().for_each(|m| *m /= t as f64);
            let sims: Vec<f64> = v.rows().map(|row| cosine(row, &mean)).collect();
            best(&sims, "token count")
        }
        SeedStrategy::GridCenter => {
            let g = v.grid().ok_or(Error::MissingSeedInput {
                strategy: "center",
                missing: "grid metadata (HxW)",
            })?;
            Ok((g.height / 2) * g.width + g.width / 2)
        }
    }
}
