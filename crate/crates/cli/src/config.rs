//! Option resolution (flags, then `--config` TOML, then built-in defaults)
//! and input loading shared by the subcommands.

use std::path::{Path, PathBuf};

use resprune::relevance::{clean_text_tokens, combine_masks, default_patterns, DEFAULT_ALPHA};
use resprune::{
    tensor_io, ExhaustFallback, PruneConfig, RelevanceFormulation, ScoreVector, SeedStrategy, TextMatrix, TokenMatrix,
};
use serde::Deserialize;

use crate::args::{InputArgs, ModelPreset, TuningArgs};
use crate::error::{CliError, InputContext};

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub budget: Option<usize>,
    pub preset: Option<ModelPreset>,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub relevance: Option<String>,
    pub seed_strategy: Option<String>,
    pub span_tol: Option<f64>,
    pub fallback: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::input(
                path,
                resprune::Error::Io {
                    path: path.into(),
                    source: e,
                },
            )
        })?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Loaded inputs of `select` and `compare`.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub visual: TokenMatrix,
    pub text: TextMatrix,
    pub scores: Option<ScoreVector>,
}

impl Inputs {
    pub fn load(args: &InputArgs) -> Result<Self, CliError> {
        let mut visual = tensor_io::load_tokens(&args.visual).for_input(&args.visual)?;
        if let Some(grid) = args.grid {
            visual = visual.with_grid(grid)?;
        }

        let text = match &args.text {
            Some(p) => tensor_io::load_text(p).for_input(p)?,
            None => TextMatrix::empty(visual.dim()),
        };
        let mut mask: Option<Vec<bool>> = None;
        if let Some(p) = &args.keep_mask {
            mask = Some(tensor_io::load_keep_mask(p).for_input(p)?);
        }
        if let Some(p) = &args.text_tokens {
            let tokens: Vec<String> = read_json(p)?;
            let patterns = match &args.patterns {
                Some(pp) => tensor_io::load_patterns(pp).for_input(pp)?,
                None => default_patterns(),
            };
            let cleaned = clean_text_tokens(&tokens, &patterns)?;
            mask = Some(match mask {
                Some(m) => combine_masks(&m, &cleaned)?,
                None => cleaned,
            });
        }
        let text = match mask {
            Some(m) => text.with_keep_mask(m)?,
            None => text,
        };

        let scores = match &args.scores {
            Some(p) => Some(tensor_io::load_scores(p).for_input(p)?),
            None => None,
        };
        Ok(Inputs { visual, text, scores })
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::input(
            path,
            resprune::Error::Io {
                path: path.clone(),
                source: e,
            },
        )
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path, e.into()))
}

/// Builds the selector configuration. `budget` may be absent for
/// subcommands that sweep budgets; it is then left at 1.
pub fn resolve(
    tuning: &TuningArgs,
    budget: Option<usize>,
    has_scores: bool,
) -> Result<(PruneConfig, Option<usize>), CliError> {
    let file = match &tuning.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let preset = tuning.preset.or(file.preset);
    let alpha = tuning
        .alpha
        .or(file.alpha)
        .or(preset.map(ModelPreset::alpha))
        .unwrap_or(DEFAULT_ALPHA);
    let budget = budget.or(file.budget);

    let mut cfg = PruneConfig::new(budget.unwrap_or(1)).with_alpha(alpha);
    if let Some(eps) = tuning.epsilon.or(file.epsilon) {
        cfg = cfg.with_epsilon(eps);
    }
    if let Some(r) = tuning.relevance.as_ref().or(file.relevance.as_ref()) {
        cfg = cfg.with_formulation(r.parse::<RelevanceFormulation>()?);
    }
    let seed = match tuning.seed_strategy.as_ref().or(file.seed_strategy.as_ref()) {
        Some(s) => s.parse::<SeedStrategy>()?,
        None => SeedStrategy::default_for(has_scores),
    };
    cfg = cfg.with_seed(seed);
    if let Some(tol) = tuning.span_tol.or(file.span_tol) {
        cfg = cfg.with_span_tol(tol);
    }
    if let Some(f) = tuning.fallback.as_ref().or(file.fallback.as_ref()) {
        cfg = cfg.with_fallback(f.parse::<ExhaustFallback>()?);
    }
    Ok((cfg, budget))
}
