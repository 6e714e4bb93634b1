//! Closed-form cost accounting.
//!
//! Prefill FLOPs per layer for a sequence of `N` tokens through a decoder
//! with hidden size `d` and MLP width `m` are `8 N d^2 + 4 N^2 d + 6 N d m`,
//! with `N = T + L` unpruned and `N = k + L` after keeping `k` visual tokens.
//! Nothing else (heads, softmax, embeddings) is counted.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Decoder and prompt dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmShape {
    /// Hidden size `d`.
    pub hidden: u64,
    /// MLP intermediate size `m`.
    pub mlp: u64,
    pub layers: u64,
    /// Visual tokens `T`.
    pub visual_tokens: u64,
    /// Text tokens `L`.
    pub text_tokens: u64,
    /// Retained visual tokens `k`.
    pub budget: u64,
}

impl LlmShape {
    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 || self.mlp == 0 || self.layers == 0 || self.visual_tokens == 0 {
            return Err(Error::Config(
                "hidden, mlp, layers and visual_tokens must be positive".into(),
            ));
        }
        if self.budget > self.visual_tokens {
            return Err(Error::BudgetExceedsTokens {
                budget: self.budget as usize,
                tokens: self.visual_tokens as usize,
            });
        }
        Ok(())
    }
}

/// `8 N d^2 + 4 N^2 d + 6 N d m` for `n` tokens.
pub fn layer_flops(n: u64, hidden: u64, mlp: u64) -> u128 {
    let (n, d, m) = (n as u128, hidden as u128, mlp as u128);
    8 * n * d * d + 4 * n * n * d + 6 * n * d * m
}

/// Total prefill FLOPs over all layers, with (`pruned`) or without pruning.
pub fn prefill_flops(shape: &LlmShape, pruned: bool) -> Result<u128> {
    shape.validate()?;
    let visual = if pruned { shape.budget } else { shape.visual_tokens };
    let n = visual + shape.text_tokens;
    Ok(shape.layers as u128 * layer_flops(n, shape.hidden, shape.mlp))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefillReport {
    pub full_flops: u128,
    pub pruned_flops: u128,
    /// `1 - pruned / full`, as a fraction.
    pub reduction: f64,
    /// Rule of thumb `1 - (k + L) / (T + L)` for cached states. An
    /// approximation, not a byte count.
    pub kv_cache_reduction_estimate: f64,
}

pub fn prefill_report(shape: &LlmShape) -> Result<PrefillReport> {
    let full = prefill_flops(shape, false)?;
    let pruned = prefill_flops(shape, true)?;
    let kept = (shape.budget + shape.text_tokens) as f64;
    let all = (shape.visual_tokens + shape.text_tokens) as f64;
    Ok(PrefillReport {
        full_flops: full,
        pruned_flops: pruned,
        reduction: 1.0 - pruned as f64 / full as f64,
        kv_cache_reduction_estimate: 1.0 - kept / all,
    })
}

/// Multiply-accumulate counts of the selection itself, one term per
/// asymptotic component with unit constants: relevance `T L d`, the
/// per-step energy passes `k T d` and basis maintenance `k^2 d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionCost {
    pub relevance: u128,
    pub greedy: u128,
    pub basis: u128,
}

impl SelectionCost {
    pub fn total(&self) -> u128 {
        self.relevance + self.greedy + self.basis
    }
}

pub fn selection_cost(tokens: u64, text: u64, dim: u64, budget: u64) -> SelectionCost {
    let (t, l, d, k) = (tokens as u128, text as u128, dim as u128, budget as u128);
    SelectionCost {
        relevance: t * l * d,
        greedy: k * t * d,
        basis: k * k * d,
    }
}

/// Published measurements for a preset: retained tokens, prefill TFLOPs,
/// and the relative reduction they report. Measured on real prompts with
/// varying token counts, so the formula is not expected to reproduce them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFigure {
    pub budget: u64,
    pub tflops: f64,
    pub reduction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// 7B LLaVA-1.5: 576 visual tokens, LLaMA-7B-class decoder.
    Llava15,
    /// 7B LLaVA-NeXT: up to 2880 visual tokens, same decoder.
    LlavaNext,
    /// Qwen2.5-VL-7B decoder; visual token count is resolution dependent,
    /// 1024 is only a default.
    Qwen25Vl,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Llava15, Preset::LlavaNext, Preset::Qwen25Vl];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Llava15 => "llava-1.5",
            Preset::LlavaNext => "llava-next",
            Preset::Qwen25Vl => "qwen2.5-vl",
        }
    }

    /// Preset shape with `L = 64` text tokens and no pruning (`k = T`).
    pub fn shape(self) -> LlmShape {
        let (hidden, mlp, layers, visual_tokens) = match self {
            Preset::Llava15 => (4096, 11008, 32, 576),
            Preset::LlavaNext => (4096, 11008, 32, 2880),
            Preset::Qwen25Vl => (3584, 18944, 28, 1024),
        };
        LlmShape {
            hidden,
            mlp,
            layers,
            visual_tokens,
            text_tokens: 64,
            budget: visual_tokens,
        }
    }

    pub fn reference_figures(self) -> &'static [ReferenceFigure] {
        match self {
            Preset::LlavaNext => &[
                ReferenceFigure {
                    budget: 2880,
                    tflops: 30.6,
                    reduction: 0.0,
                },
                ReferenceFigure {
                    budget: 640,
                    tflops: 9.6,
                    reduction: 0.686,
                },
                ReferenceFigure {
                    budget: 320,
                    tflops: 3.1,
                    reduction: 0.899,
                },
            ],
            _ => &[],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown preset {s:?} (expected llava-1.5, llava-next or qwen2.5-vl)"
            ))
        })
    }
}
