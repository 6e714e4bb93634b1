use serde::{Deserialize, Serialize};

use crate::{Error, GateConfig, RelevanceFormulation, Result, SeedStrategy};

/// Relative norm below which a token counts as already in the span.
pub const DEFAULT_SPAN_TOL: f64 = 1e-6;

/// How to fill the remaining budget once every candidate's residual energy
/// has fallen below `span_tol` times the largest initial energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExhaustFallback {
    /// Highest gate weight first.
    #[default]
    ByWeight,
    /// Largest norm first.
    ByNorm,
}

impl std::str::FromStr for ExhaustFallback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weight" | "by_weight" => Ok(Self::ByWeight),
            "norm" | "by_norm" => Ok(Self::ByNorm),
            _ => Err(Error::Config(format!(
                "unknown exhaust fallback {s:?} (expected weight or norm)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    /// Number of tokens to keep, `k`.
    pub budget: usize,
    pub gate: GateConfig,
    pub formulation: RelevanceFormulation,
    pub seed: SeedStrategy,
    pub span_tol: f64,
    pub exhaust_fallback: ExhaustFallback,
}

impl PruneConfig {
    /// Defaults for everything but the budget: `alpha = 0.75`,
    /// `epsilon = 1e-6`, max-cosine relevance, max-norm seed.
    pub fn new(budget: usize) -> Self {
        PruneConfig {
            budget,
            gate: GateConfig::default(),
            formulation: RelevanceFormulation::MaxCos,
            seed: SeedStrategy::MaxNorm,
            span_tol: DEFAULT_SPAN_TOL,
            exhaust_fallback: ExhaustFallback::ByWeight,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.gate.alpha = alpha;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.gate.epsilon = epsilon;
        self
    }

    pub fn with_formulation(mut self, formulation: RelevanceFormulation) -> Self {
        self.formulation = formulation;
        self
    }

    pub fn with_seed(mut self, seed: SeedStrategy) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_span_tol(mut self, span_tol: f64) -> Self {
        self.span_tol = span_tol;
        self
    }

    pub fn with_fallback(mut self, fallback: ExhaustFallback) -> Self {
        self.exhaust_fallback = fallback;
        self
    }

    /// Checks everything that does not depend on the input matrices.
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        self.gate.validate()?;
        if !(self.span_tol > 0.0 && self.span_tol < 1.0) {
            return Err(Error::Config(format!(
                "span_tol must lie in (0, 1), got {}",
                self.span_tol
            )));
        }
        Ok(())
    }
}
