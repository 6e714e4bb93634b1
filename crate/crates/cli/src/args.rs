use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use resprune::Grid;

#[derive(Debug, Parser)]
#[command(name = "resprune", version, about = "Greedy residual-energy visual token selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select a token subset and write the JSON report.
    Select(SelectArgs),
    /// Reconstruction error of every method at every budget, as CSV.
    Compare(CompareArgs),
    /// Exhaustive optimum vs greedy on a small instance, as JSON.
    Oracle(OracleArgs),
    /// Analytic prefill FLOPs with and without pruning, as JSON.
    Flops(FlopsArgs),
    /// Timing of the selector on seeded synthetic data, as CSV.
    Bench(BenchArgs),
    /// Draw the keep/prune mask of a saved report.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Visual tokens, NPY (T, d).
    #[arg(long)]
    pub visual: PathBuf,
    /// Text tokens, NPY (L, d). L = 0 or omitted means no text guidance.
    #[arg(long)]
    pub text: Option<PathBuf>,
    /// Text keep mask: one 0/1 per line or a JSON boolean array.
    #[arg(long)]
    pub keep_mask: Option<PathBuf>,
    /// JSON array with the string of each text token; tokens matching a
    /// cleaning pattern are masked out.
    #[arg(long)]
    pub text_tokens: Option<PathBuf>,
    /// JSON array of cleaning regexes (default: the bundled set).
    #[arg(long, requires = "text_tokens")]
    pub patterns: Option<PathBuf>,
    /// External per-token seed scores, NPY (T,).
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Token grid, HxW.
    #[arg(long)]
    pub grid: Option<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelPreset {
    /// alpha = 0.75
    Llava,
    /// alpha = 0.3
    Qwen,
}

impl ModelPreset {
    pub fn alpha(self) -> f64 {
        match self {
            ModelPreset::Llava => resprune::relevance::DEFAULT_ALPHA,
            ModelPreset::Qwen => resprune::relevance::QWEN_ALPHA,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct TuningArgs {
    /// TOML file with defaults for any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model family defaults.
    #[arg(long, value_enum)]
    pub preset: Option<ModelPreset>,
    /// Guidance strength (>= 0).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Gate stability offset (> 0).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// max | mean | pooled
    #[arg(long)]
    pub relevance: Option<String>,
    /// scores | norm | relevance | mean | center
    #[arg(long)]
    pub seed_strategy: Option<String>,
    /// Relative residual norm below which a token is in the span.
    #[arg(long)]
    pub span_tol: Option<f64>,
    /// weight | norm: how to fill the budget once the span is exhausted.
    #[arg(long)]
    pub fallback: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Tokens to keep.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Report path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// ASCII mask path (needs --grid).
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Binary PGM mask path (needs --grid).
    #[arg(long)]
    pub mask_pgm: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Comma-separated budgets, e.g. 64,128,192.
    #[arg(long, value_delimiter = ',', required = true)]
    pub budgets: Vec<usize>,
    /// Seed of the random baseline.
    #[arg(long, default_value_t = 0)]
    pub random_seed: u64,
    /// Also run the selector under every relevance formulation.
    #[arg(long)]
    pub relevance_sweep: bool,
    /// CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub visual: PathBuf,
    #[arg(long)]
    pub budget: usize,
    /// Report path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FlopsArgs {
    /// llava-1.5 | llava-next | qwen2.5-vl
    #[arg(long, default_value = "llava-next")]
    pub preset: String,
    #[arg(long)]
    pub visual_tokens: Option<u64>,
    #[arg(long)]
    pub text_tokens: Option<u64>,
    /// Comma-separated retained budgets (default: the preset's reference
    /// budgets, or T/3).
    #[arg(long, value_delimiter = ',')]
    pub budgets: Vec<u64>,
    #[arg(long)]
    pub hidden: Option<u64>,
    #[arg(long)]
    pub mlp: Option<u64>,
    #[arg(long)]
    pub layers: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [720usize, 1440, 2880])]
    pub tokens: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [4096usize])]
    pub dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [128usize, 640])]
    pub budgets: Vec<usize>,
    /// Text rows drawn alongside the visual tokens.
    #[arg(long, default_value_t = 0)]
    pub text_tokens: usize,
    /// Timed repetitions per configuration; the median is reported.
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    /// Report written by `select`.
    #[arg(long)]
    pub result: PathBuf,
    #[arg(long)]
    pub grid: Grid,
    /// Also write a binary PGM here.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
}
