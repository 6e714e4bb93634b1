//! Shared inputs for the benchmarks in `benches/`.

use resprune::synth::Gaussian;
use resprune::{TextMatrix, TokenMatrix};

/// Gaussian `tokens x dim` visual matrix and `text x dim` text matrix drawn
/// from one stream, visual first.
pub fn instance(tokens: usize, dim: usize, text: usize, seed: u64) -> (TokenMatrix, TextMatrix) {
    let mut g = Gaussian::new(seed);
    let v = g.tokens(tokens, dim);
    let u = g.text(text, dim);
    (v, u)
}
