//! Greedy subspace expansion.
//!
//! The selector keeps an orthonormal basis of the span of the selected
//! tokens and every token's residual energy `e_i = |v_i - Q Q^T v_i|^2`.
//! Each step picks the unselected token maximizing `e_i * w_i`, extends the
//! basis by one Gram-Schmidt step and lowers every energy by the squared
//! coefficient on the new direction.

mod basis;
mod config;
mod greedy;
mod residual;

pub use basis::{Extension, OrthoBasis};
pub use config::{ExhaustFallback, PruneConfig, DEFAULT_SPAN_TOL};
pub use greedy::{greedy_select, greedy_select_with, SelectionResult, Step};
pub use residual::ResidualState;
