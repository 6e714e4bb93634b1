//! Greedy residual-energy selection of a compact token subset.
//!
//! Given a `T x d` matrix of visual token embeddings and an optional `L x d`
//! matrix of text embeddings, [`greedy_select`] picks `k` rows whose span
//! best reconstructs the whole matrix. Each step adds the candidate with the
//! largest residual energy scaled by a text-relevance weight, keeping an
//! orthonormal basis of the selected span and updating every residual with a
//! single inner-product pass.
//!
//! The crate also ships the pieces needed to check and compare that
//! selector: explicit-projection and brute-force references ([`oracle`]),
//! simple baseline selectors ([`baselines`]), an analytic prefill cost model
//! ([`costmodel`]) and NPY/JSON IO ([`tensor_io`]).

pub mod baselines;
pub mod costmodel;
mod error;
pub mod linalg;
mod matrix;
pub mod oracle;
pub mod relevance;
pub mod seeding;
pub mod selector;
pub mod synth;
pub mod tensor_io;

pub use error::{Error, Result};
pub use matrix::{Grid, Matrix, ScoreVector, TextMatrix, TokenMatrix};
pub use relevance::{GateConfig, RelevanceFormulation};
pub use seeding::SeedStrategy;
pub use selector::{
    greedy_select, greedy_select_with, ExhaustFallback, OrthoBasis, PruneConfig, ResidualState, SelectionResult, Step,
};
