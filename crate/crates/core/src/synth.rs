//! Seeded synthetic embeddings.
//!
//! The generator is part of the public contract because frozen expected
//! values in the test suites depend on it: a `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)` draws standard normal `f64`s (`rand_distr`'s
//! ziggurat `StandardNormal`) in row-major order, and each draw is rounded to
//! `f32` so the values survive an NPY round trip bit-exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{TextMatrix, TokenMatrix};

/// Seed of the reference instance.
pub const REFERENCE_SEED: u64 = 42;

/// Seeded stream of `f32`-representable standard normals.
pub struct Gaussian {
    rng: ChaCha8Rng,
}

impl Gaussian {
    pub fn new(seed: u64) -> Self {
        Gaussian {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_value(&mut self) -> f64 {
        let x: f64 = self.rng.sample(StandardNormal);
        x as f32 as f64
    }

    pub fn values(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_value()).collect()
    }

    pub fn tokens(&mut self, rows: usize, cols: usize) -> TokenMatrix {
        TokenMatrix::new(rows, cols, self.values(rows * cols)).expect("finite by construction")
    }

    pub fn text(&mut self, rows: usize, cols: usize) -> TextMatrix {
        TextMatrix::new(rows, cols, self.values(rows * cols)).expect("finite by construction")
    }

    /// Uniform integer in `lo..=hi`, drawn from the same stream.
    pub fn size_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    /// Orthogonal `n x n` matrix (row-major) from modified Gram-Schmidt on a
    /// Gaussian draw.
    pub fn orthogonal(&mut self, n: usize) -> Vec<f64> {
        let mut q = self.values(n * n);
        for i in 0..n {
            for _ in 0..2 {
                for j in 0..i {
                    let c: f64 = (0..n).map(|t| q[i * n + t] * q[j * n + t]).sum();
                    for t in 0..n {
                        q[i * n + t] -= c * q[j * n + t];
                    }
                }
            }
            let norm = (0..n).map(|t| q[i * n + t].powi(2)).sum::<f64>().sqrt();
            for t in 0..n {
                q[i * n + t] /= norm;
            }
        }
        q
    }
}

/// Seeded `T x d` token matrix.
pub fn gaussian_tokens(rows: usize, cols: usize, seed: u64) -> TokenMatrix {
    Gaussian::new(seed).tokens(rows, cols)
}

/// The 12 x 6 visual / 3 x 6 text reference instance: both drawn, visual
/// first, from one stream seeded with [`REFERENCE_SEED`].
pub fn reference_instance() -> (TokenMatrix, TextMatrix) {
    let mut g = Gaussian::new(REFERENCE_SEED);
    let v = g.tokens(12, 6);
    let u = g.text(3, 6);
    (v, u)
}

/// Rows of `data` (row-major, `cols` wide) multiplied by the row-major
/// `cols x cols` matrix `rot`: `out_i = rot * x_i`.
pub fn rotate_rows(data: &[f64], cols: usize, rot: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; data.len()];
    for (x, y) in data.chunks_exact(cols).zip(out.chunks_exact_mut(cols)) {
        for (a, ya) in y.iter_mut().enumerate() {
            *ya = (0..cols).map(|b| rot[a * cols + b] * x[b]).sum();
        }
    }
    out
}
