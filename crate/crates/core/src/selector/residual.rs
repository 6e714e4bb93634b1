use rayon::prelude::*;

use crate::linalg::{dot, dot_widened, norm_sq};
use crate::TokenMatrix;

/// Work (T * d) above which the energy pass is split across rayon workers.
const PARALLEL_WORK: usize = 1 << 18;

/// Token rows as streamed by the energy pass.
///
/// When every value is exactly representable in `f32` (the usual case for
/// embeddings loaded from `<f4` files) the pass reads a narrow copy and
/// widens on the fly, halving memory traffic without changing a single bit
/// of the result.
pub(crate) enum PassRows<'a> {
    Wide(&'a [f64]),
    Narrow(Vec<f32>),
}

impl<'a> PassRows<'a> {
    pub(crate) fn new(v: &'a TokenMatrix) -> Self {
        let data = v.data();
        if data.iter().all(|&x| x as f32 as f64 == x) {
            PassRows::Narrow(data.iter().map(|&x| x as f32).collect())
        } else {
            PassRows::Wide(data)
        }
    }
}

/// Receives `q^T v_i` for every token during the energy pass.
pub(crate) type CoefficientSink<'a> = &'a mut [f64];

/// Residual energy of every token against the current basis, plus
/// selection membership.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualState {
    energies: Vec<f64>,
    selected: Vec<bool>,
}

impl ResidualState {
    /// Energies against an empty basis: the squared row norms.
    pub fn new(v: &TokenMatrix) -> Self {
        ResidualState {
            energies: v.rows().map(norm_sq).collect(),
            selected: vec![false; v.tokens()],
        }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn selected(&self) -> &[bool] {
        &self.selected
    }

    pub fn is_selected(&self, i: usize) -> bool {
        self.selected[i]
    }

    pub fn mark_selected(&mut self, i: usize) {
        self.selected[i] = true;
    }

    /// Subtracts `(q^T v_i)^2` from every energy and clamps at zero, in one
    /// pass over `v`. `q` must be unit-norm and orthogonal to the directions
    /// already accounted for.
    ///
    /// Returns the smallest energy seen before clamping.
    pub fn update(&mut self, v: &TokenMatrix, q: &[f64]) -> f64 {
        self.update_pass(&PassRows::Wide(v.data()), v.dim(), q, None)
    }

    pub(crate) fn update_pass(
        &mut self,
        rows: &PassRows<'_>,
        dim: usize,
        q: &[f64],
        sink: Option<CoefficientSink<'_>>,
    ) -> f64 {
        let t = self.energies.len();
        let apply = |e: &mut f64, c: f64| {
            let next = *e - c * c;
            *e = next.max(0.0);
            next
        };
        let parallel = t * dim >= PARALLEL_WORK && rayon::current_num_threads() > 1;

        macro_rules! pass {
            ($data:expr, $dot:path) => {{
                let data = $data;
                match sink {
                    Some(coeffs) if parallel => self
                        .energies
                        .par_iter_mut()
                        .zip(data.par_chunks_exact(dim))
                        .zip(coeffs.par_iter_mut())
                        .map(|((e, row), slot)| {
                            let c = $dot(q, row);
                            *slot = c;
                            apply(e, c)
                        })
                        .reduce(|| f64::INFINITY, f64::min),
                    Some(coeffs) => self
                        .energies
                        .iter_mut()
                        .zip(data.chunks_exact(dim))
                        .zip(coeffs.iter_mut())
                        .map(|((e, row), slot)| {
                            let c = $dot(q, row);
                            *slot = c;
                            apply(e, c)
                        })
                        .fold(f64::INFINITY, f64::min),
                    None if parallel => self
                        .energies
                        .par_iter_mut()
                        .zip(data.par_chunks_exact(dim))
                        .map(|(e, row)| apply(e, $dot(q, row)))
                        .reduce(|| f64::INFINITY, f64::min),
                    None => self
                        .energies
                        .iter_mut()
                        .zip(data.chunks_exact(dim))
                        .map(|(e, row)| apply(e, $dot(q, row)))
                        .fold(f64::INFINITY, f64::min),
                }
            }};
        }

        match rows {
            PassRows::Wide(data) => pass!(*data, dot),
            PassRows::Narrow(data) => pass!(&data[..], dot_widened),
        }
    }

    /// Sum of all residual energies: `|V - P_S V|_F^2`.
    pub fn total(&self) -> f64 {
        self.energies.iter().sum()
    }
}
