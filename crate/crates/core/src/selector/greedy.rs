use serde::{Deserialize, Serialize};

use super::residual::PassRows;
use super::{ExhaustFallback, Extension, OrthoBasis, PruneConfig, ResidualState};
use crate::linalg::{argmax, top_k};
use crate::relevance::{gate_weights, relevance_or_absent};
use crate::seeding::select_seed;
use crate::{Error, Result, ScoreVector, TextMatrix, TokenMatrix};

/// Output of one selection run. Field names are the JSON report schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Selected token indices in selection order.
    pub indices: Vec<usize>,
    /// Residual energy of each selected token when it was picked.
    pub raw_energy: Vec<f64>,
    /// The same energy multiplied by the token's gate weight.
    pub gated_energy: Vec<f64>,
    /// Gate weight of every token.
    pub weights: Vec<f64>,
    /// `|V - P_S V|_F^2` at termination.
    pub recon_error: f64,
    pub config: PruneConfig,
}

/// Snapshot handed to the observer of [`greedy_select_with`] after each
/// selection has been folded into the basis and energies.
#[derive(Debug)]
pub struct Step<'a> {
    /// Zero-based position in the selection order (the seed is 0).
    pub iteration: usize,
    pub index: usize,
    pub indices: &'a [usize],
    pub energies: &'a [f64],
    pub basis: &'a OrthoBasis,
    /// Whether the basis grew on this step.
    pub extension: Extension,
    /// Smallest energy before clamping during this step's update
    /// (`+inf` when the basis did not grow).
    pub min_unclamped: f64,
    /// Whether this pick came from the exhaustion fallback.
    pub fallback: bool,
}

/// Selects `cfg.budget` tokens of `v` conditioned on the text `u`.
pub fn greedy_select(
    v: &TokenMatrix,
    u: &TextMatrix,
    cfg: &PruneConfig,
    scores: Option<&ScoreVector>,
) -> Result<SelectionResult> {
    greedy_select_with(v, u, cfg, scores, |_| {})
}

/// [`greedy_select`] with a callback invoked after every selection.
pub fn greedy_select_with<F>(
    v: &TokenMatrix,
    u: &TextMatrix,
    cfg: &PruneConfig,
    scores: Option<&ScoreVector>,
    mut observe: F,
) -> Result<SelectionResult>
where
    F: FnMut(&Step<'_>),
{
    cfg.validate()?;
    let t = v.tokens();
    let k = cfg.budget;
    if k > t {
        return Err(Error::BudgetExceedsTokens { budget: k, tokens: t });
    }
    if let Some(s) = scores {
        if s.len() != t {
            return Err(Error::Shape {
                what: "score vector length vs token count",
                expected: t,
                found: s.len(),
            });
        }
    }

    let relevance = relevance_or_absent(v, u, cfg.formulation)?;
    let weights = gate_weights(relevance.as_deref(), t, cfg.gate);
    let seed = select_seed(v, cfg.seed, relevance.as_deref(), scores)?;

    let mut state = ResidualState::new(v);
    let initial_norms = state.energies().to_vec();
    let exhausted_below = cfg.span_tol * initial_norms.iter().copied().fold(0.0, f64::max);
    let mut basis = OrthoBasis::with_capacity(v.dim(), k);
    let rows = PassRows::new(v);
    // coefficients[j * t + i] = q_j^T v_i, one column per energy pass
    let mut coefficients = vec![0.0; t * k];
    let mut known = Vec::with_capacity(k);

    let mut indices = Vec::with_capacity(k);
    let mut raw_energy = Vec::with_capacity(k);
    let mut gated_energy = Vec::with_capacity(k);
    let mut fallback_order: Option<std::vec::IntoIter<usize>> = None;

    let mut next = Some((seed, false));
    while let Some((i, from_fallback)) = next {
        let e = state.energies()[i];
        indices.push(i);
        raw_energy.push(e);
        gated_energy.push(e * weights[i]);
        state.mark_selected(i);

        let m = basis.len();
        known.clear();
        known.extend((0..m).map(|j| coefficients[j * t + i]));
        let extension = basis.extend_with_coefficients(v.row(i), &known, cfg.span_tol);
        let min_unclamped = match extension {
            Extension::Accepted => {
                let q = basis.last().expect("just extended");
                let sink = &mut coefficients[m * t..(m + 1) * t];
                state.update_pass(&rows, v.dim(), q, Some(sink))
            }
            Extension::Rejected => f64::INFINITY,
        };
        observe(&Step {
            iteration: indices.len() - 1,
            index: i,
            indices: &indices,
            energies: state.energies(),
            basis: &basis,
            extension,
            min_unclamped,
            fallback: from_fallback,
        });

        next = if indices.len() == k {
            None
        } else if let Some(order) = fallback_order.as_mut() {
            order.next().map(|j| (j, true))
        } else {
            let e = state.energies();
            let live = |j: &usize| !state.is_selected(*j);
            if (0..t).filter(live).all(|j| e[j] <= exhausted_below) {
                let key: &[f64] = match cfg.exhaust_fallback {
                    ExhaustFallback::ByWeight => &weights,
                    ExhaustFallback::ByNorm => &initial_norms,
                };
                let order: Vec<usize> = top_k(key, t).into_iter().filter(|j| live(j)).collect();
                let mut order = order.into_iter();
                let first = order.next();
                fallback_order = Some(order);
                first.map(|j| (j, true))
            } else {
                argmax((0..t).filter(live).map(|j| (j, e[j] * weights[j]))).map(|j| (j, false))
            }
        };
    }

    Ok(SelectionResult {
        indices,
        raw_energy,
        gated_energy,
        weights,
        recon_error: state.total(),
        config: *cfg,
    })
}
