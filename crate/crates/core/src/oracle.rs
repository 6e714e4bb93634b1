//! Slow, from-scratch references for the selector.
//!
//! Nothing here shares code with the incremental basis: residuals come from
//! a fresh Householder QR (with column pivoting) of the selected tokens every
//! time they are asked for.

use serde::{Deserialize, Serialize};

use crate::linalg::{argmax, top_k};
use crate::selector::{greedy_select, ExhaustFallback, PruneConfig};
use crate::{Error, Result, TextMatrix, TokenMatrix};

/// Upper bound on `C(T, k)` for [`brute_force_optimal`].
pub const MAX_SUBSETS: u64 = 1_000_000;

/// Denominator floor of [`OracleReport::ratio`].
pub const RATIO_FLOOR: f64 = 1e-15;

/// Relative pivot size below which a selected column is treated as
/// linearly dependent on the earlier ones.
const RANK_TOL: f64 = 1e-10;

/// Householder factorization `A P = Q R` of the `d x s` matrix whose
/// columns are the selected tokens, truncated at its numerical rank.
struct Householder {
    dim: usize,
    /// Reflector vectors, each of length `dim` (zero above its pivot row).
    reflectors: Vec<Vec<f64>>,
}

impl Householder {
    fn factor(v: &TokenMatrix, subset: &[usize]) -> Self {
        let d = v.dim();
        let mut cols: Vec<Vec<f64>> = subset.iter().map(|&j| v.row(j).to_vec()).collect();
        let scale = cols
            .iter()
            .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let mut reflectors = Vec::new();

        for p in 0..cols.len().min(d) {
            // pivot: remaining column with the largest norm below row p
            let tail_norm = |c: &Vec<f64>| c[p..].iter().map(|x| x * x).sum::<f64>();
            let (best, best_norm) = (p..cols.len())
                .map(|j| (j, tail_norm(&cols[j])))
                .fold((p, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            let alpha = best_norm.sqrt();
            if scale == 0.0 || alpha <= RANK_TOL * scale {
                break;
            }
            cols.swap(p, best);

            let x = &cols[p];
            let sign = if x[p] >= 0.0 { 1.0 } else { -1.0 };
            let mut u = vec![0.0; d];
            u[p..].copy_from_slice(&x[p..]);
            u[p] += sign * alpha;
            let un = u[p..].iter().map(|x| x * x).sum::<f64>().sqrt();
            u[p..].iter_mut().for_each(|x| *x /= un);

            for c in cols.iter_mut().skip(p) {
                reflect(&u, p, c);
            }
            reflectors.push(u);
        }
        Householder { dim: d, reflectors }
    }

    fn rank(&self) -> usize {
        self.reflectors.len()
    }

    /// `|x - P x|^2`: apply `Q^T` and sum the squares past the rank.
    fn residual(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut y = x.to_vec();
        for (p, u) in self.reflectors.iter().enumerate() {
            reflect(u, p, &mut y);
        }
        y[self.rank()..].iter().map(|x| x * x).sum()
    }
}

/// `x <- (I - 2 u u^T) x`, with `u` zero before index `p`.
fn reflect(u: &[f64], p: usize, x: &mut [f64]) {
    let c: f64 = u[p..].iter().zip(&x[p..]).map(|(a, b)| a * b).sum();
    for (xi, ui) in x[p..].iter_mut().zip(&u[p..]) {
        *xi -= 2.0 * c * ui;
    }
}

fn check_subset(v: &TokenMatrix, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::Config("subset must be non-empty".into()));
    }
    if let Some(&bad) = subset.iter().find(|&&j| j >= v.tokens()) {
        return Err(Error::Config(format!(
            "subset index {bad} out of range for {} tokens",
            v.tokens()
        )));
    }
    Ok(())
}

/// `|v_i - P_S v_i|^2` for every token, from a fresh factorization of the
/// tokens in `subset`.
pub fn explicit_residuals(v: &TokenMatrix, subset: &[usize]) -> Result<Vec<f64>> {
    check_subset(v, subset)?;
    let qr = Householder::factor(v, subset);
    Ok(v.rows().map(|row| qr.residual(row)).collect())
}

/// `|V - P_S V|_F^2`.
pub fn reconstruction_error(v: &TokenMatrix, subset: &[usize]) -> Result<f64> {
    Ok(explicit_residuals(v, subset)?.iter().sum())
}

/// Greedy selection that recomputes every residual by explicit projection
/// at each step. Follows the same rules as the selector: argmax of
/// `e_i * w_i` with ties to the lowest index, and once every candidate is
/// at or below `span_tol * max_i |v_i|^2`, the rest is filled in fallback
/// order.
pub fn reference_greedy(
    v: &TokenMatrix,
    weights: &[f64],
    seed: usize,
    budget: usize,
    span_tol: f64,
    fallback: ExhaustFallback,
) -> Result<Vec<usize>> {
    let t = v.tokens();
    if budget > t {
        return Err(Error::BudgetExceedsTokens { budget, tokens: t });
    }
    let norms: Vec<f64> = v.rows().map(|r| r.iter().map(|x| x * x).sum()).collect();
    let floor = span_tol * norms.iter().copied().fold(0.0, f64::max);
    let mut chosen = vec![seed];
    let mut taken = vec![false; t];
    taken[seed] = true;

    while chosen.len() < budget {
        let e = explicit_residuals(v, &chosen)?;
        let exhausted = (0..t).filter(|&j| !taken[j]).all(|j| e[j] <= floor);
        if exhausted {
            let key = match fallback {
                ExhaustFallback::ByWeight => weights,
                ExhaustFallback::ByNorm => &norms[..],
            };
            let rest: Vec<usize> = top_k(key, t).into_iter().filter(|&j| !taken[j]).collect();
            chosen.extend(rest.into_iter().take(budget - chosen.len()));
            break;
        }
        let next = argmax((0..t).filter(|&j| !taken[j]).map(|j| (j, e[j] * weights[j])))
            .expect("a candidate remains while under budget");
        taken[next] = true;
        chosen.push(next);
    }
    Ok(chosen)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub greedy_error: f64,
    pub optimal_error: f64,
    /// Lexicographically first minimizing subset.
    pub optimal_subset: Vec<usize>,
    /// Greedy selection (uniform weights, max-norm seed), in selection order.
    pub greedy_subset: Vec<usize>,
    /// `greedy_error / max(optimal_error, 1e-15)`.
    pub ratio: f64,
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Exhaustive minimum of the reconstruction error over all `k`-subsets,
/// alongside the greedy selector run with uniform weights.
///
/// Subsets are visited in lexicographic order and a later subset replaces
/// the incumbent only if it is better by more than `1e-12 |V|_F^2`, so
/// numerically tied optima resolve to the lexicographically first.
pub fn brute_force_optimal(v: &TokenMatrix, budget: usize) -> Result<OracleReport> {
    let t = v.tokens();
    if budget == 0 || budget > t {
        return Err(Error::BudgetExceedsTokens { budget, tokens: t });
    }
    if binomial(t, budget) > MAX_SUBSETS {
        return Err(Error::InstanceTooLarge {
            tokens: t,
            budget,
            limit: MAX_SUBSETS,
        });
    }
    let total: f64 = v.data().iter().map(|x| x * x).sum();
    let slack = 1e-12 * total;

    let mut subset: Vec<usize> = (0..budget).collect();
    let mut best_err = f64::INFINITY;
    let mut best = subset.clone();
    loop {
        let err = reconstruction_error(v, &subset)?;
        if err < best_err - slack {
            best_err = err;
            best.clone_from(&subset);
        }
        if !next_combination(&mut subset, t) {
            break;
        }
    }

    let greedy = greedy_select(v, &TextMatrix::empty(v.dim()), &PruneConfig::new(budget), None)?;
    let greedy_error = reconstruction_error(v, &greedy.indices)?;
    Ok(OracleReport {
        greedy_error,
        optimal_error: best_err,
        optimal_subset: best,
        greedy_subset: greedy.indices,
        ratio: greedy_error / best_err.max(RATIO_FLOOR),
    })
}

/// Advances to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}
