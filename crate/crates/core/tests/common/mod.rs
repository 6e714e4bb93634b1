//! Plain reimplementations used as test oracles. Nothing here calls into
//! the library's numerics; only the input types are shared.

#![allow(dead_code)]

pub mod fuzz;

use resprune::{TextMatrix, TokenMatrix};

pub fn rows(v: &TokenMatrix) -> Vec<Vec<f64>> {
    (0..v.tokens()).map(|i| v.row(i).to_vec()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

/// Orthonormal basis of span{rows[s] : s in subset}, by modified
/// Gram-Schmidt applied twice; dependent columns are dropped.
pub fn naive_basis(rows: &[Vec<f64>], subset: &[usize]) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    for &s in subset {
        let mut w = rows[s].clone();
        let n0 = dot(&w, &w).sqrt();
        for _ in 0..2 {
            for b in &q {
                let c = dot(b, &w);
                for t in 0..w.len() {
                    w[t] -= c * b[t];
                }
            }
        }
        let n = dot(&w, &w).sqrt();
        if n0 > 0.0 && n > 1e-9 * n0 {
            q.push(w.iter().map(|x| x / n).collect());
        }
    }
    q
}

/// `|v_i - P v_i|^2` for every row, computed as the squared norm of the
/// explicit residual vector.
pub fn naive_residuals(rows: &[Vec<f64>], subset: &[usize]) -> Vec<f64> {
    let q = naive_basis(rows, subset);
    rows.iter()
        .map(|v| {
            let mut r = v.clone();
            for b in &q {
                let c = dot(b, v);
                for t in 0..r.len() {
                    r[t] -= c * b[t];
                }
            }
            dot(&r, &r)
        })
        .collect()
}

pub fn naive_cos(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot(a, b) / (na * nb)).clamp(0.0, 1.0)
    }
}

/// `max_j cos+(v_i, u_j)` over kept text rows, by double loop.
pub fn naive_max_relevance(v: &TokenMatrix, u: &TextMatrix) -> Vec<f64> {
    let text: Vec<Vec<f64>> = (0..u.len())
        .filter(|&j| u.keep_mask().is_none_or(|m| m[j]))
        .map(|j| u.row(j).to_vec())
        .collect();
    (0..v.tokens())
        .map(|i| {
            let mut best = 0.0f64;
            for t in &text {
                best = best.max(naive_cos(v.row(i), t));
            }
            best
        })
        .collect()
}

pub fn naive_mean_relevance(v: &TokenMatrix, u: &TextMatrix) -> Vec<f64> {
    (0..v.tokens())
        .map(|i| {
            let mut s = 0.0;
            for j in 0..u.len() {
                s += naive_cos(v.row(i), u.row(j));
            }
            s / u.len() as f64
        })
        .collect()
}

pub fn naive_pooled_relevance(v: &TokenMatrix, u: &TextMatrix) -> Vec<f64> {
    let mut pooled = vec![0.0; u.dim()];
    for j in 0..u.len() {
        for (p, x) in pooled.iter_mut().zip(u.row(j)) {
            *p += x / u.len() as f64;
        }
    }
    (0..v.tokens()).map(|i| naive_cos(v.row(i), &pooled)).collect()
}

/// Greedy selection from scratch: residuals recomputed at every step,
/// first-index argmax of `e_i * w_i`. Once every remaining residual is at
/// most `span_tol * max_i |v_i|^2`, the rest of the budget is filled in
/// descending weight order (lowest index on ties).
pub fn naive_greedy(v: &TokenMatrix, weights: &[f64], seed: usize, budget: usize, span_tol: f64) -> Vec<usize> {
    let rows = rows(v);
    let max_norm = rows.iter().map(|r| dot(r, r)).fold(0.0, f64::max);
    let mut chosen = vec![seed];
    while chosen.len() < budget {
        let e = naive_residuals(&rows, &chosen);
        let live: Vec<usize> = (0..rows.len()).filter(|i| !chosen.contains(i)).collect();
        if live.iter().all(|&i| e[i] <= span_tol * max_norm) {
            let mut rest = live;
            rest.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap().then(a.cmp(&b)));
            chosen.extend(rest.into_iter().take(budget - chosen.len()));
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for &i in &live {
            let s = e[i] * weights[i];
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        chosen.push(best.unwrap().0);
    }
    chosen
}

pub fn argmax_norm(v: &TokenMatrix) -> usize {
    let mut best = 0;
    for i in 1..v.tokens() {
        if dot(v.row(i), v.row(i)) > dot(v.row(best), v.row(best)) {
            best = i;
        }
    }
    best
}
