//! The library checked against the plain reimplementations in `common`,
//! plus frozen values on the reference instance.

mod common;

use common::*;
use resprune::baselines::{select_maxmin_diversity, select_random, select_top_norm, select_top_relevance};
use resprune::relevance::text_relevance;
use resprune::seeding::select_seed;
use resprune::synth::{reference_instance, Gaussian};
use resprune::{
    greedy_select, greedy_select_with, Grid, PruneConfig, RelevanceFormulation, SeedStrategy, TextMatrix, TokenMatrix,
};

fn instance(seed: u64) -> (TokenMatrix, TextMatrix) {
    let mut g = Gaussian::new(seed);
    let t = g.size_in(4, 64);
    let d = g.size_in(2, 32);
    let l = g.size_in(1, 8);
    (g.tokens(t, d), g.text(l, d))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn relevance_matches_double_loop() {
    for seed in 0..60 {
        let (v, u) = instance(seed);
        let cases = [
            (RelevanceFormulation::MaxCos, naive_max_relevance(&v, &u)),
            (RelevanceFormulation::MeanCos, naive_mean_relevance(&v, &u)),
            (RelevanceFormulation::PooledCos, naive_pooled_relevance(&v, &u)),
        ];
        for (f, expected) in cases {
            let got = text_relevance(&v, &u, f).unwrap();
            assert!(max_abs_diff(&got, &expected) <= 1e-12, "seed {seed} {f}");
        }
    }
}

#[test]
fn masked_text_rows_are_ignored() {
    for seed in 0..20 {
        let (v, u) = instance(100 + seed);
        let mask: Vec<bool> = (0..u.len()).map(|j| j % 2 == 0).collect();
        let masked = u.clone().with_keep_mask(mask).unwrap();
        let got = text_relevance(&v, &masked, RelevanceFormulation::MaxCos).unwrap();
        assert!(max_abs_diff(&got, &naive_max_relevance(&v, &masked)) <= 1e-12);
    }
}

#[test]
fn energies_match_explicit_projection_every_step() {
    for seed in 0..100 {
        let (v, u) = instance(1000 + seed);
        let k = 1 + (seed as usize % 16).min(v.tokens() - 1);
        let rows = rows(&v);
        let mut steps = 0;
        greedy_select_with(&v, &u, &PruneConfig::new(k), None, |s| {
            let explicit = naive_residuals(&rows, s.indices);
            let diff = max_abs_diff(s.energies, &explicit);
            assert!(diff <= 1e-9, "seed {seed} step {}: {diff:e}", s.iteration);
            steps += 1;
        })
        .unwrap();
        assert_eq!(steps, k);
    }
}

#[test]
fn uniform_weights_follow_the_from_scratch_greedy() {
    for seed in 0..100 {
        let (v, _) = instance(2000 + seed);
        let k = 1 + (seed as usize % 16).min(v.tokens() - 1);
        let r = greedy_select(&v, &TextMatrix::empty(v.dim()), &PruneConfig::new(k), None).unwrap();
        let expected = naive_greedy(&v, &vec![1.0; v.tokens()], argmax_norm(&v), k, 1e-6);
        assert_eq!(r.indices, expected, "seed {seed}");
    }
}

#[test]
fn gated_selection_follows_the_from_scratch_greedy() {
    for seed in 0..50 {
        let (v, u) = instance(3000 + seed);
        let k = 1 + (seed as usize % 16).min(v.tokens() - 1);
        let w: Vec<f64> = naive_max_relevance(&v, &u)
            .iter()
            .map(|r| (r + 1e-6f64).powf(0.75))
            .collect();
        let r = greedy_select(&v, &u, &PruneConfig::new(k), None).unwrap();
        assert!(max_abs_diff(&r.weights, &w) <= 1e-12);
        assert_eq!(r.indices, naive_greedy(&v, &w, argmax_norm(&v), k, 1e-6), "seed {seed}");
    }
}

// Frozen from the from-scratch oracle: seed 42, alpha 0.75, eps 1e-6,
// max-cosine relevance, max-norm seed, k = 4.
const REFERENCE_INDICES: [usize; 4] = [3, 5, 1, 11];
const REFERENCE_RECON_ERROR: f64 = 17.425020682197804;

#[test]
fn reference_instance_is_frozen() {
    let (v, u) = reference_instance();
    assert_eq!((v.tokens(), v.dim(), u.len()), (12, 6, 3));

    let w: Vec<f64> = naive_max_relevance(&v, &u)
        .iter()
        .map(|r| (r + 1e-6f64).powf(0.75))
        .collect();
    let oracle = naive_greedy(&v, &w, argmax_norm(&v), 4, 1e-6);
    assert_eq!(oracle, REFERENCE_INDICES);
    let oracle_err: f64 = naive_residuals(&rows(&v), &oracle).iter().sum();
    assert!((oracle_err - REFERENCE_RECON_ERROR).abs() <= 1e-12 * REFERENCE_RECON_ERROR);

    let r = greedy_select(&v, &u, &PruneConfig::new(4), None).unwrap();
    assert_eq!(r.indices, REFERENCE_INDICES);
    assert!((r.recon_error - REFERENCE_RECON_ERROR).abs() <= 1e-12 * REFERENCE_RECON_ERROR);
    let seed_norm: f64 = v.row(3).iter().map(|x| x * x).sum();
    assert!((r.raw_energy[0] - seed_norm).abs() <= 1e-12);
}

#[test]
fn random_baseline_is_frozen() {
    assert_eq!(select_random(10, 3, 7).unwrap(), vec![1, 2, 3]);
}

#[test]
fn random_baseline_is_a_subset() {
    for seed in 0..50 {
        let s = select_random(40, 13, seed).unwrap();
        assert_eq!(s.len(), 13);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|&i| i < 40));
    }
}

fn naive_rank(score: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..score.len()).collect();
    // stable sort keeps lower indices first among equals
    idx.sort_by(|&a, &b| score[b].partial_cmp(&score[a]).unwrap());
    idx.truncate(k);
    idx
}

#[test]
fn top_norm_and_top_relevance_match_naive_ranking() {
    for seed in 0..50 {
        let (v, u) = instance(4000 + seed);
        let k = 1 + seed as usize % v.tokens();
        let norms: Vec<f64> = rows(&v).iter().map(|r| r.iter().map(|x| x * x).sum()).collect();
        assert_eq!(select_top_norm(&v, k).unwrap(), naive_rank(&norms, k));
        let rel = naive_max_relevance(&v, &u);
        assert_eq!(
            select_top_relevance(&v, &u, k, RelevanceFormulation::MaxCos).unwrap(),
            naive_rank(&rel, k)
        );
    }
}

#[test]
fn maxmin_matches_naive_farthest_point() {
    for seed in 0..50 {
        let (v, _) = instance(5000 + seed);
        let k = 1 + seed as usize % v.tokens();
        let start = seed as usize % v.tokens();
        let mut chosen = vec![start];
        while chosen.len() < k {
            let mut best: Option<(usize, f64)> = None;
            for i in 0..v.tokens() {
                if chosen.contains(&i) {
                    continue;
                }
                let near = chosen
                    .iter()
                    .map(|&c| 1.0 - naive_cos_signed(v.row(i), v.row(c)))
                    .fold(f64::INFINITY, f64::min);
                if best.is_none_or(|(_, b)| near > b) {
                    best = Some((i, near));
                }
            }
            chosen.push(best.unwrap().0);
        }
        assert_eq!(select_maxmin_diversity(&v, k, start).unwrap(), chosen, "seed {seed}");
    }
}

fn naive_cos_signed(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        d / (na * nb)
    }
}

#[test]
fn seed_strategies_match_definitions() {
    for seed in 0..30 {
        let (v, u) = instance(6000 + seed);
        let rel = naive_max_relevance(&v, &u);
        let by_rel = naive_rank(&rel, 1)[0];
        assert_eq!(
            select_seed(&v, SeedStrategy::MaxRelevance, Some(&rel), None).unwrap(),
            by_rel
        );
        assert_eq!(
            select_seed(&v, SeedStrategy::MaxNorm, None, None).unwrap(),
            argmax_norm(&v)
        );

        let t = v.tokens() as f64;
        let mean: Vec<f64> = (0..v.dim())
            .map(|c| rows(&v).iter().map(|r| r[c]).sum::<f64>() / t)
            .collect();
        let sims: Vec<f64> = (0..v.tokens()).map(|i| naive_cos_signed(v.row(i), &mean)).collect();
        assert_eq!(
            select_seed(&v, SeedStrategy::NearestToMean, None, None).unwrap(),
            naive_rank(&sims, 1)[0]
        );
    }
    let v = Gaussian::new(1).tokens(12, 3).with_grid(Grid::new(4, 3)).unwrap();
    assert_eq!(select_seed(&v, SeedStrategy::GridCenter, None, None).unwrap(), 7);
    let v = Gaussian::new(1).tokens(576, 3).with_grid(Grid::new(24, 24)).unwrap();
    assert_eq!(
        select_seed(&v, SeedStrategy::GridCenter, None, None).unwrap(),
        12 * 24 + 12
    );
}

fn naive_optimum(v: &TokenMatrix, k: usize) -> (f64, Vec<usize>) {
    let rows = rows(v);
    let t = rows.len();
    let mut best = (f64::INFINITY, Vec::new());
    for mask in 0u32..(1 << t) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let subset: Vec<usize> = (0..t).filter(|i| mask & (1 << i) != 0).collect();
        let err: f64 = naive_residuals(&rows, &subset).iter().sum();
        if err < best.0 {
            best = (err, subset);
        }
    }
    best
}

#[test]
fn brute_force_agrees_with_naive_enumeration() {
    for seed in 0..30 {
        let v = Gaussian::new(7000 + seed).tokens(10, 6);
        let report = resprune::oracle::brute_force_optimal(&v, 3).unwrap();
        let (err, _) = naive_optimum(&v, 3);
        assert!((report.optimal_error - err).abs() <= 1e-9, "seed {seed}");
        assert!(report.greedy_error >= report.optimal_error - 1e-9);
        let explicit: f64 = naive_residuals(&rows(&v), &report.greedy_subset).iter().sum();
        assert!((report.greedy_error - explicit).abs() <= 1e-9);
    }
}
