//! Reference selectors to compare the greedy selector against.
//!
//! These are deliberately plain forms of the strategy families (random,
//! magnitude, one-shot relevance ranking, max-min diversity), not faithful
//! reproductions of any published method.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{argmax, cosine, norm_sq, top_k};
use crate::relevance::{relevance_or_absent, RelevanceFormulation};
use crate::{Error, Result, TextMatrix, TokenMatrix};

fn check_budget(budget: usize, tokens: usize) -> Result<()> {
    if budget > tokens {
        return Err(Error::BudgetExceedsTokens { budget, tokens });
    }
    Ok(())
}

/// `k` distinct indices drawn by a partial Fisher-Yates shuffle driven by
/// `ChaCha8Rng::seed_from_u64(seed)`: for `i` in `0..k`, swap position `i`
/// with a uniform position in `i..T`. Returned sorted ascending.
pub fn select_random(tokens: usize, budget: usize, seed: u64) -> Result<Vec<usize>> {
    check_budget(budget, tokens)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..tokens).collect();
    for i in 0..budget {
        let j = rng.random_range(i..tokens);
        pool.swap(i, j);
    }
    pool.truncate(budget);
    pool.sort_unstable();
    Ok(pool)
}

/// The `k` largest-norm tokens, ties to the lowest index, in rank order.
pub fn select_top_norm(v: &TokenMatrix, budget: usize) -> Result<Vec<usize>> {
    check_budget(budget, v.tokens())?;
    let norms: Vec<f64> = v.rows().map(norm_sq).collect();
    Ok(top_k(&norms, budget))
}

/// The `k` most text-relevant tokens in one pass, ties to the lowest index.
/// Undefined (an error) without text.
pub fn select_top_relevance(
    v: &TokenMatrix,
    u: &TextMatrix,
    budget: usize,
    formulation: RelevanceFormulation,
) -> Result<Vec<usize>> {
    check_budget(budget, v.tokens())?;
    let r =
        relevance_or_absent(v, u, formulation)?.ok_or(Error::TextAbsent("top-relevance ranking needs text rows"))?;
    Ok(top_k(&r, budget))
}

/// Farthest-point selection under the angular distance `1 - cos`: starting
/// from `seed`, repeatedly add the candidate whose nearest selected token is
/// farthest away. Ties go to the lowest index.
pub fn select_maxmin_diversity(v: &TokenMatrix, budget: usize, seed: usize) -> Result<Vec<usize>> {
    let t = v.tokens();
    check_budget(budget, t)?;
    if seed >= t {
        return Err(Error::Config(format!("seed index {seed} out of range for {t} tokens")));
    }
    if budget == 0 {
        return Ok(Vec::new());
    }
    let mut chosen = vec![seed];
    let mut taken = vec![false; t];
    taken[seed] = true;
    let mut nearest: Vec<f64> = v.rows().map(|r| 1.0 - cosine(r, v.row(seed))).collect();

    while chosen.len() < budget {
        let next = argmax((0..t).filter(|&j| !taken[j]).map(|j| (j, nearest[j])))
            .expect("a candidate remains while under budget");
        taken[next] = true;
        chosen.push(next);
        let anchor = v.row(next);
        for (j, d) in nearest.iter_mut().enumerate() {
            *d = d.min(1.0 - cosine(v.row(j), anchor));
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_full_and_deterministic() {
        assert_eq!(select_random(5, 5, 1).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(select_random(100, 7, 9).unwrap(), select_random(100, 7, 9).unwrap());
        let s = select_random(100, 7, 9).unwrap();
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(select_random(3, 4, 0).is_err());
    }

    #[test]
    fn top_norm() {
        let v = TokenMatrix::from_rows(&[[3.0, 0.0], [0.0, 4.0], [1.0, 1.0]]).unwrap();
        assert_eq!(select_top_norm(&v, 1).unwrap(), vec![1]);
        let eq = TokenMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(select_top_norm(&eq, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn top_relevance_needs_text() {
        let v = crate::synth::gaussian_tokens(6, 3, 2);
        let u = TextMatrix::from_rows(&[v.row(3)]).unwrap();
        assert_eq!(
            select_top_relevance(&v, &u, 1, RelevanceFormulation::MaxCos).unwrap(),
            vec![3]
        );
        let err = select_top_relevance(&v, &TextMatrix::empty(3), 1, RelevanceFormulation::MaxCos);
        assert!(matches!(err, Err(Error::TextAbsent(_))));
    }

    #[test]
    fn top_relevance_ties() {
        let v = TokenMatrix::from_rows(&[[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]).unwrap();
        let u = TextMatrix::from_rows(&[[1.0, 0.0]]).unwrap();
        assert_eq!(
            select_top_relevance(&v, &u, 2, RelevanceFormulation::MaxCos).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn maxmin_orthogonal_and_duplicates() {
        let v = TokenMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(select_maxmin_diversity(&v, 3, 0).unwrap(), vec![0, 1, 2]);
        let dup = TokenMatrix::from_rows(&[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(select_maxmin_diversity(&dup, 2, 0).unwrap(), vec![0, 2]);
        assert!(select_maxmin_diversity(&dup, 2, 3).is_err());
    }
}
