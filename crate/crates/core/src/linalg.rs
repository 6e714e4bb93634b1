//! Small dense kernels shared by the selector, references and baselines.
//!
//! Every reduction here uses a fixed summation order, so results are
//! bitwise reproducible regardless of how callers partition work.

const LANES: usize = 8;

/// Inner product with eight interleaved partial sums, combined pairwise.
///
/// Summation order depends only on the slice length, which keeps it
/// deterministic while letting the compiler vectorize the main loop.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; LANES];
    let ca = a.chunks_exact(LANES);
    let cb = b.chunks_exact(LANES);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..LANES {
            acc[l] += x[l] * y[l];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    let s0 = (acc[0] + acc[4]) + (acc[2] + acc[6]);
    let s1 = (acc[1] + acc[5]) + (acc[3] + acc[7]);
    (s0 + s1) + tail
}

/// [`dot`] against an `f32` row widened to `f64`. Same summation order,
/// so `dot_widened(a, b) == dot(a, &widen(b))` bit for bit.
#[inline]
pub fn dot_widened(a: &[f64], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; LANES];
    let ca = a.chunks_exact(LANES);
    let cb = b.chunks_exact(LANES);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..LANES {
            acc[l] += x[l] * y[l] as f64;
        }
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * *y as f64;
    }
    let s0 = (acc[0] + acc[4]) + (acc[2] + acc[6]);
    let s1 = (acc[1] + acc[5]) + (acc[3] + acc[7]);
    (s0 + s1) + tail
}

/// Inner product accumulated strictly in index order.
#[inline]
pub fn dot_ordered(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |s, (x, y)| s + x * y)
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Cosine similarity, `0` if either side has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot_ordered(a, a).sqrt();
    let nb = dot_ordered(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot_ordered(a, b) / (na * nb)
}

/// Index of the largest value, lowest index on ties. `None` on empty input.
///
/// NaN never wins a comparison.
pub fn argmax<I: IntoIterator<Item = (usize, f64)>>(items: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in items {
        match best {
            _ if x.is_nan() => {}
            Some((_, b)) if x <= b => {}
            _ => best = Some((i, x)),
        }
    }
    best.map(|(i, _)| i)
}

/// Indices of the `k` largest scores, ties broken by lower index.
pub fn top_k(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}
