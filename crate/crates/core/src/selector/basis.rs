use crate::linalg::{axpy, dot, norm_sq};

/// Outcome of [`OrthoBasis::extend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// A new unit direction was appended; it is [`OrthoBasis::last`].
    Accepted,
    /// The vector already lies in the span (relative to `span_tol`); the
    /// basis is unchanged.
    Rejected,
}

/// Column-orthonormal `d x m` basis, stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis {
    dim: usize,
    data: Vec<f64>,
}

impl OrthoBasis {
    pub fn new(dim: usize) -> Self {
        OrthoBasis { dim, data: Vec::new() }
    }

    pub fn with_capacity(dim: usize, cols: usize) -> Self {
        OrthoBasis {
            dim,
            data: Vec::with_capacity(dim * cols),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of columns `m`.
    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.dim..(j + 1) * self.dim]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.columns().last()
    }

    /// `Q^T v`.
    pub fn coefficients(&self, v: &[f64]) -> Vec<f64> {
        self.columns().map(|q| dot(q, v)).collect()
    }

    /// Orthogonalizes `v` against the basis with classical Gram-Schmidt
    /// applied twice, then appends the normalized residual unless its norm
    /// is below `span_tol * |v|`.
    pub fn extend(&mut self, v: &[f64], span_tol: f64) -> Extension {
        self.extend_from(v, None, span_tol)
    }

    /// [`extend`](Self::extend) with the first-pass coefficients `Q^T v`
    /// already known. Bitwise identical to `extend` when `coeffs` equals
    /// [`coefficients`](Self::coefficients)`(v)`.
    pub fn extend_with_coefficients(&mut self, v: &[f64], coeffs: &[f64], span_tol: f64) -> Extension {
        assert_eq!(coeffs.len(), self.len(), "one coefficient per basis column");
        self.extend_from(v, Some(coeffs), span_tol)
    }

    fn extend_from(&mut self, v: &[f64], known: Option<&[f64]>, span_tol: f64) -> Extension {
        assert_eq!(v.len(), self.dim, "vector length must match basis dimension");
        let norm = norm_sq(v).sqrt();
        if norm == 0.0 {
            return Extension::Rejected;
        }
        let mut r = v.to_vec();
        let mut known = known.map(<[f64]>::to_vec);
        for _ in 0..2 {
            let c = known.take().unwrap_or_else(|| self.coefficients(&r));
            subtract_combination(&mut r, &self.data, &c);
        }
        let rn = norm_sq(&r).sqrt();
        if rn < span_tol * norm {
            return Extension::Rejected;
        }
        r.iter_mut().for_each(|x| *x /= rn);
        self.data.extend_from_slice(&r);
        Extension::Accepted
    }

    /// `max |Q^T Q - I|` over all entries.
    pub fn orthonormality_error(&self) -> f64 {
        let cols: Vec<&[f64]> = self.columns().collect();
        let mut worst = 0.0f64;
        for (i, a) in cols.iter().enumerate() {
            for (j, b) in cols.iter().enumerate().take(i + 1) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }
}

/// `r -= sum_j c[j] * q_j` over the columns of `basis`, four columns per
/// sweep of `r`. Every element sees the same operations in the same order
/// as one `axpy` per column, so the result is identical.
fn subtract_combination(r: &mut [f64], basis: &[f64], c: &[f64]) {
    let d = r.len();
    let mut cols = basis.chunks_exact(d).zip(c);
    loop {
        match (cols.next(), cols.next(), cols.next(), cols.next()) {
            (Some((q0, &c0)), Some((q1, &c1)), Some((q2, &c2)), Some((q3, &c3))) => {
                let (q0, q1, q2, q3) = (&q0[..d], &q1[..d], &q2[..d], &q3[..d]);
                for t in 0..d {
                    r[t] = r[t] + -c0 * q0[t] + -c1 * q1[t] + -c2 * q2[t] + -c3 * q3[t];
                }
            }
            (x, y, z, _) => {
                for (q, &cj) in [x, y, z].into_iter().flatten() {
                    axpy(-cj, q, r);
                }
                return;
            }
        }
    }
}
