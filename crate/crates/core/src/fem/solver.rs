//! Preconditioned conjugate gradients with an incomplete Cholesky factor.

use super::{FemError, SparseOperator};

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Target for `||A x - b|| / ||b||`, checked on the true residual.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { rel_tol: 1e-12, max_iter: 20_000 }
    }
}

/// A restart that does not shrink the true residual by this factor means
/// the iteration has reached its rounding floor.
const STALL_FACTOR: f64 = 0.5;
/// How far above the tolerance a stalled residual is still accepted.
const ROUNDING_SLACK: f64 = 100.0;

/// Factorizes the preconditioner once; `solve` can be called repeatedly.
#[derive(Debug)]
pub struct SpdSolver<'a> {
    a: &'a SparseOperator,
    precond: Preconditioner,
    options: SolverOptions,
}

impl<'a> SpdSolver<'a> {
    pub fn new(a: &'a SparseOperator) -> Self {
        Self::with_options(a, SolverOptions::default())
    }

    pub fn with_options(a: &'a SparseOperator, options: SolverOptions) -> Self {
        SpdSolver { a, precond: Preconditioner::new(a), options }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, FemError> {
        let n = self.a.dim();
        if b.len() != n {
            return Err(FemError::DimensionMismatch { expected: n, found: b.len() });
        }
        let b_norm = norm2(b);
        let mut x = vec![0.0; n];
        if b_norm == 0.0 {
            return Ok(x);
        }
        let tol = self.options.rel_tol * b_norm;
        let mut r = b.to_vec();
        let mut iterations = 0;
        let mut previous = f64::INFINITY;
        // The recursive residual can drift from the true one, so restart
        // from the true residual until the latter meets the tolerance.
        loop {
            let done = self.pcg(&mut x, &mut r, tol, self.options.max_iter - iterations);
            iterations += done;
            let ax = self.a.apply(&x);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
            let res = norm2(&r);
            if res <= tol {
                log::debug!("pcg converged in {iterations} iterations, rel. residual {:.3e}", res / b_norm);
                return Ok(x);
            }
            let stalled = res > STALL_FACTOR * previous;
            if stalled && res <= ROUNDING_SLACK * tol {
                log::warn!(
                    "pcg stalled at rel. residual {:.3e} (target {:.1e}), the rounding floor for this system",
                    res / b_norm,
                    self.options.rel_tol
                );
                return Ok(x);
            }
            if stalled || iterations >= self.options.max_iter || done == 0 {
                return Err(FemError::NotConverged { iterations, residual: res / b_norm });
            }
            previous = res;
        }
    }

    /// Runs PCG from `x` with residual `r`; returns the iteration count.
    fn pcg(&self, x: &mut [f64], r: &mut [f64], tol: f64, max_iter: usize) -> usize {
        let n = x.len();
        // stop slightly below the tolerance so the true residual passes
        let target = 0.5 * tol;
        let mut z = vec![0.0; n];
        self.precond.apply(r, &mut z);
        let mut p = z.clone();
        let mut q = vec![0.0; n];
        let mut rz = dot(r, &z);
        for it in 0..max_iter {
            if norm2(r) <= target {
                return it;
            }
            self.a.matvec(&p, &mut q);
            let pq = dot(&p, &q);
            if pq <= 0.0 {
                return it;
            }
            let alpha = rz / pq;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            self.precond.apply(r, &mut z);
            let rz_new = dot(r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        max_iter
    }
}

/// Solves `A x = b` for symmetric positive definite `A` to relative residual
/// `1e-12`. Returns `x = 0` when `b = 0`.
pub fn solve_spd(a: &SparseOperator, b: &[f64]) -> Result<Vec<f64>, FemError> {
    SpdSolver::new(a).solve(b)
}

#[derive(Debug)]
enum Preconditioner {
    IncompleteCholesky(IncompleteCholesky),
    Jacobi(Vec<f64>),
}

impl Preconditioner {
    fn new(a: &SparseOperator) -> Self {
        let mut shift = 0.0;
        for _ in 0..8 {
            if let Some(ic) = IncompleteCholesky::factor(a, shift) {
                return Preconditioner::IncompleteCholesky(ic);
            }
            shift = if shift == 0.0 { 1e-3 } else { 4.0 * shift };
        }
        log::warn!("incomplete Cholesky broke down, falling back to Jacobi");
        Preconditioner::Jacobi(a.diagonal().iter().map(|d| 1.0 / d).collect())
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Preconditioner::IncompleteCholesky(ic) => ic.apply(r, z),
            Preconditioner::Jacobi(inv) => {
                for i in 0..r.len() {
                    z[i] = inv[i] * r[i];
                }
            }
        }
    }
}

/// `L L^T ~ A` with `L` restricted to the lower pattern of `A`. Rows of `L`
/// are stored with the diagonal last.
#[derive(Debug)]
struct IncompleteCholesky {
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl IncompleteCholesky {
    fn factor(a: &SparseOperator, shift: f64) -> Option<Self> {
        let n = a.dim();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j < i {
                    col_idx.push(j);
                    values.push(v);
                } else if j == i {
                    col_idx.push(j);
                    values.push(v * (1.0 + shift));
                }
            }
            row_ptr.push(col_idx.len());
            if col_idx.last() != Some(&i) {
                return None;
            }
        }

        // marker[j] = position of column j in the current row
        let mut marker = vec![usize::MAX; n];
        for i in 0..n {
            let (start, end) = (row_ptr[i], row_ptr[i + 1]);
            for k in start..end {
                marker[col_idx[k]] = k;
            }
            for k in start..end - 1 {
                let j = col_idx[k];
                // L_ij = (A_ij - sum_{m<j} L_im L_jm) / L_jj
                let mut s = values[k];
                for kj in row_ptr[j]..row_ptr[j + 1] - 1 {
                    let m = col_idx[kj];
                    let pos = marker[m];
                    if pos != usize::MAX && pos < k {
                        s -= values[pos] * values[kj];
                    }
                }
                values[k] = s / values[row_ptr[j + 1] - 1];
            }
            let mut d = values[end - 1];
            for k in start..end - 1 {
                d -= values[k] * values[k];
            }
            if !(d > 0.0) {
                return None;
            }
            values[end - 1] = d.sqrt();
            for k in start..end {
                marker[col_idx[k]] = usize::MAX;
            }
        }
        Some(IncompleteCholesky { row_ptr, col_idx, values })
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = r.len();
        // L y = r
        for i in 0..n {
            let (start, end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut s = r[i];
            for k in start..end - 1 {
                s -= self.values[k] * z[self.col_idx[k]];
            }
            z[i] = s / self.values[end - 1];
        }
        // L^T z = y, column sweep
        for i in (0..n).rev() {
            let (start, end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            z[i] /= self.values[end - 1];
            let zi = z[i];
            for k in start..end - 1 {
                z[self.col_idx[k]] -= self.values[k] * zi;
            }
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
