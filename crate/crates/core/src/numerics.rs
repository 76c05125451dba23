//! Dense symmetric linear algebra: Cholesky factorization, triangular solves,
//! explicit inverses and extremal eigenvalues via Lanczos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BqpError, Result};
use crate::exec::{self, Execution};

/// Rows above which the factorization and inverse split work across threads.
const PARALLEL_MIN_DIM: usize = 128;

/// A dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from rows, rejecting anything that is not square,
    /// finite and exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(BqpError::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(BqpError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(BqpError::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(BqpError::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(BqpError::NonFinite { index });
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(BqpError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Builds a symmetric matrix from its lower triangle, `f(i, j)` with `j <= i`.
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_lower_fn(n, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_lower_fn(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `self + diag(shift)`.
    pub fn add_diagonal(&self, shift: &[f64]) -> Result<Self> {
        check_len(self.n, shift.len())?;
        let mut out = self.clone();
        for (i, s) in shift.iter().enumerate() {
            out.data[i * self.n + i] += s;
        }
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        Ok(self.rows().map(|r| dot(r, x)).collect())
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[f64]) -> Result<f64> {
        let ax = self.mul_vec(x)?;
        Ok(dot(&ax, x))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.rows()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diag(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).abs()).fold(0.0, f64::max)
    }

    /// Absolute row sums `Σⱼ |Aᵢⱼ|`, diagonal included.
    pub fn abs_row_sums(&self) -> Vec<f64> {
        self.rows()
            .map(|r| r.iter().map(|v| v.abs()).sum())
            .collect()
    }

    /// Borders the matrix with one extra row and column: `[[A, b], [bᵀ, t]]`.
    pub fn bordered(&self, b: &[f64], t: f64) -> Result<Self> {
        check_len(self.n, b.len())?;
        let m = self.n + 1;
        Ok(Self::from_lower_fn(m, |i, j| {
            if i < self.n {
                self.get(i, j)
            } else if j < self.n {
                b[j]
            } else {
                t
            }
        }))
    }
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdFactor {
    n: usize,
    lower: Vec<f64>,
}

impl SpdFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lower(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.lower[i * self.n + j]
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, b.len())?;
        let mut y = b.to_vec();
        self.solve_in_place(&mut y);
        Ok(y)
    }

    fn solve_in_place(&self, y: &mut [f64]) {
        let n = self.n;
        // L y = b
        for i in 0..n {
            let row = &self.lower[i * n..i * n + i];
            let s = y[i] - dot(row, &y[..i]);
            y[i] = s / self.lower[i * n + i];
        }
        // Lᵀ x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.lower[k * n + i] * y[k];
            }
            y[i] = s / self.lower[i * n + i];
        }
    }

    /// Explicit inverse of the factored matrix, one column per task.
    pub fn inverse(&self, exec: Execution) -> SymMatrix {
        let n = self.n;
        let exec = if n >= PARALLEL_MIN_DIM {
            exec
        } else {
            Execution::Sequential
        };
        let mut cols = vec![0.0; n * n];
        exec::for_each_chunk_mut(exec, &mut cols, n, |j, col| {
            col[j] = 1.0;
            self.solve_in_place(col);
        });
        // Column j of the inverse is row j by symmetry; average the two
        // triangles to wash out rounding asymmetry.
        SymMatrix::from_lower_fn(n, |i, j| 0.5 * (cols[i * n + j] + cols[j * n + i]))
    }

    /// `L Lᵀ`, for checking reconstruction.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.n;
        SymMatrix::from_lower_fn(n, |i, j| {
            dot(&self.lower[i * n..i * n + j + 1], &self.lower[j * n..j * n + j + 1])
        })
    }

    /// `log det A = 2 Σ log Lᵢᵢ`.
    pub fn log_det(&self) -> f64 {
        (0..self.n)
            .map(|i| 2.0 * self.lower[i * self.n + i].ln())
            .sum()
    }
}

/// Pivot threshold separating positive definite from numerically singular.
pub fn pivot_tolerance(a: &SymMatrix) -> f64 {
    1e-12 * (1.0 + a.max_abs_diag())
}

/// Cholesky factorization. Fails with the index of the first pivot that
/// does not exceed [`pivot_tolerance`].
pub fn spd_factorize(a: &SymMatrix) -> Result<SpdFactor> {
    spd_factorize_with(a, Execution::default())
}

pub fn spd_factorize_with(a: &SymMatrix, exec: Execution) -> Result<SpdFactor> {
    let n = a.n;
    let tol = pivot_tolerance(a);
    let exec = if n >= PARALLEL_MIN_DIM {
        exec
    } else {
        Execution::Sequential
    };
    let mut l = a.data.clone();
    for j in 0..n {
        let (head, tail) = l.split_at_mut((j + 1) * n);
        let row_j = &mut head[j * n..];
        let pivot = row_j[j] - dot(&row_j[..j], &row_j[..j]);
        if !(pivot > tol) {
            return Err(BqpError::NotPositiveDefinite { pivot: j });
        }
        let d = pivot.sqrt();
        row_j[j] = d;
        let row_j = &head[j * n..j * n + j];
        exec::for_each_chunk_mut(exec, tail, n, |_, row_i| {
            row_i[j] = (row_i[j] - dot(&row_i[..j], row_j)) / d;
        });
    }
    for i in 0..n {
        for v in &mut l[i * n + i + 1..(i + 1) * n] {
            *v = 0.0;
        }
    }
    Ok(SpdFactor { n, lower: l })
}

pub fn spd_solve(f: &SpdFactor, b: &[f64]) -> Result<Vec<f64>> {
    f.solve(b)
}

/// Absolute accuracy promised by [`min_eigenvalue`].
pub fn eigenvalue_tolerance(a: &SymMatrix) -> f64 {
    1e-8 * (1.0 + a.norm_inf())
}

/// Smallest eigenvalue by Lanczos with full reorthogonalization.
///
/// Stops once the smallest Ritz pair has residual below `1e-10 (1 + ‖A‖∞)`,
/// or when the Krylov space becomes invariant.
pub fn min_eigenvalue(a: &SymMatrix) -> Result<f64> {
    let cap = 10 * a.n;
    let mut lz = Lanczos::new(a);
    let scale = 1.0 + a.norm_inf();
    let tol = 1e-10 * scale;
    for _ in 0..cap {
        let beta = lz.step();
        let (theta, last) = lz.smallest_ritz();
        if lz.invariant(beta) || lz.len() == a.n || (beta * last).abs() <= tol {
            return Ok(theta);
        }
    }
    Err(BqpError::NoConvergence { iterations: cap })
}

/// Counts of positive, negative and (numerically) zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl std::fmt::Display for Inertia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} positive, {} negative, {} zero)", self.positive, self.negative, self.zero)
    }
}

/// Inertia from a full Lanczos tridiagonalization and Sturm counts.
/// Eigenvalues within [`eigenvalue_tolerance`] of zero count as zero.
pub fn inertia(a: &SymMatrix) -> Inertia {
    let n = a.n;
    let mut lz = Lanczos::new(a);
    while lz.len() < n {
        let beta = lz.step();
        if lz.len() < n && lz.invariant(beta) {
            lz.restart();
        }
    }
    let tol = eigenvalue_tolerance(a);
    let below_neg = sturm_count(&lz.alpha, &lz.beta, -tol);
    let below_pos = sturm_count(&lz.alpha, &lz.beta, tol);
    Inertia {
        negative: below_neg,
        zero: below_pos - below_neg,
        positive: n - below_pos,
    }
}

struct Lanczos<'a> {
    a: &'a SymMatrix,
    basis: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    // beta[k] couples basis k and k + 1; zero after a restart
    beta: Vec<f64>,
    next: Vec<f64>,
    rng: ChaCha8Rng,
    breakdown: f64,
}

impl<'a> Lanczos<'a> {
    fn new(a: &'a SymMatrix) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c_20f5);
        let mut v: Vec<f64> = (0..a.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);
        Self {
            a,
            basis: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            next: v,
            rng,
            breakdown: 1e-12 * (1.0 + a.norm_inf()),
        }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn invariant(&self, beta: f64) -> bool {
        beta <= self.breakdown
    }

    /// Appends the pending vector to the basis and returns the new coupling.
    fn step(&mut self) -> f64 {
        let v = std::mem::take(&mut self.next);
        let mut w = self.a.mul_vec(&v).expect("basis vector has matrix dimension");
        let alpha = dot(&w, &v);
        self.basis.push(v);
        self.alpha.push(alpha);
        for _ in 0..2 {
            for b in &self.basis {
                let p = dot(&w, b);
                axpy(-p, b, &mut w);
            }
        }
        let beta = norm(&w);
        if beta > self.breakdown {
            w.iter_mut().for_each(|x| *x /= beta);
        }
        self.next = w;
        self.beta.push(beta);
        beta
    }

    /// Continues with a fresh random direction orthogonal to the basis.
    fn restart(&mut self) {
        *self.beta.last_mut().expect("restart after at least one step") = 0.0;
        loop {
            let mut w: Vec<f64> = (0..self.a.n).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for b in &self.basis {
                    let p = dot(&w, b);
                    axpy(-p, b, &mut w);
                }
            }
            let nw = norm(&w);
            if nw > 1e-8 {
                w.iter_mut().for_each(|x| *x /= nw);
                self.next = w;
                return;
            }
        }
    }

    /// Smallest eigenvalue of the current tridiagonal and the last component
    /// of its normalized eigenvector.
    fn smallest_ritz(&self) -> (f64, f64) {
        let m = self.alpha.len();
        let off = &self.beta[..m - 1];
        let theta = tridiagonal_min_eigenvalue(&self.alpha, off);
        let s = tridiagonal_eigenvector(&self.alpha, off, theta);
        (theta, s[m - 1])
    }
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with diagonal `d` and off-diagonal `e`.
pub(crate) fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let coupling = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - coupling;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

pub(crate) fn tridiagonal_min_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let m = d.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..m {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < m { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Normalized eigenvector for eigenvalue estimate `theta` by two steps of
/// inverse iteration with a pivoted tridiagonal solve.
fn tridiagonal_eigenvector(d: &[f64], e: &[f64], theta: f64) -> Vec<f64> {
    let m = d.len();
    if m == 1 {
        return vec![1.0];
    }
    let scale = d.iter().chain(e).fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let mut s = vec![1.0; m];
    for _ in 0..2 {
        let shifted: Vec<f64> = d.iter().map(|v| v - theta).collect();
        s = solve_tridiagonal(&shifted, e, &s, scale * f64::EPSILON);
        normalize(&mut s);
    }
    s
}

/// Gaussian elimination with partial pivoting on a symmetric tridiagonal
/// system. Zero pivots are replaced by `floor`.
fn solve_tridiagonal(d: &[f64], e: &[f64], b: &[f64], floor: f64) -> Vec<f64> {
    let m = d.len();
    let mut d = d.to_vec();
    let mut dl = e.to_vec();
    let mut du = e.to_vec();
    let mut du2 = vec![0.0; m.saturating_sub(2)];
    let mut b = b.to_vec();
    for i in 0..m - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = floor;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            if i + 2 < m {
                du2[i] = 0.0;
            }
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            du[i] = tmp;
            if i + 2 < m {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
        }
        dl[i] = 0.0;
    }
    if d[m - 1] == 0.0 {
        d[m - 1] = floor;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = b[m - 1] / d[m - 1];
    if m >= 2 {
        x[m - 2] = (b[m - 2] - du[m - 2] * x[m - 1]) / d[m - 2];
    }
    for i in (0..m.saturating_sub(2)).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    x
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn normalize(v: &mut [f64]) {
    let nv = norm(v);
    v.iter_mut().for_each(|x| *x /= nv);
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(BqpError::DimensionMismatch { expected, found })
    }
}
