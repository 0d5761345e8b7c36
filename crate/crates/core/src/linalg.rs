//! Dense real linear algebra: symmetric eigensolver, Gaussian elimination,
//! and a Lanczos iteration for extremal eigenpairs of large operators.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::rng::{derive_stream, StreamTag};

/// Row-major dense matrix of f64.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Max absolute row sum (operator infinity norm).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            y[i] = acc;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinalgError {
    NotSymmetric,
    NotSquare,
    /// QL iteration exceeded its sweep budget.
    NoEigenConvergence,
    /// Pivot column with no usable pivot (dependent columns).
    SingularSystem { column: usize },
    LanczosBreakdown,
}

impl core::fmt::Display for LinalgError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LinalgError::NotSymmetric => write!(f, "matrix is not symmetric"),
            LinalgError::NotSquare => write!(f, "matrix is not square"),
            LinalgError::NoEigenConvergence => write!(f, "QL iteration did not converge"),
            LinalgError::SingularSystem { column } => {
                write!(f, "singular system: column {column} has no usable pivot")
            }
            LinalgError::LanczosBreakdown => write!(f, "Lanczos iteration broke down"),
        }
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form with
/// accumulated transformation (classic tred2).
fn tridiagonalize(a: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = a.rows;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a.get(i, k).abs()).sum();
            if scale == 0.0 {
                e[i] = a.get(i, l);
            } else {
                for k in 0..=l {
                    let v = a.get(i, k) / scale;
                    a.set(i, k, v);
                    h += v * v;
                }
                let f = a.get(i, l);
                let g = if f >= 0.0 { -math::sqrt(h) } else { math::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                a.set(i, l, f - g);
                let mut facc = 0.0;
                for j in 0..=l {
                    a.set(j, i, a.get(i, j) / h);
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a.get(j, k) * a.get(i, k);
                    }
                    for k in (j + 1)..=l {
                        g += a.get(k, j) * a.get(i, k);
                    }
                    e[j] = g / h;
                    facc += e[j] * a.get(i, j);
                }
                let hh = facc / (h + h);
                for j in 0..=l {
                    let f = a.get(i, j);
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let v = a.get(j, k) - (f * e[k] + g * a.get(i, k));
                        a.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = a.get(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a.get(i, k) * a.get(k, j);
                }
                for k in 0..i {
                    let v = a.get(k, j) - g * a.get(k, i);
                    a.set(k, j, v);
                }
            }
        }
        d[i] = a.get(i, i);
        a.set(i, i, 1.0);
        for j in 0..i {
            a.set(j, i, 0.0);
            a.set(i, j, 0.0);
        }
    }
}

fn hypot(a: f64, b: f64) -> f64 {
    libm::hypot(a, b)
}

/// Implicit-shift QL on a tridiagonal (d, e), rotations accumulated into z.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut Matrix) -> Result<(), LinalgError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(LinalgError::NoEigenConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.rows {
                    f = z.get(k, i + 1);
                    z.set(k, i + 1, s * z.get(k, i) + c * f);
                    z.set(k, i, c * z.get(k, i) - s * f);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full symmetric eigendecomposition. Eigenvalues ascending; `vectors`
/// column j is the eigenvector for `values[j]`.
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

pub fn symmetric_eigen(matrix: &Matrix) -> Result<Eigen, LinalgError> {
    if matrix.rows != matrix.cols {
        return Err(LinalgError::NotSquare);
    }
    let n = matrix.rows;
    let mut work = matrix.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut work, &mut d, &mut e);
    ql_implicit(&mut d, &mut e, &mut work)?;
    // Sort ascending, carrying columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(core::cmp::Ordering::Equal));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        values.push(d[src]);
        for row in 0..n {
            vectors.set(row, col, work.get(row, src));
        }
    }
    Ok(Eigen { values, vectors })
}

/// Eigenvalues and vectors of a tridiagonal matrix given by diagonal `d`
/// and off-diagonal `e` (e[0] unused slot convention: e[i] couples i-1, i).
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<Eigen, LinalgError> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..n].copy_from_slice(&off[..n - 1]);
    let mut z = Matrix::zeros(n, n);
    for i in 0..n {
        z.set(i, i, 1.0);
    }
    ql_implicit(&mut d, &mut e, &mut z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(core::cmp::Ordering::Equal));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        values.push(d[src]);
        for row in 0..n {
            vectors.set(row, col, z.get(row, src));
        }
    }
    Ok(Eigen { values, vectors })
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare);
    }
    let n = a.rows;
    assert_eq!(b.len(), n);
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let scale = m.inf_norm().max(1.0);
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot = m.get(col, col).abs();
        for r in (col + 1)..n {
            let v = m.get(r, col).abs();
            if v > pivot {
                pivot = v;
                pivot_row = r;
            }
        }
        if pivot <= 1e-13 * scale {
            return Err(LinalgError::SingularSystem { column: col });
        }
        if pivot_row != col {
            for j in 0..n {
                let t = m.get(col, j);
                m.set(col, j, m.get(pivot_row, j));
                m.set(pivot_row, j, t);
            }
            rhs.swap(col, pivot_row);
        }
        let diag = m.get(col, col);
        for r in (col + 1)..n {
            let factor = m.get(r, col) / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m.get(r, j) - factor * m.get(col, j);
                m.set(r, j, v);
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m.get(i, j) * x[j];
        }
        x[i] = acc / m.get(i, i);
    }
    Ok(x)
}

/// Lowest eigenpair of a complex hermitian matrix H = A + iB given by its
/// real part A (symmetric) and imaginary part B (antisymmetric), through the
/// real embedding [[A, -B], [B, A]] whose spectrum doubles H's.
pub fn complex_hermitian_lowest(
    re: &Matrix,
    im: &Matrix,
) -> Result<(f64, Vec<num_complex::Complex64>), LinalgError> {
    let n = re.rows;
    if re.rows != re.cols || im.rows != im.cols || im.rows != n {
        return Err(LinalgError::NotSquare);
    }
    let mut embed = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            embed.set(i, j, re.get(i, j));
            embed.set(n + i, n + j, re.get(i, j));
            embed.set(i, n + j, -im.get(i, j));
            embed.set(n + i, j, im.get(i, j));
        }
    }
    let eig = symmetric_eigen(&embed)?;
    let value = eig.values[0];
    let mut vector = Vec::with_capacity(n);
    for i in 0..n {
        vector.push(num_complex::Complex64::new(eig.vectors.get(i, 0), eig.vectors.get(n + i, 0)));
    }
    // The embedding doubles every eigenpair; normalize the complex vector.
    let norm = math::sqrt(vector.iter().map(|c| c.norm_sqr()).sum());
    if norm > 0.0 {
        for c in vector.iter_mut() {
            *c /= norm;
        }
    }
    Ok((value, vector))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    math::sqrt(dot(a, a))
}

/// Lowest eigenpair of a large symmetric operator given only its matvec,
/// by Lanczos with full reorthogonalization.
///
/// `tol` is the absolute residual target on ||A v - lambda v||.
pub fn lanczos_lowest<F: FnMut(&[f64], &mut [f64])>(
    mut matvec: F,
    dim: usize,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<(f64, Vec<f64>), LinalgError> {
    assert!(dim > 0);
    if dim == 1 {
        let mut y = vec![0.0];
        matvec(&[1.0], &mut y);
        return Ok((y[0], vec![1.0]));
    }
    let mut rng = derive_stream(seed, StreamTag::Lanczos, 0);
    let mut v = vec![0.0; dim];
    for x in v.iter_mut() {
        *x = rng.next_f64() - 0.5;
    }
    let nv = norm(&v);
    for x in v.iter_mut() {
        *x /= nv;
    }

    let max_k = max_iter.min(dim);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_k);
    basis.push(v);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut last_theta = f64::INFINITY;

    for j in 0..max_k {
        matvec(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        for (wi, vi) in w.iter_mut().zip(basis[j].iter()) {
            *wi -= alpha * vi;
        }
        if j > 0 {
            let beta_prev = betas[j - 1];
            for (wi, vi) in w.iter_mut().zip(basis[j - 1].iter()) {
                *wi -= beta_prev * vi;
            }
        }
        // Full reorthogonalization, twice.
        for _ in 0..2 {
            for prev in basis.iter() {
                let c = dot(prev, &w);
                if c != 0.0 {
                    for (wi, vi) in w.iter_mut().zip(prev.iter()) {
                        *wi -= c * vi;
                    }
                }
            }
        }
        let beta = norm(&w);

        // Ritz estimate from the current tridiagonal.
        let eig = tridiagonal_eigen(&alphas, &betas)?;
        let theta = eig.values[0];
        let k = alphas.len();
        let bottom = eig.vectors.get(k - 1, 0).abs();
        let residual = beta * bottom;
        let converged = residual <= tol && (theta - last_theta).abs() <= tol.max(1e-12);
        last_theta = theta;

        if converged || beta <= 1e-12 || j + 1 == max_k {
            // Assemble the Ritz vector.
            let mut ritz = vec![0.0; dim];
            for (i, base) in basis.iter().enumerate() {
                let c = eig.vectors.get(i, 0);
                for (ri, bi) in ritz.iter_mut().zip(base.iter()) {
                    *ri += c * bi;
                }
            }
            let nr = norm(&ritz);
            if nr == 0.0 {
                return Err(LinalgError::LanczosBreakdown);
            }
            for x in ritz.iter_mut() {
                *x /= nr;
            }
            return Ok((theta, ritz));
        }

        betas.push(beta);
        let mut next = w.clone();
        for x in next.iter_mut() {
            *x /= beta;
        }
        basis.push(next);
    }
    Err(LinalgError::LanczosBreakdown)
}
