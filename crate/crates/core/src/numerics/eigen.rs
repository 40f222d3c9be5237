//! Symmetric eigen-decomposition.
//!
//! Two independent solvers: cyclic Jacobi rotations, and Householder
//! tridiagonalization followed by implicit QL. [`eigh`] uses Jacobi up to
//! [`JACOBI_MAX_N`] rows and QL above that. Both return the same canonical
//! form: values descending (ties in original diagonal order), unit columns,
//! largest-magnitude entry of each column non-negative.

use super::Matrix;
use crate::error::{Error, Result};

/// Largest order handled by the Jacobi solver in [`eigh`].
pub const JACOBI_MAX_N: usize = 256;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: Matrix,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    /// `V · diag(λ) · Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n();
        let v = &self.vectors;
        Matrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.values[k] * v[(j, k)]).sum()
        })
    }
}

fn validate(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::invalid(format!(
            "eigh needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() == 0 {
        return Err(Error::invalid("eigh of an empty matrix"));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("eigh input has non-finite entries"));
    }
    let scale = m.as_slice().iter().fold(1.0f64, |a, v| a.max(v.abs()));
    if !m.is_symmetric(SYMMETRY_TOL * scale) {
        return Err(Error::invalid("eigh input is not symmetric"));
    }
    Ok(())
}

fn symmetrized(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Sorts descending (stable on ties), and fixes eigenvector signs.
/// `rows_are_vectors[j]` is the j-th unsorted eigenvector.
fn canonicalize(values: Vec<f64>, rows_are_vectors: Matrix) -> EigenDecomposition {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut vectors = Matrix::zeros(n, n);
    let mut sorted = Vec::with_capacity(n);
    for (col, &src) in order.iter().enumerate() {
        let v = rows_are_vectors.row(src);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let mut pivot = 0;
        for (i, x) in unit.iter().enumerate() {
            if x.abs() > unit[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if unit[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (i, x) in unit.iter().enumerate() {
            vectors[(i, col)] = sign * x;
        }
        sorted.push(values[src]);
    }
    EigenDecomposition {
        values: sorted,
        vectors,
    }
}

/// Symmetric eigen-decomposition; dispatches on size.
pub fn eigh(m: &Matrix) -> Result<EigenDecomposition> {
    if m.rows() <= JACOBI_MAX_N {
        eigh_jacobi(m)
    } else {
        eigh_tridiagonal_ql(m)
    }
}

/// Cyclic Jacobi. Converged once the off-diagonal Frobenius norm drops
/// below `1e-12 · ‖M‖F`; at most 100 sweeps.
pub fn eigh_jacobi(m: &Matrix) -> Result<EigenDecomposition> {
    validate(m)?;
    let n = m.rows();
    let mut a = symmetrized(m);
    // rows of `vt` accumulate the eigenvectors
    let mut vt = Matrix::identity(n);
    let target = JACOBI_REL_TOL * a.norm_frobenius();

    let off_norm = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for (j, v) in a.row(i).iter().enumerate() {
                if i != j {
                    s += v * v;
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                rotate_rows(a.as_mut_slice(), n, p, q, c, s);
                for k in 0..n {
                    if k != p && k != q {
                        a[(k, p)] = a[(p, k)];
                        a[(k, q)] = a[(q, k)];
                    }
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                rotate_rows(vt.as_mut_slice(), n, p, q, c, s);
            }
        }
    }
    if !converged && off_norm(&a) > target {
        return Err(Error::Numeric(format!(
            "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    Ok(canonicalize(values, vt))
}

/// `row_p ← c·row_p − s·row_q`, `row_q ← s·row_p + c·row_q` on a row-major `n×n` buffer.
fn rotate_rows(data: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    debug_assert!(p < q);
    let (head, tail) = data.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Householder reduction to tridiagonal form then implicit QL with
/// Wilkinson-style shifts (EISPACK `tred2`/`tql2` lineage).
pub fn eigh_tridiagonal_ql(m: &Matrix) -> Result<EigenDecomposition> {
    validate(m)?;
    let n = m.rows();
    let mut v = symmetrized(m);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    // QL rotates pairs of columns; work on the transpose so they are rows.
    let mut vt = v.transpose();
    tridiagonal_ql(&mut vt, &mut d, &mut e)?;
    Ok(canonicalize(d, vt))
}

fn tridiagonalize(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in &mut e[..i] {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    // accumulate transformations
    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// `vt` holds eigenvectors as rows.
fn tridiagonal_ql(vt: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    let max_iter = 64 * n.max(1);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::Numeric("tridiagonal QL did not converge".into()));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    // columns i, i+1 of V == rows i, i+1 of Vᵀ
                    let data = vt.as_mut_slice();
                    let (head, tail) = data.split_at_mut((i + 1) * n);
                    let vi = &mut head[i * n..];
                    let vi1 = &mut tail[..n];
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
