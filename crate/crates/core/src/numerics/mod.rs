//! Vector and matrix primitives used by clustering and scoring.

mod assignment;
mod eigen;
mod matrix;

pub use assignment::{assignment_total, optimal_assignment};
pub use eigen::{eigh, eigh_jacobi, eigh_tridiagonal_ql, EigenDecomposition, JACOBI_MAX_N};
pub use matrix::Matrix;

use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `⟨a,b⟩ / (‖a‖‖b‖)`, clamped to `[-1, 1]`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::invalid("cosine similarity of a zero-norm vector"));
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

/// `(1 - cos(a, b)) / 2`, in `[0, 1]`.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    Ok((1.0 - cosine_similarity(a, b)?) / 2.0)
}

/// Normalized Gaussian taps for offsets `-r..=r`, `r = ceil(3σ)`.
pub(crate) fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / total).collect()
}

/// Half-sample symmetric reflection (`d c b a | a b c d | d c b a`), periodic
/// with period `2n` so kernels wider than the matrix stay well defined.
fn reflect(idx: i64, n: usize) -> usize {
    let n = n as i64;
    let period = 2 * n;
    let m = idx.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}

/// Separable 2-D Gaussian blur in index units with reflected borders.
/// `sigma == 0` returns the input unchanged.
pub fn gaussian_blur(m: &Matrix, sigma: f64) -> Result<Matrix> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::invalid(format!(
            "blur sigma must be finite and >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 || m.rows() == 0 || m.cols() == 0 {
        return Ok(m.clone());
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as i64;
    let (rows, cols) = (m.rows(), m.cols());

    // along rows
    let mut tmp = Matrix::zeros(rows, cols);
    for i in 0..rows {
        let src = m.row(i);
        let dst = tmp.row_mut(i);
        for (j, out) in dst.iter_mut().enumerate() {
            *out = kernel
                .iter()
                .enumerate()
                .map(|(t, w)| w * src[reflect(j as i64 + t as i64 - radius, cols)])
                .sum();
        }
    }
    // along columns
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for (t, w) in kernel.iter().enumerate() {
            let src = tmp.row(reflect(i as i64 + t as i64 - radius, rows));
            for (o, s) in out.row_mut(i).iter_mut().zip(src) {
                *o += w * s;
            }
        }
    }
    Ok(out)
}

/// Nearest-rank percentile: element at index `ceil(p/100 · n) - 1` of the
/// ascending sort, clamped to a valid index.
pub fn nearest_rank_percentile(row: &[f64], p: f64) -> Result<f64> {
    if row.is_empty() {
        return Err(Error::invalid("percentile of an empty row"));
    }
    if !(0.0..=100.0).contains(&p) {
        return Err(Error::invalid(format!("percentile {p} outside [0, 100]")));
    }
    let mut sorted = row.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let rank = (p / 100.0 * n as f64).ceil() as i64 - 1;
    Ok(sorted[rank.clamp(0, n as i64 - 1) as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_examples() {
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let v = cosine_similarity(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!((v - 0.7071067811865475).abs() < 1e-12);

        assert_eq!(cosine_distance(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(cosine_distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), 1.0);
        let d = cosine_distance(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!((d - 0.14644660940672624).abs() < 1e-12);
    }

    #[test]
    fn cosine_errors() {
        assert!(cosine_similarity(&[0.0, 0.0], &[1.0, 0.0]).is_err());
        assert!(cosine_similarity(&[1.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn cosine_clamped_against_rounding() {
        let a = [0.1, 0.2, 0.3];
        let s = cosine_similarity(&a, &a).unwrap();
        assert!(s <= 1.0);
    }

    #[test]
    fn blur_zero_sigma_is_identity() {
        let m = Matrix::from_rows(&[[0.3, -1.0], [2.0, 0.25]]).unwrap();
        assert_eq!(gaussian_blur(&m, 0.0).unwrap(), m);
    }

    #[test]
    fn blur_preserves_constants() {
        for sigma in [0.5, 1.0, 2.5, 4.0] {
            let m = Matrix::from_fn(5, 5, |_, _| 0.7);
            let b = gaussian_blur(&m, sigma).unwrap();
            assert!(
                b.as_slice().iter().all(|v| (v - 0.7).abs() < 1e-12),
                "sigma {sigma}"
            );
        }
    }

    #[test]
    fn blur_negative_sigma_rejected() {
        assert!(gaussian_blur(&Matrix::identity(2), -1.0).is_err());
    }

    #[test]
    fn kernel_normalized_radius() {
        let k = gaussian_kernel(1.0);
        assert_eq!(k.len(), 7);
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(gaussian_kernel(0.4).len(), 5);
    }

    #[test]
    fn reflect_matches_symmetric_padding() {
        // n = 3: ... 2 1 0 | 0 1 2 | 2 1 0 ...
        let got: Vec<usize> = (-4..7).map(|i| reflect(i, 3)).collect();
        assert_eq!(got, vec![2, 2, 1, 0, 0, 1, 2, 2, 1, 0, 0]);
    }

    #[test]
    fn percentile_examples() {
        assert_eq!(
            nearest_rank_percentile(&[0.1, 0.5, 0.9], 50.0).unwrap(),
            0.5
        );
        assert_eq!(nearest_rank_percentile(&[7.0], 3.0).unwrap(), 7.0);
        assert_eq!(nearest_rank_percentile(&[7.0], 100.0).unwrap(), 7.0);
        assert_eq!(
            nearest_rank_percentile(&[0.9, 0.1, 0.5], 100.0).unwrap(),
            0.9
        );
        assert_eq!(nearest_rank_percentile(&[0.9, 0.1, 0.5], 0.0).unwrap(), 0.1);
        assert!(nearest_rank_percentile(&[], 50.0).is_err());
    }
}
