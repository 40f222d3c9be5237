//! Affinity refinement stages, applied in the order listed in [`Stage`].

use crate::error::{Error, Result};
use crate::numerics::{gaussian_blur, nearest_rank_percentile, Matrix};
use crate::types::AffinityMatrix;

use super::SpectralParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Blur,
    Threshold,
    Symmetrize,
    Diffuse,
    RowMaxNormalize,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::Blur,
        Stage::Threshold,
        Stage::Symmetrize,
        Stage::Diffuse,
        Stage::RowMaxNormalize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Blur => "blur",
            Stage::Threshold => "threshold",
            Stage::Symmetrize => "symmetrize",
            Stage::Diffuse => "diffuse",
            Stage::RowMaxNormalize => "normalize",
        }
    }
}

/// Per row, entries strictly below the row's nearest-rank `p`-percentile are
/// multiplied by `soft_multiplier` (0 gives hard zeroing).
pub fn refine_threshold(m: &Matrix, p: f64, soft_multiplier: f64) -> Result<Matrix> {
    if !(p > 0.0 && p < 100.0) {
        return Err(Error::invalid(format!("percentile {p} outside (0, 100)")));
    }
    let mut out = m.clone();
    for i in 0..m.rows() {
        let cut = nearest_rank_percentile(m.row(i), p)?;
        for v in out.row_mut(i) {
            if *v < cut {
                *v *= soft_multiplier;
            }
        }
    }
    Ok(out)
}

/// `Y_ij = max(X_ij, X_ji)`.
pub fn refine_symmetrize(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].max(m[(j, i)]))
}

/// `Y = X Xᵀ`.
pub fn refine_diffuse(m: &Matrix) -> Matrix {
    m.gram()
}

/// Divides each row by its maximum. A row whose maximum is not positive is
/// a degenerate affinity.
pub fn refine_row_max_normalize(m: &Matrix) -> Result<Matrix> {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let max = m.row(i).iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max.is_nan() || max <= 0.0 {
            return Err(Error::DegenerateAffinity { row: i, max });
        }
        for v in out.row_mut(i) {
            *v /= max;
        }
    }
    Ok(out)
}

fn apply(stage: Stage, m: &Matrix, params: &SpectralParams) -> Result<Matrix> {
    match stage {
        Stage::Blur => gaussian_blur(m, params.sigma),
        Stage::Threshold => refine_threshold(m, params.p_percentile, params.soft_multiplier),
        Stage::Symmetrize => Ok(refine_symmetrize(m)),
        Stage::Diffuse => Ok(refine_diffuse(m)),
        Stage::RowMaxNormalize => refine_row_max_normalize(m),
    }
}

/// Runs all five stages and returns the final matrix.
pub fn refine_chain(a: &AffinityMatrix, params: &SpectralParams) -> Result<Matrix> {
    let mut m = a.matrix().clone();
    for stage in Stage::ALL {
        m = apply(stage, &m, params)?;
    }
    Ok(m)
}

/// As [`refine_chain`], also returning the matrix after every stage
/// (five snapshots; the last equals the returned matrix).
pub fn refine_chain_with_stages(
    a: &AffinityMatrix,
    params: &SpectralParams,
) -> Result<(Matrix, Vec<(Stage, Matrix)>)> {
    let mut m = a.matrix().clone();
    let mut stages = Vec::with_capacity(Stage::ALL.len());
    for stage in Stage::ALL {
        m = apply(stage, &m, params)?;
        stages.push((stage, m.clone()));
    }
    Ok((m, stages))
}
