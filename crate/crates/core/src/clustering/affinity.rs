use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::types::{AffinityMatrix, EmbeddingVector};

/// Cosine affinity over segment embeddings. Off-diagonal entries are raw
/// cosine similarities in `[-1, 1]`; each diagonal entry is the maximum of the
/// other entries in its row.
pub fn build_affinity(embeddings: &[EmbeddingVector]) -> Result<AffinityMatrix> {
    let n = embeddings.len();
    if n < 2 {
        return Err(Error::invalid(format!(
            "affinity needs at least 2 embeddings, got {n}"
        )));
    }
    let dim = embeddings[0].dim();
    let mut unit = Vec::with_capacity(n);
    for (i, e) in embeddings.iter().enumerate() {
        if e.dim() != dim {
            return Err(Error::invalid(format!(
                "embedding {i} has dimension {}, expected {dim}",
                e.dim()
            )));
        }
        let u = e
            .normalized()
            .map_err(|_| Error::invalid(format!("embedding {i} is the zero vector")))?;
        unit.push(u.into_inner());
    }
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let c: f64 = unit[i].iter().zip(&unit[j]).map(|(x, y)| x * y).sum();
            let c = c.clamp(-1.0, 1.0);
            a[(i, j)] = c;
            a[(j, i)] = c;
        }
    }
    for i in 0..n {
        let max = (0..n)
            .filter(|&j| j != i)
            .map(|j| a[(i, j)])
            .fold(f64::NEG_INFINITY, f64::max);
        a[(i, i)] = max;
    }
    AffinityMatrix::new(a)
}
