use super::Matrix;

/// Optimal one-to-one assignment of size `min(rows, cols)` (Hungarian method
/// with potentials, O(n²m)). Returns `(row, col)` pairs sorted by row.
pub fn optimal_assignment(cost: &Matrix, maximize: bool) -> Vec<(usize, usize)> {
    let (r, c) = (cost.rows(), cost.cols());
    if r == 0 || c == 0 {
        return Vec::new();
    }
    let sign = if maximize { -1.0 } else { 1.0 };
    let transposed = r > c;
    let (n, m) = if transposed { (c, r) } else { (r, c) };
    let at = |i: usize, j: usize| -> f64 {
        sign * if transposed {
            cost[(j, i)]
        } else {
            cost[(i, j)]
        }
    };

    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| p[j] != 0)
        .map(|j| {
            let (row, col) = (p[j] - 1, j - 1);
            if transposed {
                (col, row)
            } else {
                (row, col)
            }
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Sum of `cost` over the given pairs.
pub fn assignment_total(cost: &Matrix, pairs: &[(usize, usize)]) -> f64 {
    pairs.iter().map(|&(i, j)| cost[(i, j)]).sum()
}
