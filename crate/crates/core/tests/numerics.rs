use diarkit::numerics::{
    assignment_total, eigh, eigh_jacobi, eigh_tridiagonal_ql, gaussian_blur,
    nearest_rank_percentile, optimal_assignment, Matrix,
};
use proptest::prelude::*;

fn symmetric(n: usize, seed: Vec<f64>) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    let mut it = seed.into_iter().cycle();
    for i in 0..n {
        for j in 0..=i {
            let v = it.next().unwrap();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn arb_symmetric(max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_n, prop::collection::vec(-10.0..10.0f64, 1..64)).prop_map(|(n, s)| symmetric(n, s))
}

fn check_decomposition(
    m: &Matrix,
    d: &diarkit::numerics::EigenDecomposition,
) -> Result<(), TestCaseError> {
    let n = m.rows();
    let scale = m.norm_frobenius().max(1.0);
    prop_assert!(d.reconstruct().max_abs_diff(m) <= 1e-9 * scale);
    let vtv = d.vectors.transpose().matmul(&d.vectors).unwrap();
    prop_assert!(vtv.max_abs_diff(&Matrix::identity(n)) <= 1e-10);
    let trace: f64 = d.values.iter().sum();
    prop_assert!((trace - m.trace()).abs() <= 1e-9 * scale);
    prop_assert!(d.values.windows(2).all(|w| w[0] >= w[1]));
    for j in 0..n {
        // sign convention: the entry of largest magnitude is non-negative
        let v = d.vector(j);
        let big = v
            .iter()
            .cloned()
            .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
        prop_assert!(big >= 0.0);
    }
    Ok(())
}

proptest! {
    #[test]
    fn eigh_reconstructs(m in arb_symmetric(24)) {
        check_decomposition(&m, &eigh(&m).unwrap())?;
    }

    #[test]
    fn solvers_agree_on_eigenvalues(m in arb_symmetric(24)) {
        let a = eigh_jacobi(&m).unwrap();
        let b = eigh_tridiagonal_ql(&m).unwrap();
        check_decomposition(&m, &b)?;
        let scale = m.norm_frobenius().max(1.0);
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn blur_is_linear_and_preserves_constants(
        a in prop::collection::vec(-1.0..1.0f64, 30),
        b in prop::collection::vec(-1.0..1.0f64, 30),
        alpha in -3.0..3.0f64,
        sigma in 0.1..3.0f64,
        c in -5.0..5.0f64,
    ) {
        let ma = Matrix::from_vec(5, 6, a).unwrap();
        let mb = Matrix::from_vec(5, 6, b).unwrap();
        let lhs = gaussian_blur(&ma.scale(alpha).add(&mb).unwrap(), sigma).unwrap();
        let rhs = gaussian_blur(&ma, sigma).unwrap().scale(alpha).add(&gaussian_blur(&mb, sigma).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        let constant = Matrix::from_fn(5, 6, |_, _| c);
        prop_assert!(gaussian_blur(&constant, sigma).unwrap().max_abs_diff(&constant) <= 1e-12);
    }

    #[test]
    fn assignment_matches_brute_force(
        rows in 1usize..5,
        cols in 1usize..6,
        vals in prop::collection::vec(0u32..100, 30),
        maximize in any::<bool>(),
    ) {
        let m = Matrix::from_fn(rows, cols, |r, c| vals[r * cols + c] as f64);
        let pairs = optimal_assignment(&m, maximize);
        prop_assert_eq!(pairs.len(), rows.min(cols));
        let got = assignment_total(&m, &pairs);
        prop_assert_eq!(got, brute_force(&m, maximize));
    }

    #[test]
    fn percentile_is_an_element_with_rank(row in prop::collection::vec(-1.0..1.0f64, 1..40), p in 0.5..100.0f64) {
        let v = nearest_rank_percentile(&row, p).unwrap();
        prop_assert!(row.contains(&v));
        let at_or_below = row.iter().filter(|&&x| x <= v).count() as f64;
        prop_assert!(at_or_below >= (p / 100.0 * row.len() as f64).ceil().max(1.0));
    }
}

fn brute_force(m: &Matrix, maximize: bool) -> f64 {
    fn go(m: &Matrix, r: usize, used: &mut [bool], need: usize, maximize: bool) -> Option<f64> {
        if need == 0 {
            return Some(0.0);
        }
        if r == m.rows() {
            return None;
        }
        let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
        let mut best = if m.rows() - r > need {
            go(m, r + 1, used, need, maximize)
        } else {
            None
        };
        for c in 0..m.cols() {
            if !used[c] {
                used[c] = true;
                if let Some(rest) = go(m, r + 1, used, need - 1, maximize) {
                    let total = m[(r, c)] + rest;
                    if best.is_none_or(|b| better(total, b)) {
                        best = Some(total);
                    }
                }
                used[c] = false;
            }
        }
        best
    }
    let need = m.rows().min(m.cols());
    go(m, 0, &mut vec![false; m.cols()], need, maximize).unwrap()
}

#[test]
fn blur_center_matches_explicit_convolution() {
    // direct 7×7 convolution over a reflected source
    let sigma = 1.0f64;
    let weights: Vec<f64> = (-3..=3)
        .map(|d: i32| (-(d * d) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let w: Vec<f64> = weights.iter().map(|x| x / total).collect();
    let src = |i: i64, j: i64| -> f64 {
        let r = |k: i64| -> i64 {
            // half-sample symmetric on 0..3
            let m = k.rem_euclid(6);
            if m < 3 {
                m
            } else {
                5 - m
            }
        };
        if r(i) == 1 && r(j) == 1 {
            1.0
        } else {
            0.0
        }
    };
    let mut want = [[0.0; 3]; 3];
    for (i, row) in want.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for di in -3..=3i64 {
                for dj in -3..=3i64 {
                    *cell += w[(di + 3) as usize]
                        * w[(dj + 3) as usize]
                        * src(i as i64 + di, j as i64 + dj);
                }
            }
        }
    }
    let mut m = Matrix::zeros(3, 3);
    m[(1, 1)] = 1.0;
    let got = gaussian_blur(&m, sigma).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((got[(i, j)] - want[i][j]).abs() < 1e-15, "{i},{j}");
        }
    }
    assert!((got[(1, 1)] - 0.16639576981137388).abs() < 1e-15);
}

#[test]
fn large_matrices_use_ql_and_stay_accurate() {
    let n = 300;
    let m = Matrix::from_fn(n, n, |i, j| {
        ((i * 7 + j * 7) % 13) as f64 / 13.0 + if i == j { 2.0 } else { 0.0 }
    });
    let d = eigh(&m).unwrap();
    assert!(d.reconstruct().max_abs_diff(&m) < 1e-9 * m.norm_frobenius());
}

#[test]
fn eigh_small_examples() {
    let d = eigh(&Matrix::identity(3)).unwrap();
    assert_eq!(d.values, vec![1.0, 1.0, 1.0]);
    let d = eigh(&Matrix::from_rows(&[[2.0, 0.0], [0.0, 1.0]]).unwrap()).unwrap();
    assert_eq!(d.values, vec![2.0, 1.0]);
    assert_eq!(d.vector(0), vec![1.0, 0.0]);
    assert_eq!(d.vector(1), vec![0.0, 1.0]);
    let d = eigh(&Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap()).unwrap();
    assert!((d.values[0] - 2.0).abs() < 1e-12 && d.values[1].abs() < 1e-12);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!(d.vector(0).iter().all(|v| (v - h).abs() < 1e-12));
}
