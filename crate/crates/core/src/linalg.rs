//! Eigenvalues of small real symmetric matrices by the cyclic Jacobi
//! method. Only used for positive-semidefiniteness checks on Gram
//! matrices of size ≤ 8, so no pivoting heuristics are needed.

/// Eigenvalues of a symmetric matrix, sorted descending.
///
/// Panics if the matrix is not square or the rows have uneven lengths.
pub fn symmetric_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len();
    for row in matrix {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                // Classical Jacobi rotation annihilating a[p][q].
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_gram() {
        // Characteristic polynomial (1−λ)² − 1/4 has roots 3/2 and 1/2.
        let m = vec![vec![1.0, 0.5], vec![0.5, 1.0]];
        let eigs = symmetric_eigenvalues(&m);
        assert!((eigs[0] - 1.5).abs() < 1e-12, "{eigs:?}");
        assert!((eigs[1] - 0.5).abs() < 1e-12, "{eigs:?}");
    }

    #[test]
    fn diagonal_matrix_is_fixed() {
        let m = vec![
            vec![3.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ];
        let eigs = symmetric_eigenvalues(&m);
        assert!((eigs[0] - 3.0).abs() < 1e-12);
        assert!((eigs[1] - 2.0).abs() < 1e-12);
        assert!((eigs[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_rank_one() {
        // vvᵀ for v = (1,2,2): eigenvalues 9, 0, 0.
        let v = [1.0, 2.0, 2.0];
        let m: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| v[i] * v[j]).collect())
            .collect();
        let eigs = symmetric_eigenvalues(&m);
        assert!((eigs[0] - 9.0).abs() < 1e-10);
        assert!(eigs[1].abs() < 1e-10);
        assert!(eigs[2].abs() < 1e-10);
    }
}
