//! Cyclic Jacobi eigendecomposition for small dense symmetric matrices.

use crate::error::{Error, Result};
use crate::linalg::mat::Mat;
use crate::linalg::types::{EigenDecomp, SymMat};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition S = U diag(λ) Uᵀ with λ sorted descending.
///
/// Deterministic: eigenvalue ties keep their pre-sort order, and each
/// eigenvector column is flipped so its largest-magnitude entry is positive
/// (lowest row index on magnitude ties).
pub fn sym_eigen(s: &SymMat) -> Result<EigenDecomp> {
    if !s.mat().is_finite() {
        return Err(Error::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    let n = s.dim();
    let mut a = s.mat().clone();
    let mut u = Mat::identity(n);

    let scale = a.frob().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut u, p, q);
            }
        }
    }

    let mut lambda: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let order = descending_order(&lambda);
    lambda = order.iter().map(|&i| lambda[i]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_j)] = u[(i, old_j)];
        }
    }
    fix_column_signs(&mut vectors);
    Ok(EigenDecomp { u: vectors, lambda })
}

/// One Jacobi rotation annihilating a[p][q].
fn rotate(a: &mut Mat, u: &mut Mat, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq.abs() < 1e-300 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        1.0 / (theta - (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.rows();

    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = c * aip - s * aiq;
        a[(i, q)] = s * aip + c * aiq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = c * apj - s * aqj;
        a[(q, j)] = s * apj + c * aqj;
    }
    // restore exact symmetry on the rotated pair
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for i in 0..n {
        let up = u[(i, p)];
        let uq = u[(i, q)];
        u[(i, p)] = c * up - s * uq;
        u[(i, q)] = s * up + c * uq;
    }
}

/// Stable ordering of indices by descending value.
pub(crate) fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    idx
}

/// Flip each column so its largest-magnitude entry is positive; magnitude
/// ties resolved at the lowest row index.
pub(crate) fn fix_column_signs(m: &mut Mat) {
    let (rows, cols) = (m.rows(), m.cols());
    for j in 0..cols {
        let mut best = 0usize;
        let mut best_abs = m[(0, j)].abs();
        for i in 1..rows {
            let a = m[(i, j)].abs();
            if a > best_abs {
                best = i;
                best_abs = a;
            }
        }
        if m[(best, j)] < 0.0 {
            for i in 0..rows {
                m[(i, j)] = -m[(i, j)];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::types::SymMat;

    fn reconstruct(e: &EigenDecomp) -> Mat {
        let n = e.lambda.len();
        let mut d = Mat::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = e.lambda[i];
        }
        e.u.matmul(&d).matmul(&e.u.transpose())
    }

    #[test]
    fn identity_input() {
        let e = sym_eigen(&SymMat::identity(3)).unwrap();
        assert_eq!(e.lambda, vec![1.0, 1.0, 1.0]);
        assert_eq!(e.u, Mat::identity(3));
    }

    #[test]
    fn diagonal_input_sorted_with_permutation() {
        let s = SymMat::diag(&[3.0, 1.0, 2.0]);
        let e = sym_eigen(&s).unwrap();
        assert_eq!(e.lambda, vec![3.0, 2.0, 1.0]);
        // U must be the permutation sending sorted positions to originals
        let expect = Mat::from_rows(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(e.u, expect);
    }

    #[test]
    fn random_symmetric_reconstruction() {
        // fixed arbitrary symmetric 4×4
        let s = SymMat::new(
            4,
            &[
                2.0, 0.3, -0.5, 1.1, //
                0.3, 1.0, 0.9, -0.2, //
                -0.5, 0.9, 3.0, 0.4, //
                1.1, -0.2, 0.4, -1.5,
            ],
        )
        .unwrap();
        let e = sym_eigen(&s).unwrap();
        let r = reconstruct(&e);
        assert!((&r - s.mat()).frob() < 1e-12);
        // orthogonality
        let utu = e.u.transpose().matmul(&e.u);
        assert!((&utu - &Mat::identity(4)).frob() < 1e-12);
        // descending
        for w in e.lambda.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn deterministic_repeat() {
        let s = SymMat::new(3, &[1.0, 0.5, 0.2, 0.5, 2.0, -0.7, 0.2, -0.7, 0.9]).unwrap();
        let a = sym_eigen(&s).unwrap();
        let b = sym_eigen(&s).unwrap();
        assert_eq!(a.lambda, b.lambda);
        assert_eq!(a.u, b.u);
    }

    #[test]
    fn non_finite_rejected() {
        let s = SymMat::new(2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(s.is_err() || sym_eigen(&s.unwrap()).is_err());
    }
}
