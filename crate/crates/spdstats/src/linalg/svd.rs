//! One-sided Jacobi singular value decomposition for small square matrices.

use crate::error::{Error, Result};
use crate::linalg::eigen::{descending_order, fix_column_signs};
use crate::linalg::mat::Mat;

const MAX_SWEEPS: usize = 60;

/// X = U · diag(σ) · Vᵀ with U, V orthogonal and σ descending nonnegative.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
}

/// Singular value decomposition of a square matrix by one-sided Jacobi:
/// right rotations orthogonalize the columns, whose norms are the singular
/// values. Zero singular directions get a deterministically completed basis.
pub fn svd(x: &Mat) -> Result<Svd> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    assert!(x.is_square(), "svd expects a square matrix");
    let n = x.rows();
    let mut w = x.clone();
    let mut v = Mat::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..n {
                    alpha += w[(i, p)] * w[(i, p)];
                    beta += w[(i, q)] * w[(i, q)];
                    gamma += w[(i, p)] * w[(i, q)];
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    1.0 / (zeta - (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| w[(i, j)] * w[(i, j)]).sum::<f64>().sqrt())
        .collect();
    let order = descending_order(&norms);
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let sig_max = sigma.first().copied().unwrap_or(0.0);
    let rank_tol = sig_max * 1e-13 * n as f64;

    let mut u = Mat::zeros(n, n);
    let mut v_sorted = Mat::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            v_sorted[(i, new_j)] = v[(i, old_j)];
        }
        if sigma[new_j] > rank_tol {
            for i in 0..n {
                u[(i, new_j)] = w[(i, old_j)] / sigma[new_j];
            }
        }
    }
    complete_zero_columns(&mut u, &sigma, rank_tol);

    // sign convention: largest-magnitude entry of each U column positive,
    // with the paired V column flipped to preserve the product
    for j in 0..n {
        let mut best = 0usize;
        let mut best_abs = u[(0, j)].abs();
        for i in 1..n {
            if u[(i, j)].abs() > best_abs {
                best = i;
                best_abs = u[(i, j)].abs();
            }
        }
        if u[(best, j)] < 0.0 {
            for i in 0..n {
                u[(i, j)] = -u[(i, j)];
                v_sorted[(i, j)] = -v_sorted[(i, j)];
            }
        }
    }

    Ok(Svd {
        u,
        sigma,
        v: v_sorted,
    })
}

/// Fill columns whose singular value vanished with an orthonormal complement
/// built by Gram-Schmidt over the unit basis, lowest index first.
fn complete_zero_columns(u: &mut Mat, sigma: &[f64], rank_tol: f64) {
    let n = u.rows();
    let mut have: Vec<Vec<f64>> = (0..n)
        .filter(|&j| sigma[j] > rank_tol)
        .map(|j| u.col(j))
        .collect();
    let missing: Vec<usize> = (0..n).filter(|&j| sigma[j] <= rank_tol).collect();
    if missing.is_empty() {
        return;
    }
    let mut fill = missing.into_iter();
    for basis in 0..n {
        if have.len() == n {
            break;
        }
        let mut cand = vec![0.0; n];
        cand[basis] = 1.0;
        for h in &have {
            let proj: f64 = cand.iter().zip(h).map(|(a, b)| a * b).sum();
            for (c, hv) in cand.iter_mut().zip(h) {
                *c -= proj * hv;
            }
        }
        let norm: f64 = cand.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.5 {
            let j = fill.next().expect("more accepted columns than slots");
            for (i, c) in cand.iter().enumerate() {
                u[(i, j)] = c / norm;
            }
            have.push(cand.iter().map(|c| c / norm).collect());
        }
    }
    // sign convention is applied by the caller; fix_column_signs is kept for
    // callers that use the completion standalone
    let _ = fix_column_signs;
}
