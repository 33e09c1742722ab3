//! Spectral matrix functions, Cholesky factorization and small helpers.

use crate::error::{Error, Result};
use crate::linalg::eigen::sym_eigen;
use crate::linalg::mat::Mat;
use crate::linalg::types::{LowerTri, SpdMat, SymMat};

/// exp(λ) overflows f64 past this point.
const EXP_OVERFLOW: f64 = 709.78;

/// Matrix logarithm U (log Λ) Uᵀ of a strictly positive definite matrix.
pub fn mat_log(s: &SpdMat) -> Result<SymMat> {
    if !s.is_strictly_pd() {
        return Err(Error::NotPositiveDefinite(format!(
            "log requires all eigenvalues above {:e}, smallest is {:e}",
            s.psd_tol(),
            s.min_eigenvalue()
        )));
    }
    Ok(s.eigen().recombine(f64::ln))
}

/// Matrix exponential U (exp Λ) Uᵀ of a symmetric matrix; strictly positive
/// definite by construction.
pub fn mat_exp(y: &SymMat) -> Result<SpdMat> {
    let eigen = sym_eigen(y)?;
    if let Some(&l) = eigen.lambda.first() {
        if l > EXP_OVERFLOW {
            return Err(Error::Overflow(l));
        }
    }
    // exp is increasing, so the sorted order and sign convention carry over
    let lambda = eigen.lambda.iter().map(|&l| l.exp()).collect();
    SpdMat::from_eigen(eigen.u, lambda)
}

/// Matrix power S^α = U Λ^α Uᵀ.
///
/// Positive integer powers and α = 1/2 are defined on any PSD input
/// (0^α = 0). Negative powers need a nonzero spectrum and other fractional
/// powers a strictly positive one.
pub fn mat_pow(s: &SpdMat, alpha: f64) -> Result<SpdMat> {
    if !alpha.is_finite() || alpha == 0.0 {
        return Err(Error::InvalidInput(format!(
            "power exponent must be finite and nonzero, got {alpha}"
        )));
    }
    let tol = s.psd_tol();
    let integer = alpha.fract() == 0.0;
    let needs_nonzero = alpha < 0.0;
    let needs_strict = !integer && alpha != 0.5;
    if (needs_nonzero || needs_strict) && !s.is_strictly_pd() {
        if needs_nonzero {
            return Err(Error::SingularMatrix(format!(
                "negative power {alpha} of a rank-{} matrix",
                s.rank()
            )));
        }
        return Err(Error::NotPositiveDefinite(format!(
            "fractional power {alpha} requires a strictly positive spectrum"
        )));
    }
    let mut lambda: Vec<f64> = s
        .eigenvalues()
        .iter()
        .map(|&l| {
            let clamped = if l <= tol { 0.0 } else { l };
            if clamped == 0.0 {
                0.0
            } else {
                clamped.powf(alpha)
            }
        })
        .collect();
    let mut u = s.eigen().u.clone();
    if alpha < 0.0 {
        // decreasing map: reverse to restore the descending order
        lambda.reverse();
        let n = s.dim();
        let mut rev = Mat::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                rev[(i, j)] = u[(i, n - 1 - j)];
            }
        }
        u = rev;
    }
    SpdMat::from_eigen(u, lambda)
}

/// Matrix square root S^{1/2} = U Λ^{1/2} Uᵀ of a PSD matrix.
pub fn mat_sqrt(s: &SpdMat) -> Result<SpdMat> {
    let tol = s.psd_tol();
    let lambda = s
        .eigenvalues()
        .iter()
        .map(|&l| if l <= tol { 0.0 } else { l.sqrt() })
        .collect();
    SpdMat::from_eigen(s.eigen().u.clone(), lambda)
}

/// S^{-1/2}, requiring a strictly positive spectrum.
pub fn mat_inv_sqrt(s: &SpdMat) -> Result<SpdMat> {
    mat_pow(s, -0.5)
}

fn chol_raw(m: &Mat, pivot_floor: f64) -> Option<Mat> {
    let n = m.rows();
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= pivot_floor {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / ljj;
        }
    }
    Some(l)
}

/// Cholesky factor L with L·Lᵀ = S and positive diagonal; strict mode, so
/// semi-definite input is rejected.
pub fn cholesky(s: &SpdMat) -> Result<LowerTri> {
    if !s.is_strictly_pd() {
        return Err(Error::NotPositiveDefinite(format!(
            "Cholesky requires a strictly positive spectrum, smallest eigenvalue {:e}",
            s.min_eigenvalue()
        )));
    }
    match chol_raw(s.mat(), 0.0) {
        Some(l) => Ok(LowerTri::from_mat_unchecked(l)),
        None => Err(Error::NotPositiveDefinite(
            "pivot breakdown during factorization".into(),
        )),
    }
}

/// Cholesky that survives semi-definite input by adding diagonal jitter of
/// one tolerance band. The flag reports whether jitter was applied; flagged
/// factors are unreliable near rank deficiency.
pub fn cholesky_permissive(s: &SpdMat) -> Result<(LowerTri, bool)> {
    if s.is_strictly_pd() {
        if let Some(l) = chol_raw(s.mat(), 0.0) {
            return Ok((LowerTri::from_mat_unchecked(l), false));
        }
    }
    let tol = s.psd_tol();
    for boost in [1.0, 10.0] {
        let jittered = s.mat().add_scaled(boost * tol, &Mat::identity(s.dim()));
        if let Some(l) = chol_raw(&jittered, 0.0) {
            return Ok((LowerTri::from_mat_unchecked(l), true));
        }
    }
    Err(Error::NotPositiveDefinite(
        "factorization failed even with diagonal jitter".into(),
    ))
}

/// The k×(k+1) Helmert sub-matrix: row j is (h_j, …, h_j, −j·h_j, 0, …, 0)
/// with h_j = −{j(j+1)}^{−1/2}. Rows are orthonormal and sum to zero.
pub fn helmert_submatrix(k: usize) -> Mat {
    assert!(k >= 1, "Helmert sub-matrix needs k >= 1");
    let mut h = Mat::zeros(k, k + 1);
    for j in 1..=k {
        let hj = -1.0 / ((j * (j + 1)) as f64).sqrt();
        for c in 0..j {
            h[(j - 1, c)] = hj;
        }
        h[(j - 1, j)] = -(j as f64) * hj;
    }
    h
}

/// √trace(XᵀX).
pub fn frobenius_norm(x: &Mat) -> f64 {
    x.frob()
}

/// Matrix exponential of a general square matrix by scaling-and-squaring
/// with a Taylor series. Used by the log-Gaussian sampling model, where the
/// perturbed logarithm is not symmetric.
pub fn expm_general(a: &Mat) -> Mat {
    assert!(a.is_square());
    let n = a.rows();
    let norm = a.frob();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let t = a.scale(0.5_f64.powi(squarings as i32));
    let mut sum = Mat::identity(n);
    let mut term = Mat::identity(n);
    for k in 1..=40u32 {
        term = term.matmul(&t).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.frob() <= 1e-18 * sum.frob() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

/// Logarithm of a lower-triangular matrix with positive diagonal, via its
/// eigendecomposition. Diagonal input short-circuits; repeated diagonal
/// entries on a non-diagonal matrix are rejected as non-diagonalizable.
pub fn logm_lower_triangular(l: &LowerTri) -> Result<Mat> {
    let n = l.dim();
    let m = l.mat();
    let mut max_diag = 0.0_f64;
    for i in 0..n {
        let d = m[(i, i)];
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!(
                "triangular log needs a positive diagonal, entry {i} is {d}"
            )));
        }
        max_diag = max_diag.max(d);
    }
    let strictly_diagonal = (0..n).all(|i| (0..i).all(|j| m[(i, j)] == 0.0));
    if strictly_diagonal {
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = m[(i, i)].ln();
        }
        return Ok(out);
    }
    for i in 0..n {
        for j in 0..i {
            if (m[(i, i)] - m[(j, j)]).abs() <= 1e-12 * max_diag {
                return Err(Error::NotDiagonalizable);
            }
        }
    }
    // eigenvectors by forward substitution: unit lower-triangular P
    let mut p = Mat::identity(n);
    for j in 0..n {
        let d = m[(j, j)];
        for i in (j + 1)..n {
            let mut acc = 0.0;
            for k in j..i {
                acc += m[(i, k)] * p[(k, j)];
            }
            p[(i, j)] = acc / (d - m[(i, i)]);
        }
    }
    // invert the unit lower-triangular P by forward substitution
    let mut pinv = Mat::identity(n);
    for col in 0..n {
        for i in 0..n {
            let mut v = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                v -= p[(i, k)] * pinv[(k, col)];
            }
            pinv[(i, col)] = v;
        }
    }
    let mut logd = Mat::zeros(n, n);
    for i in 0..n {
        logd[(i, i)] = m[(i, i)].ln();
    }
    Ok(p.matmul(&logd).matmul(&pinv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotated_diag2(theta: f64, a: f64, b: f64) -> SpdMat {
        let (c, s) = (theta.cos(), theta.sin());
        let r = Mat::from_rows(2, 2, &[c, -s, s, c]);
        let d = Mat::diag(&[a, b]);
        SpdMat::new(SymMat::from_mat(&r.matmul(&d).matmul(&r.transpose())).unwrap()).unwrap()
    }

    #[test]
    fn log_of_identity_is_zero() {
        let s = SpdMat::identity(3);
        let l = mat_log(&s).unwrap();
        assert!(l.mat().frob() < 1e-14);
    }

    #[test]
    fn log_of_diagonal() {
        let e2 = (2.0_f64).exp();
        let e1 = (1.0_f64).exp();
        let s = SpdMat::diag(&[e2, e1]).unwrap();
        let l = mat_log(&s).unwrap();
        assert!((l.get(0, 0) - 2.0).abs() < 1e-12);
        assert!((l.get(1, 1) - 1.0).abs() < 1e-12);
        assert!(l.get(0, 1).abs() < 1e-14);
    }

    #[test]
    fn log_rejects_semidefinite() {
        let s = SpdMat::diag(&[1.0, 0.0]).unwrap();
        assert!(matches!(mat_log(&s), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = mat_exp(&SymMat::zero(3)).unwrap();
        assert!((e.mat() - &Mat::identity(3)).frob() < 1e-14);
    }

    #[test]
    fn exp_of_diagonal() {
        let y = SymMat::diag(&[1.0, -1.0]);
        let e = mat_exp(&y).unwrap();
        assert!((e.get(0, 0) - 1.0_f64.exp()).abs() < 1e-12);
        assert!((e.get(1, 1) - (-1.0_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn exp_overflow_detected() {
        let y = SymMat::diag(&[1000.0, 0.0]);
        assert!(matches!(mat_exp(&y), Err(Error::Overflow(_))));
    }

    #[test]
    fn exp_log_round_trip() {
        let s = rotated_diag2(30.0_f64.to_radians(), 4.0, 1.0);
        let back = mat_exp(&mat_log(&s).unwrap()).unwrap();
        assert!((back.mat() - s.mat()).frob() < 1e-12);
    }

    #[test]
    fn pow_identity_and_sqrt_cases() {
        let s = rotated_diag2(0.7, 3.0, 0.5);
        let p1 = mat_pow(&s, 1.0).unwrap();
        assert!((p1.mat() - s.mat()).frob() < 1e-12);

        let d = SpdMat::diag(&[4.0, 9.0]).unwrap();
        let h = mat_pow(&d, 0.5).unwrap();
        assert!((h.get(0, 0) - 2.0).abs() < 1e-12);
        assert!((h.get(1, 1) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pow_round_trip() {
        let s = rotated_diag2(1.1, 2.5, 0.4);
        let sq = mat_pow(&s, 2.0).unwrap();
        let back = mat_pow(&sq, 0.5).unwrap();
        assert!((back.mat() - s.mat()).frob() < 1e-11);
    }

    #[test]
    fn pow_addition_law() {
        let s = rotated_diag2(0.3, 5.0, 1.7);
        let a = mat_pow(&s, 0.5).unwrap();
        let b = mat_pow(&s, 1.5).unwrap();
        let prod = a.mat().matmul(b.mat());
        let direct = mat_pow(&s, 2.0).unwrap();
        assert!((&prod - direct.mat()).frob() < 1e-11);
    }

    #[test]
    fn negative_power_needs_nonzero_spectrum() {
        let s = SpdMat::diag(&[1.0, 0.0]).unwrap();
        assert!(matches!(mat_pow(&s, -1.0), Err(Error::SingularMatrix(_))));
        let s = SpdMat::diag(&[4.0, 1.0]).unwrap();
        let inv = mat_pow(&s, -1.0).unwrap();
        assert!((inv.get(0, 0) - 0.25).abs() < 1e-14);
        assert!((inv.get(1, 1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_of_rank_deficient() {
        let s = SpdMat::diag(&[4.0, 0.0]).unwrap();
        let h = mat_sqrt(&s).unwrap();
        assert!((h.get(0, 0) - 2.0).abs() < 1e-14);
        assert!(h.get(1, 1).abs() < 1e-14);
    }

    #[test]
    fn sqrt_squares_back() {
        let s = rotated_diag2(0.9, 6.0, 2.0);
        let h = mat_sqrt(&s).unwrap();
        let sq = h.mat().matmul(h.mat());
        assert!((&sq - s.mat()).frob() < 1e-12);
    }

    #[test]
    fn cholesky_hand_checked() {
        let s = SpdMat::from_entries(2, &[4.0, 2.0, 2.0, 2.0]).unwrap();
        let l = cholesky(&s).unwrap();
        assert!((l.get(0, 0) - 2.0).abs() < 1e-14);
        assert!((l.get(1, 0) - 1.0).abs() < 1e-14);
        assert!((l.get(1, 1) - 1.0).abs() < 1e-14);
        assert_eq!(l.get(0, 1), 0.0);
        let back = l.mat().matmul(&l.mat().transpose());
        assert!((&back - s.mat()).frob() < 1e-14);
    }

    #[test]
    fn cholesky_identity() {
        let l = cholesky(&SpdMat::identity(3)).unwrap();
        assert!((l.mat() - &Mat::identity(3)).frob() < 1e-15);
    }

    #[test]
    fn cholesky_strict_rejects_deficient() {
        let s = SpdMat::diag(&[1.0, 0.0]).unwrap();
        assert!(matches!(cholesky(&s), Err(Error::NotPositiveDefinite(_))));
        let (l, degraded) = cholesky_permissive(&s).unwrap();
        assert!(degraded);
        let back = l.mat().matmul(&l.mat().transpose());
        assert!((&back - s.mat()).frob() < 1e-8);
    }

    #[test]
    fn helmert_rows_orthonormal_and_zero_sum() {
        for k in 1..=10 {
            let h = helmert_submatrix(k);
            let hht = h.matmul(&h.transpose());
            assert!((&hht - &Mat::identity(k)).frob() < 1e-12, "k={k}");
            for i in 0..k {
                let row_sum: f64 = (0..=k).map(|j| h[(i, j)]).sum();
                assert!(row_sum.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn helmert_first_row_matches_formula() {
        let h = helmert_submatrix(1);
        assert!((h[(0, 0)] + 1.0 / 2.0_f64.sqrt()).abs() < 1e-15);
        assert!((h[(0, 1)] - 1.0 / 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn expm_general_matches_symmetric_case() {
        let y = SymMat::new(2, &[0.3, 0.1, 0.1, -0.4]).unwrap();
        let a = expm_general(y.mat());
        let b = mat_exp(&y).unwrap();
        assert!((&a - b.mat()).frob() < 1e-13);
    }

    #[test]
    fn triangular_log_round_trip() {
        let s = SpdMat::from_entries(3, &[4.0, 2.0, 0.5, 2.0, 3.0, 0.2, 0.5, 0.2, 1.0]).unwrap();
        let l = cholesky(&s).unwrap();
        let y = logm_lower_triangular(&l).unwrap();
        let back = expm_general(&y);
        assert!((&back - l.mat()).frob() < 1e-11);
    }

    #[test]
    fn triangular_log_diagonal_fast_path() {
        let l = cholesky(&SpdMat::diag(&[4.0, 4.0, 1.0]).unwrap()).unwrap();
        let y = logm_lower_triangular(&l).unwrap();
        assert!((y[(0, 0)] - 2.0_f64.ln()).abs() < 1e-14);
        assert!((y[(1, 1)] - 2.0_f64.ln()).abs() < 1e-14);
        assert!(y[(2, 2)].abs() < 1e-14);
    }

    #[test]
    fn triangular_log_rejects_repeated_nondiagonal() {
        let m = Mat::from_rows(2, 2, &[1.0, 0.0, 0.5, 1.0]);
        let l = LowerTri::from_mat_unchecked(m);
        assert!(matches!(
            logm_lower_triangular(&l),
            Err(Error::NotDiagonalizable)
        ));
    }
}
