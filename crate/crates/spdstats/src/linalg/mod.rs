//! Small dense symmetric linear algebra: the kernel behind every metric,
//! mean and decomposition in this crate. Cyclic Jacobi handles the
//! eigenproblem (matrices here are k ≤ 32, dominantly 3×3), a one-sided
//! Jacobi the SVD; no external linear algebra dependency.

mod eigen;
mod funcs;
mod mat;
mod svd;
mod types;

pub use eigen::sym_eigen;
pub use funcs::{
    cholesky, cholesky_permissive, expm_general, frobenius_norm, helmert_submatrix,
    logm_lower_triangular, mat_exp, mat_inv_sqrt, mat_log, mat_pow, mat_sqrt,
};
pub use mat::Mat;
pub use svd::{svd, Svd};
pub use types::{
    psd_tolerance, EigenDecomp, FactorMat, LowerTri, SpdMat, SymMat, TOL_ORTHO, TOL_RECON,
};
