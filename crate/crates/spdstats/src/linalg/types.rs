//! Domain matrix types: symmetric, positive semi-definite, factors,
//! triangular factors and spectral decompositions.

use crate::error::{Error, Result};
use crate::linalg::eigen::sym_eigen;
use crate::linalg::mat::Mat;

/// Relative band below which an eigenvalue counts as zero: 1e-10 scaled by
/// the largest eigenvalue magnitude with a floor of one. Scale-relative so
/// both O(1) and near-deficient (λ ~ 1e-3) regimes behave.
pub fn psd_tolerance(max_abs_eigenvalue: f64) -> f64 {
    1e-10 * max_abs_eigenvalue.abs().max(1.0)
}

/// Relative tolerance for orthogonality checks (UᵀU = I).
pub const TOL_ORTHO: f64 = 1e-9;
/// Relative tolerance for reconstruction checks (round trips, factors).
pub const TOL_RECON: f64 = 1e-9;

/// Dense symmetric matrix; exactly symmetric by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat {
    m: Mat,
}

impl SymMat {
    /// Build from a full row-major k×k slice. The input is symmetrized as
    /// (A + Aᵀ)/2, so `get(i, j) == get(j, i)` holds exactly afterwards.
    pub fn new(dim: usize, entries: &[f64]) -> Result<SymMat> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("non-finite entry".into()));
        }
        Ok(SymMat {
            m: Mat::from_rows(dim, dim, entries).symmetrize(),
        })
    }

    /// Symmetrize an arbitrary square matrix.
    pub fn from_mat(m: &Mat) -> Result<SymMat> {
        if !m.is_square() {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        if !m.is_finite() {
            return Err(Error::InvalidInput("non-finite entry".into()));
        }
        Ok(SymMat { m: m.symmetrize() })
    }

    pub fn zero(dim: usize) -> SymMat {
        SymMat {
            m: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> SymMat {
        SymMat {
            m: Mat::identity(dim),
        }
    }

    pub fn diag(entries: &[f64]) -> SymMat {
        SymMat {
            m: Mat::diag(entries),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn mat(&self) -> &Mat {
        &self.m
    }

    pub fn scale(&self, factor: f64) -> SymMat {
        SymMat {
            m: self.m.scale(factor),
        }
    }

    /// self + factor · other, staying exactly symmetric.
    pub fn add_scaled(&self, factor: f64, other: &SymMat) -> SymMat {
        SymMat {
            m: self.m.add_scaled(factor, &other.m),
        }
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }
}

/// Spectral decomposition U diag(λ) Uᵀ, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    /// Orthogonal matrix of eigenvectors (columns).
    pub u: Mat,
    /// Eigenvalues, sorted descending.
    pub lambda: Vec<f64>,
}

impl EigenDecomp {
    /// U diag(f(λ)) Uᵀ as an exactly symmetric matrix.
    pub fn recombine(&self, f: impl Fn(f64) -> f64) -> SymMat {
        let n = self.lambda.len();
        let mut out = Mat::zeros(n, n);
        for (l, &lam) in self.lambda.iter().enumerate() {
            let fl = f(lam);
            if fl == 0.0 {
                continue;
            }
            for i in 0..n {
                let uif = self.u[(i, l)] * fl;
                for j in 0..=i {
                    out[(i, j)] += uif * self.u[(j, l)];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[(j, i)] = out[(i, j)];
            }
        }
        SymMat { m: out }
    }
}

/// Symmetric matrix certified positive semi-definite, with cached spectrum.
#[derive(Clone, Debug)]
pub struct SpdMat {
    sym: SymMat,
    eigen: EigenDecomp,
    tol: f64,
    rank: usize,
}

impl SpdMat {
    /// Certify a symmetric matrix as PSD. Fails with the offending
    /// eigenvalue when the minimum eigenvalue is below −tolerance.
    pub fn new(sym: SymMat) -> Result<SpdMat> {
        let eigen = sym_eigen(&sym)?;
        Self::from_parts(sym, eigen)
    }

    /// Construct from entries, symmetrizing first.
    pub fn from_entries(dim: usize, entries: &[f64]) -> Result<SpdMat> {
        SpdMat::new(SymMat::new(dim, entries)?)
    }

    pub fn diag(entries: &[f64]) -> Result<SpdMat> {
        SpdMat::new(SymMat::diag(entries))
    }

    pub fn identity(dim: usize) -> SpdMat {
        SpdMat::new(SymMat::identity(dim)).expect("identity is PSD")
    }

    fn from_parts(sym: SymMat, eigen: EigenDecomp) -> Result<SpdMat> {
        let max_abs = eigen
            .lambda
            .iter()
            .fold(0.0_f64, |acc, &l| acc.max(l.abs()));
        let tol = psd_tolerance(max_abs);
        let min = *eigen.lambda.last().expect("dim >= 1");
        if min < -tol {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        let rank = eigen.lambda.iter().filter(|&&l| l > tol).count();
        Ok(SpdMat {
            sym,
            eigen,
            tol,
            rank,
        })
    }

    /// Rebuild from a known spectrum (monotone spectral maps keep the sort
    /// order and sign convention valid, so the Jacobi pass can be skipped).
    pub(crate) fn from_eigen(u: Mat, lambda: Vec<f64>) -> Result<SpdMat> {
        debug_assert!(lambda.windows(2).all(|w| w[0] >= w[1]));
        let eigen = EigenDecomp { u, lambda };
        let sym = eigen.recombine(|l| l);
        Self::from_parts(sym, eigen)
    }

    pub fn dim(&self) -> usize {
        self.sym.dim()
    }

    pub fn sym(&self) -> &SymMat {
        &self.sym
    }

    pub fn mat(&self) -> &Mat {
        self.sym.mat()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sym.get(i, j)
    }

    pub fn eigen(&self) -> &EigenDecomp {
        &self.eigen
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.lambda
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigen.lambda.last().expect("dim >= 1")
    }

    /// Count of eigenvalues above the PSD tolerance band.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn psd_tol(&self) -> f64 {
        self.tol
    }

    /// True when every eigenvalue clears the tolerance band.
    pub fn is_strictly_pd(&self) -> bool {
        self.rank == self.dim()
    }

    pub fn trace(&self) -> f64 {
        self.sym.trace()
    }

    pub fn det(&self) -> f64 {
        self.eigen.lambda.iter().product()
    }
}

/// General square factor L of S = L·Lᵀ; the working representative ("icon")
/// of the equivalence class {L·R : R ∈ O(k)}.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorMat {
    m: Mat,
}

impl FactorMat {
    pub fn new(m: Mat) -> Result<FactorMat> {
        if !m.is_square() {
            return Err(Error::InvalidInput("factor must be square".into()));
        }
        if !m.is_finite() {
            return Err(Error::InvalidInput("non-finite entry".into()));
        }
        Ok(FactorMat { m })
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn mat(&self) -> &Mat {
        &self.m
    }

    /// ‖L‖ = √trace(S): the size of the factor.
    pub fn norm(&self) -> f64 {
        self.m.frob()
    }

    /// The PSD matrix L·Lᵀ represented by this factor.
    pub fn spd(&self) -> Result<SpdMat> {
        SpdMat::new(SymMat::from_mat(&self.m.matmul(&self.m.transpose()))?)
    }
}

impl From<LowerTri> for FactorMat {
    fn from(l: LowerTri) -> FactorMat {
        FactorMat { m: l.m }
    }
}

/// Lower-triangular matrix with nonnegative diagonal (Cholesky factor).
#[derive(Clone, Debug, PartialEq)]
pub struct LowerTri {
    m: Mat,
}

impl LowerTri {
    pub(crate) fn from_mat_unchecked(m: Mat) -> LowerTri {
        debug_assert!(m.is_square());
        LowerTri { m }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn mat(&self) -> &Mat {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmat_symmetrizes() {
        let s = SymMat::new(2, &[1.0, 2.0, 4.0, 3.0]).unwrap();
        assert_eq!(s.get(0, 1), 3.0);
        assert_eq!(s.get(1, 0), 3.0);
    }

    #[test]
    fn symmat_rejects_bad_input() {
        assert!(SymMat::new(0, &[]).is_err());
        assert!(SymMat::new(2, &[1.0, 2.0]).is_err());
        assert!(SymMat::new(1, &[f64::INFINITY]).is_err());
    }

    #[test]
    fn spd_accepts_psd_and_counts_rank() {
        let s = SpdMat::diag(&[4.0, 1.0, 0.0]).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(!s.is_strictly_pd());
        let s = SpdMat::diag(&[4.0, 1.0, 0.5]).unwrap();
        assert_eq!(s.rank(), 3);
        assert!(s.is_strictly_pd());
    }

    #[test]
    fn spd_rejects_indefinite() {
        let err = SpdMat::diag(&[1.0, -0.5]).unwrap_err();
        match err {
            Error::NotPositiveSemidefinite(l) => assert!((l + 0.5).abs() < 1e-12),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn spd_tolerates_roundoff_negatives() {
        let s = SpdMat::diag(&[1.0, -1e-12]).unwrap();
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn factor_reproduces_spd() {
        let f = FactorMat::new(Mat::from_rows(2, 2, &[2.0, 0.0, 1.0, 1.0])).unwrap();
        let s = f.spd().unwrap();
        assert_eq!(s.get(0, 0), 4.0);
        assert_eq!(s.get(0, 1), 2.0);
        assert_eq!(s.get(1, 1), 2.0);
    }
}
