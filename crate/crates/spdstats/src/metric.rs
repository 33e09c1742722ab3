//! Distances between PSD matrices and the Procrustes rotation solver.
//!
//! All eight metrics dispatch through [`dist`]. Factors entering the
//! Procrustes metrics use the Cholesky icon, but the distances themselves
//! are icon-independent: any L with L·Lᵀ = S gives the same value.

use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, cholesky_permissive, mat_inv_sqrt, mat_log, mat_pow, mat_sqrt, svd, FactorMat, Mat,
    SpdMat, SymMat,
};

/// The metric family. `PowerEuclidean(1)` coincides with `Euclidean` and
/// `PowerEuclidean(1/2)` is twice `RootEuclidean`; as α → 0 the power metric
/// approaches the log-Euclidean one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricKind {
    Euclidean,
    LogEuclidean,
    Riemannian,
    Cholesky,
    RootEuclidean,
    ProcrustesSS,
    FullProcrustes,
    PowerEuclidean(f64),
}

impl MetricKind {
    /// Metrics that reject rank-deficient input.
    pub fn requires_strict_pd(&self) -> bool {
        match self {
            MetricKind::LogEuclidean | MetricKind::Riemannian | MetricKind::FullProcrustes => true,
            MetricKind::PowerEuclidean(a) => *a < 0.0 || (a.fract() != 0.0 && *a != 0.5),
            _ => false,
        }
    }

    pub fn name(&self) -> String {
        match self {
            MetricKind::Euclidean => "euclidean".into(),
            MetricKind::LogEuclidean => "logeuclidean".into(),
            MetricKind::Riemannian => "riemannian".into(),
            MetricKind::Cholesky => "cholesky".into(),
            MetricKind::RootEuclidean => "rooteuclidean".into(),
            MetricKind::ProcrustesSS => "procrustes".into(),
            MetricKind::FullProcrustes => "fullprocrustes".into(),
            MetricKind::PowerEuclidean(a) => format!("power({a})"),
        }
    }

    fn validate(&self) -> Result<()> {
        if let MetricKind::PowerEuclidean(a) = self {
            if !a.is_finite() || *a == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "power metric exponent must be finite and nonzero, got {a}"
                )));
            }
        }
        Ok(())
    }
}

/// Result of matching one factor to another over O(k) (and optionally
/// scale). The group includes reflections, so det(R̂) may be ±1.
#[derive(Clone, Debug)]
pub struct ProcrustesFit {
    /// Optimal orthogonal matrix R̂.
    pub rotation: Mat,
    /// Optimal scale β̂; 1 when scaling is disabled.
    pub scale: f64,
    /// Minimized residual norm.
    pub residual: f64,
}

/// Orthogonal Procrustes match of `l2` onto `l1`: R̂ minimizing ‖L₁ − L₂R‖
/// over O(k). With L₁ᵀL₂ = W diag(σ) Uᵀ the solution is R̂ = U Wᵀ and the
/// residual satisfies residual² = ‖L₁‖² + ‖L₂‖² − 2Σσᵢ.
pub fn procrustes_rotation(l1: &FactorMat, l2: &FactorMat) -> Result<ProcrustesFit> {
    if l1.dim() != l2.dim() {
        return Err(Error::DimMismatch(l1.dim(), l2.dim()));
    }
    let cross = l1.mat().transpose().matmul(l2.mat());
    let dec = svd(&cross)?;
    let rotation = dec.v.matmul(&dec.u.transpose());
    // evaluating the match directly avoids the cancellation the
    // ‖L₁‖² + ‖L₂‖² − 2Σσ identity suffers near zero
    let residual = (l1.mat() - &l2.mat().matmul(&rotation)).frob();
    Ok(ProcrustesFit {
        rotation,
        scale: 1.0,
        residual,
    })
}

/// Procrustes match of `l2` onto `l1` with an extra scale: minimizes
/// ‖L₁ − βL₂R‖ over R ∈ O(k), β > 0. The optimal scale is Σσᵢ / ‖L₂‖².
pub fn procrustes_fit_scaled(l1: &FactorMat, l2: &FactorMat) -> Result<ProcrustesFit> {
    if l1.dim() != l2.dim() {
        return Err(Error::DimMismatch(l1.dim(), l2.dim()));
    }
    let l2_sq = l2.mat().frob().powi(2);
    if l2_sq <= 0.0 {
        return Err(Error::DegenerateInput(
            "cannot scale-match a zero factor".into(),
        ));
    }
    let cross = l1.mat().transpose().matmul(l2.mat());
    let dec = svd(&cross)?;
    let sigma_sum: f64 = dec.sigma.iter().sum();
    let scale = sigma_sum / l2_sq;
    if scale <= 0.0 {
        return Err(Error::DegenerateInput(
            "optimal Procrustes scale is not positive".into(),
        ));
    }
    let rotation = dec.v.matmul(&dec.u.transpose());
    let residual = (l1.mat() - &l2.mat().matmul(&rotation).scale(scale)).frob();
    Ok(ProcrustesFit {
        rotation,
        scale,
        residual,
    })
}

/// The Cholesky icon of S, surviving rank deficiency via jitter.
pub fn factor_icon(s: &SpdMat) -> Result<FactorMat> {
    let (l, _) = cholesky_permissive(s)?;
    Ok(FactorMat::from(l))
}

fn ensure_strict(kind: MetricKind, s: &SpdMat) -> Result<()> {
    if kind.requires_strict_pd() && !s.is_strictly_pd() {
        return Err(Error::NotPositiveDefinite(format!(
            "{} distance is not defined for rank-deficient matrices (rank {} of {})",
            kind.name(),
            s.rank(),
            s.dim()
        )));
    }
    Ok(())
}

/// Distance between two PSD matrices under the chosen metric.
pub fn dist(kind: MetricKind, s1: &SpdMat, s2: &SpdMat) -> Result<f64> {
    kind.validate()?;
    if s1.dim() != s2.dim() {
        return Err(Error::DimMismatch(s1.dim(), s2.dim()));
    }
    ensure_strict(kind, s1)?;
    ensure_strict(kind, s2)?;
    match kind {
        MetricKind::Euclidean => Ok((s1.mat() - s2.mat()).frob()),
        MetricKind::LogEuclidean => {
            let a = mat_log(s1)?;
            let b = mat_log(s2)?;
            Ok((a.mat() - b.mat()).frob())
        }
        MetricKind::Riemannian => {
            let w = mat_inv_sqrt(s1)?;
            let inner = SymMat::from_mat(&w.mat().matmul(s2.mat()).matmul(w.mat()))?;
            let inner = SpdMat::new(inner)?;
            Ok(mat_log(&inner)?.mat().frob())
        }
        MetricKind::Cholesky => {
            let (a, _) = cholesky_permissive(s1)?;
            let (b, _) = cholesky_permissive(s2)?;
            Ok((a.mat() - b.mat()).frob())
        }
        MetricKind::RootEuclidean => {
            let a = mat_sqrt(s1)?;
            let b = mat_sqrt(s2)?;
            Ok((a.mat() - b.mat()).frob())
        }
        MetricKind::ProcrustesSS => {
            let l1 = factor_icon(s1)?;
            let l2 = factor_icon(s2)?;
            Ok(procrustes_rotation(&l1, &l2)?.residual)
        }
        MetricKind::FullProcrustes => {
            let l1 = FactorMat::from(cholesky(s1)?);
            let l2 = FactorMat::from(cholesky(s2)?);
            let cross = l1.mat().transpose().matmul(l2.mat());
            let sigma_sum: f64 = svd(&cross)?.sigma.iter().sum();
            let d_sq = 1.0 - (sigma_sum * sigma_sum) / (s1.trace() * s2.trace());
            Ok(d_sq.max(0.0).sqrt())
        }
        MetricKind::PowerEuclidean(alpha) => {
            let a = mat_pow(s1, alpha)?;
            let b = mat_pow(s2, alpha)?;
            // |1/α| keeps the prefactor positive for negative exponents
            Ok((a.mat() - b.mat()).frob() / alpha.abs())
        }
    }
}
