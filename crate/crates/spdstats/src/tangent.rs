//! Procrustes tangent coordinates and tangent-space principal components.
//!
//! Samples are registered to a pole factor Δ̂ (normally the GPA mean); the
//! deviations Vᵢ = Δ̂ − LᵢR̂ᵢ live in the tangent space at the pole, where
//! ordinary PCA applies. Loadings come from the second-moment matrix
//! S_v = (1/n) Σ vec(Vᵢ) vec(Vᵢ)ᵀ — the population divisor 1/n and no extra
//! centering, since the Vᵢ are already deviations from the pole.

use crate::error::{Error, Result};
use crate::linalg::{psd_tolerance, sym_eigen, FactorMat, Mat, SpdMat, SymMat};
use crate::mean::{gpa, MeanConfig};
use crate::metric::{factor_icon, procrustes_rotation};

/// Tangent coordinates of one sample at a pole.
#[derive(Clone, Debug)]
pub struct TangentSample {
    /// Vᵢ = Δ̂ − LᵢR̂ᵢ.
    pub coords: Mat,
    pub source_index: usize,
}

/// Tangent-space PCA model: pole factor, loadings γ̂ⱼ (unit vectors of
/// length k²), variances λ̂ⱼ (descending) and per-sample scores.
#[derive(Clone, Debug)]
pub struct PcaModel {
    pub pole: FactorMat,
    pub loadings: Vec<Vec<f64>>,
    pub variances: Vec<f64>,
    pub scores: Vec<Vec<f64>>,
}

impl PcaModel {
    /// Number of retained components.
    pub fn p(&self) -> usize {
        self.variances.len()
    }

    pub fn dim(&self) -> usize {
        self.pole.dim()
    }

    /// Fraction of total tangent variance captured by component `j`
    /// (1-based).
    pub fn variance_fraction(&self, j: usize) -> Option<f64> {
        let total: f64 = self.variances.iter().sum();
        self.variances.get(j.checked_sub(1)?).map(|v| v / total)
    }
}

/// Column-major stacking of a k×k matrix into a length-k² vector.
pub fn vec_mat(m: &Mat) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut out = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        for i in 0..rows {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec_mat`]: rebuild the k×k matrix from its column-major
/// stacking.
pub fn unvec_mat(k: usize, v: &[f64]) -> Mat {
    assert_eq!(v.len(), k * k, "vector length must be k²");
    let mut m = Mat::zeros(k, k);
    for j in 0..k {
        for i in 0..k {
            m[(i, j)] = v[j * k + i];
        }
    }
    m
}

/// Tangent coordinates Vᵢ = Δ̂ − LᵢR̂ᵢ of each sample at the pole, with Lᵢ
/// the Cholesky icon of Sᵢ and R̂ᵢ its Procrustes match onto the pole.
pub fn tangent_coords(pole: &FactorMat, samples: &[SpdMat]) -> Result<Vec<TangentSample>> {
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.dim() != pole.dim() {
                return Err(Error::DimMismatch(pole.dim(), s.dim()));
            }
            let icon = factor_icon(s)?;
            let fit = procrustes_rotation(pole, &icon)?;
            let registered = icon.mat().matmul(&fit.rotation);
            Ok(TangentSample {
                coords: pole.mat() - &registered,
                source_index: i,
            })
        })
        .collect()
}

/// ‖Lᵀ·T − Tᵀ·L‖: zero exactly when T is a horizontal tangent direction at
/// the pole L, i.e. orthogonal to the rotation orbit {L·A : A antisymmetric}
/// of the right O(k) action. The Procrustes tangent L₂R̂ − L₁ is horizontal
/// at L₁.
pub fn horizontal_residual(pole: &FactorMat, t: &Mat) -> Result<f64> {
    if t.rows() != pole.dim() || t.cols() != pole.dim() {
        return Err(Error::DimMismatch(pole.dim(), t.rows()));
    }
    let a = pole.mat().transpose().matmul(t);
    Ok((&a - &a.transpose()).frob())
}

/// Fit a tangent-space PCA: GPA mean pole, tangent coordinates, spectral
/// decomposition of their second-moment matrix, scores.
pub fn fit_pca(samples: &[SpdMat], config: &MeanConfig) -> Result<PcaModel> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(
            "tangent PCA needs at least two samples".into(),
        ));
    }
    let factors: Vec<FactorMat> = samples
        .iter()
        .map(factor_icon)
        .collect::<Result<Vec<_>>>()?;
    let result = gpa(&factors, false, config)?;
    let pole = result
        .mean_factor
        .expect("GPA always reports its mean factor");

    let tangents = tangent_coords(&pole, samples)?;
    let n = tangents.len();
    let k = pole.dim();
    let ksq = k * k;
    let vecs: Vec<Vec<f64>> = tangents.iter().map(|t| vec_mat(&t.coords)).collect();

    let mut second_moment = Mat::zeros(ksq, ksq);
    for v in &vecs {
        for i in 0..ksq {
            if v[i] == 0.0 {
                continue;
            }
            for j in 0..=i {
                second_moment[(i, j)] += v[i] * v[j];
            }
        }
    }
    for i in 0..ksq {
        for j in 0..=i {
            let val = second_moment[(i, j)] / n as f64;
            second_moment[(i, j)] = val;
            second_moment[(j, i)] = val;
        }
    }
    let decomp = sym_eigen(&SymMat::from_mat(&second_moment)?)?;
    let max_abs = decomp.lambda.first().map(|l| l.abs()).unwrap_or(0.0);
    let tol = psd_tolerance(max_abs);
    let cap = (n - 1).min(k * (k + 1) / 2);
    let p = decomp.lambda.iter().filter(|&&l| l > tol).count().min(cap);

    let loadings: Vec<Vec<f64>> = (0..p).map(|j| decomp.u.col(j)).collect();
    let variances: Vec<f64> = decomp.lambda[..p].to_vec();
    let scores: Vec<Vec<f64>> = vecs
        .iter()
        .map(|v| {
            loadings
                .iter()
                .map(|g| g.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();

    Ok(PcaModel {
        pole,
        loadings,
        variances,
        scores,
    })
}

/// Matrix path of the j-th component (1-based):
/// Σ(c) = (Δ̂ + c·vec⁻¹(λ̂ⱼ^{1/2} γ̂ⱼ)) (Δ̂ + c·vec⁻¹(λ̂ⱼ^{1/2} γ̂ⱼ))ᵀ.
pub fn pc_path(model: &PcaModel, component: usize, c: f64) -> Result<SpdMat> {
    if component == 0 || component > model.p() {
        return Err(Error::InvalidComponent {
            index: component,
            available: model.p(),
        });
    }
    let j = component - 1;
    let k = model.dim();
    let scaled: Vec<f64> = model.loadings[j]
        .iter()
        .map(|g| model.variances[j].sqrt() * g)
        .collect();
    let direction = unvec_mat(k, &scaled);
    let factor = model.pole.mat().add_scaled(c, &direction);
    FactorMat::new(factor)?.spd()
}
