//! Fréchet mean estimators, one per metric.
//!
//! Five estimators are closed-form averages on a transformed scale
//! (arithmetic, log, Cholesky factor, square root, power). The Procrustes
//! size-and-shape and full Procrustes means run the Generalized Procrustes
//! Algorithm; the Riemannian mean runs a fixed-point gradient descent.
//! Every branch accepts optional weights summing to one.

use crate::error::{Error, Result};
use crate::linalg::{
    mat_exp, mat_inv_sqrt, mat_log, mat_pow, mat_sqrt, FactorMat, Mat, SpdMat, SymMat,
};
use crate::metric::{
    dist, factor_icon, procrustes_fit_scaled, procrustes_rotation, MetricKind, ProcrustesFit,
};

/// Size gauge for the full Procrustes mean. The metric is scale-invariant,
/// so the optimization determines the mean's shape only; the gauge picks its
/// size.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum FullProcrustesSize {
    /// Rescale the per-sample fits each iteration so their weighted total
    /// scatter matches the data's: Σwᵢβᵢ²‖Lᵢ‖² = Σwᵢ‖Lᵢ‖². The projection
    /// shrinkage of the scaled fits then cancels the noise inflation of the
    /// raw factor sizes, leaving the mean's size essentially unbiased.
    #[default]
    PreserveTotalScatter,
    /// Rescale the mean factor to the weighted mean factor norm Σwᵢ‖Lᵢ‖.
    MeanFactorNorm,
}

/// Settings shared by every mean estimator.
#[derive(Clone, Debug)]
pub struct MeanConfig {
    pub kind: MetricKind,
    pub max_iter: usize,
    /// Absolute Frobenius-scale convergence threshold.
    pub tol_converge: f64,
    /// Optional nonnegative weights summing to one, one per sample.
    pub weights: Option<Vec<f64>>,
    pub fp_size: FullProcrustesSize,
}

impl MeanConfig {
    pub fn new(kind: MetricKind) -> Self {
        MeanConfig {
            kind,
            max_iter: 1000,
            tol_converge: 1e-10,
            weights: None,
            fp_size: FullProcrustesSize::default(),
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }
}

/// Outcome of a mean fit.
#[derive(Clone, Debug)]
pub struct MeanResult {
    pub estimate: SpdMat,
    pub iterations: usize,
    /// Σ wᵢ d(Sᵢ, estimate)² in the configured metric.
    pub objective: f64,
    pub converged: bool,
    /// Final per-sample Procrustes rotations (GPA branches only).
    pub rotations: Option<Vec<Mat>>,
    /// Converged mean factor Δ̂ (GPA branches only); the estimate is Δ̂Δ̂ᵀ.
    pub mean_factor: Option<FactorMat>,
}

fn resolve_weights(config: &MeanConfig, n: usize) -> Result<Vec<f64>> {
    match &config.weights {
        None => Ok(vec![1.0 / n as f64; n]),
        Some(w) => {
            if w.len() != n {
                return Err(Error::InvalidInput(format!(
                    "{} weights for {} samples",
                    w.len(),
                    n
                )));
            }
            if w.iter().any(|&x| !x.is_finite() || x < 0.0) {
                return Err(Error::InvalidInput("weights must be nonnegative".into()));
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "weights must sum to 1, got {total}"
                )));
            }
            Ok(w.clone())
        }
    }
}

fn check_dims(samples: &[SpdMat]) -> Result<usize> {
    let dim = samples[0].dim();
    for s in samples {
        if s.dim() != dim {
            return Err(Error::DimMismatch(dim, s.dim()));
        }
    }
    Ok(dim)
}

fn weighted_objective(
    kind: MetricKind,
    samples: &[SpdMat],
    w: &[f64],
    est: &SpdMat,
) -> Result<f64> {
    let mut acc = 0.0;
    for (s, &wi) in samples.iter().zip(w) {
        let d = dist(kind, s, est)?;
        acc += wi * d * d;
    }
    Ok(acc)
}

/// Fréchet mean of `samples` under `config.kind`.
pub fn mean(samples: &[SpdMat], config: &MeanConfig) -> Result<MeanResult> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let dim = check_dims(samples)?;
    let w = resolve_weights(config, samples.len())?;
    if config.kind.requires_strict_pd() {
        if let Some(bad) = samples.iter().find(|s| !s.is_strictly_pd()) {
            return Err(Error::NotPositiveDefinite(format!(
                "{} mean needs strictly positive definite samples, found rank {} of {}",
                config.kind.name(),
                bad.rank(),
                bad.dim()
            )));
        }
    }

    let closed_form = |est: SpdMat| -> Result<MeanResult> {
        let objective = weighted_objective(config.kind, samples, &w, &est)?;
        Ok(MeanResult {
            estimate: est,
            iterations: 1,
            objective,
            converged: true,
            rotations: None,
            mean_factor: None,
        })
    };

    match config.kind {
        MetricKind::Euclidean => {
            let mut acc = SymMat::zero(dim);
            for (s, &wi) in samples.iter().zip(&w) {
                acc = acc.add_scaled(wi, s.sym());
            }
            closed_form(SpdMat::new(acc)?)
        }
        MetricKind::LogEuclidean => {
            let mut acc = SymMat::zero(dim);
            for (s, &wi) in samples.iter().zip(&w) {
                acc = acc.add_scaled(wi, &mat_log(s)?);
            }
            closed_form(mat_exp(&acc)?)
        }
        MetricKind::Cholesky => {
            let mut delta = Mat::zeros(dim, dim);
            for (s, &wi) in samples.iter().zip(&w) {
                delta = delta.add_scaled(wi, factor_icon(s)?.mat());
            }
            closed_form(FactorMat::new(delta)?.spd()?)
        }
        MetricKind::RootEuclidean => {
            let mut acc = SymMat::zero(dim);
            for (s, &wi) in samples.iter().zip(&w) {
                acc = acc.add_scaled(wi, mat_sqrt(s)?.sym());
            }
            closed_form(FactorMat::new(acc.mat().clone())?.spd()?)
        }
        MetricKind::PowerEuclidean(alpha) => {
            let mut acc = SymMat::zero(dim);
            for (s, &wi) in samples.iter().zip(&w) {
                acc = acc.add_scaled(wi, mat_pow(s, alpha)?.sym());
            }
            closed_form(mat_pow(&SpdMat::new(acc)?, 1.0 / alpha)?)
        }
        MetricKind::ProcrustesSS | MetricKind::FullProcrustes => {
            let factors: Vec<FactorMat> = samples
                .iter()
                .map(factor_icon)
                .collect::<Result<Vec<_>>>()?;
            let with_scaling = config.kind == MetricKind::FullProcrustes;
            gpa(&factors, with_scaling, config)
        }
        MetricKind::Riemannian => riemannian_mean(samples, config),
    }
}

/// Generalized Procrustes Algorithm over factors: register every factor to
/// the current mean, average, repeat. Returns the mean as ΔΔᵀ together with
/// the final per-sample rotations.
pub fn gpa(factors: &[FactorMat], with_scaling: bool, config: &MeanConfig) -> Result<MeanResult> {
    gpa_with_trace(factors, with_scaling, config).map(|(r, _)| r)
}

/// [`gpa`] that also reports the objective after each iteration, for
/// monotonicity checks.
pub fn gpa_with_trace(
    factors: &[FactorMat],
    with_scaling: bool,
    config: &MeanConfig,
) -> Result<(MeanResult, Vec<f64>)> {
    if factors.is_empty() {
        return Err(Error::EmptySample);
    }
    let dim = factors[0].dim();
    for f in factors {
        if f.dim() != dim {
            return Err(Error::DimMismatch(dim, f.dim()));
        }
    }
    let w = resolve_weights(config, factors.len())?;
    let scatter: f64 = factors
        .iter()
        .zip(&w)
        .map(|(f, &wi)| wi * f.norm() * f.norm())
        .sum();
    let mean_norm: f64 = factors.iter().zip(&w).map(|(f, &wi)| wi * f.norm()).sum();

    let mut delta = factors[0].clone();
    let mut prev_est = delta.spd()?;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut last_change = f64::INFINITY;
    let mut fits: Vec<ProcrustesFit> = Vec::new();

    while iterations < config.max_iter {
        iterations += 1;
        fits = factors
            .iter()
            .map(|f| {
                if with_scaling {
                    procrustes_fit_scaled(&delta, f)
                } else {
                    procrustes_rotation(&delta, f)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        trace.push(gpa_objective(&fits, factors, &w, &delta, with_scaling));

        let mut scale_adjust = 1.0;
        if with_scaling {
            match config.fp_size {
                FullProcrustesSize::PreserveTotalScatter => {
                    let fitted_scatter: f64 = fits
                        .iter()
                        .zip(factors)
                        .zip(&w)
                        .map(|((fit, f), &wi)| {
                            let s = fit.scale * f.norm();
                            wi * s * s
                        })
                        .sum();
                    if fitted_scatter <= 0.0 {
                        return Err(Error::DegenerateInput(
                            "scaled fits collapsed to zero".into(),
                        ));
                    }
                    scale_adjust = (scatter / fitted_scatter).sqrt();
                }
                FullProcrustesSize::MeanFactorNorm => {}
            }
        }
        let mut next = Mat::zeros(dim, dim);
        for ((fit, f), &wi) in fits.iter().zip(factors).zip(&w) {
            let registered = f.mat().matmul(&fit.rotation);
            next = next.add_scaled(wi * fit.scale * scale_adjust, &registered);
        }
        if with_scaling && config.fp_size == FullProcrustesSize::MeanFactorNorm {
            let norm = next.frob();
            if norm <= 0.0 {
                return Err(Error::DegenerateInput("mean factor collapsed".into()));
            }
            next = next.scale(mean_norm / norm);
        }
        let delta_new = FactorMat::new(next)?;
        let est_new = delta_new.spd()?;
        last_change = (est_new.mat() - prev_est.mat()).frob();
        delta = delta_new;
        prev_est = est_new;
        if last_change < config.tol_converge {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations,
            last_change,
        });
    }
    // one more registration against the converged mean for reporting
    let final_fits: Vec<ProcrustesFit> = factors
        .iter()
        .map(|f| {
            if with_scaling {
                procrustes_fit_scaled(&delta, f)
            } else {
                procrustes_rotation(&delta, f)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let objective = gpa_objective(&final_fits, factors, &w, &delta, with_scaling);
    let rotations = final_fits.iter().map(|f| f.rotation.clone()).collect();
    let _ = fits;
    Ok((
        MeanResult {
            estimate: prev_est,
            iterations,
            objective,
            converged,
            rotations: Some(rotations),
            mean_factor: Some(delta),
        },
        trace,
    ))
}

/// Objective at the current mean factor: Σw d_S² for the plain algorithm,
/// Σw d_F² (scale-invariant form) for the scaled one.
fn gpa_objective(
    fits: &[ProcrustesFit],
    factors: &[FactorMat],
    w: &[f64],
    delta: &FactorMat,
    with_scaling: bool,
) -> f64 {
    if with_scaling {
        let dn = delta.norm();
        fits.iter()
            .zip(factors)
            .zip(w)
            .map(|((fit, f), &wi)| {
                let cos = fit.scale * f.norm() / dn;
                wi * (1.0 - (cos * cos).min(1.0))
            })
            .sum()
    } else {
        fits.iter()
            .zip(w)
            .map(|(fit, &wi)| wi * fit.residual * fit.residual)
            .sum()
    }
}

/// Riemannian (Karcher) mean by the damped fixed-point iteration
/// Σ_{t+1} = Σ_t^{1/2} exp(τ·Σᵢ wᵢ log(Σ_t^{-1/2} Sᵢ Σ_t^{-1/2})) Σ_t^{1/2},
/// started at the log-Euclidean mean. The space has negative curvature, so
/// the minimizer is unique; the step τ backtracks from 1 whenever the
/// gradient norm fails to drop, which the full step cannot guarantee once
/// the data spread several log-units apart.
pub fn riemannian_mean(samples: &[SpdMat], config: &MeanConfig) -> Result<MeanResult> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let dim = check_dims(samples)?;
    let w = resolve_weights(config, samples.len())?;
    if let Some(bad) = samples.iter().find(|s| !s.is_strictly_pd()) {
        return Err(Error::NotPositiveDefinite(format!(
            "Riemannian mean needs strictly positive definite samples, found rank {}",
            bad.rank()
        )));
    }

    let gradient = |at: &SpdMat| -> Result<(SymMat, f64)> {
        let inv_root = mat_inv_sqrt(at)?;
        let mut g = SymMat::zero(dim);
        for (s, &wi) in samples.iter().zip(&w) {
            let whitened =
                SymMat::from_mat(&inv_root.mat().matmul(s.mat()).matmul(inv_root.mat()))?;
            g = g.add_scaled(wi, &mat_log(&SpdMat::new(whitened)?)?);
        }
        let norm = g.mat().frob();
        Ok((g, norm))
    };

    let mut log_acc = SymMat::zero(dim);
    for (s, &wi) in samples.iter().zip(&w) {
        log_acc = log_acc.add_scaled(wi, &mat_log(s)?);
    }
    let mut sigma = mat_exp(&log_acc)?;
    let (mut g, mut grad_norm) = gradient(&sigma)?;

    let mut tau = 1.0f64;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iter {
        iterations += 1;
        if grad_norm < config.tol_converge {
            converged = true;
            break;
        }
        let root = mat_sqrt(&sigma)?;
        let step = mat_exp(&g.scale(tau))?;
        let candidate = SpdMat::new(SymMat::from_mat(
            &root.mat().matmul(step.mat()).matmul(root.mat()),
        )?)?;
        let (g_new, norm_new) = gradient(&candidate)?;
        if norm_new < grad_norm {
            sigma = candidate;
            g = g_new;
            grad_norm = norm_new;
            tau = (tau * 1.5).min(1.0);
        } else {
            tau *= 0.5;
            if tau < 1e-8 {
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations,
            last_change: grad_norm,
        });
    }
    let objective = weighted_objective(MetricKind::Riemannian, samples, &w, &sigma)?;
    Ok(MeanResult {
        estimate: sigma,
        iterations,
        objective,
        converged,
        rotations: None,
        mean_factor: None,
    })
}

/// Weighted Fréchet mean: the minimizer of Σ wᵢ d(Sᵢ, Σ)² with Σwᵢ = 1.
pub fn weighted_frechet(samples: &[SpdMat], weights: &[f64], kind: MetricKind) -> Result<SpdMat> {
    let config = MeanConfig::new(kind).with_weights(weights.to_vec());
    Ok(mean(samples, &config)?.estimate)
}
