//! Diffusion-weighted-imaging forward model and a log-linear tensor fit.
//!
//! The noise-free signal at gradient direction g with scanner parameter b
//! is Z = Z₀·exp(−b·gᵀDg). Fitting inverts that relation by least squares
//! on y = −log(Z/Z₀)/b, which is linear in the six free entries of D.

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, SpdMat, SymMat};

/// Acquisition scheme: axial unit gradient directions plus the b-value.
#[derive(Clone, Debug)]
pub struct GradientScheme {
    directions: Vec<[f64; 3]>,
    b_value: f64,
}

impl GradientScheme {
    pub fn new(directions: Vec<[f64; 3]>, b_value: f64) -> Result<GradientScheme> {
        if !b_value.is_finite() || b_value <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "b-value must be positive, got {b_value}"
            )));
        }
        for (i, g) in directions.iter().enumerate() {
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "direction {i} has norm {norm}, expected a unit vector"
                )));
            }
        }
        Ok(GradientScheme {
            directions,
            b_value,
        })
    }

    /// Minimal well-posed scheme: the three axes plus the three diagonal
    /// directions, spanning the six-dimensional space of symmetric forms.
    pub fn six_directions(b_value: f64) -> GradientScheme {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        GradientScheme::new(
            vec![
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                [r, r, 0.0],
                [r, 0.0, r],
                [0.0, r, r],
            ],
            b_value,
        )
        .expect("built-in scheme is valid")
    }

    pub fn directions(&self) -> &[[f64; 3]] {
        &self.directions
    }

    pub fn b_value(&self) -> f64 {
        self.b_value
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// Baseline reading Z₀ (no gradient) plus one signal per direction.
#[derive(Clone, Debug)]
pub struct SignalSet {
    pub z0: f64,
    pub signals: Vec<f64>,
}

/// Result of a least squares tensor fit; `clamped` reports whether negative
/// eigenvalues had to be clamped to zero.
#[derive(Clone, Debug)]
pub struct TensorFit {
    pub tensor: SpdMat,
    pub clamped: bool,
}

fn quadratic_form(d: &SpdMat, g: &[f64; 3]) -> f64 {
    let mut q = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            q += g[i] * d.get(i, j) * g[j];
        }
    }
    q
}

/// Noise-free signals Z_j = Z₀ exp(−b gⱼᵀ D gⱼ).
pub fn forward_signal(d: &SpdMat, scheme: &GradientScheme, z0: f64) -> Result<SignalSet> {
    if d.dim() != 3 {
        return Err(Error::DimMismatch(3, d.dim()));
    }
    if !z0.is_finite() || z0 <= 0.0 {
        return Err(Error::InvalidSignal(format!(
            "baseline signal must be positive, got {z0}"
        )));
    }
    let signals = scheme
        .directions
        .iter()
        .map(|g| z0 * (-scheme.b_value * quadratic_form(d, g)).exp())
        .collect();
    Ok(SignalSet { z0, signals })
}

/// Least squares fit of the diffusion tensor from signals: solves
/// −log(Z_j/Z₀)/b = gⱼᵀ D gⱼ for the six free entries of D. Needs at least
/// six directions spanning the space of symmetric forms.
pub fn fit_tensor_ls(signals: &SignalSet, scheme: &GradientScheme) -> Result<TensorFit> {
    let m = scheme.len();
    if signals.signals.len() != m {
        return Err(Error::InvalidInput(format!(
            "{} signals for {} directions",
            signals.signals.len(),
            m
        )));
    }
    if m < 6 {
        return Err(Error::DegenerateGradientScheme(format!(
            "{m} directions cannot determine 6 tensor entries"
        )));
    }
    if !signals.z0.is_finite() || signals.z0 <= 0.0 {
        return Err(Error::InvalidSignal(format!(
            "baseline signal must be positive, got {}",
            signals.z0
        )));
    }

    // design rows for x = (dxx, dxy, dxz, dyy, dyz, dzz)
    let mut normal = [[0.0f64; 6]; 6];
    let mut rhs = [0.0f64; 6];
    for (g, &z) in scheme.directions.iter().zip(&signals.signals) {
        if !z.is_finite() || z <= 0.0 {
            return Err(Error::InvalidSignal(format!("signal {z} is not positive")));
        }
        let y = -(z / signals.z0).ln() / scheme.b_value;
        let row = [
            g[0] * g[0],
            2.0 * g[0] * g[1],
            2.0 * g[0] * g[2],
            g[1] * g[1],
            2.0 * g[1] * g[2],
            g[2] * g[2],
        ];
        for i in 0..6 {
            rhs[i] += row[i] * y;
            for j in 0..6 {
                normal[i][j] += row[i] * row[j];
            }
        }
    }

    let mut flat = [0.0; 36];
    for i in 0..6 {
        for j in 0..6 {
            flat[i * 6 + j] = normal[i][j];
        }
    }
    let n_sym = SymMat::new(6, &flat)?;
    let eig = sym_eigen(&n_sym)?;
    let max = eig.lambda[0].abs();
    if eig.lambda[5] <= 1e-10 * max.max(1.0) {
        return Err(Error::DegenerateGradientScheme(
            "directions do not span the space of symmetric forms".into(),
        ));
    }
    // x = N⁻¹ rhs through the spectral decomposition
    let mut x = [0.0f64; 6];
    for (l, &lam) in eig.lambda.iter().enumerate() {
        let mut proj = 0.0;
        for (i, &r) in rhs.iter().enumerate() {
            proj += eig.u[(i, l)] * r;
        }
        let coeff = proj / lam;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += coeff * eig.u[(i, l)];
        }
    }

    let sym = SymMat::new(
        3,
        &[
            x[0], x[1], x[2], //
            x[1], x[3], x[4], //
            x[2], x[4], x[5],
        ],
    )?;
    let eig = sym_eigen(&sym)?;
    let clamped = eig.lambda.iter().any(|&l| l < 0.0);
    let lambda: Vec<f64> = eig.lambda.iter().map(|&l| l.max(0.0)).collect();
    let tensor = SpdMat::from_eigen(eig.u, lambda)?;
    Ok(TensorFit { tensor, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{svd, Mat};
    use crate::rng::stream_rng;
    use rand::Rng;

    fn random_pd_tensor(rng: &mut impl Rng) -> SpdMat {
        let mut g = Mat::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                g[(i, j)] = rng.gen::<f64>() * 2.0 - 1.0;
            }
        }
        let v = svd(&g).unwrap().u;
        let d = Mat::diag(&[
            rng.gen::<f64>() * 2.0 + 0.2,
            rng.gen::<f64>() + 0.1,
            rng.gen::<f64>() * 0.5 + 0.05,
        ]);
        SpdMat::new(SymMat::from_mat(&v.matmul(&d).matmul(&v.transpose())).unwrap()).unwrap()
    }

    #[test]
    fn zero_tensor_gives_baseline_everywhere() {
        let d = SpdMat::diag(&[0.0, 0.0, 0.0]).unwrap();
        let scheme = GradientScheme::six_directions(1.0);
        let s = forward_signal(&d, &scheme, 100.0).unwrap();
        for z in s.signals {
            assert_eq!(z, 100.0);
        }
    }

    #[test]
    fn identity_tensor_attenuates_uniformly() {
        let d = SpdMat::identity(3);
        let scheme = GradientScheme::six_directions(1.0);
        let s = forward_signal(&d, &scheme, 1.0).unwrap();
        for z in s.signals {
            assert!((z - (-1.0f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn axis_aligned_attenuation() {
        let d = SpdMat::diag(&[2.0, 0.0, 0.0]).unwrap();
        let scheme = GradientScheme::new(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 1.0).unwrap();
        let s = forward_signal(&d, &scheme, 1.0).unwrap();
        assert!((s.signals[0] - (-2.0f64).exp()).abs() < 1e-15);
        assert!((s.signals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn signals_axially_symmetric() {
        let mut rng = stream_rng(90, 0);
        let d = random_pd_tensor(&mut rng);
        let g: [f64; 3] = [0.6, -0.64, 0.48];
        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        let g = [g[0] / norm, g[1] / norm, g[2] / norm];
        let neg = [-g[0], -g[1], -g[2]];
        let scheme = GradientScheme::new(vec![g, neg], 1.0).unwrap();
        let s = forward_signal(&d, &scheme, 1.0).unwrap();
        assert_eq!(s.signals[0], s.signals[1]);
    }

    #[test]
    fn round_trip_recovers_tensor() {
        let mut rng = stream_rng(91, 0);
        let scheme = GradientScheme::six_directions(1.0);
        for _ in 0..20 {
            let d = random_pd_tensor(&mut rng);
            let s = forward_signal(&d, &scheme, 1.0).unwrap();
            let fit = fit_tensor_ls(&s, &scheme).unwrap();
            assert!((fit.tensor.mat() - d.mat()).frob() < 1e-10);
            assert!(!fit.clamped);
        }
    }

    #[test]
    fn too_few_directions_rejected() {
        let scheme =
            GradientScheme::new(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], 1.0)
                .unwrap();
        let signals = SignalSet {
            z0: 1.0,
            signals: vec![0.5, 0.5, 0.5],
        };
        assert!(matches!(
            fit_tensor_ls(&signals, &scheme),
            Err(Error::DegenerateGradientScheme(_))
        ));
    }

    #[test]
    fn degenerate_directions_rejected() {
        // six copies of the same axis cannot span the form space
        let scheme = GradientScheme::new(vec![[1.0, 0.0, 0.0]; 6], 1.0).unwrap();
        let signals = SignalSet {
            z0: 1.0,
            signals: vec![0.5; 6],
        };
        assert!(matches!(
            fit_tensor_ls(&signals, &scheme),
            Err(Error::DegenerateGradientScheme(_))
        ));
    }

    #[test]
    fn nonpositive_signal_rejected() {
        let scheme = GradientScheme::six_directions(1.0);
        let signals = SignalSet {
            z0: 1.0,
            signals: vec![0.5, 0.5, -0.1, 0.5, 0.5, 0.5],
        };
        assert!(matches!(
            fit_tensor_ls(&signals, &scheme),
            Err(Error::InvalidSignal(_))
        ));
    }

    #[test]
    fn non_unit_direction_rejected() {
        assert!(GradientScheme::new(vec![[1.0, 1.0, 0.0]], 1.0).is_err());
    }
}
