//! Scalar anisotropy measures on single tensors and over fields.
//!
//! All four are functions of the eigenvalue spread on different scales:
//! FA on the raw eigenvalues, PA on their square roots, GA on their logs,
//! FA(α) on the α-th powers. FA, PA and FA(α) live in [0, 1]; GA in [0, ∞).

use crate::error::{Error, Result};
use crate::field::{ScalarField, TensorField};
use crate::linalg::SpdMat;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AnisotropyKind {
    /// Fractional anisotropy {k/(k−1) · Σ(λᵢ−λ̄)² / Σλᵢ²}^{1/2}.
    FA,
    /// Procrustes anisotropy {k/(k−1) · Σ(√λᵢ−mean√λ)² / Σλᵢ}^{1/2}, the
    /// scaled full-Procrustes distance from isotropy.
    PA,
    /// Geodesic anisotropy {Σ(log λᵢ − mean log λ)²}^{1/2}.
    GA,
    /// Power-metric fractional anisotropy FA(α).
    FAalpha(f64),
}

impl AnisotropyKind {
    pub fn name(&self) -> String {
        match self {
            AnisotropyKind::FA => "fa".into(),
            AnisotropyKind::PA => "pa".into(),
            AnisotropyKind::GA => "ga".into(),
            AnisotropyKind::FAalpha(a) => format!("fa({a})"),
        }
    }
}

fn spread_ratio(k: usize, transformed: &[f64], denom: f64) -> f64 {
    let mean = transformed.iter().sum::<f64>() / k as f64;
    let num: f64 = transformed.iter().map(|t| (t - mean) * (t - mean)).sum();
    let ratio = (k as f64 / (k as f64 - 1.0)) * num / denom;
    ratio.max(0.0).sqrt().min(1.0)
}

/// Anisotropy of a single tensor. Eigenvalues inside the PSD tolerance band
/// are clamped to zero first, so tiny negative round-off eigenvalues from
/// imaging data do not poison the ratios.
pub fn anisotropy(kind: AnisotropyKind, s: &SpdMat) -> Result<f64> {
    let k = s.dim();
    if k < 2 {
        return Err(Error::InvalidInput(
            "anisotropy needs at least a 2x2 tensor".into(),
        ));
    }
    let tol = s.psd_tol();
    let lambda: Vec<f64> = s
        .eigenvalues()
        .iter()
        .map(|&l| if l <= tol { 0.0 } else { l })
        .collect();
    let total: f64 = lambda.iter().sum();
    if total <= 0.0 {
        return Err(Error::UndefinedAnisotropy(
            "zero tensor has no anisotropy".into(),
        ));
    }
    match kind {
        AnisotropyKind::FA => {
            let denom: f64 = lambda.iter().map(|l| l * l).sum();
            Ok(spread_ratio(k, &lambda, denom))
        }
        AnisotropyKind::PA => {
            let roots: Vec<f64> = lambda.iter().map(|l| l.sqrt()).collect();
            Ok(spread_ratio(k, &roots, total))
        }
        AnisotropyKind::GA => {
            if !s.is_strictly_pd() {
                return Err(Error::NotPositiveDefinite(
                    "geodesic anisotropy is undefined for rank-deficient tensors".into(),
                ));
            }
            let logs: Vec<f64> = lambda.iter().map(|l| l.ln()).collect();
            let mean = logs.iter().sum::<f64>() / k as f64;
            Ok(logs
                .iter()
                .map(|l| (l - mean) * (l - mean))
                .sum::<f64>()
                .sqrt())
        }
        AnisotropyKind::FAalpha(alpha) => {
            if !alpha.is_finite() || alpha == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "FA(alpha) exponent must be finite and nonzero, got {alpha}"
                )));
            }
            if (alpha < 0.0 || alpha.fract() != 0.0) && !s.is_strictly_pd() {
                return Err(Error::NotPositiveDefinite(format!(
                    "FA({alpha}) requires a strictly positive spectrum"
                )));
            }
            let powered: Vec<f64> = lambda.iter().map(|l| l.powf(alpha)).collect();
            let denom: f64 = powered.iter().map(|p| p * p).sum();
            Ok(spread_ratio(k, &powered, denom))
        }
    }
}

/// Per-voxel anisotropy over a field. Masked voxels stay masked, and voxels
/// where the measure is undefined (zero tensors, rank-deficient tensors
/// under GA) are masked in the output rather than failing the whole map.
pub fn anisotropy_map(field: &TensorField, kind: AnisotropyKind) -> ScalarField {
    let mut out = ScalarField::new(field.dims(), field.spacing());
    for (x, y, z) in field.coords() {
        if let Some(t) = field.get(x, y, z) {
            if let Ok(v) = anisotropy(kind, t) {
                out.set(x, y, z, v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{svd, Mat, SymMat};
    use crate::rng::stream_rng;
    use rand::Rng;

    const KINDS: [AnisotropyKind; 4] = [
        AnisotropyKind::FA,
        AnisotropyKind::PA,
        AnisotropyKind::GA,
        AnisotropyKind::FAalpha(2.0),
    ];

    fn rotated(lambda: &[f64], rng: &mut impl Rng) -> SpdMat {
        let k = lambda.len();
        let mut g = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = rng.gen::<f64>() * 2.0 - 1.0;
            }
        }
        let v = svd(&g).unwrap().u;
        let d = Mat::diag(lambda);
        SpdMat::new(SymMat::from_mat(&v.matmul(&d).matmul(&v.transpose())).unwrap()).unwrap()
    }

    #[test]
    fn isotropic_tensors_score_zero() {
        for c in [0.5, 1.0, 42.0] {
            let s = SpdMat::diag(&[c, c, c]).unwrap();
            for kind in KINDS {
                assert!(anisotropy(kind, &s).unwrap() < 1e-12, "{}", kind.name());
            }
        }
    }

    #[test]
    fn rank_one_extremes() {
        let s = SpdMat::diag(&[1.0, 0.0, 0.0]).unwrap();
        assert!((anisotropy(AnisotropyKind::FA, &s).unwrap() - 1.0).abs() < 1e-12);
        assert!((anisotropy(AnisotropyKind::PA, &s).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            anisotropy(AnisotropyKind::GA, &s),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn hand_computed_values() {
        let s = SpdMat::diag(&[4.0, 1.0, 1.0]).unwrap();
        let pa = anisotropy(AnisotropyKind::PA, &s).unwrap();
        assert!((pa - (1.0f64 / 6.0).sqrt()).abs() < 1e-12);

        let e2 = (2.0f64).exp();
        let s = SpdMat::diag(&[e2, 1.0, 1.0]).unwrap();
        let ga = anisotropy(AnisotropyKind::GA, &s).unwrap();
        assert!((ga - (8.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn alpha_reduction_identities() {
        let mut rng = stream_rng(70, 0);
        for _ in 0..10 {
            let s = rotated(&[2.5, 0.9, 0.3], &mut rng);
            let fa = anisotropy(AnisotropyKind::FA, &s).unwrap();
            let fa1 = anisotropy(AnisotropyKind::FAalpha(1.0), &s).unwrap();
            assert!((fa - fa1).abs() < 1e-12);
            let pa = anisotropy(AnisotropyKind::PA, &s).unwrap();
            let fa_half = anisotropy(AnisotropyKind::FAalpha(0.5), &s).unwrap();
            assert!((pa - fa_half).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_and_scale_invariance() {
        let mut rng = stream_rng(71, 0);
        let lambda = [3.0, 1.2, 0.4];
        let base = SpdMat::diag(&lambda).unwrap();
        for kind in KINDS {
            let reference = anisotropy(kind, &base).unwrap();
            for _ in 0..20 {
                let s = rotated(&lambda, &mut rng);
                assert!((anisotropy(kind, &s).unwrap() - reference).abs() < 1e-9);
            }
            for beta in [0.01, 5.0] {
                let scaled = SpdMat::new(base.sym().scale(beta)).unwrap();
                assert!((anisotropy(kind, &scaled).unwrap() - reference).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ranges_hold_on_random_tensors() {
        let mut rng = stream_rng(72, 0);
        for _ in 0..1000 {
            let lambda = [
                rng.gen::<f64>() * 3.0 + 1e-6,
                rng.gen::<f64>() * 3.0 + 1e-6,
                rng.gen::<f64>() * 3.0 + 1e-6,
            ];
            let s = rotated(&lambda, &mut rng);
            for kind in [
                AnisotropyKind::FA,
                AnisotropyKind::PA,
                AnisotropyKind::FAalpha(0.5),
                AnisotropyKind::FAalpha(2.0),
            ] {
                let v = anisotropy(kind, &s).unwrap();
                assert!((0.0..=1.0).contains(&v), "{} = {v}", kind.name());
            }
            assert!(anisotropy(AnisotropyKind::GA, &s).unwrap() >= 0.0);
        }
    }

    #[test]
    fn strictly_increasing_in_elongation() {
        let mut prev = [0.0f64; 3];
        let mut t = 1.0;
        while t <= 100.0 {
            if t > 1.0 {
                let s = SpdMat::diag(&[t, 1.0, 1.0]).unwrap();
                let now = [
                    anisotropy(AnisotropyKind::FA, &s).unwrap(),
                    anisotropy(AnisotropyKind::PA, &s).unwrap(),
                    anisotropy(AnisotropyKind::GA, &s).unwrap(),
                ];
                for (p, n) in prev.iter().zip(&now) {
                    assert!(n > p, "t = {t}");
                }
                prev = now;
            }
            t += 4.5;
        }
    }

    #[test]
    fn zero_tensor_is_undefined() {
        let s = SpdMat::diag(&[0.0, 0.0]).unwrap();
        assert!(matches!(
            anisotropy(AnisotropyKind::FA, &s),
            Err(Error::UndefinedAnisotropy(_))
        ));
    }

    #[test]
    fn map_over_two_region_field() {
        let mut field = TensorField::new([4, 1, 1], [1.0; 3]);
        for x in 0..2 {
            field
                .set(x, 0, 0, SpdMat::diag(&[1.0, 1.0, 1.0]).unwrap())
                .unwrap();
        }
        for x in 2..4 {
            field
                .set(x, 0, 0, SpdMat::diag(&[4.0, 1.0, 1.0]).unwrap())
                .unwrap();
        }
        let map = anisotropy_map(&field, AnisotropyKind::PA);
        assert!(map.get(0, 0, 0).unwrap() < 1e-12);
        assert!((map.get(3, 0, 0).unwrap() - (1.0f64 / 6.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn map_masks_failures_instead_of_erroring() {
        let mut field = TensorField::new([2, 1, 1], [1.0; 3]);
        field
            .set(0, 0, 0, SpdMat::diag(&[1.0, 0.0, 0.0]).unwrap())
            .unwrap();
        field
            .set(1, 0, 0, SpdMat::diag(&[2.0, 1.0, 0.5]).unwrap())
            .unwrap();
        let map = anisotropy_map(&field, AnisotropyKind::GA);
        assert!(map.get(0, 0, 0).is_none()); // rank-1 voxel masked under GA
        assert!(map.get(1, 0, 0).is_some());
        let fa_map = anisotropy_map(&field, AnisotropyKind::FA);
        assert!((fa_map.get(0, 0, 0).unwrap() - 1.0).abs() < 1e-12);
    }
}
