//! Synthetic tensors, fields and datasets for examples, tests and the
//! `synth` subcommand. Everything here is deterministic given a seed.

use rand::Rng;

use crate::error::Result;
use crate::field::TensorField;
use crate::geodesic::GeodesicSpec;
use crate::linalg::{svd, Mat, SpdMat, SymMat};
use crate::metric::{factor_icon, MetricKind};
use crate::rng::{fill_normal, stream_rng};

/// Haar-like random orthogonal matrix (includes reflections).
pub fn random_orthogonal<R: Rng>(rng: &mut R, dim: usize) -> Mat {
    let mut g = Mat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = rng.gen::<f64>() * 2.0 - 1.0;
        }
    }
    svd(&g).expect("finite Gaussian matrix").u
}

/// Random strictly positive definite matrix with spectrum bounded away
/// from zero.
pub fn random_spd<R: Rng>(rng: &mut R, dim: usize) -> SpdMat {
    let mut f = Mat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            f[(i, j)] = rng.gen::<f64>() * 2.0 - 1.0;
        }
    }
    let s = f
        .matmul(&f.transpose())
        .add_scaled(0.3, &Mat::identity(dim));
    SpdMat::new(SymMat::from_mat(&s).expect("symmetric by construction")).expect("PD + ridge")
}

/// Random rotation of a fixed spectrum.
pub fn random_spd_with_eigenvalues<R: Rng>(rng: &mut R, eigenvalues: &[f64]) -> SpdMat {
    let v = random_orthogonal(rng, eigenvalues.len());
    let d = Mat::diag(eigenvalues);
    SpdMat::new(SymMat::from_mat(&v.matmul(&d).matmul(&v.transpose())).unwrap())
        .expect("conjugated PSD spectrum")
}

fn rot_z(theta: f64) -> Mat {
    let (c, s) = (theta.cos(), theta.sin());
    Mat::from_rows(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

fn rotated_tensor(theta: f64, lambda: &[f64; 3]) -> SpdMat {
    let r = rot_z(theta);
    let d = Mat::diag(lambda);
    SpdMat::new(SymMat::from_mat(&r.matmul(&d).matmul(&r.transpose())).unwrap()).unwrap()
}

/// Two elongated tensors with the same eigenvalues but crossed in-plane
/// orientations (±45°). Their arithmetic interpolation swells: the interior
/// determinant exceeds both endpoint determinants.
pub fn anisotropic_pair() -> (SpdMat, SpdMat) {
    let quarter = std::f64::consts::FRAC_PI_4;
    (
        rotated_tensor(quarter, &[2.0, 0.3, 0.3]),
        rotated_tensor(-quarter, &[2.0, 0.3, 0.3]),
    )
}

/// A 1×1×steps line of tensors along the geodesic between two endpoints.
pub fn geodesic_field(
    from: &SpdMat,
    to: &SpdMat,
    steps: usize,
    kind: MetricKind,
) -> Result<TensorField> {
    assert!(steps >= 2, "a path needs at least its two endpoints");
    let spec = GeodesicSpec::new(kind, from, to)?;
    let mut field = TensorField::new([steps, 1, 1], [1.0; 3]);
    for i in 0..steps {
        let w = i as f64 / (steps - 1) as f64;
        field.set(i, 0, 0, spec.point(w)?)?;
    }
    Ok(field)
}

/// Two-region field: isotropic tensors on the left half, elongated ones on
/// the right; the classic anisotropy-map test card.
pub fn two_region_field(nx: usize, ny: usize) -> Result<TensorField> {
    let iso = SpdMat::diag(&[1.0, 1.0, 1.0])?;
    let aniso = SpdMat::diag(&[4.0, 1.0, 1.0])?;
    let mut field = TensorField::new([nx, ny, 1], [1.0; 3]);
    for y in 0..ny {
        for x in 0..nx {
            let t = if x < nx / 2 {
                iso.clone()
            } else {
                aniso.clone()
            };
            field.set(x, y, 0, t)?;
        }
    }
    Ok(field)
}

/// Two fiber bundles crossing: a horizontal band of x-aligned tensors, a
/// vertical band of y-aligned ones, an arithmetic blend where they overlap
/// and a weakly isotropic background. Optional factor jitter with the given
/// noise level.
pub fn crossing_field(nx: usize, ny: usize, sigma: f64, seed: u64) -> Result<TensorField> {
    let along_x = SpdMat::diag(&[2.5, 0.4, 0.4])?;
    let along_y = SpdMat::diag(&[0.4, 2.5, 0.4])?;
    let background = SpdMat::diag(&[0.5, 0.5, 0.5])?;
    let blend = SpdMat::new(along_x.sym().add_scaled(1.0, along_y.sym()).scale(0.5))?;

    let in_band = |i: usize, n: usize| 3 * i >= n && 3 * i < 2 * n;
    let mut field = TensorField::new([nx, ny, 1], [1.0; 3]);
    let mut rng = stream_rng(seed, 0);
    let mut noise = vec![0.0; 9];
    for y in 0..ny {
        for x in 0..nx {
            let base = match (in_band(y, ny), in_band(x, nx)) {
                (true, true) => &blend,
                (true, false) => &along_x,
                (false, true) => &along_y,
                (false, false) => &background,
            };
            let t = if sigma > 0.0 {
                fill_normal(&mut rng, &mut noise, sigma);
                let x_mat = Mat::from_rows(3, 3, &noise);
                let f = factor_icon(base)?.mat() + &x_mat;
                SpdMat::new(SymMat::from_mat(&f.matmul(&f.transpose()))?)?
            } else {
                base.clone()
            };
            field.set(x, y, 0, t)?;
        }
    }
    Ok(field)
}

/// Noisy-geodesic sample: `points` tensors evenly spaced on the Procrustes
/// geodesic between two endpoints, each replicated `copies` times with
/// i.i.d. N(0, σ²) noise added to its factor.
pub fn noisy_geodesic_samples(
    from: &SpdMat,
    to: &SpdMat,
    points: usize,
    copies: usize,
    sigma: f64,
    seed: u64,
) -> Result<Vec<SpdMat>> {
    assert!(points >= 2);
    let spec = GeodesicSpec::new(MetricKind::ProcrustesSS, from, to)?;
    let mut rng = stream_rng(seed, 0);
    let mut noise = vec![0.0; from.dim() * from.dim()];
    let mut out = Vec::with_capacity(points * copies);
    for c in 0..copies {
        for p in 0..points {
            let w = p as f64 / (points - 1) as f64;
            let on_path = spec.point(w)?;
            let factor = factor_icon(&on_path)?;
            let _ = c;
            fill_normal(&mut rng, &mut noise, sigma);
            let x = Mat::from_rows(from.dim(), from.dim(), &noise);
            let f = factor.mat() + &x;
            out.push(SpdMat::new(SymMat::from_mat(&f.matmul(&f.transpose()))?)?);
        }
    }
    Ok(out)
}
