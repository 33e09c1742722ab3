//! Slower statistical behavior: empirical consistency of the Procrustes
//! mean under growing sample size.

use spdstats::linalg::SpdMat;
use spdstats::mean::{mean, MeanConfig};
use spdstats::metric::{dist, MetricKind};
use spdstats::rng::stream_rng;
use spdstats::sim::{gen_sample, ErrorModel, ErrorModelKind};

/// d_S(Σ̂(n), Σ̂(4n)) shrinks in median as n grows: the estimator settles
/// down, which is what convergence in probability looks like at desk scale.
#[test]
fn procrustes_mean_consistency() {
    let omega = SpdMat::diag(&[1.0, 0.3, 0.1]).unwrap();
    let model = ErrorModel::new(ErrorModelKind::GaussianSqrt, 0.1);
    let cfg = MeanConfig::new(MetricKind::ProcrustesSS);
    let replicates = 50;
    let mut medians = Vec::new();
    for (idx, n) in [10usize, 40, 160].into_iter().enumerate() {
        let mut gaps: Vec<f64> = (0..replicates)
            .map(|rep| {
                let mut rng = stream_rng(4242 + idx as u64, rep);
                let big = gen_sample(&model, &omega, 4 * n, &mut rng).unwrap();
                let small = &big[..n];
                let fit_small = mean(small, &cfg).unwrap();
                let fit_big = mean(&big, &cfg).unwrap();
                dist(
                    MetricKind::ProcrustesSS,
                    &fit_small.estimate,
                    &fit_big.estimate,
                )
                .unwrap()
            })
            .collect();
        gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians.push(gaps[replicates as usize / 2]);
    }
    println!("median d_S(mean(n), mean(4n)) over n in (10, 40, 160): {medians:?}");
    assert!(
        medians[0] > medians[1] && medians[1] > medians[2],
        "medians not decreasing: {medians:?}"
    );
}
