//! All eight distances between two tensors, and what they are invariant to.

use spdstats::linalg::{Mat, SpdMat, SymMat};
use spdstats::metric::{dist, MetricKind};
use spdstats::synth::anisotropic_pair;

fn main() {
    let (a, b) = anisotropic_pair();
    println!("A = {:?}", a.mat().data());
    println!("B = {:?}\n", b.mat().data());

    let kinds = [
        MetricKind::Euclidean,
        MetricKind::LogEuclidean,
        MetricKind::Riemannian,
        MetricKind::Cholesky,
        MetricKind::RootEuclidean,
        MetricKind::ProcrustesSS,
        MetricKind::FullProcrustes,
        MetricKind::PowerEuclidean(0.5),
    ];
    println!("{:<16} {:>10}", "metric", "d(A,B)");
    for kind in kinds {
        println!("{:<16} {:>10.6}", kind.name(), dist(kind, &a, &b).unwrap());
    }

    // simultaneous rotation leaves every metric except Cholesky unchanged
    let theta = 0.7f64;
    let (c, s) = (theta.cos(), theta.sin());
    let v = Mat::from_rows(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
    let rotate = |t: &SpdMat| {
        SpdMat::new(SymMat::from_mat(&v.matmul(t.mat()).matmul(&v.transpose())).unwrap()).unwrap()
    };
    let (ra, rb) = (rotate(&a), rotate(&b));
    println!("\nafter rotating both by 40°:");
    for kind in [
        MetricKind::Riemannian,
        MetricKind::ProcrustesSS,
        MetricKind::Cholesky,
    ] {
        let before = dist(kind, &a, &b).unwrap();
        let after = dist(kind, &ra, &rb).unwrap();
        println!(
            "{:<16} {:>10.6} -> {:>10.6}  ({})",
            kind.name(),
            before,
            after,
            if (before - after).abs() < 1e-9 {
                "invariant"
            } else {
                "changed"
            }
        );
    }

    // scaling both arguments only moves the scale-sensitive metrics
    let scale = |t: &SpdMat, f: f64| SpdMat::new(t.sym().scale(f)).unwrap();
    let (sa, sb) = (scale(&a, 5.0), scale(&b, 5.0));
    println!("\nafter scaling both by 5:");
    for kind in [
        MetricKind::Euclidean,
        MetricKind::LogEuclidean,
        MetricKind::Riemannian,
    ] {
        let before = dist(kind, &a, &b).unwrap();
        let after = dist(kind, &sa, &sb).unwrap();
        println!(
            "{:<16} {:>10.6} -> {:>10.6}  ({})",
            kind.name(),
            before,
            after,
            if (before - after).abs() < 1e-9 {
                "invariant"
            } else {
                "changed"
            }
        );
    }
}
