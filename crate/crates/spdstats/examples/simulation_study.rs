//! Desk-scale estimator comparison: one error model, both sample sizes,
//! every estimator, summarized by RMSE and Stein risk.

use spdstats::sim::{run_study, ErrorModel, ErrorModelKind, StudyConfig};

fn main() {
    for n in [10usize, 30] {
        let mut cfg = StudyConfig::new(
            vec![1.0, 0.3, 0.1],
            ErrorModel::new(ErrorModelKind::GaussianSqrt, 0.1),
            n,
        );
        cfg.replications = 400;
        cfg.seed = 99;
        let result = run_study(&cfg).unwrap();
        println!("model I, n = {n}, {} replications:", cfg.replications);
        println!(
            "  {:<4} {:>10} {:>10} {:>10} {:>9}",
            "est", "rmse(dE)", "rmse(dS)", "stein", "failures"
        );
        for s in &result.summaries {
            println!(
                "  {:<4} {:>10.4} {:>10.4} {:>10.4} {:>9}",
                s.estimator.label(),
                s.rmse_de,
                s.rmse_ds,
                s.stein,
                s.failures
            );
        }
        let best = result
            .summaries
            .iter()
            .min_by(|a, b| a.stein.partial_cmp(&b.stein).unwrap())
            .unwrap();
        println!("  lowest Stein risk: {}\n", best.estimator.label());
    }
}
