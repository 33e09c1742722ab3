//! FA, PA and GA on single tensors and over a two-region field.

use std::fs::File;

use spdstats::anisotropy::{anisotropy, anisotropy_map, AnisotropyKind};
use spdstats::linalg::SpdMat;
use spdstats::synth::two_region_field;

fn main() {
    println!("{:<18} {:>8} {:>8} {:>8}", "eigenvalues", "FA", "PA", "GA");
    for lambda in [
        [1.0, 1.0, 1.0],
        [4.0, 1.0, 1.0],
        [10.0, 1.0, 0.5],
        [1.0, 0.01, 0.01],
    ] {
        let t = SpdMat::diag(&lambda).unwrap();
        let fa = anisotropy(AnisotropyKind::FA, &t).unwrap();
        let pa = anisotropy(AnisotropyKind::PA, &t).unwrap();
        let ga = anisotropy(AnisotropyKind::GA, &t).unwrap();
        println!(
            "{:<18} {fa:>8.4} {pa:>8.4} {ga:>8.4}",
            format!("{lambda:?}")
        );
    }

    // the power-metric family interpolates: FA(1) = FA, FA(1/2) = PA
    let t = SpdMat::diag(&[4.0, 1.0, 1.0]).unwrap();
    print!("\nFA(alpha) on (4,1,1):");
    for alpha in [0.25, 0.5, 1.0, 2.0] {
        let v = anisotropy(AnisotropyKind::FAalpha(alpha), &t).unwrap();
        print!("  a={alpha}: {v:.4}");
    }
    println!();

    let field = two_region_field(16, 8).unwrap();
    let dir = std::env::temp_dir();
    for kind in [AnisotropyKind::FA, AnisotropyKind::PA, AnisotropyKind::GA] {
        let map = anisotropy_map(&field, kind);
        let hi = if kind == AnisotropyKind::GA { 3.0 } else { 1.0 };
        let path = dir.join(format!("two_region_{}.pgm", kind.name()));
        map.write_pgm(&mut File::create(&path).unwrap(), 0.0, hi)
            .unwrap();
        println!("wrote {}", path.display());
    }
    let map = anisotropy_map(&field, AnisotropyKind::PA);
    println!(
        "PA two-region values: left {:.4}, right {:.4}",
        map.get(0, 0, 0).unwrap(),
        map.get(15, 0, 0).unwrap()
    );
}
