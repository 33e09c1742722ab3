//! Property tests for the kernel round trips and representations.

use proptest::prelude::*;

use spdstats::linalg::{
    cholesky, frobenius_norm, mat_exp, mat_log, mat_pow, mat_sqrt, Mat, SpdMat, SymMat,
};
use spdstats::tangent::{unvec_mat, vec_mat};

fn sym3(entries: [f64; 6]) -> SymMat {
    let [a, b, c, d, e, f] = entries;
    SymMat::new(3, &[a, b, c, b, d, e, c, e, f]).unwrap()
}

/// Strictly PD 3×3 built from a bounded factor plus a ridge.
fn spd3(entries: [f64; 9], ridge: f64) -> SpdMat {
    let f = Mat::from_rows(3, 3, &entries);
    let s = f
        .matmul(&f.transpose())
        .add_scaled(ridge, &Mat::identity(3));
    SpdMat::new(SymMat::from_mat(&s).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_log_round_trip(entries in prop::array::uniform9(-1.5f64..1.5), ridge in 0.2f64..2.0) {
        let s = spd3(entries, ridge);
        let back = mat_exp(&mat_log(&s).unwrap()).unwrap();
        let err = (back.mat() - s.mat()).frob();
        prop_assert!(err < 1e-9 * s.mat().frob().max(1.0), "{err}");
    }

    #[test]
    fn log_exp_round_trip(entries in prop::array::uniform6(-2.0f64..2.0)) {
        let y = sym3(entries);
        let back = mat_log(&mat_exp(&y).unwrap()).unwrap();
        let err = (back.mat() - y.mat()).frob();
        prop_assert!(err < 1e-9 * y.mat().frob().max(1.0));
    }

    #[test]
    fn pow_composition(entries in prop::array::uniform9(-1.0f64..1.0), ridge in 0.3f64..1.5) {
        let s = spd3(entries, ridge);
        let sq = mat_pow(&s, 2.0).unwrap();
        let back = mat_pow(&sq, 0.5).unwrap();
        prop_assert!((back.mat() - s.mat()).frob() < 1e-9 * s.mat().frob());
    }

    #[test]
    fn factorizations_reconstruct(entries in prop::array::uniform9(-1.0f64..1.0), ridge in 0.2f64..1.0) {
        let s = spd3(entries, ridge);
        let l = cholesky(&s).unwrap();
        let chol_back = l.mat().matmul(&l.mat().transpose());
        prop_assert!((&chol_back - s.mat()).frob() < 1e-10 * s.mat().frob().max(1.0));
        let r = mat_sqrt(&s).unwrap();
        let sqrt_back = r.mat().matmul(r.mat());
        prop_assert!((&sqrt_back - s.mat()).frob() < 1e-10 * s.mat().frob().max(1.0));
    }

    #[test]
    fn vec_unvec_identity(entries in prop::array::uniform9(-10.0f64..10.0)) {
        let m = Mat::from_rows(3, 3, &entries);
        prop_assert_eq!(unvec_mat(3, &vec_mat(&m)), m);
    }

    #[test]
    fn frobenius_zero_iff_zero(entries in prop::array::uniform4(-5.0f64..5.0)) {
        let m = Mat::from_rows(2, 2, &entries);
        let norm = frobenius_norm(&m);
        prop_assert_eq!(norm == 0.0, entries.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn field_csv_round_trip(seed in 0u64..1000) {
        let field = spdstats::synth::crossing_field(3, 3, 0.05, seed).unwrap();
        let mut bytes = Vec::new();
        field.write_csv(&mut bytes).unwrap();
        let back = spdstats::field::TensorField::read_csv(&bytes[..]).unwrap();
        for (x, y, z) in field.coords() {
            prop_assert_eq!(
                field.get(x, y, z).unwrap().mat().data(),
                back.get(x, y, z).unwrap().mat().data()
            );
        }
    }
}
