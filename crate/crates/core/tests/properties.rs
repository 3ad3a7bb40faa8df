mod common;

use common::{random_tensor, rel_dist, rng};
use idmps::mps::{
    bond_spectrum, coefficient, from_dense, to_dense, truncate, verify_left_normalized,
    verify_right_normalized, verify_vidal, DecomposeOptions, FormRequest,
};
use idmps::oscillator::{
    build_bundle, integral_i_closed, overlap, wavefunction_direct, wavefunction_mps, OscillatorParams,
};
use idmps::{schmidt_decompose, TruncationPolicy, DEFAULT_RANK_TOL};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 2..=5)
}

fn form(n: usize) -> impl Strategy<Value = FormRequest> {
    prop_oneof![
        Just(FormRequest::Left),
        Just(FormRequest::Right),
        Just(FormRequest::Vidal),
        (1..n).prop_map(FormRequest::Mixed),
    ]
}

fn shape_and_form() -> impl Strategy<Value = (Vec<usize>, FormRequest)> {
    shape().prop_flat_map(|s| {
        let n = s.len();
        (Just(s), form(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_then_contract_is_identity((shape, form) in shape_and_form(), seed in any::<u64>()) {
        let t = random_tensor(&mut rng(seed), &shape);
        let m = from_dense(&t, form, &DecomposeOptions::default()).unwrap().mps;
        prop_assert!(rel_dist(&to_dense(&m).unwrap(), &t) < 1e-10);
        // single amplitudes agree with the full contraction
        let last: Vec<usize> = shape.iter().map(|d| d - 1).collect();
        let dense = to_dense(&m).unwrap();
        let z = coefficient(&m, &last).unwrap();
        prop_assert!((z - dense.data()[dense.data().len() - 1]).norm() < 1e-12);
    }

    #[test]
    fn spectra_do_not_depend_on_form((shape, form) in shape_and_form(), seed in any::<u64>()) {
        let t = random_tensor(&mut rng(seed), &shape);
        let m = from_dense(&t, form, &DecomposeOptions::default()).unwrap().mps;
        let norm2 = t.norm().powi(2);
        for cut in 1..shape.len() {
            let got = bond_spectrum(&m, cut, DEFAULT_RANK_TOL).unwrap().into_inner();
            let want = schmidt_decompose(&t, cut, DEFAULT_RANK_TOL).unwrap().coefficients;
            prop_assert_eq!(got.len(), want.len());
            for (a, b) in got.iter().zip(&want) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            prop_assert!(got.windows(2).all(|w| w[0] >= w[1]));
            let s2: f64 = got.iter().map(|s| s * s).sum();
            prop_assert!((s2 - norm2).abs() < 1e-10 * norm2);
        }
    }

    #[test]
    fn constructions_satisfy_their_gauge(shape in shape(), seed in any::<u64>()) {
        let t = random_tensor(&mut rng(seed), &shape);
        let opts = DecomposeOptions::default();
        let left = from_dense(&t, FormRequest::Left, &opts).unwrap().mps;
        prop_assert!(verify_left_normalized(&left, 1e-10, false).passed);
        let right = from_dense(&t, FormRequest::Right, &opts).unwrap().mps;
        prop_assert!(verify_right_normalized(&right, 1e-10, false).passed);
        let vidal = from_dense(&t, FormRequest::Vidal, &opts).unwrap().mps;
        prop_assert!(verify_vidal(&vidal, 1e-8).unwrap().passed);
    }

    #[test]
    fn truncation_error_is_bounded(shape in prop::collection::vec(2usize..=4, 2..=4), seed in any::<u64>(), chi in 1usize..=3) {
        let t = random_tensor(&mut rng(seed), &shape);
        let m = from_dense(&t, FormRequest::Vidal, &DecomposeOptions::default()).unwrap().mps;
        let out = truncate(&m, &TruncationPolicy::max_bond(chi).unwrap(), DEFAULT_RANK_TOL).unwrap();
        prop_assert!(out.mps.max_bond_dim() <= chi);
        let err = to_dense(&out.mps).unwrap().distance(&t).unwrap();
        let bound = out.errors.iter().map(|e| e * e).sum::<f64>().sqrt();
        prop_assert!(err <= bound + 1e-9);
        if shape.len() == 2 {
            prop_assert!((err - bound).abs() < 1e-9);
        }
    }

    #[test]
    fn oscillator_weights_and_wavefunction(
        n in 0usize..=6,
        extra in 0usize..=3,
        theta in -3.1f64..3.1,
        phi in -3.1f64..3.1,
        varphi in -3.1f64..3.1,
        x in prop::array::uniform3(-2.5f64..2.5),
    ) {
        let p = OscillatorParams::new(n, 1.0, theta, phi, varphi, n + 1 + extra).unwrap();
        prop_assert!((p.alphas().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((p.gammas().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let b = build_bundle(&p).unwrap();
        prop_assert!((wavefunction_mps(&b, x) - wavefunction_direct(&p, x)).abs() < 1e-8);
        let mut want: Vec<f64> = p.alphas().iter().map(|a| a.sqrt()).collect();
        want.sort_by(|a, b| b.total_cmp(a));
        let mut got = bond_spectrum(&b.mps, 1, DEFAULT_RANK_TOL).unwrap().into_inner();
        got.resize(want.len(), 0.0);
        for (a, w) in got.iter().zip(&want) {
            prop_assert!((a - w).abs() < 1e-8);
        }
    }

    #[test]
    fn overlap_parity_and_bound(i in 0usize..40, j in 0usize..12, omega in 0.2f64..5.0) {
        let v = overlap(i, j, omega);
        if (i + j) % 2 == 1 {
            prop_assert_eq!(v, 0.0);
            prop_assert_eq!(integral_i_closed(i, j, omega), 0.0);
        }
        prop_assert!(v.abs() <= 1.0 + 1e-12);
    }
}
