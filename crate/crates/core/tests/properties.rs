//! Property tests for the transform layer, the outer factorization, and the
//! completion invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specfact_core::completion::{complete, truncate_tail, LastRowData};
use specfact_core::fourier::{FourierSeries, UnitCircleGrid};
use specfact_core::linalg::{self, CMat};
use specfact_core::outer::{outer_defect, outer_factor};

fn series_strategy(max_abs_lo: i64, max_len: usize) -> impl Strategy<Value = FourierSeries> {
    (
        -max_abs_lo..=max_abs_lo,
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len),
    )
        .prop_map(|(lo, parts)| {
            FourierSeries::new(
                lo,
                parts
                    .into_iter()
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn grid_round_trip_is_identity(s in series_strategy(8, 12)) {
        let grid = UnitCircleGrid::new(64).unwrap();
        let samples = s.to_samples(&grid).unwrap();
        let back = FourierSeries::from_samples(&samples, s.lo(), s.hi()).unwrap();
        let scale = s.energy().max(1e-30);
        for (n, c) in s.iter() {
            prop_assert!((back.coeff(n) - c).norm() <= 1e-12 * scale, "n = {n}");
        }
    }

    #[test]
    fn parseval_holds_for_band_limited_series(s in series_strategy(8, 12)) {
        let grid = UnitCircleGrid::new(64).unwrap();
        let samples = s.to_samples(&grid).unwrap();
        let series_energy: f64 = s.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let sample_energy: f64 =
            samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / grid.len() as f64;
        prop_assert!((series_energy - sample_energy).abs() <= 1e-12 * series_energy.max(1e-30));
    }

    #[test]
    fn multiplication_matches_pointwise_products(
        a in series_strategy(4, 8),
        b in series_strategy(4, 8),
    ) {
        let grid = UnitCircleGrid::new(64).unwrap();
        let product = a.multiply(&b);
        let lhs = product.to_samples(&grid).unwrap();
        let sa = a.to_samples(&grid).unwrap();
        let sb = b.to_samples(&grid).unwrap();
        let scale = product.energy().max(1e-30);
        for k in 0..grid.len() {
            prop_assert!((lhs[k] - sa[k] * sb[k]).norm() <= 1e-11 * scale.max(1.0));
        }
    }

    #[test]
    fn conjugation_is_an_exact_involution(s in series_strategy(8, 12)) {
        prop_assert_eq!(s.conjugate().conjugate(), s);
    }

    #[test]
    fn negative_energy_vanishes_exactly_on_analytic_series(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..10),
        lo in 0i64..6,
    ) {
        let s = FourierSeries::new(
            lo,
            coeffs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect(),
        );
        prop_assert_eq!(s.negative_energy(), 0.0);
    }

    #[test]
    fn outer_factor_reproduces_smooth_positive_moduli(
        a0 in -0.5f64..0.5,
        a in prop::collection::vec(-0.4f64..0.4, 3),
        b in prop::collection::vec(-0.4f64..0.4, 3),
    ) {
        let grid = UnitCircleGrid::new(256).unwrap();
        let modulus: Vec<f64> = (0..grid.len())
            .map(|k| {
                let t = grid.angle(k);
                let mut log = a0;
                for j in 0..3 {
                    log += a[j] * ((j + 1) as f64 * t).cos() + b[j] * ((j + 1) as f64 * t).sin();
                }
                log.exp()
            })
            .collect();
        let of = outer_factor(&modulus, &grid, 127).unwrap();
        let v0 = of.value_at_zero();
        prop_assert!(v0.re > 0.0);
        prop_assert!(v0.im.abs() <= 1e-10 * v0.re);
        let realized = of.coeffs().to_samples(&grid).unwrap();
        let max = modulus.iter().copied().fold(0.0, f64::max);
        for (s, m) in realized.iter().zip(&modulus) {
            prop_assert!((s.norm() - m).abs() <= 1e-8 * max);
        }
        prop_assert!(outer_defect(of.coeffs(), &grid) <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completions_are_unitary_with_unit_determinant(
        seed in 0u64..1_000_000,
        m in 2usize..=3,
        n in 1usize..=4,
    ) {
        let grid = UnitCircleGrid::new(128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tails: Vec<FourierSeries> = (0..m - 1)
            .map(|_| {
                FourierSeries::new(
                    -(n as i64),
                    (0..n)
                        .map(|_| Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)))
                        .collect(),
                )
            })
            .collect();
        let f_plus = FourierSeries::new(
            0,
            std::iter::once(Complex64::new(rng.random_range(0.5..1.5), 0.0))
                .chain((0..n).map(|_| {
                    Complex64::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2))
                }))
                .collect(),
        );
        let data = LastRowData::new(tails, f_plus, n).unwrap();
        let out = complete(&data, &grid).unwrap();

        prop_assert_eq!(out.unitary.degree(), n);
        let realized = out.unitary.realize(&grid).unwrap();
        prop_assert!(linalg::unitarity_defect(&realized) <= 1e-9);
        for e in &realized {
            prop_assert!((e.determinant() - Complex64::ONE).norm() <= 1e-9);
        }
        prop_assert!(out.gram_defect <= 1e-9);
        prop_assert!(out.residual <= 1e-10);
    }
}

/// With full (not band-limited) tails the completion residual decays, on
/// average over random smooth instances, as the truncation order grows.
#[test]
fn refinement_improves_on_average() {
    let grid = UnitCircleGrid::new(256).unwrap();
    let orders = [2usize, 4, 8, 16, 32];
    let mut mean = [0.0f64; 5];
    let instances = 8;
    for seed in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        // geometric tail, full length
        let rho = 0.65f64;
        let full_tail = FourierSeries::new(
            -60,
            (0..60)
                .map(|i| {
                    let level = rho.powi(60 - i);
                    Complex64::new(
                        level * rng.random_range(-1.0..1.0),
                        level * rng.random_range(-1.0..1.0),
                    )
                })
                .collect(),
        );
        let f_plus = FourierSeries::new(
            0,
            vec![
                Complex64::ONE,
                Complex64::new(0.3, 0.1),
                Complex64::new(-0.05, 0.02),
            ],
        );
        let f_row = {
            let mut samples = vec![CMat::identity(2, 2); grid.len()];
            for (k, v) in full_tail.to_samples(&grid).unwrap().into_iter().enumerate() {
                samples[k][(1, 0)] = v;
            }
            for (k, v) in f_plus.to_samples(&grid).unwrap().into_iter().enumerate() {
                samples[k][(1, 1)] = v;
            }
            samples
        };
        let f_energy: f64 =
            (f_row.iter().map(|s| s.norm_squared()).sum::<f64>() / grid.len() as f64).sqrt();

        for (i, &n) in orders.iter().enumerate() {
            let tail_n = truncate_tail(&full_tail, n).series;
            let data = LastRowData::new(vec![tail_n], f_plus.clone(), n).unwrap();
            let out = complete(&data, &grid).unwrap();
            // apply the completion to the FULL row and measure what is left
            let u = out.unitary.realize(&grid).unwrap();
            let product: Vec<CMat> = f_row.iter().zip(&u).map(|(f, e)| f * e).collect();
            let gfn = specfact_core::fourier::GridMatrixFunction::new(product).unwrap();
            let series = specfact_core::fourier::MatrixSeries::from_grid(
                &gfn,
                -grid.max_band(),
                grid.max_band(),
            )
            .unwrap();
            mean[i] += series.negative_energy() / f_energy / instances as f64;
        }
    }
    for w in mean.windows(2) {
        assert!(
            w[1] <= w[0] * 1.05 + 1e-14,
            "average residual increased along {orders:?}: {mean:?}"
        );
    }
    // and the largest order is genuinely accurate for a rho = 0.65 tail
    assert!(mean[4] < 1e-3, "residuals {mean:?}");
}
