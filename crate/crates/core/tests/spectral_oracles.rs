//! Transform-layer checks against independent computation paths: direct DFT
//! sums, Parseval, and multiplier semigroup behavior.

mod common;

use common::{direct_dft, direct_idft, rel_err};
use fkdv_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const L64: f64 = 64.0 * std::f64::consts::PI;

fn mean_removed_gaussian(grid: &Grid) -> Field {
    let raw = Field::from_fn(grid.clone(), |x| (-x * x).exp()).unwrap();
    let m = raw.mean();
    Field::from_fn(grid.clone(), move |x| (-x * x).exp() - m).unwrap()
}

#[test]
fn fft_path_matches_direct_dft() {
    let grid = Grid::new(128, 23.0).unwrap();
    let f = Field::from_fn(grid.clone(), |x| {
        (-0.3 * x * x).exp() * (1.7 * x).cos() + 0.2 * (0.5 * x).sin()
    })
    .unwrap();
    let oracle = direct_dft(f.samples(), grid.length());
    let max = oracle.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (a, b) in f.spectrum().iter().zip(&oracle) {
        assert!((a - b).norm() <= 1e-11 * max);
    }
    let back = direct_idft(&oracle, grid.length());
    for (a, b) in f.samples().iter().zip(&back) {
        assert!((a - b).abs() <= 1e-11);
    }
}

#[test]
fn negative_order_derivative_matches_direct_oracle() {
    // D^{-5/4} of the mean-removed Gaussian at x = 0, frozen from the
    // direct-summation transform oracle on this exact grid.
    let grid = Grid::new(2048, L64).unwrap();
    let f = mean_removed_gaussian(&grid);
    let d = fractional_derivative(&f, -1.25, ZeroModePolicy::Annihilate).unwrap();
    let at_zero = d.samples()[grid.n() / 2];
    const GOLDEN: f64 = 4.098283241106900;
    assert!(
        rel_err(at_zero, GOLDEN) < 1e-12,
        "production {at_zero}, golden {GOLDEN}"
    );
}

#[test]
fn hermitian_multiplier_output_is_real_via_direct_path() {
    // apply a negative-order multiplier, then compare samples with the
    // direct inverse of the directly multiplied direct spectrum
    let grid = Grid::new(64, 17.0).unwrap();
    let f = Field::from_fn(grid.clone(), |x| (0.7 * x).sin() + 0.3 * (1.4 * x).cos()).unwrap();
    let d = fractional_derivative(&f, -0.5, ZeroModePolicy::Annihilate).unwrap();
    let mut oracle_spec = direct_dft(f.samples(), grid.length());
    for (i, v) in oracle_spec.iter_mut().enumerate() {
        let xi = grid.freqs()[i];
        *v *= if xi == 0.0 { 0.0 } else { xi.abs().powf(-0.5) };
    }
    let oracle = direct_idft(&oracle_spec, grid.length());
    for (a, b) in d.samples().iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Parseval: sum f^2 dx = (1/L) sum |F|^2 on random fields.
    #[test]
    fn parseval_identity(seed in 0u64..1000) {
        let grid = Grid::new(128, 41.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..128).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = Field::from_samples(grid.clone(), samples).unwrap();
        let physical: f64 = f.samples().iter().map(|v| v * v).sum::<f64>() * grid.dx();
        let spectral: f64 =
            f.spectrum().iter().map(|v| v.norm_sqr()).sum::<f64>() / grid.length();
        prop_assert!((physical - spectral).abs() <= 1e-12 * physical);
    }

    // D^s then D^{-s} is the identity on mean-free band-limited fields.
    #[test]
    fn multiplier_semigroup(seed in 0u64..1000, s in 0.1f64..2.0) {
        let grid = Grid::new(128, 30.0).unwrap();
        let f = experiments::random_band_limited(&grid, seed, 40);
        let fwd = fractional_derivative(&f, s, ZeroModePolicy::Annihilate).unwrap();
        let back = fractional_derivative(&fwd, -s, ZeroModePolicy::Annihilate).unwrap();
        prop_assert!(back.l2_distance(&f) <= 1e-10 * f.l2_norm());
    }

    // Outputs of Hermitian multipliers stay real: the spectrum keeps
    // conjugate symmetry under |xi|^s.
    #[test]
    fn realness_preserved(seed in 0u64..1000) {
        let grid = Grid::new(64, 12.0).unwrap();
        let f = experiments::random_band_limited(&grid, seed, 20);
        let d = fractional_derivative(&f, 0.75, ZeroModePolicy::Annihilate).unwrap();
        let sp = d.spectrum();
        let n = grid.n();
        let scale = d.l2_norm();
        for i in 1..n / 2 {
            prop_assert!((sp[i] - sp[n - i].conj()).norm() <= 1e-12 * (1.0 + scale));
        }
    }
}
