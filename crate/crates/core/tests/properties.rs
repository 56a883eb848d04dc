use std::f64::consts::PI;

use proptest::prelude::*;

use nkk::arfima::{frac_coeffs, fractional_integrate};
use nkk::asymptotics::{
    limit_covariance, sign_autocov, sign_sequence, ChiSquareMixture, SignAutocov,
};
use nkk::cli::config_digest;
use nkk::lad::{
    harmonic_design, is_admissible, l1_objective, lad_fit, lad_oracle, ols_fit, DEFAULT_TOL,
};
use nkk::montecarlo::{kde, ks_statistic};
use nkk::spectral::{
    classical_periodogram, default_frequencies, fourier_periodogram, nkk_periodogram,
};
use nkk::wavelet::{dwt, filter_bank, modwt, modwt_mra, mra, FilterName};

fn filter_name() -> impl Strategy<Value = FilterName> {
    prop_oneof![
        Just(FilterName::Haar),
        Just(FilterName::D4),
        Just(FilterName::La8)
    ]
}

/// `(n, k, series)` with `k` admissible for `n`.
fn harmonic_instance(max_n: usize) -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (8..=max_n).prop_flat_map(|n| {
        let ks: Vec<usize> = (1..n).filter(|&k| is_admissible(n, k)).collect();
        (
            Just(n),
            proptest::sample::select(ks),
            prop::collection::vec(-10.0..10.0f64, n),
        )
    })
}

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filter_tables_satisfy_identities(name in filter_name()) {
        let f = filter_bank(name).unwrap();
        let sum_g: f64 = f.g.iter().sum();
        let sum_h: f64 = f.h.iter().sum();
        prop_assert!((sum_g - 2f64.sqrt()).abs() < 1e-12);
        prop_assert!(sum_h.abs() < 1e-12);
        let l = f.len();
        for i in 0..l {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((f.h[i] - sign * f.g[l - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn dwt_preserves_energy_and_reconstructs(
        name in filter_name(),
        levels in 1usize..=4,
        blocks in 4usize..=24,
        seed in prop::collection::vec(-5.0..5.0f64, 384),
    ) {
        let n = blocks * 16;
        let x = &seed[..n];
        let f = filter_bank(name).unwrap();
        let d = dwt(x, &f, levels).unwrap();
        let e = energy(x);
        prop_assert!((d.energy() - e).abs() <= 1e-10 * e);
        let back = mra(&d, &f).unwrap().reconstruct();
        let err: f64 = x.iter().zip(&back).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-10 * e.sqrt());
    }

    #[test]
    fn modwt_preserves_energy_reconstructs_and_commutes_with_shifts(
        name in filter_name(),
        levels in 1usize..=4,
        x in prop::collection::vec(-5.0..5.0f64, 8..300),
        shift in 0usize..300,
    ) {
        let f = filter_bank(name).unwrap();
        let n = x.len();
        let m = modwt(&x, &f, levels).unwrap();
        let e = energy(&x);
        prop_assert!((m.energy() - e).abs() <= 1e-10 * e.max(1e-300));
        let back = modwt_mra(&m, &f).unwrap().reconstruct();
        let err: f64 = x.iter().zip(&back).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-10 * e.sqrt().max(1e-300));

        let s = shift % n;
        let shifted: Vec<f64> = (0..n).map(|t| x[(t + n - s) % n]).collect();
        let ms = modwt(&shifted, &f, levels).unwrap();
        for j in 0..levels {
            for t in 0..n {
                prop_assert!((ms.wavelet[j][t] - m.wavelet[j][(t + n - s) % n]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn lad_matches_oracle_and_beats_ols((n, k, w) in harmonic_instance(40)) {
        let design = harmonic_design(n, k).unwrap();
        let fit = lad_fit(&w, &design, DEFAULT_TOL).unwrap();
        let oracle = lad_oracle(&w, &design).unwrap();
        prop_assert!((fit.objective - oracle.objective).abs() <= 1e-8 * (1.0 + oracle.objective));
        let ols = ols_fit(&w, &design).unwrap();
        prop_assert!(fit.objective <= l1_objective(&design.rows(), &w, ols.beta) + 1e-9);
        let recomputed: f64 = fit.residuals.iter().map(|r| r.abs()).sum();
        prop_assert!((recomputed - fit.objective).abs() <= 1e-12 * (1.0 + fit.objective));
        let again = lad_fit(&w, &design, DEFAULT_TOL).unwrap();
        prop_assert_eq!(fit.beta, again.beta);
    }

    #[test]
    fn lad_is_scale_equivariant((n, k, w) in harmonic_instance(60), c in 0.01..100.0f64) {
        let design = harmonic_design(n, k).unwrap();
        let base = lad_fit(&w, &design, DEFAULT_TOL).unwrap();
        let scaled: Vec<f64> = w.iter().map(|v| c * v).collect();
        let fit = lad_fit(&scaled, &design, DEFAULT_TOL).unwrap();
        prop_assert!((fit.objective - c * base.objective).abs() <= 1e-8 * (1.0 + fit.objective));
        let neg: Vec<f64> = w.iter().map(|v| -v).collect();
        let flipped = lad_fit(&neg, &design, DEFAULT_TOL).unwrap();
        prop_assert!((flipped.objective - base.objective).abs() <= 1e-8 * (1.0 + base.objective));
    }

    #[test]
    fn lad_objective_is_invariant_under_circular_shift((n, k, w) in harmonic_instance(60), shift in 1usize..60) {
        let design = harmonic_design(n, k).unwrap();
        let s = shift % n;
        let shifted: Vec<f64> = (0..n).map(|q| w[(q + s) % n]).collect();
        let a = lad_fit(&w, &design, DEFAULT_TOL).unwrap();
        let b = lad_fit(&shifted, &design, DEFAULT_TOL).unwrap();
        prop_assert!((a.objective - b.objective).abs() <= 1e-8 * (1.0 + a.objective));
    }

    #[test]
    fn periodograms_are_nonnegative_and_consistent(w in prop::collection::vec(-3.0..3.0f64, 16..80)) {
        let ks = default_frequencies(w.len());
        let classical = classical_periodogram(&w, &ks).unwrap();
        let robust = nkk_periodogram(&w, &ks, DEFAULT_TOL).unwrap();
        prop_assert!(classical.values.iter().chain(&robust.values).all(|&v| v >= 0.0));
        prop_assert!(robust.freqs.windows(2).all(|f| f[1] > f[0]));
        for (&k, &v) in ks.iter().zip(&classical.values) {
            let f = fourier_periodogram(&w, k);
            prop_assert!((v - f).abs() <= 1e-8 * f.max(1e-12));
        }
    }

    #[test]
    fn signs_and_autocovariances(r in prop::collection::vec(-5.0..5.0f64, 20..200), lag in 0usize..9) {
        let s = sign_sequence(&r);
        let neg: Vec<f64> = r.iter().map(|v| -v).collect();
        prop_assert!(s.iter().zip(sign_sequence(&neg)).all(|(a, b)| *a == -b));
        let ac = sign_autocov(&s, lag).unwrap();
        prop_assert!(ac.gamma[0] >= 0.0 && ac.gamma[0] <= 1.0);
        prop_assert!(ac.gamma.iter().all(|g| g.abs() <= ac.gamma[0] + 1e-15));
    }

    #[test]
    fn limit_covariance_is_isotropic_and_psd(
        gamma in prop::collection::vec(-1.0..1.0f64, 1..12),
        lambda in 0.0..PI,
        f0 in 0.05..2.0f64,
    ) {
        let mut gamma = gamma;
        gamma[0] = gamma[0].abs() + 0.01;
        let ac = SignAutocov { max_lag: gamma.len() - 1, n_used: 1000, gamma };
        let law = limit_covariance(&ac, lambda, f0).unwrap();
        prop_assert!((law.sigma[0][1] - law.sigma[1][0]).abs() < 1e-12);
        prop_assert!(law.sigma[0][1].abs() < 1e-12);
        prop_assert!(law.eig[0] >= law.eig[1] && law.eig[1] >= 0.0);
        if !law.clamped {
            prop_assert!((law.trace() - law.eig[0] - law.eig[1]).abs() < 1e-10 * (1.0 + law.trace().abs()));
        }
    }

    #[test]
    fn mixture_cdf_and_density_are_valid(a in 0.01..5.0f64, b in 0.0..5.0f64) {
        let m = ChiSquareMixture::new(a, b).unwrap();
        let grid: Vec<f64> = (0..25).map(|i| m.mean() * 0.25 * i as f64).collect();
        let cdf: Vec<f64> = grid.iter().map(|&y| m.cdf(y)).collect();
        prop_assert_eq!(cdf[0], 0.0);
        prop_assert!(cdf.windows(2).all(|c| c[1] >= c[0] - 1e-9));
        prop_assert!(cdf.iter().all(|c| (0.0..=1.0).contains(c)));
        prop_assert!(grid[1..].iter().all(|&y| m.density(y) >= 0.0));
    }

    #[test]
    fn fractional_weights_decrease_and_integration_is_linear(
        d in 0.01..0.99f64,
        u in prop::collection::vec(-3.0..3.0f64, 1..120),
        c in -5.0..5.0f64,
    ) {
        let pi = frac_coeffs(d, 200);
        prop_assert!(pi[1..].windows(2).all(|w| w[1] < w[0]));
        let d = d.min(0.49);
        let z = fractional_integrate(&u, d);
        let cu: Vec<f64> = u.iter().map(|v| c * v).collect();
        let cz = fractional_integrate(&cu, d);
        for (a, b) in z.iter().zip(&cz) {
            prop_assert!((c * a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn ks_distance_is_a_probability(x in prop::collection::vec(0.0..10.0f64, 1..100)) {
        let ks = ks_statistic(&x, |y| 1.0 - (-y).exp());
        prop_assert!((0.0..=1.0).contains(&ks));
    }

    #[test]
    fn kde_is_symmetric_for_symmetric_samples(half in prop::collection::vec(0.1..5.0f64, 3..40), c in -3.0..3.0f64) {
        let samples: Vec<f64> = half.iter().flat_map(|h| [c + h, c - h]).collect();
        let grid: Vec<f64> = (0..11).map(|i| 0.3 * i as f64).collect();
        let right: Vec<f64> = grid.iter().map(|g| c + g).collect();
        let left: Vec<f64> = grid.iter().map(|g| c - g).collect();
        let (a, b) = (kde(&samples, &right).unwrap(), kde(&samples, &left).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(*x >= 0.0 && (x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn digest_ignores_field_order(a in 0u32..1000, b in -5.0..5.0f64, name in "[a-z]{1,8}") {
        let one: serde_json::Value =
            serde_json::from_str(&format!(r#"{{"a": {a}, "b": {b}, "name": "{name}"}}"#)).unwrap();
        let two: serde_json::Value =
            serde_json::from_str(&format!(r#"{{"name": "{name}", "b": {b}, "a": {a}}}"#)).unwrap();
        prop_assert_eq!(config_digest(&one), config_digest(&two));
    }
}
