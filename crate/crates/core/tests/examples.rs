#[path = "../examples/arfima_paths.rs"]
mod arfima_paths;
#[path = "../examples/lad_harmonic_fit.rs"]
mod lad_harmonic_fit;
#[path = "../examples/limit_law.rs"]
mod limit_law;
#[path = "../examples/monte_carlo_study.rs"]
mod monte_carlo_study;
#[path = "../examples/nkk_periodogram.rs"]
mod nkk_periodogram;
#[path = "../examples/wavelet_mra.rs"]
mod wavelet_mra;

#[test]
fn wavelet_example() {
    let r = wavelet_mra::run().unwrap();
    assert!(r.dwt_energy_error < 1e-10 && r.modwt_energy_error < 1e-10 && r.mra_error < 1e-10);
}

#[test]
fn lad_example_resists_outliers() {
    let r = lad_harmonic_fit::run().unwrap();
    assert!((r.lad_beta[0] - 2.0).abs() < 0.05 && (r.lad_beta[1] + 1.0).abs() < 0.05);
    assert!((r.ols_beta[0] - 2.0).abs() > (r.lad_beta[0] - 2.0).abs());
    assert!(r.oracle_gap.abs() < 1e-8);
}

#[test]
fn periodogram_example_finds_the_tone() {
    let r = nkk_periodogram::run().unwrap();
    assert_eq!(r.peak_k, 6);
    assert!(r.averaged.iter().all(|&v| v >= 0.0));
}

#[test]
fn limit_law_example() {
    let r = limit_law::run().unwrap();
    assert!((r.mass - 1.0).abs() < 1e-3);
    assert_eq!(r.estimated.eig[0], r.estimated.eig[1]);
}

#[test]
fn arfima_example() {
    let r = arfima_paths::run().unwrap();
    assert_eq!(r.lengths, vec![1024, 1024, 2048, 2048]);
    assert!(r.lag1[1] > r.lag1[0]);
}

#[test]
fn monte_carlo_example() {
    let s = monte_carlo_study::run_with(30).unwrap();
    assert_eq!(s.samples.len(), 30);
    assert!(s.theory_thm2.iter().all(|v| v.is_finite() && *v >= 0.0));
}
