//! Fractional-integration weights and simulated ARFIMA paths.

use nkk::arfima::{frac_coeffs, simulate_stream, ArfimaSpec};
use nkk::stats::{mean, std_dev};

pub struct Report {
    pub lengths: Vec<usize>,
    pub lag1: Vec<f64>,
}

fn lag1_autocorrelation(x: &[f64]) -> f64 {
    let m = mean(x);
    let num: f64 = x.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
    let den: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
    num / den
}

pub fn run() -> nkk::Result<Report> {
    let pi = frac_coeffs(0.3, 10_000);
    println!(
        "pi_k for d = 0.3: {:.4} {:.4} {:.4} ... pi_10000 = {:.3e}",
        pi[1], pi[2], pi[3], pi[10_000]
    );

    let specs = [
        ("ARFIMA(0,0.1,0)", ArfimaSpec::fractional(0.1, 5.0, 1024)),
        ("ARFIMA(0,0.3,0)", ArfimaSpec::fractional(0.3, 5.0, 1024)),
        (
            "ARFIMA(1,0.1,1)",
            ArfimaSpec::arfima11(0.3, -0.2, 0.1, 5.0, 2048),
        ),
        (
            "ARFIMA(1,0.3,1)",
            ArfimaSpec::arfima11(0.3, -0.2, 0.3, 5.0, 2048),
        ),
    ];
    let mut lengths = Vec::new();
    let mut lag1 = Vec::new();
    for (label, spec) in &specs {
        let z = simulate_stream(spec, 2024, 0)?;
        let r1 = lag1_autocorrelation(&z);
        println!(
            "{label}: n = {}, mean {:+.3}, sd {:.3}, lag-1 autocorrelation {:.3}",
            z.len(),
            mean(&z),
            std_dev(&z),
            r1
        );
        lengths.push(z.len());
        lag1.push(r1);
    }
    Ok(Report { lengths, lag1 })
}

#[allow(dead_code)]
fn main() -> nkk::Result<()> {
    run().map(|_| ())
}
