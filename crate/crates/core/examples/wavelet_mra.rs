//! Filter tables, DWT/MODWT energy bookkeeping and additive MRA
//! reconstruction of a noisy two-tone signal.

use std::f64::consts::PI;

use nkk::wavelet::{dwt, filter_bank, modwt, modwt_mra, mra, FilterName};

pub struct Report {
    pub dwt_energy_error: f64,
    pub modwt_energy_error: f64,
    pub mra_error: f64,
}

pub fn run() -> nkk::Result<Report> {
    let n = 256;
    let x: Vec<f64> = (0..n)
        .map(|t| {
            let t = t as f64;
            (2.0 * PI * t / 64.0).sin()
                + 0.3 * (2.0 * PI * t / 5.0).cos()
                + 0.05 * ((t * 7.3).sin())
        })
        .collect();
    let energy: f64 = x.iter().map(|v| v * v).sum();

    for name in FilterName::ALL {
        let f = filter_bank(name)?;
        println!("{name:>4}: L = {}, g = {:?}", f.len(), &f.g[..2]);
    }

    let la8 = filter_bank(FilterName::La8)?;
    let d = dwt(&x, &la8, 4)?;
    let m = modwt(&x, &la8, 4)?;
    let rel = |e: f64| (e - energy).abs() / energy;
    println!("DWT energy error   {:.2e}", rel(d.energy()));
    println!("MODWT energy error {:.2e}", rel(m.energy()));

    let parts = modwt_mra(&m, &la8)?;
    for (j, detail) in parts.details.iter().enumerate() {
        let e: f64 = detail.iter().map(|v| v * v).sum();
        println!("detail {}: energy {:8.3}", j + 1, e);
    }
    let back = parts.reconstruct();
    let mra_error = x
        .iter()
        .zip(&back)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("MODWT MRA max reconstruction error {mra_error:.2e}");
    let dwt_back = mra(&d, &la8)?.reconstruct();
    let dwt_error = x
        .iter()
        .zip(&dwt_back)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("DWT MRA max reconstruction error   {dwt_error:.2e}");

    Ok(Report {
        dwt_energy_error: rel(d.energy()),
        modwt_energy_error: rel(m.energy()),
        mra_error: mra_error.max(dwt_error),
    })
}

#[allow(dead_code)]
fn main() -> nkk::Result<()> {
    run().map(|_| ())
}
