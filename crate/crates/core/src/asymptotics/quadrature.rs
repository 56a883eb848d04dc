//! Adaptive Gauss–Kronrod quadrature and Wynn-epsilon acceleration for the
//! characteristic-function inversions.

#![allow(clippy::excessive_precision)]

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point
/// Gauss rule.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: (f64, f64),
    tol: f64,
    depth: u32,
) -> f64 {
    let (est, err) = whole;
    if err <= tol || depth == 0 || (b - a).abs() < 1e-14 * (a.abs() + b.abs()) {
        return est;
    }
    let m = 0.5 * (a + b);
    let left = gk15(f, a, m);
    let right = gk15(f, m, b);
    adaptive_rec(f, a, m, left, 0.5 * tol, depth - 1)
        + adaptive_rec(f, m, b, right, 0.5 * tol, depth - 1)
}

/// Adaptive G7-K15 integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_rec(f, a, b, gk15(f, a, b), tol, 40)
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
pub fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    if n < 3 {
        return *s.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur = s.to_vec();
    let mut best = s[n - 1];
    for k in 1..n {
        if cur.len() < 2 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 || !diff.is_finite() {
                // exact stagnation: the even column already converged
                return if k % 2 == 1 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if k % 2 == 0 {
            if let Some(&v) = next.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
        prev = cur;
        cur = next;
    }
    best
}

/// How the tail of `[start, inf)` is cut into panels.
#[derive(Clone, Copy, Debug)]
pub enum Panels {
    /// Equal panels of the given width (half a period of the oscillation).
    Uniform(f64),
    /// Panels doubling in width, for non-oscillating tails.
    Geometric,
}

const MAX_PANELS: usize = 400_000;
const WYNN_WINDOW: usize = 24;

/// `int_0^inf f(t) dt`: adaptive quadrature on `[0, start]`, then panels
/// summed until either `negligible(t)` holds at a panel end or the Wynn
/// extrapolation of the partial sums settles to `tol`.
pub fn integrate_to_infinity<F, G>(
    f: &F,
    start: f64,
    panels: Panels,
    tol: f64,
    negligible: G,
) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> bool,
{
    let panel_tol = tol * 1e-3;
    let mut sum = integrate(f, 0.0, start, panel_tol);
    let mut partials: Vec<f64> = Vec::new();
    let mut last_est = f64::NAN;
    let mut settled = 0;
    let mut a = start;
    for i in 0..MAX_PANELS {
        let b = match panels {
            Panels::Uniform(width) => start + (i + 1) as f64 * width,
            Panels::Geometric => 2.0 * a,
        };
        sum += integrate(f, a, b, panel_tol);
        a = b;
        if negligible(b) {
            return sum;
        }
        partials.push(sum);
        if partials.len() > WYNN_WINDOW {
            partials.remove(0);
        }
        if partials.len() >= 8 {
            let est = wynn_epsilon(&partials);
            if (est - last_est).abs() <= tol * last_est.abs().max(1.0) {
                settled += 1;
                if settled >= 3 {
                    return est;
                }
            } else {
                settled = 0;
            }
            last_est = est;
        }
    }
    if last_est.is_finite() {
        last_est
    } else {
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_smooth_integrals() {
        let v = integrate(&|x: f64| x * x * x - x, 0.0, 2.0, 1e-14);
        assert!((v - 2.0).abs() < 1e-13);
        let v = integrate(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-14);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // partial sums of 1 - 1/2 + 1/3 - ... converge to ln 2
        let mut s = 0.0;
        let partials: Vec<f64> = (1..=15)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        assert!((wynn_epsilon(&partials) - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_tail() {
        // int_0^inf sin(t)/t dt = pi/2
        let f = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        let v = integrate_to_infinity(
            &f,
            1.0,
            Panels::Uniform(std::f64::consts::PI),
            1e-12,
            |_| false,
        );
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-9, "{v}");
    }

    #[test]
    fn geometric_tail() {
        // int_0^inf 1/(1+t^2) dt = pi/2
        let f = |t: f64| 1.0 / (1.0 + t * t);
        let v = integrate_to_infinity(&f, 1.0, Panels::Geometric, 1e-12, |t| 1.0 / t < 1e-13);
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-9, "{v}");
    }
}
