//! Two-parameter harmonic regression at a Fourier frequency, fitted by least
//! squares or least absolute deviations.
//!
//! The LAD solver runs in three phases:
//!
//! 1. iteratively reweighted least squares on the smoothed objective
//!    `sum sqrt(r^2 + delta^2)`, shrinking `delta` geometrically;
//! 2. a polish step that tries every interpolating pair among the eight
//!    observations with the smallest residuals and keeps the best vertex;
//! 3. exact vertex descent: from the current vertex, walk along each edge
//!    (a line on which one interpolated residual stays zero) with an exact
//!    weighted-median line search until no edge direction decreases the
//!    objective. For a convex piecewise-linear function of two variables
//!    this certifies a global minimum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{NkkError, Result};

/// Default relative tolerance of the LAD solver.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest sample the pair-enumeration oracle accepts.
pub const ORACLE_MAX_N: usize = 200;

const POLISH_CANDIDATES: usize = 8;
const IRLS_STAGES: usize = 9;
const IRLS_ITERS_PER_STAGE: usize = 50;
const SINGULAR_DET: f64 = 1e-12;

pub type Matrix2 = [[f64; 2]; 2];

/// Harmonic regressors `x_q = (cos(lambda q), sin(lambda q))`, q = 0..n-1,
/// at `lambda = 2 pi k / n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicDesign {
    pub n: usize,
    pub k: usize,
    pub lambda_k: f64,
}

/// Largest admissible frequency index for `n` observations.
pub fn max_frequency_index(n: usize) -> usize {
    n.saturating_sub(1) / 2
}

/// Whether `k` is a non-degenerate Fourier index for sample size `n`.
pub fn is_admissible(n: usize, k: usize) -> bool {
    k >= 1 && k <= max_frequency_index(n) && !(2 * k).is_multiple_of(n)
}

/// Builds the design, rejecting `k = 0`, `k = n/2` and anything past `(n-1)/2`.
pub fn harmonic_design(n: usize, k: usize) -> Result<HarmonicDesign> {
    if n < 4 {
        return Err(NkkError::InvalidData(format!(
            "harmonic regression needs n >= 4, got {n}"
        )));
    }
    if !is_admissible(n, k) {
        return Err(NkkError::DegenerateFrequency { n, k });
    }
    Ok(HarmonicDesign {
        n,
        k,
        lambda_k: 2.0 * PI * k as f64 / n as f64,
    })
}

impl HarmonicDesign {
    /// Regressor at any integer time `q` (defined on all of Z).
    #[inline]
    pub fn regressor(&self, q: i64) -> [f64; 2] {
        // reduce q modulo n first so the angle stays small and exact
        let r = q.rem_euclid(self.n as i64) as f64;
        let angle = 2.0 * PI * (self.k as f64 * r % self.n as f64) / self.n as f64;
        [angle.cos(), angle.sin()]
    }

    pub fn rows(&self) -> Vec<[f64; 2]> {
        (0..self.n as i64).map(|q| self.regressor(q)).collect()
    }

    /// `Q_n = (1/n) sum_q x_q x_q^T`; equal to `I/2` for admissible `k`.
    pub fn gram(&self) -> Matrix2 {
        self.lag_product(0)
    }

    /// `M_n(h) = (1/n) sum_{q=0}^{n-1-|h|} x_q x_{q+|h|}^T`.
    pub fn lag_product(&self, h: i64) -> Matrix2 {
        let h = h.unsigned_abs() as usize;
        let mut m = [[0.0; 2]; 2];
        for q in 0..self.n.saturating_sub(h) {
            let a = self.regressor(q as i64);
            let b = self.regressor((q + h) as i64);
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += a[i] * b[j];
                }
            }
        }
        scale(m, 1.0 / self.n as f64)
    }

    /// Oscillatory part of `M_n(h)` after the product-to-sum expansion:
    /// `(1/2n) sum_{q=0}^{n-1-|h|} [[cos a_q, sin a_q], [sin a_q, -cos a_q]]`
    /// with `a_q = (2q + |h|) lambda`.
    pub fn oscillatory_remainder(&self, h: i64) -> Matrix2 {
        let h = h.unsigned_abs() as usize;
        let (mut c, mut s) = (0.0, 0.0);
        for q in 0..self.n.saturating_sub(h) {
            let [cq, sq] = self.regressor((2 * q + h) as i64);
            c += cq;
            s += sq;
        }
        let f = 0.5 / self.n as f64;
        [[f * c, f * s], [f * s, -f * c]]
    }
}

fn scale(m: Matrix2, c: f64) -> Matrix2 {
    [[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]]
}

/// Result of a harmonic fit. `objective` is the L1 sum for LAD fits and the
/// residual sum of squares for OLS fits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicFit {
    pub design: HarmonicDesign,
    pub beta: [f64; 2],
    pub residuals: Vec<f64>,
    pub objective: f64,
    pub solver_iters: usize,
    pub converged: bool,
}

impl HarmonicFit {
    /// `||beta||^2`.
    pub fn norm_sq(&self) -> f64 {
        self.beta[0] * self.beta[0] + self.beta[1] * self.beta[1]
    }
}

fn check_series(series: &[f64], design: &HarmonicDesign) -> Result<()> {
    if series.len() != design.n {
        return Err(NkkError::InconsistentInput(format!(
            "series has {} values but the design expects {}",
            series.len(),
            design.n
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(NkkError::InvalidData(
            "series contains non-finite values".into(),
        ));
    }
    Ok(())
}

#[inline]
fn dot(x: [f64; 2], b: [f64; 2]) -> f64 {
    x[0] * b[0] + x[1] * b[1]
}

fn residuals(rows: &[[f64; 2]], w: &[f64], beta: [f64; 2]) -> Vec<f64> {
    rows.iter().zip(w).map(|(x, y)| y - dot(*x, beta)).collect()
}

/// `sum_q |w_q - x_q^T beta|`.
pub fn l1_objective(rows: &[[f64; 2]], w: &[f64], beta: [f64; 2]) -> f64 {
    rows.iter()
        .zip(w)
        .map(|(x, y)| (y - dot(*x, beta)).abs())
        .sum()
}

/// Closed-form least squares: `beta = 2/n sum_q x_q w_q`, valid because
/// `Q_n = I/2` exactly at admissible frequencies.
pub fn ols_fit(series: &[f64], design: &HarmonicDesign) -> Result<HarmonicFit> {
    check_series(series, design)?;
    let rows = design.rows();
    let mut beta = [0.0; 2];
    for (x, y) in rows.iter().zip(series) {
        beta[0] += x[0] * y;
        beta[1] += x[1] * y;
    }
    let c = 2.0 / design.n as f64;
    let beta = [beta[0] * c, beta[1] * c];
    let residuals = residuals(&rows, series, beta);
    let objective = residuals.iter().map(|r| r * r).sum();
    Ok(HarmonicFit {
        design: *design,
        beta,
        residuals,
        objective,
        solver_iters: 0,
        converged: true,
    })
}

/// Least absolute deviations fit. The returned objective is a global L1
/// minimum whenever `converged` is set; `beta` is one of possibly many
/// minimisers.
pub fn lad_fit(series: &[f64], design: &HarmonicDesign, tol: f64) -> Result<HarmonicFit> {
    check_series(series, design)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(NkkError::InvalidConfig(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let rows = design.rows();
    let sol = solve_lad(&rows, series, tol);
    Ok(finish(design, &rows, series, sol))
}

/// Pair-enumeration oracle: some L1 minimiser interpolates two observations,
/// so the best interpolating pair is a global optimum. O(n^3).
pub fn lad_oracle(series: &[f64], design: &HarmonicDesign) -> Result<HarmonicFit> {
    check_series(series, design)?;
    if design.n > ORACLE_MAX_N {
        return Err(NkkError::OracleSize {
            n: design.n,
            max: ORACLE_MAX_N,
        });
    }
    let rows = design.rows();
    let sol = oracle_rows(&rows, series);
    Ok(finish(design, &rows, series, sol))
}

fn finish(design: &HarmonicDesign, rows: &[[f64; 2]], w: &[f64], sol: LadSolution) -> HarmonicFit {
    let residuals = residuals(rows, w, sol.beta);
    let objective = residuals.iter().map(|r| r.abs()).sum();
    HarmonicFit {
        design: *design,
        beta: sol.beta,
        residuals,
        objective,
        solver_iters: sol.iters,
        converged: sol.converged,
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct LadSolution {
    pub beta: [f64; 2],
    pub iters: usize,
    pub converged: bool,
}

/// Solves `x_a^T beta = y_a`, `x_b^T beta = y_b`.
fn interpolate(xa: [f64; 2], ya: f64, xb: [f64; 2], yb: f64) -> Option<[f64; 2]> {
    let det = xa[0] * xb[1] - xa[1] * xb[0];
    if det.abs() < SINGULAR_DET {
        return None;
    }
    Some([
        (ya * xb[1] - yb * xa[1]) / det,
        (xa[0] * yb - xb[0] * ya) / det,
    ])
}

pub(crate) fn oracle_rows(rows: &[[f64; 2]], w: &[f64]) -> LadSolution {
    let mut best: Option<([f64; 2], f64)> = None;
    let mut evaluated = 0;
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            if let Some(beta) = interpolate(rows[a], w[a], rows[b], w[b]) {
                evaluated += 1;
                let obj = l1_objective(rows, w, beta);
                if best.is_none_or(|(_, o)| obj < o) {
                    best = Some((beta, obj));
                }
            }
        }
    }
    LadSolution {
        beta: best.map_or([0.0; 2], |(b, _)| b),
        iters: evaluated,
        converged: best.is_some(),
    }
}

fn solve2(a: Matrix2, b: [f64; 2]) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let trace = a[0][0] + a[1][1];
    if !(det.is_finite() && det.abs() > 1e-14 * trace * trace) {
        return None;
    }
    Some([
        (b[0] * a[1][1] - b[1] * a[0][1]) / det,
        (a[0][0] * b[1] - a[1][0] * b[0]) / det,
    ])
}

fn robust_scale(w: &[f64]) -> f64 {
    crate::stats::mad(w).max(1e-300)
}

/// IRLS on `sum sqrt(r^2 + delta^2)` from `delta_0 = 1e-2 s` down to
/// `1e-10 s`, one decade per stage.
fn irls(rows: &[[f64; 2]], w: &[f64], tol: f64, start: [f64; 2]) -> ([f64; 2], usize) {
    let s = robust_scale(w);
    let mut beta = start;
    let mut iters = 0;
    let mut delta = 1e-2 * s;
    for _ in 0..IRLS_STAGES {
        let d2 = delta * delta;
        for _ in 0..IRLS_ITERS_PER_STAGE {
            iters += 1;
            let mut a = [[0.0; 2]; 2];
            let mut b = [0.0; 2];
            for (x, y) in rows.iter().zip(w) {
                let r = y - dot(*x, beta);
                let wt = 1.0 / (r * r + d2).sqrt().max(1e-300);
                a[0][0] += wt * x[0] * x[0];
                a[0][1] += wt * x[0] * x[1];
                a[1][1] += wt * x[1] * x[1];
                b[0] += wt * x[0] * y;
                b[1] += wt * x[1] * y;
            }
            a[1][0] = a[0][1];
            let Some(next) = solve2(a, b) else { break };
            let step = ((next[0] - beta[0]).powi(2) + (next[1] - beta[1]).powi(2)).sqrt();
            let size = (beta[0] * beta[0] + beta[1] * beta[1]).sqrt();
            beta = next;
            if step <= tol * (s + size) {
                break;
            }
        }
        delta *= 0.1;
    }
    (beta, iters)
}

/// Best interpolating pair among the observations closest to `beta`.
fn polish(rows: &[[f64; 2]], w: &[f64], beta: [f64; 2]) -> Option<([f64; 2], [usize; 2])> {
    let r = residuals(rows, w, beta);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs()).then(a.cmp(&b)));
    let cand = &order[..order.len().min(POLISH_CANDIDATES)];
    let mut best: Option<([f64; 2], [usize; 2], f64)> = None;
    for (i, &a) in cand.iter().enumerate() {
        for &b in &cand[i + 1..] {
            if let Some(bt) = interpolate(rows[a], w[a], rows[b], w[b]) {
                let obj = l1_objective(rows, w, bt);
                if best.is_none_or(|(_, _, o)| obj < o) {
                    best = Some((bt, [a, b], obj));
                }
            }
        }
    }
    if let Some((bt, pair, _)) = best {
        return Some((bt, pair));
    }
    // every candidate pair was collinear: pair the closest point with the
    // first non-parallel observation
    let a = order[0];
    order[1..]
        .iter()
        .find_map(|&b| interpolate(rows[a], w[a], rows[b], w[b]).map(|bt| (bt, [a, b])))
}

/// Minimiser of `sum_i c_i |s - z_i|` for positive weights `c_i`.
fn weighted_median(points: &mut [(f64, f64, usize)]) -> Option<(f64, usize)> {
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
    let total: f64 = points.iter().map(|p| p.1).sum();
    let mut acc = 0.0;
    for &(z, c, idx) in points.iter() {
        acc += c;
        if acc >= 0.5 * total {
            return Some((z, idx));
        }
    }
    points.last().map(|&(z, _, idx)| (z, idx))
}

/// Exact edge-walking descent from a vertex. Returns the final vertex, the
/// number of moves and whether optimality was certified.
fn vertex_descent(
    rows: &[[f64; 2]],
    w: &[f64],
    mut beta: [f64; 2],
    mut pivots: [usize; 2],
    max_moves: usize,
) -> ([f64; 2], usize, bool) {
    let n = rows.len();
    let wmax = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut obj = l1_objective(rows, w, beta);
    for moves in 0..max_moves {
        let r = residuals(rows, w, beta);
        let zero_tol = 1e-11 * (wmax + beta[0].abs() + beta[1].abs());
        let mut active: Vec<usize> = (0..n).filter(|&q| r[q].abs() <= zero_tol).collect();
        for p in pivots {
            if !active.contains(&p) {
                active.push(p);
            }
        }
        let is_active = |q: usize| active.contains(&q);

        // steepest edge direction among +-perp(x_a)
        let mut best: Option<(f64, [f64; 2], usize)> = None;
        for &a in &active {
            let x = rows[a];
            for sign in [1.0, -1.0] {
                let d = [-sign * x[1], sign * x[0]];
                let mut deriv = 0.0;
                for q in 0..n {
                    let c = dot(rows[q], d);
                    if is_active(q) {
                        deriv += c.abs();
                    } else {
                        deriv -= r[q].signum() * c;
                    }
                }
                if best.is_none_or(|(b, _, _)| deriv < b) {
                    best = Some((deriv, d, a));
                }
            }
        }
        let Some((deriv, d, anchor)) = best else {
            return (beta, moves, false);
        };
        if deriv >= -1e-9 {
            return (beta, moves, true);
        }

        let mut pts: Vec<(f64, f64, usize)> = (0..n)
            .filter_map(|q| {
                let c = dot(rows[q], d);
                (c.abs() > 1e-12).then(|| (r[q] / c, c.abs(), q))
            })
            .collect();
        let Some((step, enter)) = weighted_median(&mut pts) else {
            return (beta, moves, true);
        };
        let next = interpolate(rows[anchor], w[anchor], rows[enter], w[enter])
            .unwrap_or([beta[0] + step * d[0], beta[1] + step * d[1]]);
        let next_obj = l1_objective(rows, w, next);
        if next_obj >= obj - 1e-15 * (1.0 + obj) {
            // the edge is numerically flat: no strict descent remains
            return (beta, moves, true);
        }
        beta = next;
        obj = next_obj;
        pivots = [anchor, enter];
    }
    (beta, max_moves, false)
}

pub(crate) fn solve_lad(rows: &[[f64; 2]], w: &[f64], tol: f64) -> LadSolution {
    let n = rows.len();
    if w.iter().all(|&v| v == 0.0) {
        return LadSolution {
            beta: [0.0; 2],
            iters: 0,
            converged: true,
        };
    }
    let mut start = [0.0; 2];
    for (x, y) in rows.iter().zip(w) {
        start[0] += x[0] * y;
        start[1] += x[1] * y;
    }
    let c = 2.0 / n as f64;
    let start = [start[0] * c, start[1] * c];
    let (smooth, irls_iters) = irls(rows, w, tol, start);
    let Some((vertex, pivots)) = polish(rows, w, smooth) else {
        // all regressors parallel: no vertex exists
        return LadSolution {
            beta: smooth,
            iters: irls_iters,
            converged: false,
        };
    };
    let (beta, moves, certified) = vertex_descent(rows, w, vertex, pivots, 10 * n + 100);
    LadSolution {
        beta,
        iters: irls_iters + moves,
        converged: certified,
    }
}

/// Left side of Knight's identity, `|x - t| - |x|`.
pub fn knight_lhs(x: f64, t: f64) -> f64 {
    (x - t).abs() - x.abs()
}

/// `int_0^t (1{x <= s} - 1{x <= 0}) ds` in closed form for `x != 0`:
/// `(t - x)^+` when `x > 0`, `(x - t)^+` when `x < 0`.
pub fn knight_integral(x: f64, t: f64) -> f64 {
    if x > 0.0 {
        (t - x).max(0.0)
    } else {
        (x - t).max(0.0)
    }
}

/// Right side of Knight's identity, `-t sign(x) + 2 int_0^t (...) ds`.
pub fn knight_rhs(x: f64, t: f64) -> f64 {
    -t * x.signum() + 2.0 * knight_integral(x, t)
}
