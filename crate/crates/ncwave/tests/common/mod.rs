//! Shared helpers for the integration suites: preset loading, field
//! scanning, peak tracking, and autocorrelation.

#![allow(dead_code)]

use std::path::PathBuf;

use ncwave::cli::ScenarioFile;
use ncwave::darboux::{quasi_gramian_solution, SolitonScenario};
use ncwave::lax::{FieldGrid, GridMode};
use ncwave::ncalgebra::ComplexMatrix;
use num_complex::Complex64;

pub fn preset_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("presets")
        .join(name)
}

pub fn load_preset(name: &str) -> ScenarioFile {
    ScenarioFile::load(&preset_path(name)).expect("preset parses")
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// 9×9 patch grid centered at (x0, t0) with spacings (hx, ht).
pub fn patch_grid(
    center: (f64, f64),
    h: (f64, f64),
    mode: GridMode,
    f: impl Fn(f64, f64) -> ncwave::Result<ComplexMatrix> + Sync,
) -> FieldGrid {
    FieldGrid::generate(
        (0..9).map(|i| center.0 + h.0 * (i as f64 - 4.0)).collect(),
        (0..9).map(|i| center.1 + h.1 * (i as f64 - 4.0)).collect(),
        mode,
        f,
    )
    .expect("patch grid")
}

/// Peak |component| of a noncommutative field over the window, coarse scan
/// plus local refinement.
pub fn nc_component_peak(
    scn: &SolitonScenario,
    comp: (usize, usize),
    window: ((f64, f64), (f64, f64)),
    coarse: (usize, usize),
) -> f64 {
    let ((x0, x1), (t0, t1)) = window;
    let eval = |x: f64, t: f64| -> f64 {
        quasi_gramian_solution(scn, x, t)
            .map(|u| u.get(comp.0, comp.1).norm())
            .unwrap_or(f64::NAN)
    };
    let mut best = (0.0f64, 0.0f64, 0.0f64);
    for t in linspace(t0, t1, coarse.1) {
        for x in linspace(x0, x1, coarse.0) {
            let v = eval(x, t);
            if v > best.0 {
                best = (v, x, t);
            }
        }
    }
    let (mut v0, xc, tc) = best;
    let dx = (x1 - x0) / (coarse.0 - 1) as f64;
    let dt = (t1 - t0) / (coarse.1 - 1) as f64;
    for t in linspace(tc - dt, tc + dt, 17) {
        for x in linspace(xc - dx, xc + dx, 33) {
            v0 = v0.max(eval(x, t));
        }
    }
    v0
}

/// Largest local maxima of a 1D profile, descending order.
pub fn local_maxima(values: &[f64]) -> Vec<(usize, f64)> {
    let mut peaks = Vec::new();
    for i in 1..values.len() - 1 {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] {
            peaks.push((i, values[i]));
        }
    }
    peaks.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    peaks
}

/// Unbiased normalized autocorrelation peak beyond `min_lag_frac` of the
/// window; returns (peak value, lag in time units).
pub fn autocorr_peak(signal: &[f64], dt: f64, min_lag_frac: f64) -> (f64, f64) {
    let n = signal.len();
    let mean = signal.iter().sum::<f64>() / n as f64;
    let z: Vec<f64> = signal.iter().map(|s| s - mean).collect();
    let denom = z.iter().map(|a| a * a).sum::<f64>() / n as f64;
    let mut best = (f64::MIN, 0.0);
    let lo = ((min_lag_frac * n as f64) as usize).max(1);
    for lag in lo..(3 * n / 4) {
        let m = n - lag;
        let r = (0..m).map(|i| z[i] * z[i + lag]).sum::<f64>() / m as f64 / denom;
        if r > best.0 {
            best = (r, lag as f64 * dt);
        }
    }
    best
}

/// argmax of |u| over a fine x line at fixed t, parabolic-refined.
pub fn track_peak_x(eval: impl Fn(f64) -> f64, x0: f64, x1: f64, n: usize) -> f64 {
    let xs = linspace(x0, x1, n);
    let vals: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();
    let mut imax = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[imax] {
            imax = i;
        }
    }
    if imax == 0 || imax == n - 1 {
        return xs[imax];
    }
    let (y0, y1, y2) = (vals[imax - 1], vals[imax], vals[imax + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() < 1e-300 {
        return xs[imax];
    }
    xs[imax] + 0.5 * (y0 - y2) / denom * (xs[1] - xs[0])
}

/// Least-squares slope of y against x.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
