//! Plane waves, the linearized sideband system, and modulation-instability
//! growth rates.
//!
//! Stability verdicts come from the eigenvalues of the 2×2 sideband system
//! y' = [[0, a],[b, 0]] y (growth √(ab) when ab > 0, marginal otherwise).
//! The closed form is expressed through the same F and β₁ polynomials but
//! with the prefactor that actually matches those eigenvalues,
//! ω = ½√(−k·F·β₁); see `growth_rate_closed`. β keeps the α₂k²/2
//! normalization of the sideband display verbatim.

use num_complex::Complex64;

use crate::lax::ModelParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Plane-wave solution u(x, t) = c·e^{i(6c⁴γ + 2α₂c²)t} (x-independent).
pub fn plane_wave(c: f64, params: &ModelParams, _x: f64, t: f64) -> Complex64 {
    let phase = (6.0 * c.powi(4) * params.gamma + 2.0 * params.alpha2 * c * c) * t;
    Complex64::new(c, 0.0) * (I * phase).exp()
}

/// The linearized sideband system at wavenumber k on background amplitude c:
/// y_t = [[0, a],[b, 0]] y with
/// β  = α₂k²/2 + α₁k(6c² − k²) − γk⁴,
/// a  = β − 6γc²k²,
/// b  = −β − 10γc²k² + 2c²(12c²γ + 2α₂).
#[derive(Clone, Copy, Debug)]
pub struct MiSystem {
    pub k: f64,
    pub c: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

impl MiSystem {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[0.0, self.a], [self.b, 0.0]]
    }
}

pub fn mi_system(k: f64, c: f64, params: &ModelParams) -> MiSystem {
    let (a1, a2, g) = (params.alpha1, params.alpha2, params.gamma);
    let beta = a2 * k * k / 2.0 + a1 * k * (6.0 * c * c - k * k) - g * k.powi(4);
    let a = beta - 6.0 * g * c * c * k * k;
    let b = -beta - 10.0 * g * c * c * k * k + 2.0 * c * c * (12.0 * c * c * g + 2.0 * a2);
    MiSystem { k, c, beta, a, b }
}

/// Closed-form growth rate ω(k) = ½·√(−k·F·β₁) (principal root) with
///
/// ```text
/// F  = α₂(−8c² + k²) − 2α₁k(−6c² + k²) − 2γ(24c⁴ − 10c²k² + k⁴)
/// β₁ = kα₂ − 2α₁(−6c² + k²) − 2γk(6c² + k²)
/// ```
///
/// Algebraically F = −2b and β₁ = 2a/k, so ω² = ab: this closed form equals
/// the sideband eigenvalue exactly. Re ω > 0 signals instability.
pub fn growth_rate_closed(k: f64, c: f64, params: &ModelParams) -> Complex64 {
    let (a1, a2, g) = (params.alpha1, params.alpha2, params.gamma);
    let f = a2 * (-8.0 * c * c + k * k)
        - 2.0 * a1 * k * (-6.0 * c * c + k * k)
        - 2.0 * g * (24.0 * c.powi(4) - 10.0 * c * c * k * k + k.powi(4));
    let beta1 = k * a2 - 2.0 * a1 * (-6.0 * c * c + k * k) - 2.0 * g * k * (6.0 * c * c + k * k);
    0.5 * Complex64::new(-k * f * beta1, 0.0).sqrt()
}

/// Largest real part among the eigenvalues ±√(ab) of the sideband matrix:
/// √(ab) when ab > 0, zero otherwise (purely rotational pair).
pub fn growth_rate_numeric(k: f64, c: f64, params: &ModelParams) -> f64 {
    let sys = mi_system(k, c, params);
    let ab = sys.a * sys.b;
    if ab > 0.0 {
        ab.sqrt()
    } else {
        0.0
    }
}

/// A maximal wavenumber interval with positive growth.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Band {
    #[serde(rename = "kLo")]
    pub k_lo: f64,
    #[serde(rename = "kHi")]
    pub k_hi: f64,
}

/// Maximal intervals of k ∈ [−k_max, k_max] where the numeric growth rate
/// exceeds 1e-12, endpoints refined by bisection to 1e-8 in k.
pub fn unstable_band(c: f64, params: &ModelParams, k_max: f64, samples: usize) -> Vec<Band> {
    assert!(k_max > 0.0, "k_max must be positive");
    assert!(samples >= 100, "need at least 100 samples");
    let grow = |k: f64| growth_rate_numeric(k, c, params) > 1e-12;
    let ks: Vec<f64> = (0..samples)
        .map(|i| -k_max + 2.0 * k_max * i as f64 / (samples - 1) as f64)
        .collect();

    // bisect a sign change of `grow` between a and b down to 1e-8 in k
    let refine = |a: f64, b: f64| -> f64 {
        let (mut lo, mut hi) = (a, b);
        let ga = grow(a);
        for _ in 0..80 {
            if (hi - lo).abs() < 1e-8 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if grow(mid) == ga {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let mut bands = Vec::new();
    let mut open: Option<f64> = if grow(ks[0]) { Some(ks[0]) } else { None };
    for w in ks.windows(2) {
        let (k0, k1) = (w[0], w[1]);
        match (grow(k0), grow(k1)) {
            (false, true) => open = Some(refine(k0, k1)),
            (true, false) => {
                let lo = open.take().unwrap_or(k0);
                bands.push(Band {
                    k_lo: lo,
                    k_hi: refine(k0, k1),
                });
            }
            _ => {}
        }
    }
    if let Some(lo) = open {
        bands.push(Band {
            k_lo: lo,
            k_hi: ks[samples - 1],
        });
    }
    bands
}

/// Closed-form propagator of the sideband system: exp(Mt) for
/// M = [[0, a],[b, 0]] via cosh(st)I + sinh(st)/s·M with s = √(ab)
/// (complex-safe; series limit at s = 0).
pub fn evolve_closed(sys: &MiSystem, y0: [f64; 2], t: f64) -> [Complex64; 2] {
    let ab = Complex64::new(sys.a * sys.b, 0.0);
    let s = ab.sqrt();
    let st = s * t;
    let (ch, shs) = if s.norm() < 1e-14 {
        // sinh(st)/s → t as s → 0
        (Complex64::new(1.0, 0.0), Complex64::new(t, 0.0))
    } else {
        (st.cosh(), st.sinh() / s)
    };
    let y0c = [Complex64::new(y0[0], 0.0), Complex64::new(y0[1], 0.0)];
    [
        ch * y0c[0] + shs * sys.a * y0c[1],
        shs * sys.b * y0c[0] + ch * y0c[1],
    ]
}

/// Deviation between the closed propagator and an RK4 integration of the
/// sideband system from y(0) = y0 to time t.
pub fn linearized_residual(sys: &MiSystem, y0: [f64; 2], t: f64, steps: usize) -> f64 {
    let f = |y: [f64; 2]| [sys.a * y[1], sys.b * y[0]];
    let mut y = y0;
    let h = t / steps as f64;
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    let closed = evolve_closed(sys, y0, t);
    (closed[0] - Complex64::new(y[0], 0.0))
        .norm()
        .max((closed[1] - Complex64::new(y[1], 0.0)).norm())
}
