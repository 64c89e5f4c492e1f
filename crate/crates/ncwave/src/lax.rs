//! Seed eigenfunctions, Lax-pair matrices, and the independent
//! finite-difference residual operator for the higher-order NLS flow
//!
//! ```text
//! i u_t + i α₁ (u_xxx + 3(u_x u† u + u u† u_x)) + α₂ (2 u u† u + u_xx)
//!   + γ (u_xxxx + 2(u_x u†_x u + u u†_x u_x + u u†_xx u)
//!        + 4(u_xx u† u + u u† u_xx) + 6(u_x u† u_x + u u† u u† u)) = 0
//! ```
//!
//! with u scalar (commutative mode) or 2×2 matrix valued. Product order is
//! kept exactly as written; the residual operator consumes sampled grids
//! only, never analytic formulas, so it stays an independent check on
//! whatever produced the samples.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ncalgebra::ComplexMatrix;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real coefficients of the hierarchy: α₁ (third order), α₂ (second order),
/// γ (fourth order).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma: f64,
}

/// Named reductions reached by zeroing coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// α₁ = γ = 0
    Nls,
    /// γ = 0
    Hirota,
    /// α₁ = α₂ = 0
    Lpd,
    /// α₂ = γ = 0
    Mkdv,
}

impl std::str::FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nls" => Ok(Self::Nls),
            "hirota" => Ok(Self::Hirota),
            "lpd" => Ok(Self::Lpd),
            "mkdv" => Ok(Self::Mkdv),
            other => Err(Error::Scenario(format!(
                "unknown reduction limit '{other}'"
            ))),
        }
    }
}

impl ModelParams {
    pub fn new(alpha1: f64, alpha2: f64, gamma: f64) -> Self {
        Self {
            alpha1,
            alpha2,
            gamma,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.alpha1.is_finite() && self.alpha2.is_finite() && self.gamma.is_finite()
    }

    /// Zero the coefficients that define the given limit.
    pub fn reduced(&self, limit: Reduction) -> Self {
        match limit {
            Reduction::Nls => Self::new(0.0, self.alpha2, 0.0),
            Reduction::Hirota => Self::new(self.alpha1, self.alpha2, 0.0),
            Reduction::Lpd => Self::new(0.0, 0.0, self.gamma),
            Reduction::Mkdv => Self::new(self.alpha1, 0.0, 0.0),
        }
    }

    /// Which named limit these coefficients already sit in, if any.
    pub fn reduction(&self) -> Option<Reduction> {
        match (self.alpha1 == 0.0, self.alpha2 == 0.0, self.gamma == 0.0) {
            (true, _, true) => Some(Reduction::Nls),
            (_, true, true) => Some(Reduction::Mkdv),
            (true, true, _) => Some(Reduction::Lpd),
            (_, _, true) => Some(Reduction::Hirota),
            _ => None,
        }
    }
}

/// Spectral parameter λ = λ_R + i λ_I.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParam {
    pub lambda: Complex64,
}

impl SpectralParam {
    pub fn new(re: f64, im: f64) -> Self {
        Self {
            lambda: Complex64::new(re, im),
        }
    }

    pub fn from_complex(lambda: Complex64) -> Self {
        Self { lambda }
    }
}

/// Seed eigenfunction of the zero-potential spectral problem:
/// φ = s·e^{iζ}, χ = r·e^{−iζ} with
/// ζ(x,t) = −λx + 2λ²(4γλ² − 2λα₁ − α₂)t.
#[derive(Clone, Copy, Debug)]
pub struct SeedEigenfunction {
    pub lambda: Complex64,
    pub params: ModelParams,
    pub scale_phi: Complex64,
    pub scale_chi: Complex64,
}

impl SeedEigenfunction {
    /// Unit-scale seed.
    pub fn new(lambda: SpectralParam, params: ModelParams) -> Self {
        Self {
            lambda: lambda.lambda,
            params,
            scale_phi: Complex64::new(1.0, 0.0),
            scale_chi: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_scales(mut self, scale_phi: Complex64, scale_chi: Complex64) -> Self {
        self.scale_phi = scale_phi;
        self.scale_chi = scale_chi;
        self
    }

    /// Dispersion factor ω(λ) = 2λ²(4γλ² − 2λα₁ − α₂), so that ζ = −λx + ωt.
    pub fn omega(&self) -> Complex64 {
        dispersion(self.lambda, &self.params)
    }

    pub fn zeta(&self, x: f64, t: f64) -> Complex64 {
        -self.lambda * x + self.omega() * t
    }

    pub fn phi(&self, x: f64, t: f64) -> Complex64 {
        self.scale_phi * (I * self.zeta(x, t)).exp()
    }

    pub fn chi(&self, x: f64, t: f64) -> Complex64 {
        self.scale_chi * (-I * self.zeta(x, t)).exp()
    }
}

pub fn dispersion(lambda: Complex64, params: &ModelParams) -> Complex64 {
    2.0 * lambda
        * lambda
        * (4.0 * params.gamma * lambda * lambda - 2.0 * lambda * params.alpha1 - params.alpha2)
}

/// Whether grid values are scalars (stored 1×1) or 2×2 matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    Commutative,
    Noncommutative,
}

impl GridMode {
    pub fn component_size(&self) -> usize {
        match self {
            GridMode::Commutative => 1,
            GridMode::Noncommutative => 2,
        }
    }
}

/// Sampled field u(x, t) on a uniform rectangle, t-major storage.
#[derive(Clone, Debug)]
pub struct FieldGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub mode: GridMode,
    values: Vec<ComplexMatrix>,
    poles: Vec<bool>,
}

fn check_uniform(axis: &[f64], name: &str) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Dimension(format!("{name}-axis is empty")));
    }
    if axis.len() >= 2 {
        let h = axis[1] - axis[0];
        // relative to both the spacing and the axis values, since spacings
        // far below the coordinate magnitude only survive to ε·|coordinate|
        let scale = h
            .abs()
            .max(axis[0].abs())
            .max(axis[axis.len() - 1].abs())
            .max(1e-300);
        for w in axis.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-12 * scale {
                return Err(Error::Dimension(format!(
                    "{name}-axis spacing is not uniform"
                )));
            }
        }
        if h <= 0.0 {
            return Err(Error::Dimension(format!("{name}-axis must be increasing")));
        }
    }
    Ok(())
}

impl FieldGrid {
    /// Build a grid by evaluating `f` at every (x, t). `f` returning an error
    /// flags the point as a pole and stores a zero value.
    pub fn generate(
        xs: Vec<f64>,
        ts: Vec<f64>,
        mode: GridMode,
        f: impl Fn(f64, f64) -> Result<ComplexMatrix> + Sync,
    ) -> Result<Self> {
        check_uniform(&xs, "x")?;
        check_uniform(&ts, "t")?;
        let k = mode.component_size();
        let rows: Vec<Vec<(ComplexMatrix, bool)>> = ts
            .par_iter()
            .map(|&t| {
                xs.iter()
                    .map(|&x| match f(x, t) {
                        Ok(v) if v.is_finite() => {
                            assert!(v.rows() == k && v.cols() == k, "value shape mismatch");
                            (v, false)
                        }
                        // overflowed values count as poles too
                        _ => (ComplexMatrix::zeros(k, k), true),
                    })
                    .collect()
            })
            .collect();
        let mut values = Vec::with_capacity(xs.len() * ts.len());
        let mut poles = Vec::with_capacity(xs.len() * ts.len());
        for row in rows {
            for (v, p) in row {
                values.push(v);
                poles.push(p);
            }
        }
        Ok(Self {
            xs,
            ts,
            mode,
            values,
            poles,
        })
    }

    pub fn from_values(
        xs: Vec<f64>,
        ts: Vec<f64>,
        mode: GridMode,
        values: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        check_uniform(&xs, "x")?;
        check_uniform(&ts, "t")?;
        if values.len() != xs.len() * ts.len() {
            return Err(Error::Dimension("value count does not match grid".into()));
        }
        let poles = vec![false; values.len()];
        Ok(Self {
            xs,
            ts,
            mode,
            values,
            poles,
        })
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn nt(&self) -> usize {
        self.ts.len()
    }

    pub fn hx(&self) -> f64 {
        if self.xs.len() >= 2 {
            self.xs[1] - self.xs[0]
        } else {
            0.0
        }
    }

    pub fn ht(&self) -> f64 {
        if self.ts.len() >= 2 {
            self.ts[1] - self.ts[0]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn value(&self, it: usize, ix: usize) -> &ComplexMatrix {
        &self.values[it * self.xs.len() + ix]
    }

    pub fn is_pole(&self, it: usize, ix: usize) -> bool {
        self.poles[it * self.xs.len() + ix]
    }

    pub fn pole_count(&self) -> usize {
        self.poles.iter().filter(|&&p| p).count()
    }

    /// Largest entry magnitude over non-pole points.
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.poles)
            .filter(|(_, &p)| !p)
            .map(|(v, _)| v.max_abs())
            .fold(0.0, f64::max)
    }

    /// Mean of per-point magnitudes, pole points excluded.
    pub fn mean_abs(&self) -> f64 {
        let mut total = 0.0;
        let mut count = 0usize;
        for (v, &p) in self.values.iter().zip(&self.poles) {
            if !p {
                total += v.max_abs();
                count += 1;
            }
        }
        if count == 0 {
            0.0
        } else {
            total / count as f64
        }
    }
}

/// Local jet of the field at one point: u and its first three x-derivatives.
#[derive(Clone, Debug)]
pub struct UJet {
    pub u: ComplexMatrix,
    pub ux: ComplexMatrix,
    pub uxx: ComplexMatrix,
    pub uxxx: ComplexMatrix,
}

impl UJet {
    pub fn zero(size: usize) -> Self {
        Self {
            u: ComplexMatrix::zeros(size, size),
            ux: ComplexMatrix::zeros(size, size),
            uxx: ComplexMatrix::zeros(size, size),
            uxxx: ComplexMatrix::zeros(size, size),
        }
    }

    fn check(&self) -> Result<usize> {
        let k = self.u.rows();
        for m in [&self.u, &self.ux, &self.uxx, &self.uxxx] {
            if m.rows() != k || m.cols() != k {
                return Err(Error::Dimension("jet entries are not conformable".into()));
            }
        }
        Ok(k)
    }
}

/// The assembled Lax-pair matrices at one point.
#[derive(Clone, Debug)]
pub struct LaxMatrices {
    /// diag(−I, I)
    pub j: ComplexMatrix,
    /// off-diagonal (u, −u†)
    pub u: ComplexMatrix,
    /// time-part polynomial matrix B(u, λ)
    pub b: ComplexMatrix,
    /// γ-weighted fourth-order block [V₁ V₂; V₃ V₄]
    pub vp: ComplexMatrix,
}

pub fn rho1(lambda: Complex64, params: &ModelParams) -> Complex64 {
    -4.0 * I * params.alpha1 * lambda.powu(3) - 2.0 * I * lambda * lambda * params.alpha2
}

pub fn rho2(lambda: Complex64, params: &ModelParams) -> Complex64 {
    I * (2.0 * lambda * params.alpha1 + params.alpha2)
}

/// ρ₃ = 3i u u† u u† − 4iλ² u u† + 8iλ⁴. Recorded from the text; it appears
/// in no displayed matrix and has no consumer besides the u = 0 dispersion
/// completion used by [`zero_curvature_check`].
pub fn rho3(u: &ComplexMatrix, lambda: Complex64) -> ComplexMatrix {
    let k = u.rows();
    let uud = u.mul(&u.dagger()).unwrap();
    let quart = uud.mul(&uud).unwrap();
    quart
        .scale(3.0 * I)
        .add(&uud.scale(-4.0 * I * lambda * lambda))
        .unwrap()
        .add(&ComplexMatrix::scalar(k, 8.0 * I * lambda.powu(4)))
        .unwrap()
}

/// ρ₄ = −3i u†u u†u + 4iλ² u†u − 8iλ⁴ (same status as ρ₃).
pub fn rho4(u: &ComplexMatrix, lambda: Complex64) -> ComplexMatrix {
    let k = u.rows();
    let udu = u.dagger().mul(u).unwrap();
    let quart = udu.mul(&udu).unwrap();
    quart
        .scale(-3.0 * I)
        .add(&udu.scale(4.0 * I * lambda * lambda))
        .unwrap()
        .add(&ComplexMatrix::scalar(k, -8.0 * I * lambda.powu(4)))
        .unwrap()
}

/// ρ₅ = −8λ³ u + 4λ u u† u (recorded, no consumer).
pub fn rho5(u: &ComplexMatrix, lambda: Complex64) -> ComplexMatrix {
    let cubic = u.mul(&u.dagger()).unwrap().mul(u).unwrap();
    u.scale(-8.0 * lambda.powu(3))
        .add(&cubic.scale(4.0 * lambda))
        .unwrap()
}

/// ρ₆ = 8λ³ u† − 4λ u† u u† (recorded, no consumer).
pub fn rho6(u: &ComplexMatrix, lambda: Complex64) -> ComplexMatrix {
    let ud = u.dagger();
    let cubic = ud.mul(u).unwrap().mul(&ud).unwrap();
    ud.scale(8.0 * lambda.powu(3))
        .add(&cubic.scale(-4.0 * lambda))
        .unwrap()
}

/// Assemble 𝒥, 𝒰, B and 𝒱_p from the local jet, keeping every product in
/// written order.
pub fn lax_matrices(
    jet: &UJet,
    lambda: SpectralParam,
    params: &ModelParams,
) -> Result<LaxMatrices> {
    let k = jet.check()?;
    let l = lambda.lambda;
    let a1 = params.alpha1;
    let a2 = params.alpha2;

    let u = &jet.u;
    let ux = &jet.ux;
    let uxx = &jet.uxx;
    let uxxx = &jet.uxxx;
    let ud = u.dagger();
    let uxd = ux.dagger();
    let uxxd = uxx.dagger();
    let uxxxd = uxxx.dagger();

    let mut j = ComplexMatrix::zeros(2 * k, 2 * k);
    j.set_block(0, 0, &ComplexMatrix::scalar(k, Complex64::new(-1.0, 0.0)));
    j.set_block(k, k, &ComplexMatrix::identity(k));

    let mut u_mat = ComplexMatrix::zeros(2 * k, 2 * k);
    u_mat.set_block(0, k, u);
    u_mat.set_block(k, 0, &ud.neg());

    // B = [ρ₁ + ρ₂ u u† − α₁(u_x u† − u u†_x)        𝒜₂]
    //     [𝒜₁        −ρ₁ − ρ₂ u†u − α₁(−u† u_x + u†_x u)]
    let uud = u.mul(&ud)?;
    let udu = ud.mul(u)?;
    let b11 = ComplexMatrix::scalar(k, rho1(l, params))
        .add(&uud.scale(rho2(l, params)))?
        .sub(
            &ux.mul(&ud)?
                .sub(&u.mul(&uxd)?)?
                .scale(Complex64::new(a1, 0.0)),
        )?;
    let b22 = ComplexMatrix::scalar(k, -rho1(l, params))
        .sub(&udu.scale(rho2(l, params)))?
        .sub(
            &ud.mul(ux)?
                .neg()
                .add(&uxd.mul(u)?)?
                .scale(Complex64::new(a1, 0.0)),
        )?;
    // 𝒜₂ = 4λ²α₁ u + 2λ(α₂ u + iα₁ u_x) + iα₂ u_x − α₁(2 u u† u + u_xx)
    let a2_blk = u
        .scale(4.0 * l * l * a1)
        .add(
            &u.scale(Complex64::new(a2, 0.0))
                .add(&ux.scale(I * a1))?
                .scale(2.0 * l),
        )?
        .add(&ux.scale(I * a2))?
        .sub(
            &uud.mul(u)?
                .scale(Complex64::new(2.0 * a1, 0.0))
                .add(&uxx.scale(Complex64::new(a1, 0.0)))?,
        )?;
    // 𝒜₁ = −4λ²α₁ u† + 2λ(−α₂ u† + iα₁ u†_x) + iα₂ u†_x − α₁(−2 u† u u† − u†_xx)
    let a1_blk = ud
        .scale(-4.0 * l * l * a1)
        .add(
            &ud.scale(Complex64::new(-a2, 0.0))
                .add(&uxd.scale(I * a1))?
                .scale(2.0 * l),
        )?
        .add(&uxd.scale(I * a2))?
        .sub(
            &udu.mul(&ud)?
                .scale(Complex64::new(-2.0 * a1, 0.0))
                .sub(&uxxd.scale(Complex64::new(a1, 0.0)))?,
        )?;
    let mut b = ComplexMatrix::zeros(2 * k, 2 * k);
    b.set_block(0, 0, &b11);
    b.set_block(0, k, &a2_blk);
    b.set_block(k, 0, &a1_blk);
    b.set_block(k, k, &b22);

    // V₁ = i(u_xx u† + u u†_xx − u_x u†_x) − 2λ(u u†_x − u_x u†)
    let v1 = uxx
        .mul(&ud)?
        .add(&u.mul(&uxxd)?)?
        .sub(&ux.mul(&uxd)?)?
        .scale(I)
        .sub(
            &u.mul(&uxd)?
                .sub(&ux.mul(&ud)?)?
                .scale(Complex64::new(2.0, 0.0) * l),
        )?;
    // V₂ = −4iλ² u_x + 3i(u u† u_x + u_x u† u) + i u_xxx + 2λ u_xx
    let v2 = ux
        .scale(-4.0 * I * l * l)
        .add(&uud.mul(ux)?.add(&ux.mul(&udu)?)?.scale(3.0 * I))?
        .add(&uxxx.scale(I))?
        .add(&uxx.scale(2.0 * l))?;
    // V₃ = −4iλ² u†_x + 3i(u† u u†_x + u†_x u u†) + i u†_xxx − 2λ u†_xx
    let v3 = uxd
        .scale(-4.0 * I * l * l)
        .add(&udu.mul(&uxd)?.add(&uxd.mul(&uud)?)?.scale(3.0 * I))?
        .add(&uxxxd.scale(I))?
        .sub(&uxxd.scale(2.0 * l))?;
    // V₄ = −i(u†_xx u + u† u_xx − u†_x u_x) + 2λ(−u† u_x + u†_x u)
    let v4 = uxxd
        .mul(u)?
        .add(&ud.mul(uxx)?)?
        .sub(&uxd.mul(ux)?)?
        .scale(-I)
        .add(
            &ud.mul(ux)?
                .neg()
                .add(&uxd.mul(u)?)?
                .scale(Complex64::new(2.0, 0.0) * l),
        )?;
    let mut vp = ComplexMatrix::zeros(2 * k, 2 * k);
    vp.set_block(0, 0, &v1);
    vp.set_block(0, k, &v2);
    vp.set_block(k, 0, &v3);
    vp.set_block(k, k, &v4);
    let vp = vp.scale(Complex64::new(params.gamma, 0.0));

    Ok(LaxMatrices { j, u: u_mat, b, vp })
}

/// Central finite-difference stencils used by the residual operators:
/// 3-point u_t, and x-stencils of orders 1..4 (5-point [1,−4,6,−4,1]/h⁴ for
/// the fourth derivative). All second-order accurate.
struct Stencil<'a> {
    grid: &'a FieldGrid,
}

impl<'a> Stencil<'a> {
    fn ut(&self, it: usize, ix: usize) -> ComplexMatrix {
        let g = self.grid;
        g.value(it + 1, ix)
            .sub(g.value(it - 1, ix))
            .unwrap()
            .scale(Complex64::new(1.0 / (2.0 * g.ht()), 0.0))
    }

    fn ux(&self, it: usize, ix: usize) -> ComplexMatrix {
        let g = self.grid;
        g.value(it, ix + 1)
            .sub(g.value(it, ix - 1))
            .unwrap()
            .scale(Complex64::new(1.0 / (2.0 * g.hx()), 0.0))
    }

    fn uxx(&self, it: usize, ix: usize) -> ComplexMatrix {
        let g = self.grid;
        let h2 = g.hx() * g.hx();
        g.value(it, ix + 1)
            .add(g.value(it, ix - 1))
            .unwrap()
            .sub(&g.value(it, ix).scale(Complex64::new(2.0, 0.0)))
            .unwrap()
            .scale(Complex64::new(1.0 / h2, 0.0))
    }

    fn uxxx(&self, it: usize, ix: usize) -> ComplexMatrix {
        let g = self.grid;
        let h3 = g.hx().powi(3);
        // (f₊₂ − 2f₊₁ + 2f₋₁ − f₋₂) / (2h³)
        g.value(it, ix + 2)
            .sub(&g.value(it, ix + 1).scale(Complex64::new(2.0, 0.0)))
            .unwrap()
            .add(&g.value(it, ix - 1).scale(Complex64::new(2.0, 0.0)))
            .unwrap()
            .sub(g.value(it, ix - 2))
            .unwrap()
            .scale(Complex64::new(1.0 / (2.0 * h3), 0.0))
    }

    fn uxxxx(&self, it: usize, ix: usize) -> ComplexMatrix {
        let g = self.grid;
        let h4 = g.hx().powi(4);
        g.value(it, ix + 2)
            .add(g.value(it, ix - 2))
            .unwrap()
            .sub(
                &g.value(it, ix + 1)
                    .add(g.value(it, ix - 1))
                    .unwrap()
                    .scale(Complex64::new(4.0, 0.0)),
            )
            .unwrap()
            .add(&g.value(it, ix).scale(Complex64::new(6.0, 0.0)))
            .unwrap()
            .scale(Complex64::new(1.0 / h4, 0.0))
    }
}

fn require_stencil(grid: &FieldGrid) -> Result<()> {
    let need = 9;
    let got = grid.nx().min(grid.nt());
    if grid.nx() < need || grid.nt() < need {
        return Err(Error::Stencil { need, got });
    }
    Ok(())
}

/// Interior rectangle left after trimming the stencil margins
/// (2 points in x, 1 in t); boundary values are never extrapolated.
fn interior(grid: &FieldGrid) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    (1..grid.nt() - 1, 2..grid.nx() - 2)
}

/// Per-term magnitudes of the equation at the interior maximum, useful when
/// deciding which part of a residual dominates.
#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct ResidualBreakdown {
    pub time: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma: f64,
}

fn residual_grid(
    grid: &FieldGrid,
    term: impl Fn(&Stencil, usize, usize) -> ComplexMatrix + Sync + Send,
) -> Result<FieldGrid> {
    require_stencil(grid)?;
    let (trange, xrange) = interior(grid);
    let ts: Vec<f64> = grid.ts[trange.clone()].to_vec();
    let xs: Vec<f64> = grid.xs[xrange.clone()].to_vec();
    let term = &term;
    let values: Vec<ComplexMatrix> = trange
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map(|&it| {
            let st = Stencil { grid };
            xrange
                .clone()
                .map(move |ix| term(&st, it, ix))
                .collect::<Vec<_>>()
        })
        .collect();
    FieldGrid::from_values(xs, ts, grid.mode, values)
}

fn eom_point(st: &Stencil, it: usize, ix: usize, params: &ModelParams) -> ComplexMatrix {
    let (time, a1t, a2t, gt) = eom_terms(st, it, ix, params);
    time.add(&a1t).unwrap().add(&a2t).unwrap().add(&gt).unwrap()
}

/// The four coefficient groups of the equation at one interior point:
/// (i u_t, α₁ group, α₂ group, γ group).
fn eom_terms(
    st: &Stencil,
    it: usize,
    ix: usize,
    params: &ModelParams,
) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let u = st.grid.value(it, ix).clone();
    let ut = st.ut(it, ix);
    let ux = st.ux(it, ix);
    let uxx = st.uxx(it, ix);
    let uxxx = st.uxxx(it, ix);
    let uxxxx = st.uxxxx(it, ix);
    let ud = u.dagger();
    let uxd = ux.dagger();
    let uxxd = uxx.dagger();

    let m = |a: &ComplexMatrix, b: &ComplexMatrix| a.mul(b).unwrap();

    let time = ut.scale(I);

    // i α₁ (u_xxx + 3(u_x u† u + u u† u_x))
    let a1t = uxxx
        .add(
            &m(&m(&ux, &ud), &u)
                .add(&m(&m(&u, &ud), &ux))
                .unwrap()
                .scale(Complex64::new(3.0, 0.0)),
        )
        .unwrap()
        .scale(I * params.alpha1);

    // α₂ (2 u u† u + u_xx)
    let a2t = m(&m(&u, &ud), &u)
        .scale(Complex64::new(2.0, 0.0))
        .add(&uxx)
        .unwrap()
        .scale(Complex64::new(params.alpha2, 0.0));

    // γ (u_xxxx + 2(u_x u†_x u + u u†_x u_x + u u†_xx u)
    //      + 4(u_xx u† u + u u† u_xx) + 6(u_x u† u_x + u u† u u† u))
    let two = m(&m(&ux, &uxd), &u)
        .add(&m(&m(&u, &uxd), &ux))
        .unwrap()
        .add(&m(&m(&u, &uxxd), &u))
        .unwrap()
        .scale(Complex64::new(2.0, 0.0));
    let four = m(&m(&uxx, &ud), &u)
        .add(&m(&m(&u, &ud), &uxx))
        .unwrap()
        .scale(Complex64::new(4.0, 0.0));
    let six = m(&m(&ux, &ud), &ux)
        .add(&m(&m(&m(&m(&u, &ud), &u), &ud), &u))
        .unwrap()
        .scale(Complex64::new(6.0, 0.0));
    let gt = uxxxx
        .add(&two)
        .unwrap()
        .add(&four)
        .unwrap()
        .add(&six)
        .unwrap()
        .scale(Complex64::new(params.gamma, 0.0));

    (time, a1t, a2t, gt)
}

/// Residual of the full equation of motion on the interior of the grid.
pub fn eom_residual(grid: &FieldGrid, params: &ModelParams) -> Result<FieldGrid> {
    residual_grid(grid, |st, it, ix| eom_point(st, it, ix, params))
}

/// Like [`eom_residual`], also reporting per-term maxima.
pub fn eom_residual_breakdown(
    grid: &FieldGrid,
    params: &ModelParams,
) -> Result<(FieldGrid, ResidualBreakdown)> {
    let res = eom_residual(grid, params)?;
    require_stencil(grid)?;
    let (trange, xrange) = interior(grid);
    let st = Stencil { grid };
    let mut bd = ResidualBreakdown::default();
    for it in trange {
        for ix in xrange.clone() {
            let (time, a1t, a2t, gt) = eom_terms(&st, it, ix, params);
            bd.time = bd.time.max(time.max_abs());
            bd.alpha1 = bd.alpha1.max(a1t.max_abs());
            bd.alpha2 = bd.alpha2.max(a2t.max_abs());
            bd.gamma = bd.gamma.max(gt.max_abs());
        }
    }
    Ok((res, bd))
}

/// Residual of the named reduced equation, transcribed independently of
/// [`eom_residual`] (separate formula code; only the stencils are shared).
pub fn reduced_residual(
    grid: &FieldGrid,
    params: &ModelParams,
    limit: Reduction,
) -> Result<FieldGrid> {
    let a1 = Complex64::new(params.alpha1, 0.0);
    let a2 = Complex64::new(params.alpha2, 0.0);
    let g = Complex64::new(params.gamma, 0.0);
    residual_grid(grid, move |st, it, ix| {
        let u = st.grid.value(it, ix).clone();
        let ud = u.dagger();
        let iut = st.ut(it, ix).scale(I);
        let m = |a: &ComplexMatrix, b: &ComplexMatrix| a.mul(b).unwrap();
        match limit {
            // i u_t + α₂ u_xx + 2 α₂ u u† u
            Reduction::Nls => {
                let cubic = m(&m(&u, &ud), &u);
                iut.add(&st.uxx(it, ix).scale(a2))
                    .unwrap()
                    .add(&cubic.scale(2.0 * a2))
                    .unwrap()
            }
            // i u_t + α₂(u_xx + 2 u u† u) + i α₁(u_xxx + 3 u_x u† u + 3 u u† u_x)
            Reduction::Hirota => {
                let ux = st.ux(it, ix);
                let cubic = m(&m(&u, &ud), &u);
                let third = st
                    .uxxx(it, ix)
                    .add(&m(&m(&ux, &ud), &u).scale(Complex64::new(3.0, 0.0)))
                    .unwrap()
                    .add(&m(&m(&u, &ud), &ux).scale(Complex64::new(3.0, 0.0)))
                    .unwrap();
                iut.add(
                    &st.uxx(it, ix)
                        .add(&cubic.scale(Complex64::new(2.0, 0.0)))
                        .unwrap()
                        .scale(a2),
                )
                .unwrap()
                .add(&third.scale(I * a1))
                .unwrap()
            }
            // i u_t + γ(u_xxxx + 2(u_x u†_x u + u u†_x u_x + u u†_xx u)
            //   + 4(u_xx u† u + u u† u_xx) + 6(u_x u† u_x + u u† u u† u))
            Reduction::Lpd => {
                let ux = st.ux(it, ix);
                let uxx = st.uxx(it, ix);
                let uxd = ux.dagger();
                let uxxd = uxx.dagger();
                let quartic = st
                    .uxxxx(it, ix)
                    .add(
                        &m(&m(&ux, &uxd), &u)
                            .add(&m(&m(&u, &uxd), &ux))
                            .unwrap()
                            .add(&m(&m(&u, &uxxd), &u))
                            .unwrap()
                            .scale(Complex64::new(2.0, 0.0)),
                    )
                    .unwrap()
                    .add(
                        &m(&m(&uxx, &ud), &u)
                            .add(&m(&m(&u, &ud), &uxx))
                            .unwrap()
                            .scale(Complex64::new(4.0, 0.0)),
                    )
                    .unwrap()
                    .add(
                        &m(&m(&ux, &ud), &ux)
                            .add(&m(&m(&m(&m(&u, &ud), &u), &ud), &u))
                            .unwrap()
                            .scale(Complex64::new(6.0, 0.0)),
                    )
                    .unwrap();
                iut.add(&quartic.scale(g)).unwrap()
            }
            // i u_t + i α₁(u_xxx + 3(u_x u† u + u u† u_x))
            Reduction::Mkdv => {
                let ux = st.ux(it, ix);
                let third = st
                    .uxxx(it, ix)
                    .add(
                        &m(&m(&ux, &ud), &u)
                            .add(&m(&m(&u, &ud), &ux))
                            .unwrap()
                            .scale(Complex64::new(3.0, 0.0)),
                    )
                    .unwrap();
                iut.add(&third.scale(I * a1)).unwrap()
            }
        }
    })
}

/// Deviation of the u = 0 seed eigenfunction from the Lax equations,
/// measured by central differences of step `step` at (x, t).
///
/// The x-part checks 𝒴_x = 𝒥𝒴Λ + 𝒰𝒴 with Λ = iλI₂ (the factor i is what
/// ζ = −λx + … forces). The t-part checks 𝒴_t = (B + 𝒱_p + γ·diag(ρ₃, ρ₄))𝒴,
/// with ρ₃, ρ₄ at their u = 0 values 8iλ⁴, −8iλ⁴: B alone misses exactly this
/// quartic dispersion when γ ≠ 0.
pub fn zero_curvature_check(
    lambda: SpectralParam,
    params: &ModelParams,
    x: f64,
    t: f64,
    step: f64,
) -> Result<(f64, f64)> {
    zero_curvature_check_assembled(lambda, params, x, t, step, SeedAssembly::Diagonal)
}

/// How the (φ, χ) seed pair is placed into the 2×2 eigenfunction matrix.
/// Both arrangements satisfy the same Λ = iλI₂ relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedAssembly {
    /// diag(φ, χ)
    Diagonal,
    /// antidiag: φ in the (1,2) slot, χ in the (2,1) slot
    Antidiagonal,
}

/// [`zero_curvature_check`] with an explicit seed-pair assembly.
pub fn zero_curvature_check_assembled(
    lambda: SpectralParam,
    params: &ModelParams,
    x: f64,
    t: f64,
    step: f64,
    assembly: SeedAssembly,
) -> Result<(f64, f64)> {
    let seed = SeedEigenfunction::new(lambda, *params);
    let y = |x: f64, t: f64| {
        let mut m = ComplexMatrix::zeros(2, 2);
        match assembly {
            SeedAssembly::Diagonal => {
                m.set(0, 0, seed.phi(x, t));
                m.set(1, 1, seed.chi(x, t));
            }
            SeedAssembly::Antidiagonal => {
                m.set(0, 1, seed.phi(x, t));
                m.set(1, 0, seed.chi(x, t));
            }
        }
        m
    };
    let l = lambda.lambda;
    let jet = UJet::zero(1);
    let lax = lax_matrices(&jet, lambda, params)?;

    let y0 = y(x, t);
    let half = Complex64::new(1.0 / (2.0 * step), 0.0);

    // x-direction
    let yx = y(x + step, t).sub(&y(x - step, t))?.scale(half);
    let lambda_mat = ComplexMatrix::scalar(2, I * l);
    let rhs_x = lax.j.mul(&y0)?.mul(&lambda_mat)?.add(&lax.u.mul(&y0)?)?;
    let dev_x = yx.max_abs_diff(&rhs_x);

    // t-direction, with the u = 0 quartic dispersion completion
    let yt = y(x, t + step).sub(&y(x, t - step))?.scale(half);
    let u0 = ComplexMatrix::zeros(1, 1);
    let mut quartic = ComplexMatrix::zeros(2, 2);
    quartic.set_block(0, 0, &rho3(&u0, l));
    quartic.set_block(1, 1, &rho4(&u0, l));
    let t_op = lax
        .b
        .add(&lax.vp)?
        .add(&quartic.scale(Complex64::new(params.gamma, 0.0)))?;
    let rhs_t = t_op.mul(&y0)?;
    let dev_t = yt.max_abs_diff(&rhs_t);

    Ok((dev_x, dev_t))
}
