//! Gramian and quasi-Gramian field construction from seed eigenfunctions,
//! plus the Darboux-matrix and quasi-Wronskian forms and the one-soliton
//! closed form.
//!
//! The Gram potential Θ is built from closed-form antiderivatives of the
//! seed bilinears (no integration constant; the +I in 𝒲 = QΘ + I is the
//! constant). Seed scaling follows the convention pinned by the
//! closed-form equivalence check: φⱼ = (1/√c₁)e^{iζⱼ}, χⱼ = −(1/√c₁)e^{−iζⱼ}.
//!
//! A note on verification: these bordered-quasideterminant families
//! reproduce the published closed form exactly (see
//! [`one_soliton_closed_form`]), but the independent residual operator in
//! [`crate::lax`] reports an O(1) equation residual for them; the genuine
//! envelope soliton of the flow is [`envelope_soliton`], which passes the
//! same residual check at truncation level. The acceptance suite measures
//! both sides; `ncwave verify` prints whatever the numbers are.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lax::{dispersion, ModelParams, SpectralParam};
use crate::ncalgebra::ComplexMatrix;
use crate::quasidet::bordered_quasideterminant;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// An x-exponent magnitude below this switches the Θ antiderivative to the
/// linear-in-x branch (λ real, or λⱼ = conj(λᵢ)).
pub const DEGENERATE_EXPONENT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Commutative,
    Noncommutative,
}

/// Everything needed to evaluate an n-soliton field.
#[derive(Clone, Debug)]
pub struct SolitonScenario {
    pub lambdas: Vec<SpectralParam>,
    /// Constant coupling matrix: (2n)×(2n) in commutative mode, (4n)×(4n)
    /// in noncommutative mode (2n×2n of 2×2 blocks).
    pub q: ComplexMatrix,
    pub c1: f64,
    pub params: ModelParams,
    pub mode: Mode,
}

impl SolitonScenario {
    pub fn new(
        lambdas: Vec<SpectralParam>,
        q: ComplexMatrix,
        c1: f64,
        params: ModelParams,
        mode: Mode,
    ) -> Result<Self> {
        let s = Self {
            lambdas,
            q,
            c1,
            params,
            mode,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Side length of the Gram body: 2n commutative, 4n noncommutative.
    pub fn body_size(&self) -> usize {
        match self.mode {
            Mode::Commutative => 2 * self.n(),
            Mode::Noncommutative => 4 * self.n(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(Error::Scenario(
                "need at least one spectral parameter".into(),
            ));
        }
        if !(self.c1.is_finite() && self.c1 > 0.0) {
            return Err(Error::Scenario(format!(
                "c1 must be positive and finite, got {}",
                self.c1
            )));
        }
        if !self.params.is_finite() {
            return Err(Error::Scenario("model parameters must be finite".into()));
        }
        if !self.q.is_finite() {
            return Err(Error::Scenario("Q must be finite".into()));
        }
        let m = self.body_size();
        if self.q.rows() != m || self.q.cols() != m {
            return Err(Error::Scenario(format!(
                "Q must be {m}×{m} for n = {} in {:?} mode, got {}×{}",
                self.n(),
                self.mode,
                self.q.rows(),
                self.q.cols()
            )));
        }
        Ok(())
    }

    /// Seed scale on the φ side, 1/√c₁.
    pub fn scale_phi(&self) -> f64 {
        1.0 / self.c1.sqrt()
    }

    /// Seed scale on the χ side, −1/√c₁.
    pub fn scale_chi(&self) -> f64 {
        -1.0 / self.c1.sqrt()
    }

    fn zeta(&self, j: usize, x: f64, t: f64) -> Complex64 {
        let l = self.lambdas[j].lambda;
        -l * x + dispersion(l, &self.params) * t
    }

    pub fn phi(&self, j: usize, x: f64, t: f64) -> Complex64 {
        self.scale_phi() * (I * self.zeta(j, x, t)).exp()
    }

    pub fn chi(&self, j: usize, x: f64, t: f64) -> Complex64 {
        self.scale_chi() * (-I * self.zeta(j, x, t)).exp()
    }
}

/// Closed-form antiderivative in x of conj(φᵢ)·φⱼ at (x, t).
fn phi_pair_antiderivative(scn: &SolitonScenario, i: usize, j: usize, x: f64, t: f64) -> Complex64 {
    let li = scn.lambdas[i].lambda;
    let lj = scn.lambdas[j].lambda;
    let amp = Complex64::new(scn.scale_phi() * scn.scale_phi(), 0.0);
    let kappa = I * (li.conj() - lj);
    let mu = I * (dispersion(lj, &scn.params) - dispersion(li, &scn.params).conj());
    if kappa.norm() < DEGENERATE_EXPONENT_TOL {
        amp * x * (mu * t).exp()
    } else {
        amp * (kappa * x + mu * t).exp() / kappa
    }
}

/// Closed-form antiderivative in x of conj(χᵢ)·χⱼ at (x, t).
fn chi_pair_antiderivative(scn: &SolitonScenario, i: usize, j: usize, x: f64, t: f64) -> Complex64 {
    let li = scn.lambdas[i].lambda;
    let lj = scn.lambdas[j].lambda;
    let amp = Complex64::new(scn.scale_chi() * scn.scale_chi(), 0.0);
    let kappa = -I * (li.conj() - lj);
    let mu = -I * (dispersion(lj, &scn.params) - dispersion(li, &scn.params).conj());
    if kappa.norm() < DEGENERATE_EXPONENT_TOL {
        amp * x * (mu * t).exp()
    } else {
        amp * (kappa * x + mu * t).exp() / kappa
    }
}

/// Gram potential Θ(x, t): odd-odd blocks −i∫φᵢ*φⱼ dx, even-even blocks
/// +i∫χᵢ*χⱼ dx, zeros elsewhere. Block size 1 (commutative) or 2.
pub fn theta(scn: &SolitonScenario, x: f64, t: f64) -> ComplexMatrix {
    let n = scn.n();
    let k = match scn.mode {
        Mode::Commutative => 1,
        Mode::Noncommutative => 2,
    };
    let mut th = ComplexMatrix::zeros(2 * n * k, 2 * n * k);
    for i in 0..n {
        for j in 0..n {
            let p = -I * phi_pair_antiderivative(scn, i, j, x, t);
            let c = I * chi_pair_antiderivative(scn, i, j, x, t);
            th.set_block(2 * i * k, 2 * j * k, &ComplexMatrix::scalar(k, p));
            th.set_block(
                (2 * i + 1) * k,
                (2 * j + 1) * k,
                &ComplexMatrix::scalar(k, c),
            );
        }
    }
    th
}

/// Gram body 𝒲 = QΘ + I.
pub fn gram_body(scn: &SolitonScenario, x: f64, t: f64) -> Result<ComplexMatrix> {
    let th = theta(scn, x, t);
    scn.q
        .mul(&th)?
        .add(&ComplexMatrix::identity(scn.body_size()))
}

/// Border row (φ₁, 0, φ₂, 0, …) as k-wide identity blocks; `which` = 0 for
/// the φ row, 1 for the χ row.
fn border_row(scn: &SolitonScenario, which: usize, x: f64, t: f64) -> ComplexMatrix {
    let n = scn.n();
    let k = match scn.mode {
        Mode::Commutative => 1,
        Mode::Noncommutative => 2,
    };
    let mut row = ComplexMatrix::zeros(k, 2 * n * k);
    for j in 0..n {
        let v = if which == 0 {
            scn.phi(j, x, t)
        } else {
            scn.chi(j, x, t)
        };
        row.set_block(0, (2 * j + which) * k, &ComplexMatrix::scalar(k, v));
    }
    row
}

fn pole_error(x: f64, t: f64, e: Error) -> Error {
    match e {
        Error::Singular {
            pivot, threshold, ..
        } => Error::Pole {
            x,
            t,
            detail: format!("Gram body singular (pivot {pivot:.3e} < {threshold:.3e})"),
        },
        other => other,
    }
}

/// Scalar Gramian solution u(x, t) in commutative mode:
/// u = −2i·det([[𝒲, Qχ†],[φ, 0]])/det(𝒲), evaluated as the bordered
/// quasideterminant −2i·(0 − φ𝒲⁻¹Qχ†).
pub fn gramian_solution(scn: &SolitonScenario, x: f64, t: f64) -> Result<Complex64> {
    assert_eq!(
        scn.mode,
        Mode::Commutative,
        "gramian_solution needs a commutative scenario"
    );
    let w = gram_body(scn, x, t)?;
    let phi_row = border_row(scn, 0, x, t);
    let chi_col = scn.q.mul(&border_row(scn, 1, x, t).dagger())?;
    let q = bordered_quasideterminant(&w, &phi_row, &chi_col).map_err(|e| pole_error(x, t, e))?;
    Ok(-2.0 * I * q.as_scalar())
}

/// Companion row/column pairing of the Gramian pair: the published ū form
/// (border row χ, border column Qφ†, same −2i prefactor). Its bordered
/// determinant is the complex conjugate of the u one for real symmetric Q,
/// so |result| = |u|; the full value differs from conj(u) by the phase of
/// det 𝒲 (tested).
pub fn gramian_solution_conjugate_route(
    scn: &SolitonScenario,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    assert_eq!(scn.mode, Mode::Commutative);
    let w = gram_body(scn, x, t)?;
    let chi_row = border_row(scn, 1, x, t);
    let phi_col = scn.q.mul(&border_row(scn, 0, x, t).dagger())?;
    let q = bordered_quasideterminant(&w, &chi_row, &phi_col).map_err(|e| pole_error(x, t, e))?;
    Ok(-2.0 * I * q.as_scalar())
}

/// Quasi-Gramian solution u¹(x, t) as a 2×2 matrix in noncommutative mode.
/// Row p of the border is the p-th row of the block row (φ₁I₂, 0, …); the
/// border columns are the columns of Qχ†. The prefactor sign matches the
/// commutative route so that inflated scalar scenarios collapse exactly.
pub fn quasi_gramian_solution(scn: &SolitonScenario, x: f64, t: f64) -> Result<ComplexMatrix> {
    assert_eq!(
        scn.mode,
        Mode::Noncommutative,
        "quasi_gramian_solution needs a noncommutative scenario"
    );
    let w = gram_body(scn, x, t)?;
    let phi_rows = border_row(scn, 0, x, t); // 2 × 4n
    let chi_cols = scn.q.mul(&border_row(scn, 1, x, t).dagger())?; // 4n × 2
    let q = bordered_quasideterminant(&w, &phi_rows, &chi_cols).map_err(|e| pole_error(x, t, e))?;
    Ok(q.scale(-2.0 * I))
}

/// ξ₁, ξ₂ phases of the one-soliton closed form.
pub fn xi_pair(lambda: SpectralParam, params: &ModelParams, x: f64, t: f64) -> (f64, f64) {
    let lr = lambda.lambda.re;
    let li = lambda.lambda.im;
    let (a1, a2, g) = (params.alpha1, params.alpha2, params.gamma);
    let xi1 = (8.0 * (lr.powi(4) - 6.0 * lr * lr * li * li + li.powi(4)) * g
        + 2.0 * (-lr * lr + li * li) * a2
        + 4.0 * (-lr.powi(3) + 3.0 * lr * li * li) * a1)
        * t
        - lr * x;
    let xi2 = 8.0
        * (8.0 * (-lr.powi(3) + lr * li * li) * g + lr * a2 + (-li * li + 3.0 * lr * lr) * a1)
        * li
        * t
        + 2.0 * x * li;
    (xi1, xi2)
}

/// The displayed velocity bracket
/// 8(−λ_R³ + λ_R λ_I²)γ + λ_R α₂ + (−λ_I² + 3λ_R²)α₁.
/// The tracked |u₁| peak actually rides the ξ₂ = 0 line, whose slope is
/// −4 times this value (ξ₂ = 2λ_I x + 8λ_I·bracket·t).
pub fn peak_velocity_bracket(lambda: SpectralParam, params: &ModelParams) -> f64 {
    let lr = lambda.lambda.re;
    let li = lambda.lambda.im;
    8.0 * (-lr.powi(3) + lr * li * li) * params.gamma
        + lr * params.alpha2
        + (-li * li + 3.0 * lr * lr) * params.alpha1
}

/// One-soliton closed form
/// u₁ = 8i c₁ q₂ λ_I² e^{2iξ₁} / (4iλ_I c₁ q₁ cosh ξ₂ − 4λ_I²c₁² + q₁² − q₂²).
pub fn one_soliton_closed_form(
    lambda: SpectralParam,
    q1: f64,
    q2: f64,
    c1: f64,
    params: &ModelParams,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    let li = lambda.lambda.im;
    if li == 0.0 {
        return Err(Error::Scenario(
            "one_soliton_closed_form needs λ_I ≠ 0".into(),
        ));
    }
    let (xi1, xi2) = xi_pair(lambda, params, x, t);
    let num = 8.0 * I * c1 * q2 * li * li * (2.0 * I * xi1).exp();
    let den = 4.0 * I * li * c1 * q1 * xi2.cosh()
        + Complex64::new(-4.0 * li * li * c1 * c1 + q1 * q1 - q2 * q2, 0.0);
    if den.norm() < 1e-200 {
        return Err(Error::Pole {
            x,
            t,
            detail: "closed-form denominator vanished".into(),
        });
    }
    Ok(num / den)
}

/// Exact envelope soliton of the flow: u = 2λ_I e^{2iξ₁} sech(ξ₂). Passes
/// the residual operator at truncation level in every reduction limit, so
/// it serves as the positive control for the verification harness.
pub fn envelope_soliton(lambda: SpectralParam, params: &ModelParams, x: f64, t: f64) -> Complex64 {
    let li = lambda.lambda.im;
    let (xi1, xi2) = xi_pair(lambda, params, x, t);
    2.0 * li * (2.0 * I * xi1).exp() / Complex64::new(xi2.cosh(), 0.0)
}

/// Darboux matrix data D(λ) = λI − 𝒴Λ𝒴⁻¹.
#[derive(Clone, Debug)]
pub struct DarbouxMatrix {
    pub y: ComplexMatrix,
    pub lambda_mat: ComplexMatrix,
    pub lambda: Complex64,
}

impl DarbouxMatrix {
    pub fn new(y: ComplexMatrix, lambda_mat: ComplexMatrix, lambda: Complex64) -> Self {
        Self {
            y,
            lambda_mat,
            lambda,
        }
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        let n = self.y.rows();
        let yl = self.y.mul(&self.lambda_mat)?;
        let core = yl.mul(&self.y.inverse()?)?;
        ComplexMatrix::scalar(n, self.lambda).sub(&core)
    }
}

/// Transformed eigenfunction λφ − 𝒴Λ𝒴⁻¹φ, direct route.
pub fn darboux_apply(d: &DarbouxMatrix, phi: &ComplexMatrix) -> Result<ComplexMatrix> {
    let yl = d.y.mul(&d.lambda_mat)?;
    let core = yl.mul(&d.y.solve(phi)?)?;
    phi.scale(d.lambda).sub(&core)
}

/// Same value through the quasideterminant form
/// |[[𝒴, φ],[𝒴Λ, boxed λφ]]| = λφ − (𝒴Λ)𝒴⁻¹φ.
pub fn darboux_apply_quasidet(d: &DarbouxMatrix, phi: &ComplexMatrix) -> Result<ComplexMatrix> {
    let yl = d.y.mul(&d.lambda_mat)?;
    // expansion at the boxed λφ: pivot − row·body⁻¹·col with body 𝒴,
    // row 𝒴Λ, col φ
    phi.scale(d.lambda).sub(&yl.mul(&d.y.solve(phi)?)?)
}

/// Quasi-Wronskian data: eigenfunction matrices 𝒴ⱼ (k×k) with their
/// eigenvalue matrices Λⱼ.
#[derive(Clone, Debug)]
pub struct WronskianData {
    pub ys: Vec<ComplexMatrix>,
    pub lambda_mats: Vec<ComplexMatrix>,
}

impl WronskianData {
    /// Conjugate-pair 2×2 eigenfunction from one seed:
    /// 𝒴 = [[φ, s·χ̄],[χ, φ̄]] with Λ = diag(iλ, iλ̄). `chi_sign` s = +1 gives
    /// the pair whose u†-route equals conj(u) exactly; s = −1 gives the
    /// regular sech-producing pair (u†-route = −conj(u)).
    pub fn conjugate_pair(
        lambda: SpectralParam,
        params: &ModelParams,
        x: f64,
        t: f64,
        chi_sign: f64,
    ) -> Self {
        let seed = crate::lax::SeedEigenfunction::new(lambda, *params);
        let phi = seed.phi(x, t);
        let chi = seed.chi(x, t);
        let y = ComplexMatrix::from_rows(&[
            vec![phi, Complex64::new(chi_sign, 0.0) * chi.conj()],
            vec![chi, phi.conj()],
        ]);
        let lm = ComplexMatrix::from_rows(&[
            vec![I * lambda.lambda, Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), I * lambda.lambda.conj()],
        ]);
        Self {
            ys: vec![y],
            lambda_mats: vec![lm],
        }
    }
}

/// Zero-seed quasi-Wronskian pair (u_[n+1], u†_[n+1]):
///
/// ```text
/// u    = −2i · φ⁽ⁿ⁾ · Ξ̂⁻¹ · f_{2n}
/// u†   = −2i · χ⁽ⁿ⁾ · Ξ̂⁻¹ · f_{2n−1}
/// ```
///
/// where Ξ̂ = (𝒴ⱼ Λⱼ^{i−1}) is the 2n×2n stacked Wronskian-like body,
/// φ⁽ⁿ⁾/χ⁽ⁿ⁾ are the top/bottom rows of the 𝒴ⱼ Λⱼⁿ blocks, and f_k is the
/// unit column.
pub fn quasi_wronskian_solution(data: &WronskianData) -> Result<(Complex64, Complex64)> {
    let n = data.ys.len();
    if n == 0 || data.lambda_mats.len() != n {
        return Err(Error::Dimension(
            "quasi-Wronskian data needs matching 𝒴 and Λ lists".into(),
        ));
    }
    let k = data.ys[0].rows();
    if k != 2 {
        return Err(Error::Dimension(
            "scalar quasi-Wronskian expects 2×2 eigenfunction matrices".into(),
        ));
    }
    let size = 2 * n;
    let mut body = ComplexMatrix::zeros(size, size);
    let mut top = ComplexMatrix::zeros(1, size);
    let mut bottom = ComplexMatrix::zeros(1, size);
    for j in 0..n {
        let mut power = data.ys[j].clone();
        for i in 0..n {
            body.set_block(2 * i, 2 * j, &power);
            power = power.mul(&data.lambda_mats[j])?;
        }
        // power now holds 𝒴ⱼ Λⱼⁿ
        for col in 0..2 {
            top.set(0, 2 * j + col, power.get(0, col));
            bottom.set(0, 2 * j + col, power.get(1, col));
        }
    }
    let mut f_last = ComplexMatrix::zeros(size, 1);
    f_last.set(size - 1, 0, Complex64::new(1.0, 0.0));
    let mut f_prev = ComplexMatrix::zeros(size, 1);
    f_prev.set(size - 2, 0, Complex64::new(1.0, 0.0));

    let u = bordered_quasideterminant(&body, &top, &f_last)?.as_scalar() * 2.0 * I;
    let udag = bordered_quasideterminant(&body, &bottom, &f_prev)?.as_scalar() * 2.0 * I;
    Ok((u, udag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::{eom_residual, FieldGrid, GridMode};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fig2a_scenario() -> SolitonScenario {
        let q = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(-1.0, 0.0)],
            vec![c(-1.0, 0.0), c(2.0, 0.0)],
        ]);
        SolitonScenario::new(
            vec![SpectralParam::new(0.1, 0.5)],
            q,
            0.5,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Commutative,
        )
        .unwrap()
    }

    fn sym_q(q1: f64, q2: f64) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c(q1, 0.0), c(q2, 0.0)], vec![c(q2, 0.0), c(q1, 0.0)]])
    }

    #[test]
    fn theta_closed_forms() {
        // λ = 0.5i, c₁ = 1, t = 0: Θ₁₁(x, 0) = −i eˣ
        let scn = SolitonScenario::new(
            vec![SpectralParam::new(0.0, 0.5)],
            sym_q(1.0, 0.0),
            1.0,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Commutative,
        )
        .unwrap();
        for x in [-1.0, 0.0, 0.7] {
            let th = theta(&scn, x, 0.0);
            let expected = -I * c(x.exp(), 0.0);
            assert!((th.get(0, 0) - expected).norm() < 1e-12);
            assert_eq!(th.get(0, 1), c(0.0, 0.0));
        }

        // λ real: degenerate branch, Θ₁₁(x, 0) = −i x
        let scn = SolitonScenario::new(
            vec![SpectralParam::new(0.3, 0.0)],
            sym_q(1.0, 0.0),
            1.0,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Commutative,
        )
        .unwrap();
        let th = theta(&scn, 2.0, 0.0);
        assert!((th.get(0, 0) - (-I * c(2.0, 0.0))).norm() < 1e-12);
    }

    /// Simpson-rule quadrature oracle for Θ: Θ(x) − Θ(x₀) must equal the
    /// integral of the bilinears from x₀ to x. Covers the n = 2 pair from
    /// one of the published two-soliton configurations, all 16 entries.
    #[test]
    fn theta_matches_quadrature() {
        let scn = SolitonScenario::new(
            vec![SpectralParam::new(0.0, 0.6), SpectralParam::new(-1.1, -1.1)],
            ComplexMatrix::identity(4),
            1.0,
            ModelParams::new(0.5, 1.0, 1.0),
            Mode::Commutative,
        )
        .unwrap();
        let (x0, x1, t) = (-0.8, 0.9, 0.3);
        let th0 = theta(&scn, x0, t);
        let th1 = theta(&scn, x1, t);
        let steps = 4000;
        let h = (x1 - x0) / steps as f64;
        for i in 0..2 {
            for j in 0..2 {
                // integrate conj(φ_i) φ_j and conj(χ_i) χ_j by Simpson
                let fphi = |x: f64| scn.phi(i, x, t).conj() * scn.phi(j, x, t);
                let fchi = |x: f64| scn.chi(i, x, t).conj() * scn.chi(j, x, t);
                let simpson = |f: &dyn Fn(f64) -> Complex64| {
                    let mut s = f(x0) + f(x1);
                    for k in 1..steps {
                        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                        s += w * f(x0 + k as f64 * h);
                    }
                    s * (h / 3.0)
                };
                let dphi = -I * simpson(&fphi);
                let dchi = I * simpson(&fchi);
                assert!(
                    ((th1.get(2 * i, 2 * j) - th0.get(2 * i, 2 * j)) - dphi).norm() < 1e-8,
                    "phi pair ({i},{j})"
                );
                assert!(
                    ((th1.get(2 * i + 1, 2 * j + 1) - th0.get(2 * i + 1, 2 * j + 1)) - dchi).norm()
                        < 1e-8,
                    "chi pair ({i},{j})"
                );
                assert_eq!(th1.get(2 * i, 2 * j + 1), c(0.0, 0.0));
            }
        }
    }

    /// ∂ₓΘ equals the seed bilinear matrix (the defining derivative
    /// relation), central difference with step 1e-4, including the
    /// degenerate branch.
    #[test]
    fn theta_derivative_matches_bilinears() {
        let cases = [
            vec![SpectralParam::new(0.1, 0.5)],
            vec![SpectralParam::new(0.4, 0.0)], // degenerate
            vec![SpectralParam::new(0.0, 0.6), SpectralParam::new(-1.1, -1.1)],
        ];
        for lambdas in cases {
            let n = lambdas.len();
            let scn = SolitonScenario::new(
                lambdas,
                ComplexMatrix::identity(2 * n),
                0.7,
                ModelParams::new(1.5, 1.0, 1.0),
                Mode::Commutative,
            )
            .unwrap();
            let (x, t, h) = (0.37, -0.21, 1e-4);
            let dth = theta(&scn, x + h, t)
                .sub(&theta(&scn, x - h, t))
                .unwrap()
                .scale(c(1.0 / (2.0 * h), 0.0));
            for i in 0..n {
                for j in 0..n {
                    let phi_b = -I * scn.phi(i, x, t).conj() * scn.phi(j, x, t);
                    let chi_b = I * scn.chi(i, x, t).conj() * scn.chi(j, x, t);
                    // relative for large-dispersion entries, absolute near zero
                    let tol = |b: Complex64| 1e-7 * b.norm().max(1.0);
                    assert!((dth.get(2 * i, 2 * j) - phi_b).norm() < tol(phi_b));
                    assert!((dth.get(2 * i + 1, 2 * j + 1) - chi_b).norm() < tol(chi_b));
                }
            }
        }
    }

    #[test]
    fn theta_nc_blocks_are_scalar_multiples_of_identity() {
        let scn = SolitonScenario::new(
            vec![SpectralParam::new(-0.1, 0.5), SpectralParam::new(0.0, 0.3)],
            ComplexMatrix::identity(8),
            0.5,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Noncommutative,
        )
        .unwrap();
        let comm = SolitonScenario::new(
            scn.lambdas.clone(),
            ComplexMatrix::identity(4),
            0.5,
            scn.params,
            Mode::Commutative,
        )
        .unwrap();
        let (x, t) = (0.7, -0.4);
        let th = theta(&scn, x, t);
        let th_c = theta(&comm, x, t);
        assert_eq!(th.rows(), 8);
        // each 2×2 block is the commutative entry times I₂
        for bi in 0..4 {
            for bj in 0..4 {
                let want = th_c.get(bi, bj);
                for i in 0..2 {
                    for j in 0..2 {
                        let expect = if i == j { want } else { c(0.0, 0.0) };
                        assert_eq!(th.get(2 * bi + i, 2 * bj + j), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_coupling_gives_zero_field() {
        let scn = SolitonScenario::new(
            vec![SpectralParam::new(0.1, 0.5)],
            ComplexMatrix::zeros(2, 2),
            0.5,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Commutative,
        )
        .unwrap();
        for (x, t) in [(0.0, 0.0), (2.0, -1.0), (-5.0, 1.5)] {
            assert_eq!(gramian_solution(&scn, x, t).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn gramian_matches_closed_form_on_fig2a() {
        let scn = fig2a_scenario();
        let lam = scn.lambdas[0];
        let p = scn.params;
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..100 {
            let x = rng.gen_range(-10.0..10.0);
            let t = rng.gen_range(-2.0..2.0);
            let g = gramian_solution(&scn, x, t).unwrap();
            let f = one_soliton_closed_form(lam, 2.0, -1.0, 0.5, &p, x, t).unwrap();
            assert!(
                (g - f).norm() / f.norm().max(1e-300) < 1e-9,
                "at ({x}, {t})"
            );
        }
    }

    #[test]
    fn gramian_matches_closed_form_on_random_draws() {
        let mut rng = StdRng::seed_from_u64(4242);
        for _ in 0..20 {
            let lam = SpectralParam::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..1.0));
            let (q1, q2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let c1 = rng.gen_range(0.2..2.0);
            let p = ModelParams::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let scn =
                SolitonScenario::new(vec![lam], sym_q(q1, q2), c1, p, Mode::Commutative).unwrap();
            for _ in 0..5 {
                let x = rng.gen_range(-5.0..5.0);
                let t = rng.gen_range(-1.0..1.0);
                let g = gramian_solution(&scn, x, t).unwrap();
                let f = one_soliton_closed_form(lam, q1, q2, c1, &p, x, t).unwrap();
                // relative in general; absolute floor for deep-tail points
                // where the Gram route is cancellation-limited
                let err = (g - f).norm();
                assert!(
                    err / f.norm().max(1e-300) < 1e-9 || err < 1e-13,
                    "λ={lam:?} q=({q1},{q2}) c1={c1} p={p:?} at ({x},{t}): {g} vs {f}"
                );
            }
        }
    }

    #[test]
    fn closed_form_edges() {
        let p = ModelParams::new(1.5, 1.0, 1.0);
        let lam = SpectralParam::new(0.1, 0.5);
        // q₂ = 0 kills the numerator
        let u = one_soliton_closed_form(lam, 2.0, 0.0, 0.5, &p, 1.3, -0.7).unwrap();
        assert_eq!(u, c(0.0, 0.0));
        // λ real is rejected
        assert!(one_soliton_closed_form(
            SpectralParam::new(0.4, 0.0),
            2.0,
            -1.0,
            0.5,
            &p,
            0.0,
            0.0
        )
        .is_err());
    }

    #[test]
    fn profile_symmetric_at_t0_for_imaginary_lambda() {
        // Fig. 2(b) parameters: λ = 0.5i, peak at x = 0, |u| even in x
        let scn = SolitonScenario::new(
            vec![SpectralParam::new(0.0, 0.5)],
            sym_q(2.0, -1.0),
            0.5,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Commutative,
        )
        .unwrap();
        for x in [0.3, 1.1, 2.7] {
            let a = gramian_solution(&scn, x, 0.0).unwrap().norm();
            let b = gramian_solution(&scn, -x, 0.0).unwrap().norm();
            assert!((a - b).abs() < 1e-9);
        }
    }

    /// The λ_R = 0 soliton is stationary only when α₁ = 0; in general its
    /// ξ₂ = 0 ridge moves at −4·bracket. Track the peak and check both.
    #[test]
    fn tracked_peak_velocity_is_minus_four_brackets() {
        for (p, lam) in [
            (
                ModelParams::new(0.0, 1.0, 1.0),
                SpectralParam::new(0.0, 0.5),
            ), // stationary
            (
                ModelParams::new(1.5, 1.0, 1.0),
                SpectralParam::new(0.1, 0.5),
            ), // Fig. 2(a)
        ] {
            let scn = SolitonScenario::new(vec![lam], sym_q(2.0, -1.0), 0.5, p, Mode::Commutative)
                .unwrap();
            let track = |t: f64| -> f64 {
                let mut best = (0.0f64, f64::MIN);
                let m = 8001;
                for i in 0..m {
                    let x = -10.0 + 20.0 * i as f64 / (m - 1) as f64;
                    let v = gramian_solution(&scn, x, t).unwrap().norm();
                    if v > best.1 {
                        best = (x, v);
                    }
                }
                best.0
            };
            let (t0, t1) = (-1.0, 1.0);
            let measured = (track(t1) - track(t0)) / (t1 - t0);
            let expected = -4.0 * peak_velocity_bracket(lam, &p);
            let tol = 0.02 * expected.abs().max(0.01);
            assert!(
                (measured - expected).abs() < tol.max(0.006),
                "measured {measured}, expected {expected}"
            );
        }
    }

    #[test]
    fn envelope_soliton_passes_residual() {
        let p = ModelParams::new(1.5, 1.0, 1.0);
        let lam = SpectralParam::new(0.1, 0.5);
        let h = 4e-3;
        let grid = FieldGrid::generate(
            (0..9).map(|i| 0.2 + h * (i as f64 - 4.0)).collect(),
            (0..9).map(|i| -0.5 + h * (i as f64 - 4.0)).collect(),
            GridMode::Commutative,
            |x, t| Ok(ComplexMatrix::from_scalar(envelope_soliton(lam, &p, x, t))),
        )
        .unwrap();
        let r = eom_residual(&grid, &p).unwrap().max_abs();
        assert!(r < 5e-4, "envelope soliton residual {r}");
    }

    /// The bordered family itself does not satisfy the flow: the residual is
    /// O(1) and grid-independent. Kept as a pinned regression so the
    /// measured behaviour of the published family stays visible.
    #[test]
    fn gramian_family_residual_is_order_one() {
        let scn = fig2a_scenario();
        let h = 4e-3;
        let grid = FieldGrid::generate(
            (0..9).map(|i| 0.2 + h * (i as f64 - 4.0)).collect(),
            (0..9).map(|i| -0.5 + h * (i as f64 - 4.0)).collect(),
            GridMode::Commutative,
            |x, t| Ok(ComplexMatrix::from_scalar(gramian_solution(&scn, x, t)?)),
        )
        .unwrap();
        let r = eom_residual(&grid, &scn.params).unwrap().max_abs();
        assert!(r > 1e-2, "expected an O(1) residual, got {r}");
    }

    fn nc_q(q11: f64, q12: f64, q13: f64, q14: f64, q33: f64, q34: f64) -> ComplexMatrix {
        let r = |v: f64| c(v, 0.0);
        ComplexMatrix::from_rows(&[
            vec![r(q11), r(q12), r(q13), r(q14)],
            vec![r(q12), r(q11), r(q14), r(q13)],
            vec![r(q13), r(q14), r(q33), r(q34)],
            vec![r(q14), r(q13), r(q34), r(q33)],
        ])
    }

    #[test]
    fn nc_trivial_when_cross_block_vanishes() {
        // q₁₃ = q₁₄ = 0 zeroes the φ→χ coupling and the field collapses
        let scn = SolitonScenario::new(
            vec![SpectralParam::new(-0.1, 0.5)],
            nc_q(0.5, -0.2, 0.0, 0.0, -0.3, 0.1),
            0.5,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Noncommutative,
        )
        .unwrap();
        for (x, t) in [(0.0, 0.0), (1.5, -2.0), (-3.0, 0.8)] {
            let u = quasi_gramian_solution(&scn, x, t).unwrap();
            assert!(u.max_abs() < 1e-14);
        }
    }

    #[test]
    fn nc_scalar_symmetric_collapses_to_commutative() {
        // Q = Q_comm ⊗ I₂ and identical seeds make u¹ = u·I₂
        let (q1, q2) = (1.3, -0.6);
        let comm = SolitonScenario::new(
            vec![SpectralParam::new(0.1, 0.5)],
            sym_q(q1, q2),
            0.5,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Commutative,
        )
        .unwrap();
        let nc = SolitonScenario::new(
            vec![SpectralParam::new(0.1, 0.5)],
            nc_q(q1, 0.0, q2, 0.0, q1, 0.0),
            0.5,
            ModelParams::new(1.5, 1.0, 1.0),
            Mode::Noncommutative,
        )
        .unwrap();
        for (x, t) in [(0.4, 0.1), (-2.0, 1.0), (3.0, -1.5)] {
            let u = gramian_solution(&comm, x, t).unwrap();
            let m = quasi_gramian_solution(&nc, x, t).unwrap();
            assert!((m.get(0, 0) - u).norm() < 1e-10);
            assert!((m.get(1, 1) - u).norm() < 1e-10);
            assert!(m.get(0, 1).norm() < 1e-12);
            assert!(m.get(1, 0).norm() < 1e-12);
        }
    }

    #[test]
    fn darboux_apply_routes_and_edges() {
        let mut rng = StdRng::seed_from_u64(314);
        // Y = I, Λ diagonal: λφ − Λφ componentwise
        let lm = ComplexMatrix::from_rows(&[
            vec![c(0.3, 0.1), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-0.2, 0.6)],
        ]);
        let d = DarbouxMatrix::new(ComplexMatrix::identity(2), lm.clone(), c(1.0, -0.5));
        let phi = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0)], vec![c(-0.3, 0.4)]]);
        let out = darboux_apply(&d, &phi).unwrap();
        for i in 0..2 {
            let expected = (d.lambda - lm.get(i, i)) * phi.get(i, 0);
            assert!((out.get(i, 0) - expected).norm() < 1e-14);
        }

        // eigen-direction: φ a column of Y scales by (λ − Λ_jj)
        let y = ComplexMatrix::from_fn(2, 2, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let d = DarbouxMatrix::new(y.clone(), lm.clone(), c(0.7, 0.2));
        let col = y.block(0, 0, 2, 1);
        let out = darboux_apply(&d, &col).unwrap();
        for i in 0..2 {
            let expected = (d.lambda - lm.get(0, 0)) * col.get(i, 0);
            assert!((out.get(i, 0) - expected).norm() < 1e-12);
        }

        // dual-route agreement on random data
        for _ in 0..10 {
            let y = ComplexMatrix::from_fn(2, 2, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let l = ComplexMatrix::from_fn(2, 2, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let phi = ComplexMatrix::from_fn(2, 1, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let d = DarbouxMatrix::new(y, l, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let a = match darboux_apply(&d, &phi) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let b = darboux_apply_quasidet(&d, &phi).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-10);
        }

        // singular Y is loud
        let d = DarbouxMatrix::new(ComplexMatrix::zeros(2, 2), lm, c(1.0, 0.0));
        assert!(darboux_apply(&d, &phi).is_err());
    }

    #[test]
    fn quasi_wronskian_sech_pair_matches_gramian() {
        // correspondence pinned numerically: the sech pair with unit seeds
        // equals the Gramian with Q = [[q₁, iq₁],[iq₁, q₁]], q₁ = √2 λ_I c₁
        let lam = SpectralParam::new(0.17, 0.43);
        let p = ModelParams::new(1.5, 1.0, 1.0);
        let c1 = 0.8;
        let q1 = std::f64::consts::SQRT_2 * lam.lambda.im * c1;
        let q =
            ComplexMatrix::from_rows(&[vec![c(q1, 0.0), c(0.0, q1)], vec![c(0.0, q1), c(q1, 0.0)]]);
        let scn = SolitonScenario::new(vec![lam], q, c1, p, Mode::Commutative).unwrap();
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..30 {
            let x = rng.gen_range(-4.0..4.0);
            let t = rng.gen_range(-1.5..1.5);
            let data = WronskianData::conjugate_pair(lam, &p, x, t, -1.0);
            let (u, _) = quasi_wronskian_solution(&data).unwrap();
            let g = gramian_solution(&scn, x, t).unwrap();
            assert!((u - g).norm() < 1e-10, "at ({x}, {t}): {u} vs {g}");
        }
    }

    #[test]
    fn quasi_wronskian_conjugate_pair_hermitian() {
        let lam = SpectralParam::new(0.17, 0.43);
        let p = ModelParams::new(1.5, 1.0, 1.0);
        let mut rng = StdRng::seed_from_u64(100);
        for _ in 0..30 {
            let x = rng.gen_range(0.5..4.0); // stay off the ξ₂ = 0 pole line
            let t = rng.gen_range(-1.5..1.5);
            let plus = WronskianData::conjugate_pair(lam, &p, x, t, 1.0);
            let (u, udag) = quasi_wronskian_solution(&plus).unwrap();
            assert!((udag - u.conj()).norm() < 1e-10);

            let minus = WronskianData::conjugate_pair(lam, &p, x, t, -1.0);
            let (u, udag) = quasi_wronskian_solution(&minus).unwrap();
            assert!((udag + u.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn quasi_wronskian_vanishing_phi_block_gives_zero() {
        // diagonal 𝒴 (φ-slot only in its own column) kills the correction
        let y = ComplexMatrix::from_rows(&[
            vec![c(1.3, 0.2), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.4, -0.7)],
        ]);
        let lm = ComplexMatrix::scalar(2, c(0.0, 0.8));
        let data = WronskianData {
            ys: vec![y],
            lambda_mats: vec![lm],
        };
        let (u, _) = quasi_wronskian_solution(&data).unwrap();
        assert!(u.norm() < 1e-14);
    }

    /// Gramian pair: the ū-route bordered determinant is the conjugate of
    /// the u-route one (real symmetric Q), so the magnitudes match; the
    /// values differ by the det 𝒲 phase.
    #[test]
    fn gramian_conjugate_route_relation() {
        let scn = fig2a_scenario();
        let mut rng = StdRng::seed_from_u64(1001);
        for _ in 0..40 {
            let x = rng.gen_range(-6.0..6.0);
            let t = rng.gen_range(-2.0..2.0);
            let u = gramian_solution(&scn, x, t).unwrap();
            let ubar = gramian_solution_conjugate_route(&scn, x, t).unwrap();
            assert!((u.norm() - ubar.norm()).abs() < 1e-10);
            // bordered determinants are conjugate: 𝒢_ū = conj(𝒢_u), and with
            // the −2i prefactor that reads ū·det𝒲 = −conj(u·det𝒲)
            let w = gram_body(&scn, x, t).unwrap().det().unwrap();
            let lhs = ubar * w;
            let rhs = -(u * w).conj();
            assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn scenario_validation() {
        assert!(SolitonScenario::new(
            vec![],
            ComplexMatrix::identity(2),
            0.5,
            ModelParams::new(0.0, 1.0, 0.0),
            Mode::Commutative
        )
        .is_err());
        assert!(SolitonScenario::new(
            vec![SpectralParam::new(0.1, 0.5)],
            ComplexMatrix::identity(3),
            0.5,
            ModelParams::new(0.0, 1.0, 0.0),
            Mode::Commutative
        )
        .is_err());
        assert!(SolitonScenario::new(
            vec![SpectralParam::new(0.1, 0.5)],
            ComplexMatrix::identity(2),
            -1.0,
            ModelParams::new(0.0, 1.0, 0.0),
            Mode::Commutative
        )
        .is_err());
    }
}
