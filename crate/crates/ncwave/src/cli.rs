//! Scenario files, batch field/residual/growth-rate generation, and the
//! four operations behind the `ncwave` binary.
//!
//! Scenario files are TOML with a versioned `schema` field. Fields are
//! written as CSV (header row, locale-independent decimals, complex values
//! as paired columns, poles flagged in a `status` column); statistics are
//! JSON. Exit codes are a stable contract: 0 success, 2 input error,
//! 3 degenerate output (more than half the grid on poles), 4 numerical or
//! stencil failure.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::darboux::{self, Mode, SolitonScenario};
use crate::error::{Error, Result};
use crate::lax::{
    self, eom_residual_breakdown, FieldGrid, GridMode, ModelParams, Reduction, SpectralParam,
};
use crate::mi;
use crate::ncalgebra::ComplexMatrix;

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk scenario description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScenarioFile {
    pub schema: u32,
    pub mode: String,
    pub c1: f64,
    /// Flat row-major coupling matrix: (2n)² entries in commutative mode,
    /// (4n)² in noncommutative mode (the coupling acts on 2×2 blocks there).
    pub q: Vec<f64>,
    pub model: ModelSection,
    pub solitons: Vec<SolitonSection>,
    pub grid: GridSection,
    #[serde(default)]
    pub outputs: OutputsSection,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelSection {
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolitonSection {
    pub lambda_re: f64,
    pub lambda_im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSection {
    #[serde(rename = "xMin")]
    pub x_min: f64,
    #[serde(rename = "xMax")]
    pub x_max: f64,
    pub nx: usize,
    #[serde(rename = "tMin")]
    pub t_min: f64,
    #[serde(rename = "tMax")]
    pub t_max: f64,
    pub nt: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OutputsSection {
    #[serde(default = "default_true")]
    pub fields: bool,
    #[serde(default = "default_true")]
    pub residuals: bool,
    #[serde(default)]
    pub mi: bool,
}

fn default_true() -> bool {
    true
}

impl Default for OutputsSection {
    fn default() -> Self {
        Self {
            fields: true,
            residuals: true,
            mi: false,
        }
    }
}

/// The CLI caps soliton count here; the library itself is n-generic.
pub const MAX_SOLITONS: usize = 3;

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::Scenario(format!("parse failure: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Scenario(format!("serialize failure: {e}")))
    }

    pub fn grid_mode(&self) -> Result<GridMode> {
        match self.mode.as_str() {
            "commutative" => Ok(GridMode::Commutative),
            "noncommutative" => Ok(GridMode::Noncommutative),
            other => Err(Error::Scenario(format!(
                "mode must be 'commutative' or 'noncommutative', got '{other}'"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "unsupported schema {} (this build reads schema {SCHEMA_VERSION})",
                self.schema
            )));
        }
        let mode = self.grid_mode()?;
        let n = self.solitons.len();
        if n == 0 || n > MAX_SOLITONS {
            return Err(Error::Scenario(format!(
                "soliton count must be 1..={MAX_SOLITONS}, got {n}"
            )));
        }
        let side = match mode {
            GridMode::Commutative => 2 * n,
            GridMode::Noncommutative => 4 * n,
        };
        if self.q.len() != side * side {
            return Err(Error::Scenario(format!(
                "q must have {}² = {} entries for n = {n} in {} mode, got {}",
                side,
                side * side,
                self.mode,
                self.q.len()
            )));
        }
        if self.grid.nx < 2 || self.grid.nt < 2 {
            return Err(Error::Scenario(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        if self.outputs.residuals && (self.grid.nx < 9 || self.grid.nt < 9) {
            return Err(Error::Scenario(
                "grid counts must be ≥ 9 per axis when residuals are requested".into(),
            ));
        }
        if !(self.grid.x_min < self.grid.x_max && self.grid.t_min < self.grid.t_max) {
            return Err(Error::Scenario("grid bounds must be increasing".into()));
        }
        for v in [
            self.c1,
            self.model.alpha1,
            self.model.alpha2,
            self.model.gamma,
        ] {
            if !v.is_finite() {
                return Err(Error::Scenario(
                    "scenario contains non-finite numbers".into(),
                ));
            }
        }
        if self.q.iter().any(|v| !v.is_finite()) {
            return Err(Error::Scenario("q contains non-finite numbers".into()));
        }
        Ok(())
    }

    pub fn to_scenario(&self) -> Result<SolitonScenario> {
        self.validate()?;
        let mode = match self.grid_mode()? {
            GridMode::Commutative => Mode::Commutative,
            GridMode::Noncommutative => Mode::Noncommutative,
        };
        let n = self.solitons.len();
        let side = match mode {
            Mode::Commutative => 2 * n,
            Mode::Noncommutative => 4 * n,
        };
        let q =
            ComplexMatrix::from_fn(side, side, |i, j| Complex64::new(self.q[i * side + j], 0.0));
        let lambdas = self
            .solitons
            .iter()
            .map(|s| SpectralParam::new(s.lambda_re, s.lambda_im))
            .collect();
        SolitonScenario::new(
            lambdas,
            q,
            self.c1,
            ModelParams::new(self.model.alpha1, self.model.alpha2, self.model.gamma),
            mode,
        )
        .map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.grid.x_min, self.grid.x_max, self.grid.nx)
    }

    pub fn ts(&self) -> Vec<f64> {
        linspace(self.grid.t_min, self.grid.t_max, self.grid.nt)
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Evaluate the scenario's field on its grid, flagging poles per point.
pub fn generate_field(file: &ScenarioFile) -> Result<FieldGrid> {
    let scn = file.to_scenario()?;
    let mode = file.grid_mode()?;
    FieldGrid::generate(file.xs(), file.ts(), mode, move |x, t| match scn.mode {
        Mode::Commutative => Ok(ComplexMatrix::from_scalar(darboux::gramian_solution(
            &scn, x, t,
        )?)),
        Mode::Noncommutative => darboux::quasi_gramian_solution(&scn, x, t),
    })
}

fn fmt_f64(v: f64) -> String {
    // shortest representation that round-trips; locale-independent
    format!("{v:.17e}")
}

/// CSV header for a field table; fixed column order.
pub fn csv_header(mode: GridMode) -> String {
    match mode {
        GridMode::Commutative => "x,t,re,im,abs,status".to_string(),
        GridMode::Noncommutative => {
            let mut cols = vec!["x".to_string(), "t".to_string()];
            for comp in ["u11", "u12", "u21", "u22"] {
                for part in ["re", "im", "abs"] {
                    cols.push(format!("{part}_{comp}"));
                }
            }
            cols.push("status".to_string());
            cols.join(",")
        }
    }
}

/// Write one field row per grid point, t-major then x, poles flagged.
pub fn write_field_csv(grid: &FieldGrid, mut out: impl Write) -> Result<()> {
    writeln!(out, "{}", csv_header(grid.mode))?;
    for it in 0..grid.nt() {
        for ix in 0..grid.nx() {
            let v = grid.value(it, ix);
            let status = if grid.is_pole(it, ix) { "pole" } else { "ok" };
            let mut row = vec![fmt_f64(grid.xs[ix]), fmt_f64(grid.ts[it])];
            match grid.mode {
                GridMode::Commutative => {
                    let z = v.as_scalar();
                    row.push(fmt_f64(z.re));
                    row.push(fmt_f64(z.im));
                    row.push(fmt_f64(z.norm()));
                }
                GridMode::Noncommutative => {
                    for i in 0..2 {
                        for j in 0..2 {
                            let z = v.get(i, j);
                            row.push(fmt_f64(z.re));
                            row.push(fmt_f64(z.im));
                            row.push(fmt_f64(z.norm()));
                        }
                    }
                }
            }
            row.push(status.to_string());
            writeln!(out, "{}", row.join(","))?;
        }
    }
    Ok(())
}

/// Generate the scenario's field and write it as CSV. More than half the
/// grid flagged as poles is reported as degenerate output.
pub fn cmd_soliton(scenario_path: &Path, out_path: &Path) -> Result<()> {
    let file = ScenarioFile::load(scenario_path)?;
    let grid = generate_field(&file)?;
    let flagged = grid.pole_count();
    let total = grid.nx() * grid.nt();
    let f = fs::File::create(out_path)?;
    write_field_csv(&grid, std::io::BufWriter::new(f))?;
    if flagged * 2 > total {
        return Err(Error::PoleDominated { flagged, total });
    }
    Ok(())
}

/// Residual statistics written by `verify`.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "maxResidual")]
    pub max_residual: f64,
    #[serde(rename = "meanResidual")]
    pub mean_residual: f64,
    #[serde(rename = "gridSpacing")]
    pub grid_spacing: GridSpacing,
    #[serde(rename = "stencilOrder")]
    pub stencil_order: u32,
    #[serde(rename = "trimmedBoundary")]
    pub trimmed_boundary: bool,
    #[serde(rename = "perTerm")]
    pub per_term: lax::ResidualBreakdown,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridSpacing {
    pub x: f64,
    pub t: f64,
}

/// Evaluate the equation residual of the scenario's field on its grid.
pub fn verify_report(file: &ScenarioFile) -> Result<VerifyReport> {
    let grid = generate_field(file)?;
    let params = ModelParams::new(file.model.alpha1, file.model.alpha2, file.model.gamma);
    let (res, per_term) = eom_residual_breakdown(&grid, &params)?;
    Ok(VerifyReport {
        max_residual: res.max_abs(),
        mean_residual: res.mean_abs(),
        grid_spacing: GridSpacing {
            x: grid.hx(),
            t: grid.ht(),
        },
        stencil_order: 2,
        trimmed_boundary: true,
        per_term,
    })
}

pub fn cmd_verify(scenario_path: &Path, out_path: &Path) -> Result<()> {
    let file = ScenarioFile::load(scenario_path)?;
    let report = verify_report(&file)?;
    fs::write(
        out_path,
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    Ok(())
}

/// Growth-rate sweep table plus the band summary.
#[derive(Clone, Debug, Serialize)]
pub struct MiSummary {
    pub c: f64,
    #[serde(rename = "kMax")]
    pub k_max: f64,
    pub samples: usize,
    pub bands: Vec<mi::Band>,
}

pub fn cmd_mi(
    scenario_path: &Path,
    c: f64,
    k_max: f64,
    samples: usize,
    out_path: &Path,
    bands_path: &Path,
) -> Result<()> {
    if samples < 100 {
        return Err(Error::Scenario(format!(
            "samples must be ≥ 100, got {samples}"
        )));
    }
    if !k_max.is_finite() || k_max <= 0.0 {
        return Err(Error::Scenario(format!(
            "k-max must be positive, got {k_max}"
        )));
    }
    let file = ScenarioFile::load(scenario_path)?;
    let params = ModelParams::new(file.model.alpha1, file.model.alpha2, file.model.gamma);

    let f = fs::File::create(out_path)?;
    let mut w = std::io::BufWriter::new(f);
    writeln!(w, "k,omegaRe,omegaIm,unstable")?;
    for k in linspace(-k_max, k_max, samples) {
        let omega = mi::growth_rate_closed(k, c, &params);
        let unstable = mi::growth_rate_numeric(k, c, &params) > 1e-12;
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(k),
            fmt_f64(omega.re),
            fmt_f64(omega.im),
            u8::from(unstable)
        )?;
    }
    drop(w);

    let summary = MiSummary {
        c,
        k_max,
        samples,
        bands: mi::unstable_band(c, &params, k_max, samples.max(100)),
    };
    fs::write(
        bands_path,
        serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )?;
    Ok(())
}

/// Reduced-scenario verification statistics printed by `reduce`.
#[derive(Clone, Debug, Serialize)]
pub struct ReduceReport {
    pub limit: String,
    pub model: ModelSection,
    #[serde(rename = "maxResidual")]
    pub max_residual: f64,
    #[serde(rename = "meanResidual")]
    pub mean_residual: f64,
}

/// Zero the parameters of the requested limit, regenerate the field, and
/// verify it against the independently transcribed reduced equation.
pub fn reduce_scenario(
    file: &ScenarioFile,
    limit: Reduction,
) -> Result<(ScenarioFile, ReduceReport)> {
    let params =
        ModelParams::new(file.model.alpha1, file.model.alpha2, file.model.gamma).reduced(limit);
    let mut reduced = file.clone();
    reduced.model = ModelSection {
        alpha1: params.alpha1,
        alpha2: params.alpha2,
        gamma: params.gamma,
    };
    let grid = generate_field(&reduced)?;
    let res = lax::reduced_residual(&grid, &params, limit)?;
    let report = ReduceReport {
        limit: format!("{limit:?}").to_lowercase(),
        model: reduced.model.clone(),
        max_residual: res.max_abs(),
        mean_residual: res.mean_abs(),
    };
    Ok((reduced, report))
}

pub fn cmd_reduce(scenario_path: &Path, limit: &str, out_path: &Path) -> Result<String> {
    let limit: Reduction = limit.parse()?;
    let file = ScenarioFile::load(scenario_path)?;
    let (reduced, report) = reduce_scenario(&file, limit)?;
    reduced.save(out_path)?;
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

/// Stable exit-code contract.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Scenario(_) | Error::Dimension(_) => 2,
        Error::PoleDominated { .. } => 3,
        Error::Stencil { .. } | Error::Singular { .. } | Error::Pole { .. } => 4,
        Error::Io(_) => 1,
    }
}
