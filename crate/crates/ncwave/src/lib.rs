//! Exact field construction and verification tooling for a higher-order
//! nonlinear Schrödinger flow with matrix-valued (noncommutative) fields.
//!
//! The crate is organised around five layers:
//!
//! - [`ncalgebra`] — dense complex matrices, block assembly, LU inversion
//!   with loud singularity reporting;
//! - [`quasidet`] — quasideterminant expansion over block matrices, the 2×2
//!   quasi-inverse, and the bordered form used by the solution formulas;
//! - [`lax`] — model coefficients, seed eigenfunctions, Lax matrices, and
//!   the independent finite-difference residual operator (full equation and
//!   its nls/hirota/lpd/mkdv limits);
//! - [`darboux`] — Gramian and quasi-Gramian field construction, the
//!   one-soliton closed form, quasi-Wronskian forms, and the exact envelope
//!   soliton used as the verification positive control;
//! - [`mi`] — plane waves and modulation-instability growth rates.
//!
//! [`cli`] adds scenario files, CSV/JSON emission, and the four operations
//! behind the `ncwave` binary. Start with the runnable examples:
//! `cargo run --example one_soliton` and friends each demonstrate one
//! capability end to end.
//!
//! ```
//! use ncwave::darboux::{envelope_soliton, gramian_solution, Mode, SolitonScenario};
//! use ncwave::lax::{ModelParams, SpectralParam};
//! use ncwave::mi::{growth_rate_closed, growth_rate_numeric};
//! use ncwave::ncalgebra::ComplexMatrix;
//! use num_complex::Complex64;
//!
//! let params = ModelParams::new(1.5, 1.0, 1.0);
//! let lambda = SpectralParam::new(0.1, 0.5);
//!
//! // bordered Gram-potential field with a symmetric 2×2 coupling
//! let q = ComplexMatrix::from_rows(&[
//!     vec![Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0)],
//!     vec![Complex64::new(-1.0, 0.0), Complex64::new(2.0, 0.0)],
//! ]);
//! let scn = SolitonScenario::new(vec![lambda], q, 0.5, params, Mode::Commutative)?;
//! let u = gramian_solution(&scn, 0.0, 0.0)?;
//! assert!((u.norm() - 0.29408).abs() < 1e-4);
//!
//! // the exact envelope soliton has amplitude 2·λ_I
//! let peak = envelope_soliton(lambda, &params, 0.0, 0.0).norm();
//! assert!((peak - 1.0).abs() < 1e-12);
//!
//! // the two growth-rate routes agree
//! let (k, c) = (0.8, 0.5);
//! assert!((growth_rate_closed(k, c, &params).re - growth_rate_numeric(k, c, &params)).abs() < 1e-12);
//! # Ok::<(), ncwave::Error>(())
//! ```

pub mod cli;
pub mod darboux;
pub mod error;
pub mod lax;
pub mod mi;
pub mod ncalgebra;
pub mod quasidet;

pub use error::{Error, Result};
