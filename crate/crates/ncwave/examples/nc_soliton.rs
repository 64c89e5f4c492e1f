//! Evaluate a matrix-valued (noncommutative) one-soliton field and report
//! the peak magnitude of each 2×2 component over the plotting window.

use ncwave::darboux::{quasi_gramian_solution, Mode, SolitonScenario};
use ncwave::lax::{ModelParams, SpectralParam};
use ncwave::ncalgebra::ComplexMatrix;
use num_complex::Complex64;

fn coupling(q11: f64, q12: f64, q13: f64, q14: f64, q33: f64, q34: f64) -> ComplexMatrix {
    let r = |v: f64| Complex64::new(v, 0.0);
    ComplexMatrix::from_rows(&[
        vec![r(q11), r(q12), r(q13), r(q14)],
        vec![r(q12), r(q11), r(q14), r(q13)],
        vec![r(q13), r(q14), r(q33), r(q34)],
        vec![r(q14), r(q13), r(q34), r(q33)],
    ])
}

fn main() -> ncwave::Result<()> {
    let params = ModelParams::new(1.5, 1.0, 1.0);
    let lambda = SpectralParam::new(-0.1, 0.5);

    for (name, q) in [
        (
            "asymmetric coupling",
            coupling(0.5, -0.2, -1.0, -0.6, 0.0, 0.1),
        ),
        (
            "kink coupling      ",
            coupling(0.0, -2.0, 0.0, 2.0, 0.0, 0.0),
        ),
        (
            "symmetric cross    ",
            coupling(0.0, 0.0, -2.0, -2.0, 0.0, 0.0),
        ),
    ] {
        let scn = SolitonScenario::new(vec![lambda], q, 0.5, params, Mode::Noncommutative)?;
        let mut peaks = [[0.0f64; 2]; 2];
        for it in 0..101 {
            let t = -5.0 + 10.0 * it as f64 / 100.0;
            for ix in 0..301 {
                let x = -15.0 + 30.0 * ix as f64 / 300.0;
                let u = quasi_gramian_solution(&scn, x, t)?;
                for i in 0..2 {
                    for j in 0..2 {
                        peaks[i][j] = peaks[i][j].max(u.get(i, j).norm());
                    }
                }
            }
        }
        println!(
            "{name}: max|u11| = {:.4}  max|u12| = {:.4}  max|u21| = {:.4}  max|u22| = {:.4}",
            peaks[0][0], peaks[0][1], peaks[1][0], peaks[1][1]
        );
    }
    Ok(())
}
