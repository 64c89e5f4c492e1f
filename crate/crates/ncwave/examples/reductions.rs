//! The hierarchy's named limits. Zeroing coefficients turns the full flow
//! into the nls/hirota/lpd/mkdv equations; the envelope soliton solves all
//! of them, and each limit has its own independently transcribed residual.

use ncwave::darboux::envelope_soliton;
use ncwave::lax::{
    eom_residual, reduced_residual, FieldGrid, GridMode, ModelParams, Reduction, SpectralParam,
};
use ncwave::ncalgebra::ComplexMatrix;

fn main() -> ncwave::Result<()> {
    let base = ModelParams::new(1.5, 1.0, 1.0);
    let lambda = SpectralParam::new(0.1, 0.5);

    for limit in [
        Reduction::Nls,
        Reduction::Hirota,
        Reduction::Lpd,
        Reduction::Mkdv,
    ] {
        let p = base.reduced(limit);
        let h = 4e-3;
        let grid = FieldGrid::generate(
            (0..9).map(|i| 0.3 + h * (i as f64 - 4.0)).collect(),
            (0..9).map(|i| -0.4 + h * (i as f64 - 4.0)).collect(),
            GridMode::Commutative,
            |x, t| {
                Ok(ComplexMatrix::from_scalar(envelope_soliton(
                    lambda, &p, x, t,
                )))
            },
        )?;
        let full = eom_residual(&grid, &p)?.max_abs();
        let red = reduced_residual(&grid, &p, limit)?.max_abs();
        println!(
            "{limit:?}: α=({}, {}, {})  full-equation residual {full:.3e}, reduced transcription {red:.3e}, flag {:?}",
            p.alpha1,
            p.alpha2,
            p.gamma,
            p.reduction()
        );
    }
    Ok(())
}
