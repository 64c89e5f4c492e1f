//! Quasideterminant basics: scalar reduction to determinant ratios, a
//! noncommuting 2×2-block expansion, and the quasi-inverse multiply-back.

use ncwave::ncalgebra::{BlockMatrix, ComplexMatrix};
use ncwave::quasidet::{quasi_inverse, quasideterminant, ExpansionPoint};
use num_complex::Complex64;

fn r(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn main() -> ncwave::Result<()> {
    // scalar entries: |M|_22 of [[1,2],[3,4]] is 4 − 3·1⁻¹·2 = −2
    let m = BlockMatrix::from_blocks(
        2,
        2,
        vec![r(1.0), r(2.0), r(3.0), r(4.0)]
            .into_iter()
            .map(ComplexMatrix::from_scalar)
            .collect(),
    );
    let q = quasideterminant(&m, ExpansionPoint::new(2, 2))?;
    println!("|M|_22 of [[1,2],[3,4]]     : {}", q.as_scalar());

    // every expansion point relates to det ratios: |M|_11 = det(M)/det(m22)
    let q11 = quasideterminant(&m, ExpansionPoint::new(1, 1))?;
    println!("|M|_11 (= det/4)            : {}", q11.as_scalar());

    // noncommuting blocks
    let a = ComplexMatrix::from_rows(&[vec![r(1.0), r(1.0)], vec![r(0.0), r(1.0)]]);
    let b = ComplexMatrix::from_rows(&[vec![r(1.0), r(0.0)], vec![r(1.0), r(1.0)]]);
    let blocks = vec![a.clone(), b.clone(), b, a];
    let m2 = BlockMatrix::from_blocks(2, 2, blocks);
    let q = quasideterminant(&m2, ExpansionPoint::new(2, 2))?;
    println!("block |M|_22 (2×2 valued)   :");
    for i in 0..2 {
        println!(
            "  [{:+.3}{:+.3}i  {:+.3}{:+.3}i]",
            q.get(i, 0).re,
            q.get(i, 0).im,
            q.get(i, 1).re,
            q.get(i, 1).im
        );
    }

    // quasi-inverse multiplies back to the identity
    let inv = quasi_inverse(&m2)?;
    let prod = inv.assemble().mul(&m2.assemble())?;
    let dev = prod.max_abs_diff(&ComplexMatrix::identity(4));
    println!("quasi-inverse multiply-back : max deviation from I = {dev:.3e}");
    Ok(())
}
