//! Quasideterminants over block matrices with matrix-valued entries.
//!
//! The quasideterminant expanded about block (i, j) is
//! `m_ij − r · (M^ij)⁻¹ · c`, where `M^ij` drops block-row i and block-col j,
//! `r` is block-row i without entry j and `c` is block-col j without entry i.
//! Evaluation is by direct linear algebra on the flattened submatrix (sizes
//! stay ≤ 12×12), not by recursive expansion.
//!
//! Indexing in the public vocabulary is 1-based; conversion happens here.

use crate::error::{Error, Result};
use crate::ncalgebra::{BlockMatrix, ComplexMatrix};

/// 1-based block position the expansion is taken about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionPoint {
    pub i: usize,
    pub j: usize,
}

impl ExpansionPoint {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }
}

/// Quasideterminant |M|_{ij} of a square block matrix.
pub fn quasideterminant(m: &BlockMatrix, p: ExpansionPoint) -> Result<ComplexMatrix> {
    let n = m.block_rows();
    if m.block_cols() != n {
        return Err(Error::Dimension(format!(
            "quasideterminant: block matrix is {}×{} blocks, needs square",
            n,
            m.block_cols()
        )));
    }
    if p.i < 1 || p.i > n || p.j < 1 || p.j > n {
        return Err(Error::Dimension(format!(
            "expansion point ({}, {}) outside 1..={n}",
            p.i, p.j
        )));
    }
    let (pi, pj) = (p.i - 1, p.j - 1);
    let pivot = m.get(pi, pj).clone();
    if n == 1 {
        // no deleted submatrix: the correction term is empty
        return Ok(pivot);
    }
    let s = m.block_size();
    let rows: Vec<usize> = (0..n).filter(|&r| r != pi).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| c != pj).collect();

    // flatten M^{ij}, the deleted-row/col submatrix
    let mut sub = ComplexMatrix::zeros((n - 1) * s, (n - 1) * s);
    for (bi, &r) in rows.iter().enumerate() {
        for (bj, &c) in cols.iter().enumerate() {
            sub.set_block(bi * s, bj * s, m.get(r, c));
        }
    }
    // row r^j_i (block-row i without entry j) and column c^i_j
    let mut row = ComplexMatrix::zeros(s, (n - 1) * s);
    for (bj, &c) in cols.iter().enumerate() {
        row.set_block(0, bj * s, m.get(pi, c));
    }
    let mut col = ComplexMatrix::zeros((n - 1) * s, s);
    for (bi, &r) in rows.iter().enumerate() {
        col.set_block(bi * s, 0, m.get(r, pj));
    }

    let solved = sub.solve(&col).map_err(|e| match e {
        Error::Singular {
            pivot, threshold, ..
        } => Error::Singular {
            pivot,
            threshold,
            context: format!("quasideterminant submatrix M^({},{})", p.i, p.j),
        },
        other => other,
    })?;
    pivot.sub(&row.mul(&solved)?)
}

/// Quasi-inverse of a 2×2 block matrix: entry (i, j) of the result is
/// |M|_{ji}⁻¹.
///
/// When the deleted submatrix of an expansion is itself singular (block
/// identity is the canonical case: |I|₂₁ would need 0⁻¹) the
/// quasideterminant diverges while its inverse has a finite limit, namely
/// the matching block of the flat inverse; that limit is used. A
/// quasideterminant that exists but is not invertible is reported by name.
pub fn quasi_inverse(m: &BlockMatrix) -> Result<BlockMatrix> {
    if m.block_rows() != 2 || m.block_cols() != 2 {
        return Err(Error::Dimension(format!(
            "quasi_inverse: needs a 2×2 block matrix, got {}×{}",
            m.block_rows(),
            m.block_cols()
        )));
    }
    let s = m.block_size();
    let mut out = BlockMatrix::zeros(2, 2, s);
    let mut flat_inverse: Option<ComplexMatrix> = None;
    for i in 1..=2 {
        for j in 1..=2 {
            match quasideterminant(m, ExpansionPoint::new(j, i)) {
                Ok(q) => {
                    let inv = q.inverse().map_err(|e| match e {
                        Error::Singular {
                            pivot, threshold, ..
                        } => Error::Singular {
                            pivot,
                            threshold,
                            context: format!("quasi_inverse: |M|_({j},{i}) is singular"),
                        },
                        other => other,
                    })?;
                    out.set(i - 1, j - 1, inv);
                }
                Err(Error::Singular { .. }) => {
                    // divergent quasideterminant, finite inverse limit
                    if flat_inverse.is_none() {
                        flat_inverse = Some(m.assemble().inverse().map_err(|e| match e {
                            Error::Singular { pivot, threshold, .. } => Error::Singular {
                                pivot,
                                threshold,
                                context: format!(
                                    "quasi_inverse: |M|_({j},{i}) undefined and M itself is singular"
                                ),
                            },
                            other => other,
                        })?);
                    }
                    let flat = flat_inverse.as_ref().expect("just set");
                    out.set(i - 1, j - 1, flat.block((i - 1) * s, (j - 1) * s, s, s));
                }
                Err(other) => return Err(other),
            }
        }
    }
    Ok(out)
}

/// Bordered quasideterminant expanded at the boxed zero:
///
/// ```text
/// | body  col |
/// | row  [0]  |  =  0 − row · body⁻¹ · col
/// ```
///
/// `row` is h×N, `col` is N×w, `body` is N×N; the result is h×w. This is the
/// workhorse behind the solution formulas, where the body is the Gram
/// potential and the borders carry the seed eigenfunctions. Gram bodies have
/// exponentially imbalanced entries, so the solve is equilibrated; the
/// singularity threshold then acts on the scaled matrix.
pub fn bordered_quasideterminant(
    body: &ComplexMatrix,
    row: &ComplexMatrix,
    col: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if !body.is_square() || row.cols() != body.rows() || col.rows() != body.rows() {
        return Err(Error::Dimension(format!(
            "bordered quasideterminant: body {}×{}, row {}×{}, col {}×{}",
            body.rows(),
            body.cols(),
            row.rows(),
            row.cols(),
            col.rows(),
            col.cols()
        )));
    }
    Ok(row.mul(&body.solve_equilibrated(col)?)?.neg())
}
