//! Dense complex matrices and block assembly.
//!
//! This is the noncommutative ring everything else is built from: solution
//! bodies, quasideterminant expansions and the Lax matrices are all small
//! dense complex matrices (nothing here exceeds 13×13), so the module keeps
//! to plain `Vec<Complex64>` storage with LU-based inversion. Inversion is
//! deliberately loud: a pivot below `PIVOT_RTOL · max|entry|` is reported as
//! a singularity carrying the pivot magnitude, never silently regularised.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

/// Relative pivot threshold: a pivot smaller than this times the largest
/// input magnitude makes the matrix "numerically singular".
pub const PIVOT_RTOL: f64 = 1e-12;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be ≥ 1");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, z: Complex64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, z);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        assert!(r >= 1);
        let c = rows[0].len();
        assert!(c >= 1 && rows.iter().all(|row| row.len() == c));
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// 1×1 wrapper, used for scalar-mode fields.
    pub fn from_scalar(z: Complex64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// The single entry of a 1×1 matrix.
    pub fn as_scalar(&self) -> Complex64 {
        assert!(self.rows == 1 && self.cols == 1, "not a 1×1 matrix");
        self.data[0]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum-magnitude column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{op}: {}×{} vs {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix product; order matters everywhere in this crate.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "mul: {}×{} · {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * z).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// LU factorisation with partial pivoting. Returns packed factors,
    /// permutation, and the smallest pivot magnitude seen.
    fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "lu: matrix is {}×{}, needs square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let threshold = PIVOT_RTOL * self.max_abs();
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (mut p, mut best) = (k, a[k * n + k].norm());
            for i in (k + 1)..n {
                let v = a[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= threshold || best == 0.0 {
                return Err(Error::Singular {
                    pivot: best,
                    threshold,
                    context: format!("LU elimination at step {k}"),
                });
            }
            min_pivot = min_pivot.min(best);
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[k * n + k];
            for i in (k + 1)..n {
                let m = a[i * n + k] / piv;
                a[i * n + k] = m;
                for j in (k + 1)..n {
                    let sub = m * a[k * n + j];
                    a[i * n + j] -= sub;
                }
            }
        }
        Ok(Lu {
            n,
            a,
            perm,
            sign,
            min_pivot,
        })
    }

    /// Determinant via LU. Zero is never returned silently: a singular
    /// factorisation surfaces as the error instead.
    pub fn det(&self) -> Result<Complex64> {
        let lu = self.lu()?;
        let mut d = Complex64::new(lu.sign, 0.0);
        for k in 0..lu.n {
            d *= lu.a[k * lu.n + k];
        }
        Ok(d)
    }

    /// Solve A·X = B for X (B may have several columns).
    pub fn solve(&self, b: &Self) -> Result<Self> {
        if self.rows != b.rows {
            return Err(Error::Dimension(format!(
                "solve: {}×{} vs rhs {}×{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let lu = self.lu()?;
        Ok(lu.solve(b))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.rows))
    }

    /// Solve A·X = B after row/column equilibration. Gram bodies carry
    /// entries spanning many orders of magnitude (exponential seed growth),
    /// where the raw relative pivot threshold misfires on perfectly regular
    /// systems; scaling rows and columns to unit maximum first makes the
    /// singularity test scale-invariant.
    pub fn solve_equilibrated(&self, b: &Self) -> Result<Self> {
        if !self.is_square() || self.rows != b.rows {
            return Err(Error::Dimension(format!(
                "solve_equilibrated: {}×{} vs rhs {}×{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let n = self.rows;
        // zero rows/cols get scale 1: the pivot check reports them
        let dr: Vec<f64> = (0..n)
            .map(|i| {
                let m = (0..n).map(|j| self.get(i, j).norm()).fold(0.0, f64::max);
                if m == 0.0 {
                    1.0
                } else {
                    m
                }
            })
            .collect();
        let dc: Vec<f64> = (0..n)
            .map(|j| {
                let m = (0..n)
                    .map(|i| self.get(i, j).norm() / dr[i])
                    .fold(0.0, f64::max);
                if m == 0.0 {
                    1.0
                } else {
                    m
                }
            })
            .collect();
        let scaled = Self::from_fn(n, n, |i, j| self.get(i, j) / (dr[i] * dc[j]));
        let rhs = Self::from_fn(n, b.cols, |i, c| b.get(i, c) / dr[i]);
        let y = scaled.solve(&rhs)?;
        Ok(Self::from_fn(n, b.cols, |j, c| y.get(j, c) / dc[j]))
    }

    /// Inverse together with the 1-norm condition estimate ‖A‖₁‖A⁻¹‖₁.
    /// Matrices here are tiny, so the inverse is formed explicitly.
    pub fn inverse_with_cond(&self) -> Result<(Self, f64)> {
        let inv = self.inverse()?;
        let cond = self.one_norm() * inv.one_norm();
        Ok((inv, cond))
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hcat: row mismatch".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// Vertical concatenation [self; other].
    pub fn vcat(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vcat: column mismatch".into()));
        }
        Ok(Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                other.get(i - self.rows, j)
            }
        }))
    }

    /// Copy of a contiguous sub-block.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self.get(row0 + i, col0 + j))
    }

    /// Write `src` into the block whose top-left corner is (row0, col0).
    pub fn set_block(&mut self, row0: usize, col0: usize, src: &Self) {
        assert!(row0 + src.rows <= self.rows && col0 + src.cols <= self.cols);
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(row0 + i, col0 + j, src.get(i, j));
            }
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4e}{:+.4e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

struct Lu {
    n: usize,
    a: Vec<Complex64>,
    perm: Vec<usize>,
    sign: f64,
    #[allow(dead_code)]
    min_pivot: f64,
}

impl Lu {
    fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let m = b.cols();
        let mut x = ComplexMatrix::zeros(n, m);
        for c in 0..m {
            // forward substitution on the permuted rhs
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                let mut s = b.get(self.perm[i], c);
                for k in 0..i {
                    s -= self.a[i * n + k] * y[k];
                }
                y[i] = s;
            }
            // back substitution
            for i in (0..n).rev() {
                let mut s = y[i];
                for k in (i + 1)..n {
                    s -= self.a[i * n + k] * x.get(k, c);
                }
                x.set(i, c, s / self.a[i * n + i]);
            }
        }
        x
    }
}

/// Grid of equally sized square blocks, the input shape for
/// quasideterminant expansion.
#[derive(Clone, Debug)]
pub struct BlockMatrix {
    block_rows: usize,
    block_cols: usize,
    block_size: usize,
    blocks: Vec<ComplexMatrix>,
}

impl BlockMatrix {
    pub fn zeros(block_rows: usize, block_cols: usize, block_size: usize) -> Self {
        assert!(block_rows >= 1 && block_cols >= 1 && block_size >= 1);
        Self {
            block_rows,
            block_cols,
            block_size,
            blocks: vec![ComplexMatrix::zeros(block_size, block_size); block_rows * block_cols],
        }
    }

    pub fn from_blocks(block_rows: usize, block_cols: usize, blocks: Vec<ComplexMatrix>) -> Self {
        assert_eq!(blocks.len(), block_rows * block_cols);
        let bs = blocks[0].rows();
        assert!(
            blocks.iter().all(|b| b.rows() == bs && b.cols() == bs),
            "blocks must be square and equally sized"
        );
        Self {
            block_rows,
            block_cols,
            block_size: bs,
            blocks,
        }
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i * self.block_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, b: ComplexMatrix) {
        assert!(b.rows() == self.block_size && b.cols() == self.block_size);
        self.blocks[i * self.block_cols + j] = b;
    }

    /// Flatten the grid into one matrix, block (I, J) landing at offset
    /// (I·s, J·s).
    pub fn assemble(&self) -> ComplexMatrix {
        let s = self.block_size;
        let mut out = ComplexMatrix::zeros(self.block_rows * s, self.block_cols * s);
        for bi in 0..self.block_rows {
            for bj in 0..self.block_cols {
                out.set_block(bi * s, bj * s, self.get(bi, bj));
            }
        }
        out
    }

    /// Inverse of [`assemble`](Self::assemble): cut a flat matrix into
    /// `block_size`-sized square blocks.
    pub fn extract(m: &ComplexMatrix, block_size: usize) -> Result<Self> {
        if block_size == 0
            || !m.rows().is_multiple_of(block_size)
            || !m.cols().is_multiple_of(block_size)
        {
            return Err(Error::Dimension(format!(
                "extract: {}×{} not divisible into {block_size}×{block_size} blocks",
                m.rows(),
                m.cols()
            )));
        }
        let br = m.rows() / block_size;
        let bc = m.cols() / block_size;
        let mut out = Self::zeros(br, bc, block_size);
        for bi in 0..br {
            for bj in 0..bc {
                out.set(
                    bi,
                    bj,
                    m.block(bi * block_size, bj * block_size, block_size, block_size),
                );
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, seed: &mut u64) -> ComplexMatrix {
        // xorshift; tests elsewhere use rand, but this module predates the dev-deps
        let mut next = || {
            *seed ^= *seed << 13;
            *seed ^= *seed >> 7;
            *seed ^= *seed << 17;
            (*seed as f64 / u64::MAX as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()))
    }

    #[test]
    fn add_identity_and_entrywise() {
        let mut seed = 7u64;
        let a = random_matrix(3, &mut seed);
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(a.add(&z).unwrap(), a);

        let i2 = ComplexMatrix::identity(2);
        let two = i2.add(&i2).unwrap();
        assert_eq!(two.get(0, 0), c(2.0, 0.0));
        assert_eq!(two.get(0, 1), c(0.0, 0.0));

        // independent entrywise loop oracle
        let b = random_matrix(3, &mut seed);
        let s = a.add(&b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.get(i, j), a.get(i, j) + b.get(i, j));
            }
        }
    }

    #[test]
    fn add_shape_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(3, 2);
        assert!(matches!(a.add(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn mul_identity_and_noncommuting_pair() {
        let mut seed = 11u64;
        let a = random_matrix(4, &mut seed);
        let i4 = ComplexMatrix::identity(4);
        assert!(a.mul(&i4).unwrap().max_abs_diff(&a) == 0.0);

        // canonical noncommuting pair
        let e12 =
            ComplexMatrix::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(0., 0.), c(0., 0.)]]);
        let e21 =
            ComplexMatrix::from_rows(&[vec![c(0., 0.), c(0., 0.)], vec![c(1., 0.), c(0., 0.)]]);
        let ab = e12.mul(&e21).unwrap();
        let ba = e21.mul(&e12).unwrap();
        assert_eq!(ab.get(0, 0), c(1., 0.));
        assert_eq!(ab.get(1, 1), c(0., 0.));
        assert_eq!(ba.get(0, 0), c(0., 0.));
        assert_eq!(ba.get(1, 1), c(1., 0.));
    }

    #[test]
    fn mul_matches_triple_loop() {
        let mut seed = 13u64;
        let a = random_matrix(4, &mut seed);
        let b = random_matrix(4, &mut seed);
        let p = a.mul(&b).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = c(0., 0.);
                for k in 0..4 {
                    s += a.get(i, k) * b.get(k, j);
                }
                assert!((p.get(i, j) - s).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn inverse_identity_and_diagonal() {
        let i3 = ComplexMatrix::identity(3);
        assert!(i3.inverse().unwrap().max_abs_diff(&i3) < 1e-15);

        let d = ComplexMatrix::from_rows(&[vec![c(2., 0.), c(0., 0.)], vec![c(0., 0.), c(0., 4.)]]);
        let di = d.inverse().unwrap();
        assert!((di.get(0, 0) - c(0.5, 0.)).norm() < 1e-15);
        assert!((di.get(1, 1) - c(0., -0.25)).norm() < 1e-15);
    }

    #[test]
    fn inverse_residual_small() {
        let mut seed = 17u64;
        for _ in 0..10 {
            let a = random_matrix(6, &mut seed);
            let x = a.inverse().unwrap();
            let r = a.mul(&x).unwrap().sub(&ComplexMatrix::identity(6)).unwrap();
            assert!(r.max_abs() < 1e-10, "residual {}", r.max_abs());
        }
    }

    #[test]
    fn inverse_reports_pivot() {
        let z = ComplexMatrix::zeros(3, 3);
        match z.inverse() {
            Err(Error::Singular { pivot, .. }) => assert_eq!(pivot, 0.0),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn dagger_involution_and_product_rule() {
        let mut seed = 23u64;
        let a = random_matrix(3, &mut seed);
        let b = random_matrix(3, &mut seed);
        assert_eq!(a.dagger().dagger(), a);
        assert_eq!(
            ComplexMatrix::identity(2).dagger(),
            ComplexMatrix::identity(2)
        );
        assert_eq!(
            ComplexMatrix::from_scalar(c(0., 1.)).dagger().as_scalar(),
            c(0., -1.)
        );
        let lhs = a.mul(&b).unwrap().dagger();
        let rhs = b.dagger().mul(&a.dagger()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn assemble_extract_round_trip() {
        let mut seed = 29u64;
        let mut bm = BlockMatrix::zeros(2, 2, 2);
        for i in 0..2 {
            for j in 0..2 {
                bm.set(i, j, random_matrix(2, &mut seed));
            }
        }
        let flat = bm.assemble();
        assert_eq!(flat.rows(), 4);
        // offsets verified by index arithmetic
        for bi in 0..2 {
            for bj in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(flat.get(2 * bi + i, 2 * bj + j), bm.get(bi, bj).get(i, j));
                    }
                }
            }
        }
        let back = BlockMatrix::extract(&flat, 2).unwrap();
        for bi in 0..2 {
            for bj in 0..2 {
                assert!(back.get(bi, bj).max_abs_diff(bm.get(bi, bj)) == 0.0);
            }
        }

        // 1×1 grid is the block itself
        let single = BlockMatrix::from_blocks(1, 1, vec![flat.clone()]);
        assert!(single.assemble().max_abs_diff(&flat) == 0.0);

        assert!(BlockMatrix::extract(&ComplexMatrix::zeros(3, 3), 2).is_err());
    }

    #[test]
    fn associativity_within_tolerance() {
        let mut seed = 31u64;
        for _ in 0..20 {
            let a = random_matrix(3, &mut seed);
            let b = random_matrix(3, &mut seed);
            let cm = random_matrix(3, &mut seed);
            let lhs = a.mul(&b).unwrap().mul(&cm).unwrap();
            let rhs = a.mul(&b.mul(&cm).unwrap()).unwrap();
            let scale = lhs.max_abs().max(1.0);
            assert!(lhs.max_abs_diff(&rhs) / scale < 1e-12);
        }
    }

    #[test]
    fn double_inverse_on_well_conditioned() {
        let mut seed = 37u64;
        let mut tried = 0;
        while tried < 10 {
            let a = random_matrix(5, &mut seed);
            let (inv, cond) = match a.inverse_with_cond() {
                Ok(v) => v,
                Err(_) => continue,
            };
            if cond > 1e3 {
                continue;
            }
            tried += 1;
            let back = inv.inverse().unwrap();
            assert!(a.max_abs_diff(&back) < 1e-9, "cond {cond}");
        }
    }
}
