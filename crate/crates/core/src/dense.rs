//! Dense complex matrices and LU factorization with partial pivoting.
//!
//! Storage is row-major `Complex64`. Every public constructor rejects
//! NaN and infinite entries, so downstream arithmetic can assume finite
//! inputs.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single matrix entry.
pub type ComplexScalar = Complex64;

/// Pivots whose modulus falls below this value are treated as exact zeros.
pub const DEFAULT_SINGULAR_THRESHOLD: f64 = 1e-300;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

fn check_finite(rows: usize, cols: usize, data: &[Complex64]) -> Result<()> {
    debug_assert_eq!(data.len(), rows * cols);
    match data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(idx) => Err(Error::NonFinite {
            row: idx / cols,
            col: idx % cols,
        }),
        None => Ok(()),
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(
                "data",
                format!("expected {} entries for {rows}x{cols}, got {}", rows * cols, data.len()),
            ));
        }
        check_finite(rows, cols, &data)?;
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != n_cols) {
            return Err(Error::invalid(
                "rows",
                format!("row {bad} has {} entries, expected {n_cols}", rows[bad].len()),
            ));
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    /// Builds a real-valued matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    // Internal constructor for results of arithmetic on finite inputs.
    // Callers that can overflow must go through `new`.
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Returns `n` for a square matrix, `NotSquare` otherwise.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        ComplexMatrix::from_parts(self.cols, self.rows, data)
    }

    pub fn scale(&self, factor: Complex64) -> Result<ComplexMatrix> {
        ComplexMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z * factor).collect(),
        )
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("add", other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("sub", other, |a, b| a - b)
    }

    fn zip_with<F>(&self, op: &'static str, other: &ComplexMatrix, f: F) -> Result<ComplexMatrix>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        self.check_same_shape(op, other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }

    fn check_same_shape(&self, op: &'static str, other: &ComplexMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Result<Complex64> {
        let n = self.square_dim()?;
        Ok((0..n).map(|i| self[(i, i)]).sum())
    }

    /// Determinant via LU factorization.
    pub fn determinant(&self) -> Result<Complex64> {
        match lu_factor(self) {
            Ok(lu) => Ok(lu.determinant()),
            Err(Error::SingularMatrix { .. }) => Ok(ZERO),
            Err(e) => Err(e),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "({:+.16e}, {:+.16e}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Matrix product `a * b`.
pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "mat_mul",
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let (n, k_dim, m) = (a.rows, a.cols, b.cols);
    let mut out = vec![ZERO; n * m];
    for i in 0..n {
        let out_row = &mut out[i * m..(i + 1) * m];
        for k in 0..k_dim {
            let aik = a.data[i * k_dim + k];
            for (o, &bkj) in out_row.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
    ComplexMatrix::new(n, m, out)
}

/// Entrywise maximum of `|a_ij - b_ij|`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.check_same_shape("max_abs_diff", b)?;
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// `P * A = L * U` with unit-diagonal `L` and upper-triangular `U` packed
/// into one matrix.
#[derive(Clone, Debug)]
pub struct LuFactorization {
    n: usize,
    packed: ComplexMatrix,
    // `perm[i]` is the row of the original matrix that ends up in row `i`.
    perm: Vec<usize>,
    swaps: usize,
}

/// Factors a square matrix with partial pivoting and the default
/// singularity threshold.
pub fn lu_factor(a: &ComplexMatrix) -> Result<LuFactorization> {
    lu_factor_with_threshold(a, DEFAULT_SINGULAR_THRESHOLD)
}

pub fn lu_factor_with_threshold(a: &ComplexMatrix, threshold: f64) -> Result<LuFactorization> {
    let n = a.square_dim()?;
    let mut lu = a.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;

    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, lu[r * n + col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot_abs >= threshold) {
            return Err(Error::SingularMatrix {
                step: col,
                pivot: pivot_abs,
                threshold,
            });
        }
        if pivot_row != col {
            for j in 0..n {
                lu.swap(col * n + j, pivot_row * n + j);
            }
            perm.swap(col, pivot_row);
            swaps += 1;
        }

        let pivot = lu[col * n + col];
        for r in col + 1..n {
            let factor = lu[r * n + col] / pivot;
            lu[r * n + col] = factor;
            if factor == ZERO {
                continue;
            }
            for j in col + 1..n {
                let upper = lu[col * n + j];
                lu[r * n + j] -= factor * upper;
            }
        }
    }

    Ok(LuFactorization {
        n,
        packed: ComplexMatrix::new(n, n, lu)?,
        perm,
        swaps,
    })
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Packed factors: strictly-lower part is `L` (unit diagonal implied),
    /// upper part including the diagonal is `U`.
    pub fn packed(&self) -> &ComplexMatrix {
        &self.packed
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn lower(&self) -> ComplexMatrix {
        let n = self.n;
        ComplexMatrix::from_parts(
            n,
            n,
            (0..n * n)
                .map(|idx| match (idx / n, idx % n) {
                    (i, j) if i == j => ONE,
                    (i, j) if i > j => self.packed.data[idx],
                    _ => ZERO,
                })
                .collect(),
        )
    }

    pub fn upper(&self) -> ComplexMatrix {
        let n = self.n;
        ComplexMatrix::from_parts(
            n,
            n,
            (0..n * n)
                .map(|idx| if idx / n <= idx % n { self.packed.data[idx] } else { ZERO })
                .collect(),
        )
    }

    /// Applies the row permutation to `a`, giving `P * a`.
    pub fn permute_rows(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows != self.n {
            return Err(Error::DimensionMismatch {
                op: "permute_rows",
                left: (self.n, self.n),
                right: (a.rows, a.cols),
            });
        }
        let data = self.perm.iter().flat_map(|&r| a.row(r).iter().copied()).collect();
        Ok(ComplexMatrix::from_parts(a.rows, a.cols, data))
    }

    pub fn determinant(&self) -> Complex64 {
        let diag: Complex64 = (0..self.n).map(|i| self.packed.data[i * self.n + i]).product();
        if self.swaps % 2 == 0 {
            diag
        } else {
            -diag
        }
    }

    /// Solves `A x = rhs` by forward and back substitution.
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                op: "lu_solve",
                left: (n, n),
                right: (rhs.len(), 1),
            });
        }
        let lu = &self.packed.data;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&r| rhs[r]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= lu[i * n + j] * x[j];
            }
            x[i] = acc / lu[i * n + i];
        }
        Ok(x)
    }
}

/// Free-function form of [`LuFactorization::solve`].
pub fn lu_solve(f: &LuFactorization, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    f.solve(rhs)
}

/// `a * x` for a column vector `x`.
pub fn mat_vec(a: &ComplexMatrix, x: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.cols != x.len() {
        return Err(Error::DimensionMismatch {
            op: "mat_vec",
            left: (a.rows, a.cols),
            right: (x.len(), 1),
        });
    }
    Ok((0..a.rows)
        .map(|i| a.row(i).iter().zip(x).map(|(aij, xj)| aij * xj).sum())
        .collect())
}

pub(crate) fn vec_norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_unit_disk(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| loop {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if z.norm() <= 1.0 {
                break z;
            }
        })
        .unwrap()
    }

    fn triple_loop(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(a.n_rows(), b.n_cols(), |i, j| {
            let mut s = ZERO;
            for k in 0..a.n_cols() {
                s += a[(i, k)] * b[(k, j)];
            }
            s
        })
        .unwrap()
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        let err = ComplexMatrix::new(1, 2, vec![ONE, c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        assert!(matches!(
            ComplexMatrix::new(2, 1, vec![ONE, c(0.0, f64::INFINITY)]),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
        assert!(matches!(ComplexMatrix::zeros(0, 3), Err(Error::EmptyMatrix { .. })));
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
    }

    #[test]
    fn identity_times_matrix() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(-3.0, 0.5)], vec![c(0.0, -1.0), c(4.0, 4.0)]])
            .unwrap();
        let id = ComplexMatrix::identity(2).unwrap();
        assert_eq!(mat_mul(&id, &m).unwrap(), m);
    }

    #[test]
    fn quarter_rotation_squared() {
        let r = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[-1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert_eq!(mat_mul(&r, &r).unwrap(), expected);
    }

    #[test]
    fn mat_mul_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 3, 7] {
            let a = random_unit_disk(n, &mut rng);
            let b = random_unit_disk(n, &mut rng);
            let got = mat_mul(&a, &b).unwrap();
            assert!(max_abs_diff(&got, &triple_loop(&a, &b)).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn mat_mul_dimension_mismatch() {
        let a = ComplexMatrix::zeros(2, 3).unwrap();
        assert!(matches!(mat_mul(&a, &a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lu_of_identity_is_trivial() {
        let id = ComplexMatrix::identity(3).unwrap();
        let lu = lu_factor(&id).unwrap();
        assert_eq!(lu.lower(), id);
        assert_eq!(lu.upper(), id);
        assert_eq!(lu.permutation(), &[0, 1, 2]);
    }

    #[test]
    fn lu_of_swap_needs_pivoting() {
        let p = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let lu = lu_factor(&p).unwrap();
        assert_eq!(lu.permutation(), &[1, 0]);
        assert_eq!(lu.upper(), ComplexMatrix::identity(2).unwrap());
        assert_eq!(lu.determinant(), c(-1.0, 0.0));
    }

    #[test]
    fn lu_reconstructs_random_5x5() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_unit_disk(5, &mut rng);
        let lu = lu_factor(&a).unwrap();
        let pa = lu.permute_rows(&a).unwrap();
        let recon = mat_mul(&lu.lower(), &lu.upper()).unwrap();
        assert!(max_abs_diff(&pa, &recon).unwrap() < 1e-13);
    }

    #[test]
    fn lu_errors() {
        let rect = ComplexMatrix::zeros(2, 3).unwrap();
        assert!(matches!(lu_factor(&rect), Err(Error::NotSquare { rows: 2, cols: 3 })));
        let singular = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(lu_factor(&singular), Err(Error::SingularMatrix { step: 1, .. })));
        let tiny = ComplexMatrix::from_real_rows(&[&[1e-301]]).unwrap();
        assert!(matches!(lu_factor(&tiny), Err(Error::SingularMatrix { .. })));
        assert!(lu_factor_with_threshold(&tiny, 0.0).is_ok());
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let rhs = vec![c(1.0, -2.0), c(0.5, 3.0)];
        let id = lu_factor(&ComplexMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(lu_solve(&id, &rhs).unwrap(), rhs);

        let two = lu_factor(&ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 2.0]]).unwrap()).unwrap();
        let x = two.solve(&[c(4.0, 0.0), c(6.0, 0.0)]).unwrap();
        assert_eq!(x, vec![c(2.0, 0.0), c(3.0, 0.0)]);
        assert!(matches!(two.solve(&[ONE]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn solve_random_system_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_unit_disk(9, &mut rng);
        let b: Vec<Complex64> = (0..9).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let x = lu_factor(&a).unwrap().solve(&b).unwrap();
        let ax = mat_vec(&a, &x).unwrap();
        let resid: Vec<Complex64> = ax.iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(vec_norm_inf(&resid) < 1e-12 * vec_norm_inf(&b));
    }

    #[test]
    fn max_abs_diff_cases() {
        let id = ComplexMatrix::identity(2).unwrap();
        let zero = ComplexMatrix::zeros(2, 2).unwrap();
        assert_eq!(max_abs_diff(&id, &id).unwrap(), 0.0);
        assert_eq!(max_abs_diff(&id, &zero).unwrap(), 1.0);
        assert!(max_abs_diff(&id, &ComplexMatrix::zeros(2, 3).unwrap()).is_err());
    }

    #[test]
    fn printed_m1_results_differ_by_about_8e_15() {
        // Closed-form exponential vs the 8-element, 8-function run, both as printed digits.
        let exact = ComplexMatrix::from_real_rows(&[
            &[-0.7357588823012208, 0.5518191617363316],
            &[-1.4715177646302175, 1.1036383234865511],
        ])
        .unwrap();
        let computed = ComplexMatrix::from_real_rows(&[
            &[-0.7357588823012181, 0.5518191617363358],
            &[-1.4715177646302120, 1.1036383234865592],
        ])
        .unwrap();
        let d = max_abs_diff(&exact, &computed).unwrap();
        // Largest entry gap is |...865511 - ...865592| = 8.1e-15.
        assert!((d - 8.1e-15).abs() < 2e-16, "{d:e}");
    }

    #[test]
    fn determinant_of_triangular() {
        let a = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(5.0, 1.0)], vec![ZERO, c(0.0, 3.0)]]).unwrap();
        assert_eq!(a.determinant().unwrap(), c(0.0, 6.0));
        let singular = ComplexMatrix::zeros(2, 2).unwrap();
        assert_eq!(singular.determinant().unwrap(), ZERO);
    }
}
