//! Element-by-element propagation of `Psi(t) = exp(A t)` from `t = 0` to `t = 1`.
//!
//! On each element `Psi(tau) = sum_mu B_mu s_mu(tau) + Psi_prev`, and the
//! weighted Galerkin projection of `q dPsi/dtau = A Psi` gives, for every
//! column `j` of `Psi`, the `(n m) x (n m)` system `Omega B^j = Gamma^j` with
//!
//! ```text
//! Omega[(mu', i), (mu, k)] = q C[mu', mu] delta_ik - A_ik D[mu', mu]
//! Gamma[(mu', i)]          = g[mu'] sum_k A_ik Psi_prev[k, j]
//! ```
//!
//! Composite indices are basis-major: `(mu, i) -> mu * n + i`.

use num_complex::Complex64;

use crate::basis::BasisTables;
use crate::dense::{lu_factor, mat_vec, vec_norm_inf, ComplexMatrix, LuFactorization};
use crate::error::{Error, Result};
use crate::mesh::TimeMesh;

/// Default element count used when the caller does not choose one.
pub const DEFAULT_ELEMENTS: usize = 8;
/// Default basis size used when the caller does not choose one.
pub const DEFAULT_BASIS: usize = 8;

/// Flattened index of basis function `mu`, matrix row `i`.
#[inline]
pub fn composite_index(mu: usize, i: usize, n: usize) -> usize {
    mu * n + i
}

/// Builds `Omega` for a constant generator `a` and element scale `q`.
pub fn assemble_omega(a: &ComplexMatrix, q: f64, tables: &BasisTables) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::invalid("q", format!("element scale must be positive, got {q}")));
    }
    let m = tables.num_basis();
    let size = n * m;
    let mut data = vec![Complex64::new(0.0, 0.0); size * size];
    for mu_row in 0..m {
        for mu_col in 0..m {
            let qc = q * tables.c(mu_row, mu_col);
            let d = tables.d(mu_row, mu_col);
            for i in 0..n {
                let row = composite_index(mu_row, i, n);
                for k in 0..n {
                    let delta = if i == k { 1.0 } else { 0.0 };
                    let col = composite_index(mu_col, k, n);
                    data[row * size + col] = Complex64::new(qc * delta, 0.0) - a[(i, k)] * d;
                }
            }
        }
    }
    ComplexMatrix::new(size, size, data)
}

/// Builds the right-hand side `Gamma^j` for column `j` of the previous
/// element's end state.
pub fn assemble_gamma(
    a: &ComplexMatrix,
    psi_prev: &ComplexMatrix,
    g: &[f64],
    j: usize,
) -> Result<Vec<Complex64>> {
    let n = a.square_dim()?;
    if psi_prev.n_rows() != n || psi_prev.n_cols() != n {
        return Err(Error::DimensionMismatch {
            op: "assemble_gamma",
            left: (n, n),
            right: (psi_prev.n_rows(), psi_prev.n_cols()),
        });
    }
    if j >= n {
        return Err(Error::invalid("j", format!("column {j} out of range for n = {n}")));
    }
    let a_psi: Vec<Complex64> = (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += a[(i, k)] * psi_prev[(k, j)];
            }
            acc
        })
        .collect();
    let mut gamma = Vec::with_capacity(n * g.len());
    for &g_mu in g {
        gamma.extend(a_psi.iter().map(|&v| v * g_mu));
    }
    Ok(gamma)
}

/// `Omega` and its LU factors for one `(A, q, m)` triple.
#[derive(Clone, Debug)]
pub struct PropagatorFactorization<'t> {
    n: usize,
    q: f64,
    a: ComplexMatrix,
    omega: ComplexMatrix,
    omega_lu: LuFactorization,
    tables: &'t BasisTables,
}

/// Result of advancing one element.
#[derive(Clone, Debug)]
pub struct ElementStep {
    pub psi: ComplexMatrix,
    /// Worst-column `||Omega B - Gamma||_inf`.
    pub residual: f64,
}

impl<'t> PropagatorFactorization<'t> {
    pub fn new(a: &ComplexMatrix, q: f64, tables: &'t BasisTables) -> Result<Self> {
        let n = a.square_dim()?;
        let omega = assemble_omega(a, q, tables)?;
        let omega_lu = lu_factor(&omega)?;
        Ok(PropagatorFactorization {
            n,
            q,
            a: a.clone(),
            omega,
            omega_lu,
            tables,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_basis(&self) -> usize {
        self.tables.num_basis()
    }

    pub fn scale(&self) -> f64 {
        self.q
    }

    pub fn omega(&self) -> &ComplexMatrix {
        &self.omega
    }

    pub fn omega_lu(&self) -> &LuFactorization {
        &self.omega_lu
    }

    pub fn tables(&self) -> &BasisTables {
        self.tables
    }

    /// Coefficients `B^j` for column `j`, indexed by `composite_index`.
    pub fn solve_column(&self, psi_prev: &ComplexMatrix, j: usize) -> Result<(Vec<Complex64>, f64)> {
        let gamma = assemble_gamma(&self.a, psi_prev, self.tables.g(), j)?;
        let coeffs = self.omega_lu.solve(&gamma)?;
        let applied = mat_vec(&self.omega, &coeffs)?;
        let resid: Vec<Complex64> = applied.iter().zip(&gamma).map(|(x, y)| x - y).collect();
        Ok((coeffs, vec_norm_inf(&resid)))
    }

    /// Advances `psi_prev` (the state at the element's left node) to the
    /// element's right node.
    pub fn step(&self, a: &ComplexMatrix, psi_prev: &ComplexMatrix) -> Result<ElementStep> {
        if a != &self.a {
            return Err(Error::invalid(
                "a",
                "generator differs from the one this factorization was built for",
            ));
        }
        let n = self.n;
        let columns = self.solve_columns(psi_prev)?;
        let s_end = self.tables.s_plus_one();

        let mut data = psi_prev.as_slice().to_vec();
        let mut residual = 0.0_f64;
        for (j, (coeffs, col_resid)) in columns.into_iter().enumerate() {
            residual = residual.max(col_resid);
            for i in 0..n {
                let mut delta = Complex64::new(0.0, 0.0);
                for (mu, &s) in s_end.iter().enumerate() {
                    // s_mu(+1) vanishes for every odd mu.
                    if s != 0.0 {
                        delta += coeffs[composite_index(mu, i, n)] * s;
                    }
                }
                data[i * n + j] = delta + psi_prev[(i, j)];
            }
        }
        Ok(ElementStep {
            psi: ComplexMatrix::new(n, n, data)?,
            residual,
        })
    }

    #[cfg(not(feature = "parallel"))]
    fn solve_columns(&self, psi_prev: &ComplexMatrix) -> Result<Vec<(Vec<Complex64>, f64)>> {
        (0..self.n).map(|j| self.solve_column(psi_prev, j)).collect()
    }

    #[cfg(feature = "parallel")]
    fn solve_columns(&self, psi_prev: &ComplexMatrix) -> Result<Vec<(Vec<Complex64>, f64)>> {
        use rayon::prelude::*;
        (0..self.n)
            .into_par_iter()
            .map(|j| self.solve_column(psi_prev, j))
            .collect()
    }
}

/// Advances one element; see [`PropagatorFactorization::step`].
pub fn propagate_element(
    fact: &PropagatorFactorization<'_>,
    a: &ComplexMatrix,
    psi_prev: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    fact.step(a, psi_prev).map(|s| s.psi)
}

/// `exp(A)` together with run diagnostics.
#[derive(Clone, Debug)]
pub struct ExpmReport {
    pub result: ComplexMatrix,
    pub num_elements: usize,
    pub num_basis: usize,
    /// One entry per element, in propagation order.
    pub residuals: Vec<f64>,
}

impl ExpmReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `exp(a)` on a uniform mesh of `num_elements` elements with `num_basis`
/// integrated-Chebyshev functions per element.
pub fn expm_fete(a: &ComplexMatrix, num_elements: usize, num_basis: usize) -> Result<ExpmReport> {
    a.square_dim()?;
    let mesh = TimeMesh::uniform(num_elements)?;
    let tables = BasisTables::build(num_basis)?;
    expm_on_mesh(a, &mesh, &tables)
}

/// `exp(a)` over an arbitrary mesh. `Omega` is re-factored only when the
/// element scale changes, so a uniform mesh factors exactly once.
pub fn expm_on_mesh(a: &ComplexMatrix, mesh: &TimeMesh, tables: &BasisTables) -> Result<ExpmReport> {
    let n = a.square_dim()?;
    let mut psi = ComplexMatrix::identity(n)?;
    let mut residuals = Vec::with_capacity(mesh.num_elements());
    let mut fact: Option<PropagatorFactorization<'_>> = None;

    for e in 0..mesh.num_elements() {
        let q = mesh.scale(e);
        if fact.as_ref().map_or(true, |f| f.scale() != q) {
            fact = Some(PropagatorFactorization::new(a, q, tables)?);
        }
        let step = fact.as_ref().expect("factorization present").step(a, &psi)?;
        residuals.push(step.residual);
        psi = step.psi;
    }

    Ok(ExpmReport {
        result: psi,
        num_elements: mesh.num_elements(),
        num_basis: tables.num_basis(),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::max_abs_diff;
    use std::f64::consts::PI;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn omega_for_zero_generator_is_scaled_kron() {
        let tables = BasisTables::build(3).unwrap();
        let zero = ComplexMatrix::zeros(2, 2).unwrap();
        let omega = assemble_omega(&zero, 6.0, &tables).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let (mu_r, i) = (r / 2, r % 2);
                let (mu_c, k) = (c / 2, c % 2);
                let expected = if i == k { 6.0 * tables.c(mu_r, mu_c) } else { 0.0 };
                assert_eq!(omega[(r, c)].re, expected);
                assert_eq!(omega[(r, c)].im, 0.0);
            }
        }
    }

    #[test]
    fn omega_scalar_single_basis() {
        let tables = BasisTables::build(1).unwrap();
        let alpha = 0.75;
        let omega = assemble_omega(&real(&[&[alpha]]), 2.0, &tables).unwrap();
        let expected = 2.0 * PI - alpha * 1.5 * PI;
        assert!((omega[(0, 0)].re - expected).abs() < 1e-14);
    }

    #[test]
    fn omega_rejects_bad_input() {
        let tables = BasisTables::build(2).unwrap();
        let rect = ComplexMatrix::zeros(2, 3).unwrap();
        assert!(matches!(assemble_omega(&rect, 2.0, &tables), Err(Error::NotSquare { .. })));
        let sq = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(assemble_omega(&sq, 0.0, &tables).is_err());
    }

    #[test]
    fn gamma_with_identity_picks_column() {
        let a = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let id = ComplexMatrix::identity(2).unwrap();
        let g = [2.0, -1.0, 0.5];
        let gamma = assemble_gamma(&a, &id, &g, 1).unwrap();
        for (mu, &gm) in g.iter().enumerate() {
            for i in 0..2 {
                assert_eq!(gamma[composite_index(mu, i, 2)], a[(i, 1)] * gm);
            }
        }
        let zero = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(assemble_gamma(&zero, &id, &g, 0).unwrap().iter().all(|z| z.norm() == 0.0));
        assert!(assemble_gamma(&a, &id, &g, 2).is_err());
        assert!(assemble_gamma(&a, &ComplexMatrix::identity(3).unwrap(), &g, 0).is_err());
    }

    #[test]
    fn zero_generator_leaves_psi_unchanged() {
        let tables = BasisTables::build(5).unwrap();
        let zero = ComplexMatrix::zeros(2, 2).unwrap();
        let fact = PropagatorFactorization::new(&zero, 4.0, &tables).unwrap();
        let psi = real(&[&[1.5, -2.0], &[0.25, 7.0]]);
        assert_eq!(propagate_element(&fact, &zero, &psi).unwrap(), psi);
    }

    #[test]
    fn scalar_exponential() {
        let report = expm_fete(&real(&[&[1.0]]), 1, 12).unwrap();
        assert!((report.result[(0, 0)].re - std::f64::consts::E).abs() < 1e-14);
        assert_eq!(report.result[(0, 0)].im, 0.0);
        assert_eq!(report.residuals.len(), 1);
    }

    #[test]
    fn one_eighth_rotation() {
        let tables = BasisTables::build(8).unwrap();
        let m2 = real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let fact = PropagatorFactorization::new(&m2, 16.0, &tables).unwrap();
        let id = ComplexMatrix::identity(2).unwrap();
        let psi = propagate_element(&fact, &m2, &id).unwrap();
        let (s, c) = (0.125f64).sin_cos();
        let expected = real(&[&[c, -s], &[s, c]]);
        assert!(max_abs_diff(&psi, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn factorization_is_tied_to_its_generator() {
        let tables = BasisTables::build(3).unwrap();
        let a = real(&[&[1.0]]);
        let fact = PropagatorFactorization::new(&a, 2.0, &tables).unwrap();
        let id = ComplexMatrix::identity(1).unwrap();
        assert!(fact.step(&real(&[&[2.0]]), &id).is_err());
    }

    #[test]
    fn invalid_parameters() {
        let a = ComplexMatrix::identity(2).unwrap();
        assert!(expm_fete(&a, 0, 8).is_err());
        assert!(expm_fete(&a, 8, 0).is_err());
        assert!(expm_fete(&ComplexMatrix::zeros(2, 3).unwrap(), 8, 8).is_err());
    }

    #[test]
    fn non_uniform_mesh_matches_uniform() {
        let a = real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let tables = BasisTables::build(10).unwrap();
        let mesh = TimeMesh::from_nodes(vec![0.0, 0.1, 0.35, 0.5, 0.8, 1.0]).unwrap();
        let r = expm_on_mesh(&a, &mesh, &tables).unwrap();
        let (s, c) = 1.0f64.sin_cos();
        assert!(max_abs_diff(&r.result, &real(&[&[c, -s], &[s, c]])).unwrap() < 1e-13);
    }
}
