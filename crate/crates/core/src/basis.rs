//! Chebyshev polynomials, the integrated basis `s_mu(tau) = int_{-1}^{tau} T_mu`,
//! and the weighted projection tables built from them.
//!
//! All inner products use the Chebyshev weight `w(tau) = (1 - tau^2)^{-1/2}`
//! on `[-1, 1]`. Every `s_mu` is a polynomial of degree `mu + 1`, so each one
//! has a finite Chebyshev expansion and the tables follow exactly from
//! orthogonality:
//!
//! ```text
//! int T_a w T_b = 0        (a != b)
//!               = pi       (a = b = 0)
//!               = pi / 2   (a = b >= 1)
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

fn check_domain(tau: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(tau))
    }
}

/// `T_mu(tau)` by the three-term recurrence.
pub fn eval_t(mu: usize, tau: f64) -> Result<f64> {
    check_domain(tau)?;
    Ok(chebyshev_t(mu, tau))
}

fn chebyshev_t(mu: usize, tau: f64) -> f64 {
    match mu {
        0 => 1.0,
        1 => tau,
        _ => {
            let (mut prev, mut cur) = (1.0, tau);
            for _ in 1..mu {
                let next = 2.0 * tau * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `s_mu(tau)`, the integral of `T_mu` from -1 to `tau`.
pub fn eval_s(mu: usize, tau: f64) -> Result<f64> {
    check_domain(tau)?;
    Ok(match mu {
        0 => tau + 1.0,
        1 => 0.5 * (tau * tau - 1.0),
        _ => {
            let up = (mu + 1) as f64;
            let down = (mu - 1) as f64;
            0.5 * (chebyshev_t(mu + 1, tau) / up - chebyshev_t(mu - 1, tau) / down)
                - 0.5 * (sign(mu + 1) / up - sign(mu - 1) / down)
        }
    })
}

/// Chebyshev coefficients `c` with `s_mu = sum_k c[k] T_k`; length `mu + 2`.
pub fn s_chebyshev_coefficients(mu: usize) -> Vec<f64> {
    let mut c = vec![0.0; mu + 2];
    match mu {
        0 => {
            c[0] = 1.0;
            c[1] = 1.0;
        }
        1 => {
            // (tau^2 - 1) / 2 = (T_2 - T_0) / 4
            c[0] = -0.25;
            c[2] = 0.25;
        }
        _ => {
            let up = (mu + 1) as f64;
            let down = (mu - 1) as f64;
            c[mu + 1] += 0.5 / up;
            c[mu - 1] -= 0.5 / down;
            c[0] += sign(mu + 1) / (up * down);
        }
    }
    c
}

/// Weighted norm `int T_k w T_k`.
fn chebyshev_norm(k: usize) -> f64 {
    if k == 0 {
        PI
    } else {
        FRAC_PI_2
    }
}

/// Weighted inner product of two Chebyshev coefficient vectors.
fn weighted_inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (x, y))| chebyshev_norm(k) * (x * y))
        .sum()
}

/// Projection tables for an `m`-function basis.
///
/// * `c[(mu', mu)] = int s_mu' w T_mu`
/// * `d[(mu', mu)] = int s_mu' w s_mu`
/// * `g[mu'] = int s_mu' w`
/// * `s_plus_one[mu] = s_mu(1)`
#[derive(Clone, Debug, PartialEq)]
pub struct BasisTables {
    m: usize,
    c: Vec<f64>,
    d: Vec<f64>,
    g: Vec<f64>,
    s_plus_one: Vec<f64>,
}

impl BasisTables {
    pub fn build(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::invalid("num_basis", "at least one basis function is required"));
        }
        let coeffs: Vec<Vec<f64>> = (0..m).map(s_chebyshev_coefficients).collect();

        let mut c = vec![0.0; m * m];
        let mut d = vec![0.0; m * m];
        for (row, s_row) in coeffs.iter().enumerate() {
            for col in 0..m {
                // T_col has a single unit coefficient at index col.
                c[row * m + col] = s_row.get(col).map_or(0.0, |&a| chebyshev_norm(col) * a);
                d[row * m + col] = weighted_inner(s_row, &coeffs[col]);
            }
        }
        let g = (0..m).map(|row| c[row * m]).collect();
        let s_plus_one = (0..m)
            .map(|mu| eval_s(mu, 1.0))
            .collect::<Result<Vec<_>>>()?;

        Ok(BasisTables {
            m,
            c,
            d,
            g,
            s_plus_one,
        })
    }

    pub fn num_basis(&self) -> usize {
        self.m
    }

    pub fn c(&self, row: usize, col: usize) -> f64 {
        self.c[row * self.m + col]
    }

    pub fn d(&self, row: usize, col: usize) -> f64 {
        self.d[row * self.m + col]
    }

    /// Row-major `m x m` view of `C`.
    pub fn c_matrix(&self) -> &[f64] {
        &self.c
    }

    /// Row-major `m x m` view of `D`.
    pub fn d_matrix(&self) -> &[f64] {
        &self.d
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn s_plus_one(&self) -> &[f64] {
        &self.s_plus_one
    }
}

/// Free-function form of [`BasisTables::build`].
pub fn build_tables(m: usize) -> Result<BasisTables> {
    BasisTables::build(m)
}
