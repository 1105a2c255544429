//! Reference exponentials that share no code path with the propagator:
//! a Taylor scaling-and-squaring evaluator and closed forms for the
//! built-in test matrices.

use num_complex::Complex64;

mod ddouble;

use crate::dense::ComplexMatrix;
use crate::error::{Error, Result};
use ddouble::{DdComplex, DdMatrix};

/// Scaled max-row-sum norm bound for the Taylor stage.
const SCALED_NORM_BOUND: f64 = 0.5;
/// Series stops once a term drops below this fraction of the partial sum.
const TERM_TOLERANCE: f64 = 1e-18;
const MAX_TERMS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    TaylorSquaring,
    ExactM1,
    ExactM2,
    ExactIdentity,
}

impl OracleMethod {
    pub fn tag(self) -> &'static str {
        match self {
            OracleMethod::TaylorSquaring => "taylor_squaring",
            OracleMethod::ExactM1 => "exact_m1",
            OracleMethod::ExactM2 => "exact_m2",
            OracleMethod::ExactIdentity => "exact_identity",
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub value: ComplexMatrix,
    pub method: OracleMethod,
}

/// `exp(a)` by scaling, truncated Taylor series, and repeated squaring.
///
/// The series and the squarings run in double-double arithmetic; only the
/// final result is rounded to `f64`.
pub fn expm_taylor_squaring(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    let norm = a.norm_inf();
    let mut squarings = 0i32;
    while norm / 2f64.powi(squarings) > SCALED_NORM_BOUND {
        squarings += 1;
    }
    // Power-of-two scaling is exact.
    let factor = 2f64.powi(-squarings);
    let scaled = DdMatrix {
        n,
        data: a.as_slice().iter().map(|&z| DdComplex::from_c64(z * factor)).collect(),
    };

    let mut sum = DdMatrix::identity(n);
    let mut term = DdMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = term.mul(&scaled).div_f64(k as f64);
        sum = sum.add(&term);
        if term.norm_inf() < TERM_TOLERANCE * sum.norm_inf() {
            break;
        }
    }

    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    if let Some(idx) = sum.data.iter().position(|z| !z.is_finite()) {
        return Err(Error::NonFinite {
            row: idx / n,
            col: idx % n,
        });
    }
    ComplexMatrix::new(n, n, sum.data.iter().map(|z| z.to_c64()).collect())
}

/// `[[-73, 36], [-96, 47]]`, diagonalizable with eigenvalues -1 and -25.
pub fn m1() -> ComplexMatrix {
    real(&[&[-73.0, 36.0], &[-96.0, 47.0]])
}

/// Quarter-turn generator `[[0, -1], [1, 0]]`.
pub fn m2() -> ComplexMatrix {
    real(&[&[0.0, -1.0], &[1.0, 0.0]])
}

/// Real 5x5 test matrix.
pub fn m3() -> ComplexMatrix {
    real(&[
        &[-0.1, -0.2, -0.3, -0.4, -0.5],
        &[-0.6, -0.7, -0.8, -0.9, -1.0],
        &[0.1, 0.2, 0.3, 0.4, 0.5],
        &[0.6, 0.7, 0.8, 0.9, 1.0],
        &[1.0, 2.0, 3.0, 4.0, 0.0],
    ])
}

/// Complex 3x3 test matrix.
pub fn m4() -> ComplexMatrix {
    let c = Complex64::new;
    ComplexMatrix::from_rows(&[
        vec![c(1.0, 1.0), c(1.0, -1.0), c(0.0, 1.0)],
        vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
        vec![c(1.0, 2.0), c(-1.0, 1.0), c(-1.0, -1.0)],
    ])
    .expect("finite literal")
}

/// 2x2 identity; its exponential is `e` on the diagonal.
pub fn unit2() -> ComplexMatrix {
    ComplexMatrix::identity(2).expect("positive size")
}

/// Closed form of `exp(m1())`.
pub fn exact_m1() -> ComplexMatrix {
    let e1 = (-1.0f64).exp();
    let e25 = (-25.0f64).exp();
    real(&[
        &[-2.0 * e1 + 3.0 * e25, 1.5 * (e1 - e25)],
        &[-4.0 * e1 + 4.0 * e25, 3.0 * e1 - 2.0 * e25],
    ])
}

/// Closed form of `exp(m2())`: rotation by one radian.
pub fn exact_m2() -> ComplexMatrix {
    let (s, c) = 1.0f64.sin_cos();
    real(&[&[c, -s], &[s, c]])
}

/// Closed form of `exp(unit2())`.
pub fn exact_unit2() -> ComplexMatrix {
    let e = 1.0f64.exp();
    real(&[&[e, 0.0], &[0.0, e]])
}

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).expect("finite literal")
}

/// Matrices addressable by name from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedMatrix {
    Unit2,
    M1,
    M2,
    M3,
    M4,
}

impl NamedMatrix {
    pub const ALL: [NamedMatrix; 5] = [
        NamedMatrix::Unit2,
        NamedMatrix::M1,
        NamedMatrix::M2,
        NamedMatrix::M3,
        NamedMatrix::M4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedMatrix::Unit2 => "unit2",
            NamedMatrix::M1 => "m1",
            NamedMatrix::M2 => "m2",
            NamedMatrix::M3 => "m3",
            NamedMatrix::M4 => "m4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(name))
    }

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            NamedMatrix::Unit2 => unit2(),
            NamedMatrix::M1 => m1(),
            NamedMatrix::M2 => m2(),
            NamedMatrix::M3 => m3(),
            NamedMatrix::M4 => m4(),
        }
    }

    /// Closed-form exponential, when one exists.
    pub fn exact(self) -> Option<OracleResult> {
        let (value, method) = match self {
            NamedMatrix::Unit2 => (exact_unit2(), OracleMethod::ExactIdentity),
            NamedMatrix::M1 => (exact_m1(), OracleMethod::ExactM1),
            NamedMatrix::M2 => (exact_m2(), OracleMethod::ExactM2),
            NamedMatrix::M3 | NamedMatrix::M4 => return None,
        };
        Some(OracleResult { value, method })
    }

    /// Closed form if available, otherwise the Taylor oracle.
    pub fn reference(self) -> Result<OracleResult> {
        match self.exact() {
            Some(r) => Ok(r),
            None => Ok(OracleResult {
                value: expm_taylor_squaring(&self.matrix())?,
                method: OracleMethod::TaylorSquaring,
            }),
        }
    }
}
